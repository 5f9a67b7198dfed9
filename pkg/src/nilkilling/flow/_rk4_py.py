"""Pure numpy RK4 stepper, same contract as the compiled ``rk4_batch``.

The sparse term lists are densified into coefficient tensors once, and each
stage is one matrix product over the whole batch.
"""

import numpy as np


def _dense(idx, coef, n):
    t = np.zeros((n, n, n))
    np.add.at(t, (idx[:, 0], idx[:, 1], idx[:, 2]), coef)
    return t


def rk4_batch(w0, y0, h, steps, record_every, vel_idx, vel_coef, pos_idx, pos_coef):
    batch, n = w0.shape
    vel = _dense(np.asarray(vel_idx), np.asarray(vel_coef), n).reshape(n, n * n).T
    pos = _dense(np.asarray(pos_idx), np.asarray(pos_coef), n).reshape(n, n * n).T

    def field(w, y):
        dy = (y[:, :, None] * y[:, None, :]).reshape(batch, n * n) @ vel
        dw = y + (w[:, :, None] * y[:, None, :]).reshape(batch, n * n) @ pos
        return dw, dy

    samples = steps // record_every + 1
    W = np.empty((samples, batch, n))
    Y = np.empty((samples, batch, n))
    w = np.array(w0, dtype=float)
    y = np.array(y0, dtype=float)
    W[0], Y[0] = w, y
    rec = 1
    for s in range(1, steps + 1):
        k1w, k1y = field(w, y)
        k2w, k2y = field(w + 0.5 * h * k1w, y + 0.5 * h * k1y)
        k3w, k3y = field(w + 0.5 * h * k2w, y + 0.5 * h * k2y)
        k4w, k4y = field(w + h * k3w, y + h * k3y)
        w = w + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
        y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        if s % record_every == 0:
            W[rec], Y[rec] = w, y
            rec += 1
    return W, Y
