# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepper for the left-trivialized geodesic equations.

Both vector fields are sums of quadratic terms:
    dy_u/dt += coef * y_i * y_k               (velocity terms)
    dw_u/dt  = y_u + sum coef * w_a * y_b     (position terms)
"""

import numpy as np

cimport numpy as cnp
from libc.string cimport memcpy


cdef inline void _field(
    const double* w, const double* y, double* dw, double* dy, int n,
    const int[:, ::1] vel_idx, const double[::1] vel_coef,
    const int[:, ::1] pos_idx, const double[::1] pos_coef,
) noexcept nogil:
    cdef Py_ssize_t t
    cdef int u
    for u in range(n):
        dy[u] = 0.0
        dw[u] = y[u]
    for t in range(vel_coef.shape[0]):
        dy[vel_idx[t, 0]] += vel_coef[t] * y[vel_idx[t, 1]] * y[vel_idx[t, 2]]
    for t in range(pos_coef.shape[0]):
        dw[pos_idx[t, 0]] += pos_coef[t] * w[pos_idx[t, 1]] * y[pos_idx[t, 2]]


def rk4_batch(
    double[:, ::1] w0, double[:, ::1] y0, double h, int steps, int record_every,
    int[:, ::1] vel_idx, double[::1] vel_coef, int[:, ::1] pos_idx, double[::1] pos_coef,
):
    """Integrate a batch of states; returns (W, Y) of shape (samples, batch, n)."""
    cdef int batch = w0.shape[0]
    cdef int n = w0.shape[1]
    cdef int samples = steps // record_every + 1
    W_arr = np.empty((samples, batch, n))
    Y_arr = np.empty((samples, batch, n))
    cdef double[:, :, ::1] W = W_arr
    cdef double[:, :, ::1] Y = Y_arr
    cdef double[::1] buf = np.empty(12 * n)
    cdef double* w = &buf[0]
    cdef double* y = w + n
    cdef double* k1w = y + n
    cdef double* k1y = k1w + n
    cdef double* k2w = k1y + n
    cdef double* k2y = k2w + n
    cdef double* k3w = k2y + n
    cdef double* k3y = k3w + n
    cdef double* k4w = k3y + n
    cdef double* k4y = k4w + n
    cdef double* tw = k4y + n
    cdef double* ty = tw + n
    cdef int b, s, u, rec
    cdef double h2 = 0.5 * h, h6 = h / 6.0
    with nogil:
        for b in range(batch):
            for u in range(n):
                w[u] = w0[b, u]
                y[u] = y0[b, u]
                W[0, b, u] = w[u]
                Y[0, b, u] = y[u]
            rec = 1
            for s in range(1, steps + 1):
                _field(w, y, k1w, k1y, n, vel_idx, vel_coef, pos_idx, pos_coef)
                for u in range(n):
                    tw[u] = w[u] + h2 * k1w[u]
                    ty[u] = y[u] + h2 * k1y[u]
                _field(tw, ty, k2w, k2y, n, vel_idx, vel_coef, pos_idx, pos_coef)
                for u in range(n):
                    tw[u] = w[u] + h2 * k2w[u]
                    ty[u] = y[u] + h2 * k2y[u]
                _field(tw, ty, k3w, k3y, n, vel_idx, vel_coef, pos_idx, pos_coef)
                for u in range(n):
                    tw[u] = w[u] + h * k3w[u]
                    ty[u] = y[u] + h * k3y[u]
                _field(tw, ty, k4w, k4y, n, vel_idx, vel_coef, pos_idx, pos_coef)
                for u in range(n):
                    w[u] += h6 * (k1w[u] + 2.0 * k2w[u] + 2.0 * k3w[u] + k4w[u])
                    y[u] += h6 * (k1y[u] + 2.0 * k2y[u] + 2.0 * k3y[u] + k4y[u])
                if s % record_every == 0:
                    for u in range(n):
                        W[rec, b, u] = w[u]
                        Y[rec, b, u] = y[u]
                    rec += 1
    return W_arr, Y_arr
