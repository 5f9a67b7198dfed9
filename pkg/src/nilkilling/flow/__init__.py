"""Geodesic flow in exponential coordinates and drift of first integrals.

Write a geodesic as gamma(t) = exp(w(t)) and let y be its left-trivialized
velocity. Geodesics satisfy dy/dt + nabla_y y = 0, and with
nabla_y y = -j(y_z) y_v this gives

    dy_v/dt = j(y_z) y_v,    dy_z/dt = 0.

The differential of exp in a 2-step algebra is dL_{exp w} (1 - ad_w / 2), so
y = dw/dt - [w, dw/dt] / 2. Substituting once more, the double bracket
vanishes and

    dw/dt = y + [w, y] / 2.

Both right-hand sides are quadratic, so they are stored as sparse term lists
and integrated with classical fixed-step RK4. The compiled kernel is used when
available; ``NILKILLING_PURE=1`` forces the numpy fallback.
"""

import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import NonFloatMode
from ..linalg import to_float
from . import _rk4_py

KERNEL = "numpy"
_rk4_batch = _rk4_py.rk4_batch
if not os.environ.get("NILKILLING_PURE"):
    try:
        from ._rk4 import rk4_batch as _rk4_batch

        KERNEL = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        pass


@dataclass(frozen=True)
class Trajectory:
    """Samples of (w, y) at uniform spacing; arrays are (samples, batch, n)."""

    t: np.ndarray
    w: np.ndarray
    y: np.ndarray
    h: float

    @property
    def batch(self):
        return self.w.shape[1]


def flow_terms(alg):
    """Sparse quadratic terms (index arrays, coefficients) of both vector fields."""
    vel, pos = [], []
    for i, j, k, c in alg.terms:
        c = float(c)
        # dy_u/dt = sum_{i,k} c[i, u, k] y_i y_k
        vel.append((j, i, k, c))
        vel.append((i, j, k, -c))
        # dw_k/dt gets [w, y]_k / 2 = c (w_i y_j - w_j y_i) / 2
        pos.append((k, i, j, 0.5 * c))
        pos.append((k, j, i, -0.5 * c))

    def split(terms):
        if not terms:
            return np.zeros((0, 3), dtype=np.int32), np.zeros(0)
        idx = np.ascontiguousarray([t[:3] for t in terms], dtype=np.int32)
        return idx, np.ascontiguousarray([t[3] for t in terms], dtype=float)

    return split(vel) + split(pos)


def _as_batch(x, n, name):
    x = np.asarray(x)
    if x.dtype == object:
        raise NonFloatMode(f"{name} must be a float array; the flow runs in float mode")
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != n:
        raise ValueError(f"{name} has dimension {x.shape[1]}, expected {n}")
    return np.ascontiguousarray(x)


def integrate(alg, y0, w0=None, t_max=20.0, steps=20000, record_every=1, kernel=None):
    """RK4 integration of a batch of initial states."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    n = alg.dim
    y0 = _as_batch(y0, n, "y0")
    w0 = np.zeros_like(y0) if w0 is None else _as_batch(w0, n, "w0")
    h = float(t_max) / steps
    step = {"numpy": _rk4_py.rk4_batch, None: _rk4_batch}.get(kernel, _rk4_batch)
    if kernel == "cython" and KERNEL != "cython":
        raise RuntimeError("compiled kernel is not available")
    W, Y = step(w0, y0, h, int(steps), int(record_every), *flow_terms(alg))
    t = np.arange(W.shape[0]) * h * record_every
    return Trajectory(t, W, Y, h)


def exact_velocity(alg, y0, t):
    """Closed form y(t) = exp(t j(y0_z)) y0 (the center part is constant)."""
    y0 = np.asarray(y0, dtype=float)
    jm = -np.asarray(alg.c, dtype=float) @ y0
    return scipy.linalg.expm(t * jm) @ y0


def random_states(n, count, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((count, n)), rng.standard_normal((count, n))


def _eval_poly(poly, w):
    """Evaluate a polynomial with array coefficients at w of shape (..., n)."""
    total = None
    for mono, coef in poly.items():
        val = np.ones(w.shape[:-1])
        for a in mono:
            val = val * w[..., a]
        term = val[..., None, None] * to_float(coef) if np.ndim(coef) == 2 else val[..., None] * to_float(coef)
        total = term if total is None else total + term
    return total


def first_integral(alg, f, w, y):
    """Value of a first integral at states (w, y).

    ``f`` is a symmetric matrix (left-invariant tensor, value g(Sy, y)), a
    tensor polynomial dict (value Omega(w)(y, y)), or a vector polynomial
    wrapped as ``("field", poly)`` (value g(Omega(w), y)).
    """
    w = np.asarray(w, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(f, tuple) and f[0] == "field":
        vec = _eval_poly(f[1], w)
        return np.sum(vec * y, axis=-1)
    if isinstance(f, dict):
        mat = _eval_poly(f, w)
        return np.einsum("...i,...ij,...j->...", y, mat, y)
    s = to_float(f)
    return np.einsum("...i,ij,...j->...", y, s, y)


def drift(alg, f, traj):
    """max over samples and batch of |F(t) - F(0)|."""
    vals = first_integral(alg, f, traj.w, traj.y)
    return float(np.max(np.abs(vals - vals[0])))


def velocity_error(alg, traj):
    """max |y_RK4(t) - y_exact(t)| over the trajectory."""
    err = 0.0
    for b in range(traj.batch):
        y0 = traj.y[0, b]
        jm = -np.asarray(alg.c, dtype=float) @ y0
        if len(traj.t) < 2:
            break
        # propagate the closed form with the exact one-sample propagator
        step = scipy.linalg.expm((traj.t[1] - traj.t[0]) * jm)
        y = y0.copy()
        for s in range(1, len(traj.t)):
            y = step @ y
            err = max(err, float(np.max(np.abs(traj.y[s, b] - y))))
    return err


__all__ = [
    "KERNEL",
    "Trajectory",
    "drift",
    "exact_velocity",
    "first_integral",
    "flow_terms",
    "integrate",
    "random_states",
    "velocity_error",
]
