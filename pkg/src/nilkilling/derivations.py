"""Skew-symmetric derivations and the extension problem for skew maps on v.

A skew endomorphism preserving v and z is a derivation iff
``j(Dz) = [D|_v, j(z)]`` for all z, which is linear in D. The raw Leibniz
identity is checked afterwards on every result.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InternalInconsistency, NotSkew
from .killing import skew_basis
from .linalg import Subspace, commutator, is_exact, is_zero, nullspace, solve_affine, zeros


def derivation_residual(alg, d):
    """j(D z_s) - [D, j(z_s)] stacked over an orthogonal basis of z."""
    jm = alg.jmap
    parts = [(alg.jmap(d @ z) - commutator(d, j)).reshape(-1) for z, j in zip(jm.basis, jm.matrices)]
    return np.concatenate(parts) if parts else zeros(0, alg.exact)


def is_derivation(alg, d):
    """Raw check D[e_i, e_j] = [D e_i, e_j] + [e_i, D e_j] on all basis pairs."""
    n = alg.dim
    tol = 1e-9
    for i in range(n):
        ei = alg.basis_vector(i)
        for j in range(i + 1, n):
            ej = alg.basis_vector(j)
            lhs = d @ alg.bracket(ei, ej)
            rhs = alg.bracket(d @ ei, ej) + alg.bracket(ei, d @ ej)
            if not is_zero(lhs - rhs, tol):
                return False
    return True


def is_skew(m):
    m = np.asarray(m)
    return is_zero(m + m.T, 1e-12)


@dataclass(frozen=True)
class DerivationSpace:
    basis: list
    space: Subspace  # flattened n*n coordinates, canonical

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, d):
        return self.space.contains(np.asarray(d).reshape(-1))


def skew_derivations(alg):
    n, exact = alg.dim, alg.exact
    split = alg.split
    unknowns = skew_basis(split.v_basis, n, exact) + skew_basis(split.z_basis, n, exact)
    if not unknowns:
        return DerivationSpace([], Subspace.zero(n * n, exact))
    system = np.array([derivation_residual(alg, u) for u in unknowns]).T
    sols = [sum(t * u for t, u in zip(x, unknowns)) for x in nullspace(system).basis]
    space = Subspace.span([d.reshape(-1) for d in sols], n * n, exact)
    basis = [row.reshape(n, n) for row in space.basis]
    for d in basis:
        if not (is_skew(d) and is_derivation(alg, d)):
            raise InternalInconsistency("computed derivation fails the Leibniz identity")
    return DerivationSpace(basis, space)


@dataclass(frozen=True)
class ExtensionResult:
    feasible: bool
    derivation: np.ndarray = None
    kernel: list = None  # homogeneous solutions A on z
    witness: np.ndarray = None

    @property
    def freedom(self):
        return len(self.kernel) if self.kernel is not None else 0


def extend_skew(alg, t):
    """Extend a skew map T on v to a skew derivation T + A with A in so(z)."""
    n, exact = alg.dim, alg.exact
    t = np.asarray(t)
    if t.shape != (n, n):
        raise DimensionMismatch(f"map of shape {t.shape} for dimension {n}")
    if exact and not is_exact(t):
        raise TypeError("float map given to an exact algebra")
    if not is_skew(t):
        raise NotSkew("T is not skew-symmetric")
    pv = alg.split.pv
    if not is_zero(t - pv @ t @ pv):
        raise NotSkew("T must act on v and vanish on the center")
    unknowns = skew_basis(alg.split.z_basis, n, exact)
    jm = alg.jmap
    rhs = np.concatenate([commutator(t, j).reshape(-1) for j in jm.matrices])
    if unknowns:
        m = np.array([np.concatenate([alg.jmap(a @ z).reshape(-1) for z in jm.basis]) for a in unknowns]).T
    else:
        m = zeros((len(rhs), 0), exact)
    res = solve_affine(m, rhs)
    if not res.feasible:
        return ExtensionResult(False, witness=res.witness)
    a = sum((x * u for x, u in zip(res.x, unknowns)), zeros((n, n), exact))
    d = t + a
    if not is_derivation(alg, d):
        raise InternalInconsistency("extension fails the Leibniz identity")
    kernel = [sum(x * u for x, u in zip(k, unknowns)) for k in res.kernel.basis]
    return ExtensionResult(True, d, kernel)
