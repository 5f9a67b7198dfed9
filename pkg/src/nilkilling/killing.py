"""Left-invariant symmetric Killing 2-tensors, parallel tensors and Killing 2-forms.

A symmetric tensor is a symmetric matrix ``S`` read as the endomorphism with
``S(x, y) = g(Sx, y)``. It is Killing iff, for x, y in v and z, z' in z,

    [Sx, y] = [x, Sy]   and   g([x, Sz], z') + g([x, Sz'], z) = 0.

Pairing the first with z and using g(j(z)x, y) = g(z, [x, y]) turns it into
``P_v [j(z), S] P_v = 0``; the second becomes ``j(z') S z + j(z) S z' = 0``.
Both are linear in S, so the Killing space is one nullspace.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, MethodMismatch, NeedsFloatFallback, NotSymmetric
from .linalg import (
    ONE,
    Q,
    Subspace,
    commutator,
    eye,
    is_symmetric,
    is_zero,
    nullspace,
    to_float,
    zeros,
)

# ------------------------------------------------------- symmetric coordinates


def sym_pairs(n):
    return [(a, b) for a in range(n) for b in range(a, n)]


def sym_basis(n, exact=True):
    """Matrices E_ab (a <= b) with S = sum S[a, b] E_ab for symmetric S."""
    out = []
    one = ONE if exact else 1.0
    for a, b in sym_pairs(n):
        e = zeros((n, n), exact)
        e[a, b] = one
        e[b, a] = one
        out.append(e)
    return out


def sym_coords(s):
    n = len(s)
    return np.array([s[a, b] for a, b in sym_pairs(n)], dtype=s.dtype)


def sym_coords_to_matrix(x, n):
    s = zeros((n, n), x.dtype == object)
    for (a, b), t in zip(sym_pairs(n), x):
        s[a, b] = t
        s[b, a] = t
    return s


def sym_product(u, w):
    """The symmetric product u.w as the matrix u w^T + w u^T."""
    return np.outer(u, w) + np.outer(w, u)


def skew_basis(vectors, n, exact=True):
    """Basis u_a u_b^T - u_b u_a^T of so(U) for an orthogonal basis of U."""
    out = []
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            out.append(np.outer(vectors[a], vectors[b]) - np.outer(vectors[b], vectors[a]))
    return out


def _solve_linear(alg, basis, constraint):
    """Span of sum x_i basis_i over the nullspace of the linear ``constraint``."""
    cols = [constraint(e) for e in basis]
    if not cols:
        return []
    system = np.array(cols).T
    if system.shape[0] == 0:
        return list(basis)
    return [sum(t * e for t, e in zip(x, basis)) for x in nullspace(system).basis]


# ------------------------------------------------------------------ Killing


def killing_residual(alg, s):
    """Stacked left-hand sides of the two Killing conditions (linear in S)."""
    split, jmap = alg.split, alg.jmap
    pv = split.pv
    parts = [(pv @ commutator(jm, s) @ pv).reshape(-1) for jm in jmap.matrices]
    zb, jms = jmap.basis, jmap.matrices
    for a in range(len(zb)):
        for b in range(a, len(zb)):
            parts.append(jms[b] @ (s @ zb[a]) + jms[a] @ (s @ zb[b]))
    return np.concatenate(parts) if parts else zeros(0, alg.exact)


@dataclass(frozen=True)
class KillingSpace:
    alg: object
    space: Subspace  # inside the sym-coordinate space

    @property
    def dim(self):
        return self.space.dim

    @cached_property
    def tensors(self):
        return [sym_coords_to_matrix(x, self.alg.dim) for x in self.space.basis]

    def contains(self, s):
        return self.space.contains(sym_coords(s))

    def combination(self, coeffs):
        return sum(c * t for c, t in zip(coeffs, self.tensors))


def random_killing(ks, count, seed, bound=5):
    """Seeded random combinations of the Killing basis with integer coefficients."""
    rng = np.random.default_rng(seed)
    out = []
    for r in range(count):
        coeffs = rng.integers(-bound, bound + 1, size=ks.dim).tolist()
        if ks.alg.exact:
            coeffs = [Q(c) for c in coeffs]
        out.append((f"random_{r + 1}", ks.combination(coeffs)))
    return out


def killing_space(alg):
    n = alg.dim
    cols = [killing_residual(alg, e) for e in sym_basis(n, alg.exact)]
    return KillingSpace(alg, nullspace(np.array(cols).T))


@dataclass(frozen=True)
class KillingCheck:
    ok: bool
    residual: object
    witness: tuple = None  # ("v", i, j) or ("z", x_index, a, b) in basis-vector terms

    def __bool__(self):
        return self.ok


def is_killing(alg, s):
    """Exact (or tolerance) Killing check with a witnessing pair on failure."""
    s = _check_tensor(alg, s)
    split = alg.split
    exact = alg.exact
    if exact:
        res = killing_residual(alg, s)
        if is_zero(res):
            return KillingCheck(True, 0)
    else:
        res = killing_residual(alg, s)
        if is_zero(res, tol=1e-9 * max(1.0, float(np.max(np.abs(s))))):
            return KillingCheck(True, float(np.max(np.abs(res), initial=0.0)))
    vb, zb = split.v_basis, split.z_basis
    worst, witness = None, None
    for i, x in enumerate(vb):
        for j, y in enumerate(vb):
            d = alg.bracket(s @ x, y) - alg.bracket(x, s @ y)
            size = max(abs(t) for t in d)
            if size != 0 and (worst is None or size > worst):
                worst, witness = size, ("v", i, j)
    for k, x in enumerate(vb):
        for a, z in enumerate(zb):
            for b, w in enumerate(zb[a:], start=a):
                val = alg.bracket(x, s @ z) @ w + alg.bracket(x, s @ w) @ z
                if abs(val) != 0 and (worst is None or abs(val) > worst):
                    worst, witness = abs(val), ("z", k, a, b)
    return KillingCheck(False, worst, witness)


def _check_tensor(alg, s):
    s = np.asarray(s)
    if s.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"tensor of shape {s.shape} for dimension {alg.dim}")
    if not is_symmetric(s):
        raise NotSymmetric("tensor is not symmetric")
    if alg.exact and s.dtype != object:
        raise TypeError("float tensor given to an exact algebra")
    if not alg.exact and s.dtype == object:
        s = np.asarray(s, dtype=float)
    return s


@dataclass(frozen=True)
class ComponentSplit:
    s_v: np.ndarray
    s_m: np.ndarray
    s_z: np.ndarray


def component_split(s, split):
    pv, pz = split.pv, split.pz
    s_v = pv @ s @ pv
    s_z = pz @ s @ pz
    s_m = pv @ s @ pz + pz @ s @ pv
    return ComponentSplit(s_v, s_m, s_z)


# ---------------------------------------------------------------- connection


def connection_matrix(alg, x):
    """Matrix of y -> nabla_x y for left-invariant fields.

    nabla_x y = 1/2 [x, y] - 1/2 j(y_z) x_v - 1/2 j(x_z) y_v, and
    j(y_z) x_v = ad_x^T y, so the matrix is (ad_x - ad_x^T - j(x_z)) / 2.
    """
    ad = alg.ad(x)
    half = Q(1, 2) if alg.exact else 0.5
    return half * (ad - ad.T - alg.jmap(alg.split.pz @ x))


def connection_table(alg):
    return [connection_matrix(alg, alg.basis_vector(i)) for i in range(alg.dim)]


# ------------------------------------------------------------------ parallel


@dataclass(frozen=True)
class ParallelSpace:
    space: Subspace
    method_a: Subspace
    method_b: Subspace
    n: int

    @property
    def dim(self):
        return self.space.dim

    @property
    def tensors(self):
        return [sym_coords_to_matrix(x, self.n) for x in self.space.basis]


def parallel_by_connection(alg):
    """Symmetric S commuting with every connection matrix."""
    table = connection_table(alg)
    cols = [np.concatenate([commutator(lam, e).reshape(-1) for lam in table]) for e in sym_basis(alg.dim, alg.exact)]
    return nullspace(np.array(cols).T)


def parallel_by_ideals(alg):
    """Identity on each irreducible ideal plus Sym^2 of the abelian factor."""
    n, exact = alg.dim, alg.exact
    gens = []
    for comp in alg.ideals.irreducible:
        gens.append(sym_coords(comp.space.projector()))
    a = alg.split.abelian_factor
    ab = list(a.orthogonal_basis())
    for i, u in enumerate(ab):
        for w in ab[i:]:
            gens.append(sym_coords(sym_product(u, w)))
    return Subspace.span(gens, n * (n + 1) // 2, exact)


def parallel_space(alg):
    a = parallel_by_connection(alg)
    try:
        b = parallel_by_ideals(alg)
        same = a == b
    except NeedsFloatFallback:
        # the space is rational, but the ideals may need irrational projectors
        b = parallel_by_ideals(alg.to_float())
        same = a.dim == b.dim and np.allclose(to_float(a.projector()), b.projector(), atol=1e-8)
    if not same:
        raise MethodMismatch(f"parallel tensors: connection commutant has dim {a.dim}, ideal construction dim {b.dim}")
    return ParallelSpace(a, a, b, alg.dim)


# ------------------------------------------------------------ Killing 2-forms


@dataclass(frozen=True)
class KillingFormSpace:
    forms: list

    @property
    def dim(self):
        return len(self.forms)


def killing_two_forms(alg):
    """Skew T preserving v and z with [Tx,y] = [x,Ty] and T[x,y] = 3[Tx,y] on v."""
    n, exact = alg.dim, alg.exact
    split = alg.split
    basis = skew_basis(split.v_basis, n, exact) + skew_basis(split.z_basis, n, exact)
    vb = split.v_basis
    three = Q(3) if exact else 3.0

    def constraint(t):
        parts = []
        for i, x in enumerate(vb):
            for j, y in enumerate(vb):
                if j >= i:
                    parts.append(alg.bracket(t @ x, y) - alg.bracket(x, t @ y))
                parts.append(t @ alg.bracket(x, y) - three * alg.bracket(t @ x, y))
        return np.concatenate(parts) if parts else zeros(0, exact)

    forms = _solve_linear(alg, basis, constraint)
    return KillingFormSpace(forms)


def form_to_tensor(t):
    return -(t @ t)


def metric(alg):
    return eye(alg.dim, alg.exact)
