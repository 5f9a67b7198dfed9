"""2-step nilpotent metric Lie algebras.

The algebra is stored as structure constants ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k`` in a basis declared orthonormal. All
derived objects (center, j-maps, derivations, tensors) are ambient ``n x n``
matrices in that basis; subspaces that are not coordinate-aligned are handled
through exact orthogonal projectors, so no square roots are ever needed.
"""

from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt

import numpy as np

from .errors import (
    Abelian,
    DimensionMismatch,
    InternalInconsistency,
    JacobiFails,
    NeedsFloatFallback,
    NotAntisymmetric,
    NotTwoStep,
    ValidationError,
)
from . import _poly
from .linalg import (
    Q,
    Subspace,
    det,
    eigendecompose_symmetric,
    is_exact,
    is_zero,
    nullspace,
    rank,
    zeros,
)


class MetricLieAlgebra:
    """A validated 2-step nilpotent Lie algebra with orthonormal basis."""

    def __init__(self, c, names=None, frame=None):
        self.c = c
        self.dim = c.shape[0]
        self.names = list(names) if names else [f"e{i + 1}" for i in range(self.dim)]
        # columns of ``frame`` are the orthonormal basis in the user's basis
        self.frame = frame

    @property
    def exact(self):
        return is_exact(self.c)

    @property
    def mode(self):
        return "exact" if self.exact else "float"

    def __repr__(self):
        return f"MetricLieAlgebra(dim={self.dim}, mode={self.mode})"

    def bracket(self, x, y):
        n = self.dim
        return y @ (x @ self.c.reshape(n, n * n)).reshape(n, n)

    def ad(self, x):
        """Matrix of y -> [x, y]."""
        n = self.dim
        return (x @ self.c.reshape(n, n * n)).reshape(n, n).T

    def form(self, z):
        """Matrix B with B[i, j] = g(z, [e_i, e_j])."""
        return self.c @ z

    @cached_property
    def terms(self):
        """Nonzero structure constants as (i, j, k, c) with i < j."""
        n = self.dim
        return [
            (i, j, k, self.c[i, j, k])
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if self.c[i, j, k] != 0
        ]

    def basis_vector(self, i):
        e = zeros(self.dim, self.exact)
        e[i] = 1 if not self.exact else Q(1)
        return e

    def to_float(self):
        return MetricLieAlgebra(np.asarray(self.c, dtype=float), self.names, self.frame)

    @cached_property
    def split(self):
        return center_split(self)

    @cached_property
    def jmap(self):
        return j_map(self)

    @cached_property
    def ideals(self):
        return ideal_decomposition(self)


# ------------------------------------------------------------------ validation


def validate(c, names=None, frame=None):
    """Check the structure constants and return a MetricLieAlgebra.

    Raises the first failing category (antisymmetry, Jacobi, 2-step,
    abelian); ``violations`` on the exception lists every offending
    index triple in that category.
    """
    c = np.asarray(c)
    if c.ndim != 3 or len(set(c.shape)) != 1:
        raise DimensionMismatch(f"structure constants must be n x n x n, got {c.shape}")
    n = c.shape[0]
    if n == 0:
        raise DimensionMismatch("empty algebra")
    if names is not None and len(names) != n:
        raise DimensionMismatch(f"{len(names)} basis names for dimension {n}")
    exact = is_exact(c)
    zero = (lambda x: x == 0) if exact else (lambda x: abs(x) <= 1e-10)

    violations = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if not zero(c[i, j, k] + c[j, i, k]):
                    violations.append(("antisymmetry", (i, j, k)))
    if violations:
        raise NotAntisymmetric(_describe(violations, names), violations)

    # nested[i, j, l] = [[e_i, e_j], e_l]
    nested = np.tensordot(c, c, axes=([2], [0]))
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(j + 1, n):
                jac = -(nested[j, l, i] + nested[l, i, j] + nested[i, j, l])
                if not all(zero(x) for x in jac):
                    violations.append(("jacobi", (i, j, l)))
    if violations:
        raise JacobiFails(_describe(violations, names), violations)

    for i in range(n):
        for j in range(i + 1, n):
            for l in range(n):
                if not all(zero(x) for x in nested[i, j, l]):
                    violations.append(("two_step", (i, j, l)))
    if violations:
        raise NotTwoStep(_describe(violations, names), violations)

    if all(zero(x) for x in c.flat):
        raise Abelian("all brackets vanish: the algebra is abelian", [("abelian", ())])
    return MetricLieAlgebra(c, names, frame)


def _describe(violations, names):
    label = (lambda i: names[i]) if names else (lambda i: f"e{i + 1}")
    kind = violations[0][0]
    triples = ", ".join("(" + ",".join(label(i) for i in idx) + ")" for _, idx in violations[:10])
    more = f" and {len(violations) - 10} more" if len(violations) > 10 else ""
    text = {
        "antisymmetry": "[e_i,e_j] != -[e_j,e_i] in component e_k for (i,j,k)",
        "jacobi": "Jacobi identity fails for",
        "two_step": "[[e_i,e_j],e_k] != 0 for",
    }[kind]
    return f"{text}: {triples}{more}"


def from_brackets(n, brackets, names=None, exact=True):
    """Build constants from ``{(i, j): {k: coeff}}`` (0-based) and validate."""
    c = zeros((n, n, n), exact)
    for (i, j), rhs in brackets.items():
        for k, x in rhs.items():
            x = Q(x) if exact else float(x)
            c[i, j, k] += x
            c[j, i, k] -= x
    return validate(c, names)


def from_gram(c, gram, names=None):
    """Orthonormalize a general metric by Cholesky and return a float algebra.

    With ``gram = L L^T`` the new basis is ``f_a = sum_i M[i, a] e_i`` where
    ``M = L^{-T}``; bilinear forms transform as ``M^T B M``.
    """
    c = np.asarray(c, dtype=float)
    gram = np.asarray(gram, dtype=float)
    if not np.allclose(gram, gram.T, atol=1e-12):
        raise ValidationError("Gram matrix is not symmetric")
    try:
        lower = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        raise ValidationError("Gram matrix is not positive definite") from None
    m = np.linalg.inv(lower).T
    new = np.einsum("ia,jb,ijk,ck->abc", m, m, c, lower.T)
    return validate(new, names, frame=m)


# ------------------------------------------------------------------ splitting


@dataclass(frozen=True)
class CenterSplit:
    z: Subspace
    v: Subspace
    derived: Subspace
    abelian_factor: Subspace

    @cached_property
    def pz(self):
        return self.z.projector()

    @cached_property
    def pv(self):
        return self.v.projector()

    @cached_property
    def z_basis(self):
        """Pairwise orthogonal basis of the center."""
        return list(self.z.orthogonal_basis())

    @cached_property
    def v_basis(self):
        return list(self.v.orthogonal_basis())


def center_split(alg):
    n, c = alg.dim, alg.c
    # x is central iff sum_i x_i c[i, j, k] = 0 for all (j, k)
    z = nullspace(c.transpose(1, 2, 0).reshape(n * n, n))
    v = z.complement()
    derived = Subspace.span(list(c.reshape(n * n, n)), n, alg.exact)
    a = z.intersect(derived.complement())
    return CenterSplit(z, v, derived, a)


@dataclass(frozen=True)
class JMap:
    """j(z_s) for an orthogonal basis z_s of the center, as ambient matrices."""

    alg: MetricLieAlgebra
    basis: list
    matrices: list

    def __call__(self, z):
        return j_of(self.alg, z)

    def __len__(self):
        return len(self.basis)


def j_of(alg, z):
    """Ambient matrix of j(z): g(j(z)x, y) = g(z, [x, y]); zero on the center."""
    return -alg.form(z)


def j_map(alg):
    zb = alg.split.z_basis
    return JMap(alg, zb, [j_of(alg, z) for z in zb])


def j_injective(alg):
    return alg.split.abelian_factor.dim == 0


# ---------------------------------------------------------- ideal decomposition


@dataclass(frozen=True)
class Component:
    space: Subspace
    kind: str  # "irreducible_2step" or "abelian"
    v_part: Subspace = None
    z_part: Subspace = None


@dataclass
class IdealDecomposition:
    components: list = field(default_factory=list)

    @property
    def irreducible(self):
        return [c for c in self.components if c.kind == "irreducible_2step"]

    @property
    def abelian(self):
        return next((c for c in self.components if c.kind == "abelian"), None)

    @property
    def is_irreducible(self):
        return len(self.components) == 1


def _closure(vectors, gens, n, exact):
    """Smallest subspace containing ``vectors`` and invariant under ``gens``."""
    span = Subspace.span(vectors, n, exact)
    while True:
        grown = span + Subspace.span([g @ b for g in gens for b in span.basis], n, exact)
        if grown.dim == span.dim:
            return span
        span = grown


def _symmetric_commutant(u, gens, n, exact):
    """Basis of symmetric X with X(u^perp) = 0 and [X, g] = 0 for all gens."""
    from .killing import sym_basis, sym_coords_to_matrix

    basis = sym_basis(n, exact)
    perp = u.complement().basis
    cols = []
    for e in basis:
        parts = [(e @ y) for y in perp] + [(e @ g - g @ e).reshape(-1) for g in gens]
        cols.append(np.concatenate(parts) if parts else zeros(0, exact))
    system = np.array(cols).T if cols else zeros((0, 0), exact)
    return [sym_coords_to_matrix(x, n) for x in nullspace(system).basis]


def _split_by_commutant(u, gens, n, exact):
    """Split u by a non-scalar symmetric commutant element, or return None."""
    pu = u.projector()
    candidates = _symmetric_commutant(u, gens, n, exact)
    nonscalar = [x for x in candidates if rank(np.array([x.reshape(-1), pu.reshape(-1)])) == 2]
    if not nonscalar:
        return None
    # try basis elements, then a few fixed combinations, for a rational spectrum
    trials = list(nonscalar)
    for k in range(1, 4):
        trials.append(sum((i + 1) ** k * x for i, x in enumerate(nonscalar)))
    for x in trials:
        try:
            eig = eigendecompose_symmetric(x)
        except NeedsFloatFallback:
            continue
        pieces = [e.space.intersect(u) for e in eig]
        pieces = [p for p in pieces if p.dim]
        if len(pieces) > 1:
            return pieces
    raise NeedsFloatFallback("invariant splitting of v requires irrational eigenvalues")


def minimal_invariant_pieces(alg):
    """Decompose v into j-invariant subspaces with no proper invariant subspace."""
    n, exact = alg.dim, alg.exact
    gens = alg.jmap.matrices
    pending = [alg.split.v]
    done = []
    while pending:
        u = pending.pop()
        pu = u.projector()
        split = None
        for e in list(u.basis) + [pu[:, i] for i in range(n)]:
            if is_zero(e):
                continue
            cl = _closure([e], gens, n, exact)
            if cl.dim < u.dim:
                split = [cl, u.intersect(cl.complement())]
                break
        if split is None:
            split = _split_by_commutant(u, gens, n, exact)
        if split is None:
            done.append(u)
        else:
            pending.extend(split)
    return sorted(done, key=lambda s: _order_key(s))


def _order_key(space):
    return tuple(space.pivots) if space.exact else tuple(np.argmax(np.abs(space.basis), axis=1))


def _derived_span(alg, u):
    vecs = [alg.bracket(x, y) for i, x in enumerate(u.basis) for y in u.basis[i + 1 :]]
    return Subspace.span(vecs, alg.dim, alg.exact)


def ideal_decomposition(alg):
    """Orthogonal decomposition of n into irreducible 2-step ideals and a."""
    n, exact = alg.dim, alg.exact
    split = alg.split
    pieces = minimal_invariant_pieces(alg)
    spans = [_derived_span(alg, u) for u in pieces]

    parent = list(range(len(pieces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            if not spans[i].is_orthogonal_to(spans[j]):
                parent[find(i)] = find(j)

    groups = {}
    for i in range(len(pieces)):
        groups.setdefault(find(i), []).append(i)

    components = []
    for members in groups.values():
        vpart = Subspace.span([b for i in members for b in pieces[i].basis], n, exact)
        zpart = Subspace.span([b for i in members for b in spans[i].basis], n, exact)
        components.append(Component(vpart + zpart, "irreducible_2step", vpart, zpart))
    components.sort(key=lambda comp: _order_key(comp.space))
    if split.abelian_factor.dim:
        a = split.abelian_factor
        components.append(Component(a, "abelian", Subspace.zero(n, exact), a))

    _verify_decomposition(alg, components)
    return IdealDecomposition(components)


def _verify_decomposition(alg, components):
    n = alg.dim
    if sum(c.space.dim for c in components) != n:
        raise InternalInconsistency("ideal dimensions do not sum to n")
    for i, a in enumerate(components):
        for b in components[i + 1 :]:
            if not a.space.is_orthogonal_to(b.space):
                raise InternalInconsistency("ideal components are not orthogonal")
    for comp in components:
        for k in range(n):
            ad = alg.ad(alg.basis_vector(k))
            for x in comp.space.basis:
                if not comp.space.contains(ad @ x):
                    raise InternalInconsistency("component is not an ideal")
    derived_sum = Subspace.span(
        [b for c in components if c.kind != "abelian" for b in c.z_part.basis], n, alg.exact
    )
    if derived_sum != alg.split.derived:
        raise InternalInconsistency("derived spans of components do not add up to n'")


# -------------------------------------------------------------- nonsingularity


@dataclass(frozen=True)
class Nonsingularity:
    value: bool
    certain: bool
    witness: object = None  # x in v with z -> j(z)x not injective; float if irrational
    samples: int = 0
    seed: int = None
    method: str = "sampling"

    @property
    def label(self):
        if self.certain:
            return "certainly_nonsingular" if self.value else "certainly_singular"
        return "probably_nonsingular"


def _full_rank_at(alg, x):
    cols = np.array([jm @ x for jm in alg.jmap.matrices])
    return rank(cols) == len(cols)


def _pfaffian4(m):
    return m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2]


def _kernel_witness(vb, m):
    """x in v with j(z)x = 0, from the Gram-weighted matrix m = B j(z) B^T."""
    if m.dtype == object:
        return nullspace(m).basis[0] @ vb
    _, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    return vt[-1] @ np.asarray(vb, dtype=float)


def _float_pencil_witness(vb, mats, z):
    m = sum(float(c) * np.asarray(mk, dtype=float) for c, mk in zip(z, mats))
    return _kernel_witness(vb, m)


def _pencil(vb, mats):
    """Decide singularity of s M1 + t M2 exactly: (singular, witness)."""
    m1, m2 = mats
    nv = len(vb)
    if det(m2) == 0:
        return True, _kernel_witness(vb, m2)
    ts = [Q(k) for k in range(nv + 1)]
    p = _poly.interpolate(ts, [det(m1 + t * m2) for t in ts])
    if _poly.real_root_count(p) == 0:
        return False, None
    for r in _poly.rational_roots(p):
        return True, _kernel_witness(vb, m1 + r * m2)
    # det is a square, so real roots are double; isolate them first
    roots = np.roots([float(c) for c in _poly.squarefree(p)])
    t = min(roots, key=lambda r: abs(r.imag)).real
    return True, _float_pencil_witness(vb, mats, [1.0, t])


def _isotropic(form):
    """Nonzero z with z^T form z = 0, or None when the form is definite."""
    n = len(form)
    minors = [det(form[:k, :k]) for k in range(1, n + 1)]
    if all(m > 0 for m in minors) or all((m > 0) == (k % 2 == 0) and m != 0 for k, m in enumerate(minors, start=1)):
        return None
    ns = nullspace(form)
    if ns.dim:
        return ns.basis[0]
    q = lambda v: v @ form @ v
    eye_rows = [zeros(n) for _ in range(n)]
    for k in range(n):
        eye_rows[k][k] = Q(1)
    trials = eye_rows + [a + b for i, a in enumerate(eye_rows) for b in eye_rows[i + 1 :]]
    trials += [a - b for i, a in enumerate(eye_rows) for b in eye_rows[i + 1 :]]
    pos = next(v for v in trials if q(v) > 0)
    neg = next(v for v in trials if q(v) < 0)
    # q(pos + t neg) = a + 2 b t + c t^2 has a real root since a > 0 > c
    a, b, c = q(pos), pos @ form @ neg, q(neg)
    disc = b * b - a * c
    num, den = disc.numerator, disc.denominator
    rn, rd = isqrt(int(num)), isqrt(int(den))
    if rn * rn == num and rd * rd == den:
        t = (-b + Q(int(rn), int(rd))) / c
        return pos + t * neg
    t = (-float(b) + float(disc) ** 0.5) / float(c)
    return np.asarray(pos, dtype=float) + t * np.asarray(neg, dtype=float)


def is_nonsingular(alg, samples=64, seed=0):
    """Whether z -> j(z)x is injective for every nonzero x in v.

    Equivalently j(z) is invertible on v for every nonzero z. Decided exactly
    when dim z = 1, dim v is odd, dim z >= dim v, dim z = 2 (Sturm count on
    the pencil det) or dim v = 4 (definiteness of the Pfaffian form); other
    cases test seeded random rational x and full rank is only probable.
    """
    split = alg.split
    nv, nz = split.v.dim, split.z.dim
    vb = np.array(split.v_basis)
    mats = [vb @ jm @ vb.T for jm in alg.jmap.matrices]
    exact = alg.exact

    if nz == 1:
        ok = rank(mats[0]) == nv
        return Nonsingularity(ok, True, None if ok else _kernel_witness(vb, mats[0]), method="dim_z_1")
    if nv % 2:
        # skew maps of odd size are never invertible
        return Nonsingularity(False, True, _kernel_witness(vb, mats[0]), method="odd_dim_v")
    if nz >= nv:
        # j(z)x is orthogonal to x, so at most nv - 1 independent values
        return Nonsingularity(False, True, vb[0], method="dim_z_ge_dim_v")
    for x in split.v_basis:
        if not _full_rank_at(alg, x):
            return Nonsingularity(False, True, x, method="basis_vector")
    if exact and nz == 2:
        singular, x = _pencil(vb, mats)
        return Nonsingularity(not singular, True, x, method="pencil_sturm")
    if exact and nv == 4:
        form = zeros((nz, nz))
        for k in range(nz):
            form[k, k] = _pfaffian4(mats[k])
        for k in range(nz):
            for l in range(k + 1, nz):
                form[k, l] = form[l, k] = (_pfaffian4(mats[k] + mats[l]) - form[k, k] - form[l, l]) / 2
        z = _isotropic(form)
        if z is None:
            return Nonsingularity(True, True, method="pfaffian_form")
        if getattr(z, "dtype", None) == object:
            m = sum((c * mk for c, mk in zip(z, mats)), zeros((nv, nv)))
            return Nonsingularity(False, True, _kernel_witness(vb, m), method="pfaffian_form")
        return Nonsingularity(False, True, _float_pencil_witness(vb, mats, z), method="pfaffian_form")

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        coeffs = rng.integers(-9, 10, size=len(vb))
        x = (np.array([Q(int(t)) for t in coeffs], dtype=object) if exact else coeffs.astype(float)) @ vb
        if is_zero(x):
            continue
        if not _full_rank_at(alg, x):
            return Nonsingularity(False, True, x, samples, seed)
    return Nonsingularity(True, False, None, samples, seed)
