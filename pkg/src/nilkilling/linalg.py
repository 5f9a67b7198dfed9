"""Dense linear algebra over Q (exact) or float64.

A matrix is a numpy array. ``dtype=object`` arrays hold exact ``Q`` scalars
and get exact elimination; float arrays go through LAPACK with fixed
tolerances. The two modes never mix: helpers look at the dtype to decide.
"""

from dataclasses import dataclass
from functools import reduce
from math import lcm

import numpy as np
import scipy.linalg

from ._scalar import Q, parse_rational
from .errors import InternalInconsistency, NeedsFloatFallback, NotSymmetric

RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-12
CLUSTER_RTOL = 1e-9
RESIDUAL_TOL = 1e-8

ZERO = Q(0)
ONE = Q(1)


# ---------------------------------------------------------------- constructors


def qarray(data):
    """Exact object array from nested ints, strings or rationals."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, x in enumerate(flat):
        flat[i] = parse_rational(x) if isinstance(x, str) else Q(x)
    return arr


def zeros(shape, exact=True):
    if not exact:
        return np.zeros(shape)
    arr = np.empty(shape, dtype=object)
    arr.fill(ZERO)
    return arr


def eye(n, exact=True):
    if not exact:
        return np.eye(n)
    arr = zeros((n, n))
    for i in range(n):
        arr[i, i] = ONE
    return arr


def is_exact(a):
    return np.asarray(a).dtype == object


def to_float(a):
    return np.asarray(a, dtype=float)


def convert(a, exact):
    """Cast ``a`` into the requested mode (float -> exact is not allowed)."""
    if exact:
        if not is_exact(a):
            raise TypeError("cannot convert float data to exact mode")
        return a
    return to_float(a)


def is_zero(a, tol=RANK_TOL):
    a = np.asarray(a)
    if a.dtype == object:
        return all(x == 0 for x in a.flat)
    return a.size == 0 or float(np.max(np.abs(a))) <= tol


def is_symmetric(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    if m.dtype == object:
        return all(m[i, j] == m[j, i] for i in range(len(m)) for j in range(i))
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= SYMMETRY_TOL)


def symmetric(m):
    """Return ``m`` after checking it is a symmetric square matrix."""
    if not is_symmetric(m):
        raise NotSymmetric("matrix is not symmetric")
    return m


def commutator(a, b):
    return a @ b - b @ a


# ----------------------------------------------------------- exact elimination


def _sparse(row):
    return {j: x for j, x in enumerate(row) if x != 0}


class Echelon:
    """Incremental fully reduced row echelon form over Q with sparse rows.

    With ``track=True`` every stored row remembers which combination of the
    inserted vectors produced it, which is what membership certificates need.
    """

    def __init__(self, ncols, track=False):
        self.ncols = ncols
        self.track = track
        self.rows = {}
        self.combos = {}
        self.inserted = 0

    @property
    def rank(self):
        return len(self.rows)

    @property
    def pivots(self):
        return sorted(self.rows)

    def reduce(self, row, combo=None):
        """Reduce a sparse row against the stored rows."""
        row = dict(row)
        combo = dict(combo) if combo is not None else None
        for p in [p for p in row if p in self.rows]:
            c = row.get(p)
            if not c:
                continue
            _axpy(row, -c, self.rows[p])
            if combo is not None:
                _axpy(combo, -c, self.combos[p])
        return row, combo

    def add(self, row):
        """Insert a row (dict or dense); return True if it raised the rank."""
        if not isinstance(row, dict):
            row = _sparse(row)
        combo = {self.inserted: ONE} if self.track else None
        self.inserted += 1
        row, combo = self.reduce(row, combo)
        if not row:
            return False
        p = min(row)
        inv = ONE / row[p]
        row = {j: x * inv for j, x in row.items()}
        if combo is not None:
            combo = {j: x * inv for j, x in combo.items()}
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                _axpy(other, -c, row)
                if self.track:
                    _axpy(self.combos[q], -c, combo)
        self.rows[p] = row
        if self.track:
            self.combos[p] = combo
        return True

    def contains(self, row):
        if not isinstance(row, dict):
            row = _sparse(row)
        return not self.reduce(row)[0]

    def express(self, row):
        """Coefficients over inserted vectors reproducing ``row``, or None."""
        if not isinstance(row, dict):
            row = _sparse(row)
        rest, _ = self.reduce(row)
        if rest:
            return None
        out = {}
        for p, x in row.items():
            if p in self.rows:
                _axpy(out, x, self.combos[p])
        return out

    def dense(self):
        out = zeros((self.rank, self.ncols))
        for i, p in enumerate(self.pivots):
            for j, x in self.rows[p].items():
                out[i, j] = x
        return out


def _axpy(target, c, source):
    """target += c * source for sparse dict vectors, dropping zeros."""
    for j, x in source.items():
        y = target.get(j, ZERO) + c * x
        if y:
            target[j] = y
        else:
            target.pop(j, None)


# ---------------------------------------------------------- rank and nullspace


def rref(m):
    """Reduced row echelon form and pivot columns (exact only)."""
    m = np.asarray(m)
    ech = Echelon(m.shape[1])
    for row in m:
        ech.add(row)
    return ech.dense(), tuple(ech.pivots)


def _float_svd(m):
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return np.zeros(0), np.eye(m.shape[1])
    _, s, vt = np.linalg.svd(m)
    return s, vt


def _float_rank(s):
    if s.size == 0:
        return 0
    return int(np.sum(s > RANK_TOL * max(1.0, s[0])))


def rank(m):
    m = np.asarray(m)
    if m.dtype == object:
        ech = Echelon(m.shape[1])
        for row in m:
            ech.add(row)
        return ech.rank
    return _float_rank(_float_svd(m)[0])


def _nullspace_rows(ech):
    """Canonical nullspace basis from a fully reduced echelon form."""
    pivots = ech.rows
    basis = []
    for f in range(ech.ncols):
        if f in pivots:
            continue
        vec = zeros(ech.ncols)
        vec[f] = ONE
        for p, row in pivots.items():
            c = row.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def nullspace(m):
    """Subspace {x : m x = 0}."""
    m = np.asarray(m)
    ncols = m.shape[1]
    if m.dtype == object:
        ech = Echelon(ncols)
        for row in m:
            ech.add(row)
        return Subspace.span(_nullspace_rows(ech), ncols, exact=True)
    s, vt = _float_svd(m)
    r = _float_rank(s)
    return Subspace(vt[r:].copy(), ncols)


def left_nullspace(m):
    return nullspace(np.asarray(m).T)


@dataclass(frozen=True)
class AffineSolution:
    """A particular solution together with the homogeneous solution space."""

    x: np.ndarray
    kernel: "Subspace"
    residual: float = 0.0
    feasible = True


@dataclass(frozen=True)
class Infeasible:
    """Certificate y with y^T M = 0 and y^T b != 0."""

    witness: np.ndarray
    rank_defect: int
    residual: float = 0.0
    feasible = False


def solve_affine(m, b):
    """Solve ``m x = b``; returns AffineSolution or an Infeasible certificate."""
    m = np.asarray(m)
    b = np.asarray(b)
    rows, cols = m.shape
    if len(b) != rows:
        raise ValueError(f"{rows} rows but right-hand side of length {len(b)}")
    if m.dtype == object:
        return _solve_exact(m, b)
    return _solve_float(m, b)


def _solve_exact(m, b):
    rows, cols = m.shape
    # augmented echelon form on [m | b]; a pivot in the last column is a contradiction
    ech = Echelon(cols + 1, track=True)
    for i in range(rows):
        row = _sparse(m[i])
        if b[i] != 0:
            row[cols] = b[i]
        ech.add(row)
    if cols in ech.rows:
        combo = ech.combos[cols]
        y = zeros(rows)
        for i, c in combo.items():
            y[i] = c
        coeff_rank = ech.rank - 1
        return Infeasible(y, rank_defect=ech.rank - coeff_rank)
    x = zeros(cols)
    for p, row in ech.rows.items():
        x[p] = row.get(cols, ZERO)
    coeff = Echelon(cols)
    coeff.rows = {p: {j: v for j, v in row.items() if j != cols} for p, row in ech.rows.items()}
    kernel = Subspace.span(_nullspace_rows(coeff), cols, exact=True)
    return AffineSolution(x, kernel)


def _solve_float(m, b):
    rows, cols = m.shape
    b = np.asarray(b, dtype=float)
    m = np.asarray(m, dtype=float)
    if cols == 0:
        x = np.zeros(0)
    else:
        x = np.linalg.lstsq(m, b, rcond=None)[0]
    residual = float(np.linalg.norm(m @ x - b)) if rows else 0.0
    if residual > RESIDUAL_TOL * max(1.0, float(np.linalg.norm(b))):
        y = b - m @ x
        y = y / np.linalg.norm(y)
        return Infeasible(y, rank_defect=1, residual=residual)
    return AffineSolution(x, nullspace(m), residual)


def det(m):
    m = np.asarray(m)
    if m.dtype != object:
        return float(np.linalg.det(m))
    a = [list(row) for row in m]
    n = len(a)
    out = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            out = -out
        out *= a[col][col]
        inv = ONE / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return out


def inverse(m):
    m = np.asarray(m)
    if m.dtype != object:
        return np.linalg.inv(m)
    n = len(m)
    sol = []
    for k in range(n):
        e = zeros(n)
        e[k] = ONE
        res = solve_affine(m, e)
        if not res.feasible:
            raise ZeroDivisionError("matrix is singular")
        sol.append(res.x)
    return np.array(sol, dtype=object).T


# ------------------------------------------------------------------- subspaces


class Subspace:
    """Subspace of R^n given by a basis stored as rows.

    Exact bases are kept in reduced row echelon form, so equal subspaces have
    identical bases. Float bases are orthonormal rows.
    """

    __slots__ = ("basis", "ambient_dim", "_projector", "_orth", "_pivots")

    def __init__(self, basis, ambient_dim):
        basis = np.asarray(basis)
        if basis.size == 0:
            basis = zeros((0, ambient_dim), exact=basis.dtype == object)
        self.basis = basis
        self.ambient_dim = ambient_dim
        self._projector = None
        self._orth = None
        self._pivots = None

    @classmethod
    def span(cls, vectors, ambient_dim=None, exact=None):
        vectors = list(vectors)
        if ambient_dim is None:
            if not vectors:
                raise ValueError("ambient dimension needed for an empty span")
            ambient_dim = len(vectors[0])
        if exact is None:
            exact = not vectors or all(is_exact(v) for v in vectors)
        if exact:
            ech = Echelon(ambient_dim)
            for v in vectors:
                ech.add(v)
            space = cls(ech.dense(), ambient_dim)
            space._pivots = tuple(ech.pivots)
            return space
        if not vectors:
            return cls(np.zeros((0, ambient_dim)), ambient_dim)
        mat = np.array([to_float(v) for v in vectors])
        _, s, vt = np.linalg.svd(mat, full_matrices=False)
        return cls(vt[: _float_rank(s)].copy(), ambient_dim)

    @classmethod
    def zero(cls, n, exact=True):
        return cls(zeros((0, n), exact), n)

    @classmethod
    def full(cls, n, exact=True):
        return cls.span(list(eye(n, exact)), n, exact)

    @classmethod
    def coordinate(cls, indices, n, exact=True):
        e = eye(n, exact)
        return cls.span([e[i] for i in indices], n, exact)

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def exact(self):
        return self.basis.dtype == object

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    @property
    def pivots(self):
        if self._pivots is None:
            self._pivots = tuple(min(j for j, x in enumerate(r) if x != 0) for r in self.basis)
        return self._pivots

    def __eq__(self, other):
        if not isinstance(other, Subspace) or other.ambient_dim != self.ambient_dim:
            return NotImplemented
        if self.dim != other.dim:
            return False
        if self.exact and other.exact:
            return bool(np.all(self.basis == other.basis))
        return bool(np.allclose(to_float(self.projector()), to_float(other.projector()), atol=1e-8))

    __hash__ = None

    def coordinates(self, v):
        """Coefficients of ``v`` in the stored basis (assumes membership)."""
        if self.exact:
            return np.array([v[p] for p in self.pivots], dtype=object)
        return self.basis @ to_float(v)

    def contains(self, v):
        v = np.asarray(v)
        if self.exact and v.dtype == object:
            rest = v - self.coordinates(v) @ self.basis if self.dim else v
            return is_zero(rest)
        vf = to_float(v)
        bf = to_float(self.orthogonal_basis())
        if self.exact:
            bf = np.linalg.qr(bf.T)[0].T if self.dim else bf
        rest = vf - bf.T @ (bf @ vf) if self.dim else vf
        return float(np.linalg.norm(rest)) <= 1e-8 * max(1.0, float(np.linalg.norm(vf)))

    def contains_space(self, other):
        return all(self.contains(v) for v in other.basis)

    def __le__(self, other):
        return other.contains_space(self)

    def __add__(self, other):
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim, self.exact and other.exact)

    def orthogonal_basis(self):
        """Pairwise orthogonal (not normalized, in exact mode) basis rows."""
        if self._orth is None:
            if not self.exact:
                self._orth = self.basis
            else:
                out = []
                for b in self.basis:
                    u = b.copy()
                    for w in out:
                        c = (b @ w) / (w @ w)
                        if c:
                            u = u - c * w
                    out.append(u)
                self._orth = np.array(out, dtype=object).reshape(self.dim, self.ambient_dim)
        return self._orth

    def projector(self):
        """Orthogonal projector onto the subspace."""
        if self._projector is None:
            if not self.exact:
                self._projector = self.basis.T @ self.basis
            else:
                p = zeros((self.ambient_dim, self.ambient_dim))
                for u in self.orthogonal_basis():
                    p = p + np.outer(u, u) * (ONE / (u @ u))
                self._projector = p
        return self._projector

    def complement(self):
        """Orthogonal complement in the ambient space."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, self.exact)
        return nullspace(self.basis)

    def intersect(self, other):
        a, b = self.complement(), other.complement()
        stacked = np.concatenate([a.basis, b.basis]) if a.dim + b.dim else zeros((0, self.ambient_dim), self.exact)
        if stacked.shape[0] == 0:
            return Subspace.full(self.ambient_dim, self.exact)
        return nullspace(stacked)

    def is_orthogonal_to(self, other):
        if self.dim == 0 or other.dim == 0:
            return True
        return is_zero(self.basis @ other.basis.T)

    def image(self, m):
        """Image of the subspace under the matrix ``m``."""
        return Subspace.span([m @ v for v in self.basis], m.shape[0], self.exact)

    def is_invariant(self, m):
        return all(self.contains(m @ v) for v in self.basis)


# --------------------------------------------------------- eigendecomposition


@dataclass(frozen=True)
class Eigenspace:
    value: object
    space: Subspace

    @property
    def multiplicity(self):
        return self.space.dim

    def projector(self):
        return self.space.projector()


def charpoly_int(a):
    """Monic characteristic polynomial of an integer matrix.

    Faddeev-LeVerrier; all intermediate quantities stay integral. Returns
    ``[1, c_{n-1}, ..., c_0]`` for ``det(xI - a)``.
    """
    n = len(a)
    a = np.array([[int(x) for x in row] for row in a], dtype=object).reshape(n, n)
    coeffs = [1]
    m = np.zeros((n, n), dtype=object)
    ident = np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)
    c = 1
    for k in range(1, n + 1):
        m = a @ m + c * ident if k > 1 else ident.copy()
        am = a @ m
        tr = sum(am[i, i] for i in range(n))
        q, r = divmod(-tr, k)
        if r:
            raise InternalInconsistency("non-integral Faddeev-LeVerrier step")
        c = q
        coeffs.append(c)
    return coeffs


def _horner(coeffs, x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    return out


def integer_roots(coeffs, bound):
    """Integer roots with multiplicities of a monic integer polynomial."""
    coeffs = list(coeffs)
    roots = {}
    while len(coeffs) > 1 and coeffs[-1] == 0:
        roots[0] = roots.get(0, 0) + 1
        coeffs.pop()
    p = 1
    while p <= bound and len(coeffs) > 1:
        if coeffs[-1] % p == 0:
            for r in (p, -p):
                while len(coeffs) > 1 and _horner(coeffs, r) == 0:
                    roots[r] = roots.get(r, 0) + 1
                    coeffs = _deflate(coeffs, r)
        p += 1
    return roots


def eigendecompose_symmetric(s):
    """Eigenvalues and eigenspaces of a symmetric matrix, ascending.

    Exact mode only succeeds on rational spectra and raises
    NeedsFloatFallback otherwise. Float mode clusters nearby eigenvalues.
    """
    s = symmetric(np.asarray(s))
    n = len(s)
    if n == 0:
        return []
    if s.dtype != object:
        return _eig_float(s)
    den = reduce(lcm, (int(Q(x).denominator) for x in s.flat), 1)
    a = s * den
    bound = max(sum(abs(int(x)) for x in row) for row in a)
    roots = integer_roots(charpoly_int(a), bound)
    if sum(roots.values()) != n:
        raise NeedsFloatFallback("characteristic polynomial has non-rational roots")
    out = []
    ident = eye(n)
    for r in sorted(roots):
        lam = Q(r, den)
        space = nullspace(s - lam * ident)
        if space.dim != roots[r]:
            raise InternalInconsistency(f"eigenvalue {lam}: geometric {space.dim} != algebraic {roots[r]}")
        out.append(Eigenspace(lam, space))
    return out


def _eig_float(s):
    w, vecs = scipy.linalg.eigh(s)
    rho = float(np.max(np.abs(w)))
    gap = CLUSTER_RTOL * (1.0 + rho)
    groups = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][-1]] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    out = []
    for g in groups:
        q, _ = np.linalg.qr(vecs[:, g])
        out.append(Eigenspace(float(np.mean(w[g])), Subspace(q.T.copy(), len(s))))
    return out
