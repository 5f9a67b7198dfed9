"""Brute-force decomposability oracle.

Every Killing field of a 2-step group is xi_x (x in n) or xi_D (D a skew
derivation), and their left-trivialized values are polynomials in the
exponential coordinate w:

    Omega_{xi_x}(w) = x - [w, x],      Omega_{xi_D}(w) = Dw - 1/2 [w, Dw].

The symmetric product of two fields has Omega equal to the symmetric product
of the two vector polynomials (degree <= 4). Because the symmetric product is
bilinear, products of pairs from a fixed basis of Killing fields span all
products, so a constant tensor S is decomposable iff it lies in the span of
those pairwise products plus the parallel tensors. That span is built once
per algebra as a sparse exact echelon form.
"""

from dataclasses import dataclass, field

from .derivations import skew_derivations
from .errors import OracleDisagreement
from .killing import killing_space, parallel_space, sym_product
from .linalg import ONE, Q, ZERO, Echelon, Subspace, is_zero, nullspace, zeros

# A polynomial is a dict: monomial (sorted tuple of variable indices) -> coefficient.
# Vector polynomials have vector coefficients, tensor polynomials symmetric matrices.


def _add_into(poly, mono, coef):
    if mono in poly:
        poly[mono] = poly[mono] + coef
    else:
        poly[mono] = coef


def _prune(poly):
    return {m: c for m, c in poly.items() if not is_zero(c)}


def omega_vector(alg, gen):
    """Vector polynomial of a Killing field: ("x", vector) or ("D", matrix)."""
    kind, data = gen
    n = alg.dim
    poly = {}
    if kind == "x":
        poly[()] = data
        for a in range(n):
            poly[(a,)] = -alg.bracket(alg.basis_vector(a), data)
    elif kind == "D":
        half = Q(1, 2) if alg.exact else 0.5
        cols = [data @ alg.basis_vector(b) for b in range(n)]
        for a in range(n):
            poly[(a,)] = cols[a]
            for b in range(a, n):
                term = alg.bracket(alg.basis_vector(a), cols[b])
                if a != b:
                    term = term + alg.bracket(alg.basis_vector(b), cols[a])
                _add_into(poly, (a, b), -half * term)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return _prune(poly)


def omega_product(p, q):
    """Tensor polynomial of the symmetric product of two vector polynomials."""
    out = {}
    for m1, u in p.items():
        for m2, w in q.items():
            _add_into(out, tuple(sorted(m1 + m2)), sym_product(u, w))
    return _prune(out)


def poly_add(p, q, scale=1):
    out = dict(p)
    for m, c in q.items():
        _add_into(out, m, scale * c)
    return _prune(out)


def degree(poly):
    return max((len(m) for m in poly), default=0)


@dataclass
class Membership:
    member: bool
    coefficients: dict = field(default_factory=dict)  # generator label -> coefficient


class OracleSpan:
    """Span of parallel tensors and pairwise Omega-products for one algebra."""

    def __init__(self, alg, derivations=None, parallel=None):
        if not alg.exact:
            raise ValueError("the polynomial oracle runs in exact mode only")
        self.alg = alg
        n = alg.dim
        ders = derivations if derivations is not None else skew_derivations(alg).basis
        par = parallel if parallel is not None else parallel_space(alg).tensors
        self.fields = [(f"xi_{alg.names[i]}", ("x", alg.basis_vector(i))) for i in range(n)]
        self.fields += [(f"xi_D{q + 1}", ("D", d)) for q, d in enumerate(ders)]
        self.parallel = par
        self._index = {}
        self.labels = []
        self.polys = []
        self.echelon = Echelon(0, track=True)
        for k, p in enumerate(par):
            self._insert(f"parallel_{k + 1}", {(): p})
        vecs = [omega_vector(alg, g) for _, g in self.fields]
        # a <= b suffices: the symmetric product is bilinear and symmetric
        for a in range(len(vecs)):
            for b in range(a, len(vecs)):
                label = f"{self.fields[a][0]}*{self.fields[b][0]}"
                self._insert(label, omega_product(vecs[a], vecs[b]))

    @property
    def generator_count(self):
        return len(self.fields) + len(self.parallel)

    @property
    def rank(self):
        return self.echelon.rank

    def _row(self, poly, grow):
        n = self.alg.dim
        row = {}
        for mono, mat in poly.items():
            for i in range(n):
                for j in range(i, n):
                    x = mat[i, j]
                    if x == 0:
                        continue
                    key = (mono, i, j)
                    col = self._index.get(key)
                    if col is None:
                        if not grow:
                            return None
                        col = self._index[key] = len(self._index)
                    row[col] = x
        return row

    def _insert(self, label, poly):
        self.labels.append(label)
        self.polys.append(poly)
        self.echelon.add(self._row(poly, grow=True))

    def combine(self, coefficients):
        """The tensor polynomial sum_label c * generator, for re-checking certificates."""
        index = {label: i for i, label in enumerate(self.labels)}
        total = {}
        for label, c in coefficients.items():
            total = poly_add(total, self.polys[index[label]], c)
        return total

    def remainder(self, s):
        """Residue of the constant polynomial s modulo the span (empty iff member)."""
        n = self.alg.dim
        row = {}
        for i in range(n):
            for j in range(i, n):
                if s[i, j] != 0:
                    # columns the span never touches keep a private key
                    row[self._index.get(((), i, j), ("new", i, j))] = s[i, j]
        known = {k: x for k, x in row.items() if not isinstance(k, tuple)}
        rest, _ = self.echelon.reduce(known)
        rest.update({k: x for k, x in row.items() if isinstance(k, tuple)})
        return rest

    def membership(self, s):
        row = self._row({(): s}, grow=False)
        if row is None:
            return Membership(False)
        combo = self.echelon.express(row)
        if combo is None:
            return Membership(False)
        return Membership(True, {self.labels[i]: c for i, c in sorted(combo.items())})


def decomposable_membership(alg, s, span=None):
    span = span or OracleSpan(alg)
    return span.membership(s)


def decomposable_subspace(alg, span=None, killing=None):
    """Decomposable Killing tensors, as coefficient vectors over the Killing basis.

    Membership is linear in S, so the decomposable tensors are the kernel of
    the map sending a Killing tensor to its residue modulo the span.
    """
    span = span or OracleSpan(alg)
    ks = killing or killing_space(alg)
    residues = [span.remainder(t) for t in ks.tensors]
    keys = sorted({k for r in residues for k in r}, key=repr)
    m = zeros((len(keys), ks.dim))
    for col, r in enumerate(residues):
        for row, k in enumerate(keys):
            m[row, col] = r.get(k, ZERO)
    if not keys:
        return Subspace.full(ks.dim, exact=True)
    return nullspace(m)


def mixed_expansion(alg, s):
    """Sum over an orthogonal center basis of Omega(xi_{z_s} . xi_{S z_s}) / |z_s|^2."""
    total = {}
    for z in alg.split.z_basis:
        prod = omega_product(omega_vector(alg, ("x", z)), omega_vector(alg, ("x", s @ z)))
        scale = ONE / (z @ z) if alg.exact else 1.0 / float(z @ z)
        total = poly_add(total, prod, scale)
    return total


def is_constant(poly, s):
    """Whether the tensor polynomial equals the constant tensor s."""
    rest = poly_add(poly, {(): s}, -1)
    return not rest


@dataclass
class CrosscheckEntry:
    label: str
    classify: str
    oracle: str

    @property
    def agree(self):
        return self.classify == self.oracle


def crosscheck(alg, tensors, span=None, strict=True):
    """Compare classify and oracle verdicts on labelled tensors."""
    from .classify import classify

    span = span or OracleSpan(alg)
    entries = []
    for label, s in tensors:
        verdict = classify(alg, s)
        member = span.membership(s)
        entry = CrosscheckEntry(label, verdict.label, "Decomposable" if member.member else "Indecomposable")
        entries.append(entry)
        if strict and not entry.agree:
            raise OracleDisagreement(f"{label}: classify says {entry.classify}, oracle says {entry.oracle}")
    return entries


__all__ = [
    "Membership",
    "OracleSpan",
    "crosscheck",
    "decomposable_membership",
    "degree",
    "is_constant",
    "mixed_expansion",
    "omega_product",
    "omega_vector",
]
