"""Decomposability of left-invariant symmetric Killing 2-tensors.

Only the v-block S^v matters: Sym^2 z and the Killing mixed part are always
decomposable. S^v is block diagonal across the irreducible ideals, abelian
blocks are parallel, and on an irreducible block with eigenvalues lambda_i
and eigenprojectors P_i the tensor is decomposable iff some shift a makes

    T_z = j(z) (sum_i (lambda_i - a) P_i)

extend to a skew derivation for every z in the center. Writing the unknown
z-block of the extension of T_{z_s} as A_s, the requirement is

    j(A_s z_t) + a [j(z_s), j(z_t)] = [j(z_s) S_U, j(z_t)]   for all s, t,

which is affine in (a, A_1, ..., A_m); one solve decides it.
"""

from dataclasses import dataclass, field

import numpy as np

from .derivations import is_derivation, is_skew
from .errors import GeneratorsDependent, InternalAssertion, NeedsFloatFallback, NotKilling, NotSkew
from .killing import component_split, is_killing, skew_basis
from .linalg import (
    Q,
    Subspace,
    commutator,
    eigendecompose_symmetric,
    is_exact,
    is_zero,
    qarray,
    rank,
    solve_affine,
    zeros,
)
from .liealg import from_brackets, minimal_invariant_pieces


@dataclass
class BlockVerdict:
    """Verdict on one ideal of the decomposition."""

    component: int
    kind: str
    decomposable: bool
    reason: str
    eigenvalues: list = field(default_factory=list)
    shift: object = None
    derivations: list = field(default_factory=list)
    witness: object = None
    block_pair: tuple = None


@dataclass
class Verdict:
    decomposable: bool
    exact: bool
    blocks: list
    fast_path: str = None
    trace: list = field(default_factory=list)

    @property
    def label(self):
        return "Decomposable" if self.decomposable else "Indecomposable"

    @property
    def block_pair(self):
        return next((b.block_pair for b in self.blocks if b.block_pair), None)


# ---------------------------------------------------------------- fast paths


def _restriction_span(jms, p):
    return [p @ j @ p for j in jms]


def _is_closed(mats):
    """Whether span(mats) is closed under commutators (exact rank test)."""
    if not mats:
        return True
    flat = [m.reshape(-1) for m in mats]
    base = rank(np.array(flat))
    comms = [commutator(a, b).reshape(-1) for i, a in enumerate(mats) for b in mats[i + 1 :]]
    return rank(np.array(flat + comms)) == base


def _is_abelian(mats):
    return all(is_zero(commutator(a, b)) for i, a in enumerate(mats) for b in mats[i + 1 :])


def sufficient_decomposable(alg):
    """Reason string if every Killing tensor is decomposable by the center criterion.

    Each irreducible ideal must either have a 1-dimensional center or have
    at most one minimal j-invariant piece of v with non-abelian j-restriction.
    Irrational splittings are computed in float.
    """
    try:
        comps = alg.ideals.irreducible
        pieces = minimal_invariant_pieces(alg)
    except NeedsFloatFallback:
        alg = alg.to_float()
        comps = alg.ideals.irreducible
        pieces = minimal_invariant_pieces(alg)
    jms = alg.jmap.matrices
    reasons = []
    for comp in comps:
        if comp.z_part.dim == 1:
            reasons.append("dim z = 1")
            continue
        own = [u for u in pieces if comp.v_part.contains_space(u)]
        nonabelian = [u for u in own if not _is_abelian(_restriction_span(jms, u.projector()))]
        if len(nonabelian) > 1:
            return None
        reasons.append("single invariant block" if len(own) == 1 else "at most one non-abelian block")
    return "; ".join(sorted(set(reasons))) or "no irreducible ideal"


def sufficient_indecomposable(alg, eigenspaces):
    """First 1-based pair (i, j) of eigenblocks whose j-restrictions are not subalgebras."""
    jms = alg.jmap.matrices
    open_blocks = [
        i for i, e in enumerate(eigenspaces, start=1) if not _is_closed(_restriction_span(jms, e.projector()))
    ]
    if len(open_blocks) >= 2:
        return tuple(open_blocks[:2])
    return None


# ---------------------------------------------------------------- eigen data


@dataclass(frozen=True)
class Eigenblock:
    value: object
    space: Subspace

    def projector(self):
        return self.space.projector()


def spectral_data(alg, s_v, u):
    """Eigenvalues and eigenspaces of S^v restricted to the subspace u of v."""
    pu = u.projector()
    s_u = pu @ s_v @ pu
    blocks = []
    for e in eigendecompose_symmetric(s_u):
        piece = e.space.intersect(u)
        if piece.dim:
            blocks.append(Eigenblock(e.value, piece))
    if sum(b.space.dim for b in blocks) != u.dim:
        raise InternalAssertion("eigenspaces do not fill the block")
    for i, a in enumerate(blocks):
        for b in blocks[i + 1 :]:
            for x in a.space.basis:
                for y in b.space.basis:
                    if not is_zero(alg.bracket(x, y)):
                        raise InternalAssertion("distinct eigenspaces of a Killing S^v do not commute")
    return blocks, s_u


# ------------------------------------------------------------ irreducible test


def classify_irreducible_v(alg, comp, s_v, index=0):
    """Shift-and-extend feasibility test on one irreducible ideal."""
    exact = alg.exact
    n = alg.dim
    blocks, s_u = spectral_data(alg, s_v, comp.v_part)
    values = [b.value for b in blocks]
    if len(blocks) <= 1:
        shift = values[0] if values else (Q(0) if exact else 0.0)
        return BlockVerdict(index, comp.kind, True, "single eigenvalue", values, shift, [])

    pair = sufficient_indecomposable(alg, blocks)
    zb = list(comp.z_part.orthogonal_basis())
    jz = [alg.jmap(z) for z in zb]
    pu = comp.v_part.projector()
    skews = skew_basis(zb, n, exact)
    m = len(zb)
    k = len(skews)

    # unknown vector: (a, coordinates of A_1, ..., A_m in the so(W) basis)
    rows_m, rows_b = [], []
    for s in range(m):
        for t in range(m):
            block = [(commutator(jz[s], jz[t])).reshape(-1)]
            for s2 in range(m):
                for q in range(k):
                    if s2 == s:
                        block.append(alg.jmap(skews[q] @ zb[t]).reshape(-1))
                    else:
                        block.append(zeros(n * n, exact))
            rows_m.append(np.array(block).T)
            rows_b.append(commutator(jz[s] @ s_u, jz[t]).reshape(-1))
    mat = np.concatenate(rows_m)
    rhs = np.concatenate(rows_b)
    res = solve_affine(mat, rhs)
    if not res.feasible:
        return BlockVerdict(index, comp.kind, False, "no shift extends", values, witness=res.witness, block_pair=pair)

    a = res.x[0]
    derivs = []
    for s in range(m):
        coeffs = res.x[1 + s * k : 1 + (s + 1) * k]
        a_s = sum((c * e for c, e in zip(coeffs, skews)), zeros((n, n), exact))
        derivs.append(jz[s] @ (s_u - a * pu) + a_s)
    verdict = BlockVerdict(index, comp.kind, True, "shift extends", values, a, derivs, block_pair=None)
    if pair is not None:
        raise InternalAssertion(f"indecomposability criterion fired on block pair {pair} but a shift was found")
    _verify_certificate(alg, verdict, zb, s_u, pu)
    return verdict


def _verify_certificate(alg, verdict, zb, s_u, pu):
    for z, d in zip(zb, verdict.derivations):
        expected = alg.jmap(z) @ (s_u - verdict.shift * pu)
        if not (is_skew(d) and is_derivation(alg, d)):
            raise InternalAssertion("certificate map is not a skew derivation")
        if not is_zero(alg.split.pv @ d @ alg.split.pv - expected, 1e-8):
            raise InternalAssertion("certificate derivation does not extend T_z")


# ------------------------------------------------------------------- pipeline


def classify(alg, s, allow_float=True):
    """Decomposable or Indecomposable, with per-ideal certificates."""
    check = is_killing(alg, s)
    if not check:
        raise NotKilling(f"tensor is not Killing (witness {check.witness})")
    try:
        return _classify(alg, np.asarray(s) if not alg.exact else s, exact=alg.exact)
    except NeedsFloatFallback:
        if not allow_float or not alg.exact:
            raise
        fa = alg.to_float()
        verdict = _classify(fa, np.asarray(s, dtype=float), exact=False)
        verdict.trace.insert(0, "irrational spectrum: rerun in float mode")
        return verdict


def _classify(alg, s, exact):
    if not exact:
        s = np.asarray(s, dtype=float)
    split = alg.split
    parts = component_split(s, split)
    s_v = parts.s_v
    trace = ["discard S^z and S^m", "reduce to S^v"]
    comps = alg.ideals.components
    irreducible = [c for c in comps if c.kind == "irreducible_2step"]
    recon = sum((c.v_part.projector() @ s_v @ c.v_part.projector() for c in irreducible), zeros(s_v.shape, exact))
    if not is_zero(recon - s_v, 1e-8):
        raise InternalAssertion("S^v is not block diagonal across the irreducible ideals")
    fast = sufficient_decomposable(alg)
    if fast:
        trace.append(f"sufficient decomposability: {fast}")
    blocks = []
    for i, comp in enumerate(comps):
        if comp.kind == "abelian":
            blocks.append(BlockVerdict(i, comp.kind, True, "abelian factor: parallel"))
        else:
            blocks.append(classify_irreducible_v(alg, comp, s_v, i))
    decomposable = all(b.decomposable for b in blocks)
    if fast and not decomposable:
        raise InternalAssertion("sufficient decomposability fired on an indecomposable tensor")
    pair = next((b.block_pair for b in blocks if b.block_pair), None)
    if pair:
        trace.append(f"indecomposability criterion: eigenblocks {pair}")
    if fast:
        label = f"decomposable: {fast}"
    elif pair:
        label = f"indecomposable: eigenblocks {pair[0]} and {pair[1]}"
    else:
        label = None
    return Verdict(decomposable, exact, blocks, label, trace)


# ----------------------------------------------------------------- doubling


def construct_double(generators, alpha=2):
    """Two copies of V glued along a common center spanned by the generators.

    Returns the algebra with basis e_1..e_2m, z_1..z_p and brackets
    [e_a, e_b] = sum_s Z_s[b, a] z_s on each copy, so that j(z_s) acts as
    Z_s on both copies, together with S = Id on copy 1 + alpha Id on copy 2.
    """
    gens = [np.asarray(g) if is_exact(g) else qarray(g) for g in generators]
    if not gens:
        raise GeneratorsDependent("at least one generator is needed")
    m = gens[0].shape[0]
    for g in gens:
        if g.shape != (m, m) or not is_skew(g):
            raise NotSkew("generators must be skew-symmetric m x m matrices")
    if rank(np.array([g.reshape(-1) for g in gens])) != len(gens):
        raise GeneratorsDependent("generators are linearly dependent")
    p = len(gens)
    n = 2 * m + p
    brackets = {}
    for copy in range(2):
        off = copy * m
        for a in range(m):
            for b in range(a + 1, m):
                rhs = {2 * m + s: g[b, a] for s, g in enumerate(gens) if g[b, a] != 0}
                if rhs:
                    brackets[(off + a, off + b)] = rhs
    names = [f"e{i + 1}" for i in range(2 * m)] + [f"z{s + 1}" for s in range(p)]
    alg = from_brackets(n, brackets, names)
    s = zeros((n, n))
    for i in range(m):
        s[i, i] = Q(1)
        s[m + i, m + i] = Q(alpha)
    return alg, s


__all__ = [
    "BlockVerdict",
    "Verdict",
    "classify",
    "classify_irreducible_v",
    "construct_double",
    "spectral_data",
    "sufficient_decomposable",
    "sufficient_indecomposable",
]
