"""Acceptance gate: one test per criterion, summarized at the end of the run.

Run alone with ``pytest tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from conftest import killing, load, oracle_span
from nilkilling import catalog, flow
from nilkilling.classify import classify
from nilkilling.derivations import extend_skew, skew_derivations
from nilkilling.errors import Abelian, JacobiFails, NotAntisymmetric, NotTwoStep
from nilkilling.killing import (
    component_split,
    form_to_tensor,
    is_killing,
    killing_space,
    killing_two_forms,
    parallel_by_connection,
    parallel_by_ideals,
    parallel_space,
    random_killing,
    sym_coords,
    sym_product,
)
from nilkilling.liealg import from_brackets, j_injective, validate
from nilkilling.linalg import Subspace, qarray, zeros
from nilkilling.oracle import OracleSpan, crosscheck, is_constant, mixed_expansion

SMALL = ["heisenberg-1", "heisenberg-2", "heisenberg-3", "dim6-free2step", "h1-plus-h1", "h1-plus-abelian2"]


def unit(i, n):
    return qarray([1 if k == i else 0 for k in range(n)])


def dim6_family():
    n = 6
    e = [unit(i, n) for i in range(n)]
    id_v = zeros((n, n))
    for i in range(3):
        id_v[i, i] = 1
    mixed = sym_product(e[0], e[5]) - sym_product(e[1], e[4]) + sym_product(e[2], e[3])
    sym2z = [sym_product(e[a], e[b]) for a in range(3, 6) for b in range(a, 6)]
    return [id_v, mixed] + sym2z


def dim8_paper_tensor():
    return qarray(np.diag([1, 1, 1, 2, 2, 2, 0, 0]).tolist())


def criterion3_tensors(name):
    ks = killing(name)
    basis = [(f"killing_{i + 1}", t) for i, t in enumerate(ks.tensors)]
    return basis + random_killing(ks, 20, seed=0)


@pytest.mark.criterion(1)
def test_criterion_01_dim6_killing_space():
    start = time.perf_counter()
    alg, _ = catalog.load("dim6-free2step").build()
    ks = killing_space(alg)
    elapsed = time.perf_counter() - start
    assert ks.dim == 8
    family = Subspace.span([sym_coords(t) for t in dim6_family()])
    assert family.dim == 8
    assert ks.space == family
    assert elapsed < 1.0


@pytest.mark.criterion(2)
def test_criterion_02_dim8_indecomposable():
    start = time.perf_counter()
    alg, tensors = catalog.load("dim8-double").build()
    s = tensors["S"]
    verdict = classify(alg, s)
    elapsed = time.perf_counter() - start
    assert (s == dim8_paper_tensor()).all()
    assert verdict.label == "Indecomposable"
    assert verdict.fast_path.startswith("indecomposable")
    assert verdict.block_pair == (1, 2)
    assert elapsed < 1.0


@pytest.mark.criterion(3)
def test_criterion_03_small_dimensions_decomposable():
    start = time.perf_counter()
    count = 0
    for name in SMALL:
        alg, _ = catalog.load(name).build()
        ks = killing_space(alg)
        tensors = [(f"killing_{i + 1}", t) for i, t in enumerate(ks.tensors)]
        tensors += random_killing(ks, 20, seed=0)
        for label, s in tensors:
            assert classify(alg, s).label == "Decomposable", (name, label)
            count += 1
    elapsed = time.perf_counter() - start
    assert count > 6 * 20
    assert elapsed < 10.0


@pytest.mark.criterion(4)
def test_criterion_04_oracle_agreement():
    start = time.perf_counter()
    checked = 0
    for name in SMALL:
        alg, _ = catalog.load(name).build()
        tensors = criterion3_tensors(name)
        if name == "dim6-free2step":
            tensors += [(f"family_{i + 1}", t) for i, t in enumerate(dim6_family())]
        # strict: any disagreement raises OracleDisagreement
        checked += len(crosscheck(alg, tensors, OracleSpan(alg), strict=True))
    alg, tensors = catalog.load("dim8-double").build()
    entries = crosscheck(alg, [("S", tensors["S"])], OracleSpan(alg), strict=True)
    assert entries[0].oracle == "Indecomposable"
    elapsed = time.perf_counter() - start
    assert checked + 1 > 6 * 20
    assert elapsed < 60.0


@pytest.mark.criterion(5)
def test_criterion_05_mixed_part_membership():
    for name in catalog.VALID_NAMES:
        alg, _ = load(name)
        zb = alg.split.z_basis
        for a in range(len(zb)):
            for b in range(a, len(zb)):
                assert killing(name).contains(sym_product(zb[a], zb[b]))

    alg, _ = load("dim6-free2step")
    span = oracle_span("dim6-free2step")
    mixed = []
    for t in killing("dim6-free2step").tensors:
        s_m = component_split(t, alg.split).s_m
        if any(x != 0 for x in s_m.flat):
            mixed.append(s_m)
    assert mixed
    for s in mixed:
        assert is_killing(alg, s)
        member = span.membership(s)
        assert member.member
        assert is_constant(span.combine(member.coefficients), s)
        assert is_constant(mixed_expansion(alg, s), s)


@pytest.mark.criterion(6)
def test_criterion_06_parallel_two_routes():
    for name in catalog.VALID_NAMES:
        alg, _ = load(name)
        a = parallel_by_connection(alg)
        b = parallel_by_ideals(alg)
        assert a == b, name
        par = parallel_space(alg)
        if alg.ideals.is_irreducible:
            assert par.dim == 1, name


@pytest.mark.criterion(7)
def test_criterion_07_extension_uniqueness():
    rng = np.random.default_rng(7)
    tested = 0
    for name in catalog.VALID_NAMES:
        alg, _ = load(name)
        if not j_injective(alg):
            continue
        pv = alg.split.pv
        for d in skew_derivations(alg).basis:
            res = extend_skew(alg, pv @ d @ pv)
            assert res.feasible
            assert res.freedom == 0
            assert (res.derivation == d).all()
            tested += 1
        # arbitrary skew maps on v: either no extension or a unique one
        for _ in range(3):
            r = qarray(rng.integers(-3, 4, size=(alg.dim, alg.dim)).tolist())
            t = pv @ (r - r.T) @ pv
            assert extend_skew(alg, t).freedom == 0
    assert tested > 0


@pytest.mark.criterion(8)
def test_criterion_08_flow_conservation():
    for name in catalog.VALID_NAMES:
        alg, _ = load(name)
        y0, w0 = flow.random_states(alg.dim, 10, seed=0)
        traj = flow.integrate(alg, y0, w0, t_max=20.0, steps=20000)
        assert abs(traj.h - 1e-3) < 1e-15
        for s in killing(name).tensors:
            assert flow.drift(alg, s, traj) < 1e-8, name
        assert flow.velocity_error(alg, traj) < 1e-9, name
        if name == "heisenberg-1":
            e11 = zeros((3, 3))
            e11[0, 0] = 1
            assert not is_killing(alg, e11)
            assert flow.drift(alg, e11, traj) > 1e-3


@pytest.mark.criterion(9)
def test_criterion_09_killing_two_forms():
    nonzero = 0
    for name in catalog.VALID_NAMES:
        alg, _ = load(name)
        forms = killing_two_forms(alg)
        for t in forms.forms:
            assert is_killing(alg, form_to_tensor(t)), name
        nonzero += forms.dim
    assert nonzero > 0


@pytest.mark.criterion(10)
def test_criterion_10_validator_fixtures():
    with pytest.raises(NotTwoStep):
        catalog.load("solvable-counterexample").build()
    with pytest.raises(Abelian):
        from_brackets(4, {})
    c = zeros((3, 3, 3))
    c[0, 1, 2] = 1
    with pytest.raises(NotAntisymmetric) as exc:
        validate(c)
    assert exc.value.violations == [("antisymmetry", (0, 1, 2))]
    # [e3, e1] = e1 breaks Jacobi on the only triple
    with pytest.raises(JacobiFails) as exc:
        from_brackets(3, {(0, 1): {2: 1}, (2, 0): {0: 1}})
    assert exc.value.violations == [("jacobi", (0, 1, 2))]
