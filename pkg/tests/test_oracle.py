import numpy as np
import pytest

from conftest import killing, load, oracle_span
from nilkilling.errors import OracleDisagreement
from nilkilling.killing import is_killing, sym_product
from nilkilling.linalg import eye, qarray, zeros
from nilkilling.oracle import (
    OracleSpan,
    crosscheck,
    decomposable_membership,
    decomposable_subspace,
    degree,
    omega_product,
    omega_vector,
)


def test_omega_of_right_invariant_field_on_h1():
    alg, _ = load("heisenberg-1")
    x = qarray([1, 0, 0])
    poly = omega_vector(alg, ("x", x))
    # x - [w, x]: the bracket [w, x1] = -w_y z
    assert (poly[()] == x).all()
    assert list(poly) == [(), (1,)]
    assert (poly[(1,)] == qarray([0, 0, 1])).all()
    assert degree(poly) == 1


def test_omega_of_derivation_field_has_degree_two_at_most():
    alg, _ = load("heisenberg-2")
    from nilkilling.derivations import skew_derivations

    for d in skew_derivations(alg).basis:
        poly = omega_vector(alg, ("D", d))
        assert () not in poly  # vanishes at the identity
        assert degree(poly) <= 2


def test_products_are_symmetric_tensors():
    alg, _ = load("dim6-free2step")
    p = omega_vector(alg, ("x", qarray([1, 0, 0, 0, 0, 0])))
    q = omega_vector(alg, ("x", qarray([0, 1, 0, 0, 0, 0])))
    for mat in omega_product(p, q).values():
        assert (mat == mat.T).all()


def test_metric_is_a_member():
    span = oracle_span("heisenberg-1")
    alg, _ = load("heisenberg-1")
    assert span.membership(eye(3)).member
    assert is_killing(alg, eye(3))


def test_membership_certificate_recombines():
    span = oracle_span("dim6-free2step")
    for t in killing("dim6-free2step").tensors:
        m = span.membership(t)
        assert m.member
        total = span.combine(m.coefficients)
        assert list(total) == [()]
        assert (total[()] == t).all()


def test_non_member_on_dim8():
    alg, tensors = load("dim8-double")
    span = oracle_span("dim8-double")
    assert span.rank == 56
    assert not decomposable_membership(alg, tensors["S"], span).member


def test_decomposable_subspace_dims():
    assert decomposable_subspace(load("dim6-free2step")[0], oracle_span("dim6-free2step")).dim == 8
    # Killing dimension 8, only 6 of them decomposable
    assert decomposable_subspace(load("dim8-double")[0], oracle_span("dim8-double")).dim == 6


def test_remainder_is_empty_exactly_for_members():
    span = oracle_span("dim8-double")
    _, tensors = load("dim8-double")
    assert span.remainder(eye(8)) == {}
    assert span.remainder(tensors["S"]) != {}


def test_crosscheck_strict_raises_on_disagreement(monkeypatch):
    alg, tensors = load("dim8-double")
    span = oracle_span("dim8-double")
    entries = crosscheck(alg, [("S", tensors["S"])], span)
    assert entries[0].agree
    from nilkilling import oracle

    monkeypatch.setattr(span, "membership", lambda s: oracle.Membership(True))
    with pytest.raises(OracleDisagreement):
        crosscheck(alg, [("S", tensors["S"])], span)


def test_float_algebra_refused():
    alg, _ = load("heisenberg-1")
    with pytest.raises(ValueError):
        OracleSpan(alg.to_float())


def test_center_products_are_members():
    alg, _ = load("h1-plus-h1")
    span = oracle_span("h1-plus-h1")
    zb = alg.split.z_basis
    assert span.membership(sym_product(zb[0], zb[1])).member
    s = zeros((6, 6))
    s[0, 0] = s[1, 1] = 1
    assert span.membership(s).member
    assert not span.membership(qarray(np.diag([1, 0, 0, 0, 0, 0]).tolist())).member
