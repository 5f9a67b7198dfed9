import pytest

from conftest import load
from nilkilling.derivations import derivation_residual, extend_skew, is_derivation, is_skew, skew_derivations
from nilkilling.errors import NotSkew
from nilkilling.liealg import j_injective
from nilkilling.linalg import commutator, qarray, zeros

DER_DIMS = {"heisenberg-1": 1, "heisenberg-2": 4, "dim6-free2step": 3, "dim8-double": 2}


@pytest.mark.parametrize("name, dim", sorted(DER_DIMS.items()))
def test_skew_derivation_dims(name, dim):
    assert skew_derivations(load(name)[0]).dim == dim


def test_basis_is_closed_under_commutator(catalog_name):
    alg, _ = load(catalog_name)
    ders = skew_derivations(alg)
    for a in ders.basis:
        assert is_skew(a) and is_derivation(alg, a)
        for b in ders.basis:
            assert ders.contains(commutator(a, b))


def test_h1_derivation_is_rotation_of_v():
    alg, _ = load("heisenberg-1")
    (d,) = skew_derivations(alg).basis
    assert d[2, 2] == 0 and d[0, 1] != 0
    assert all(x == 0 for x in derivation_residual(alg, d))


def test_non_derivation_detected():
    alg, _ = load("heisenberg-1")
    m = zeros((3, 3))
    m[0, 2], m[2, 0] = 1, -1
    assert is_skew(m)
    assert not is_derivation(alg, m)


def test_extend_requires_v_support():
    alg, _ = load("heisenberg-1")
    m = zeros((3, 3))
    m[0, 2], m[2, 0] = 1, -1
    with pytest.raises(NotSkew):
        extend_skew(alg, m)
    with pytest.raises(NotSkew):
        extend_skew(alg, qarray([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))


def test_extension_infeasible_on_dim8():
    alg, tensors = load("dim8-double")
    # j(z1) scaled by the eigenvalues of S on each eigenblock
    t = alg.jmap(alg.split.z_basis[0]) @ tensors["S"]
    assert is_skew(t)
    res = extend_skew(alg, t)
    assert not res.feasible
    assert res.witness is not None


def test_extension_feasible_after_shift_on_h1():
    alg, _ = load("heisenberg-1")
    # dim z = 1: any eigenvalue shift of j(z) extends
    t = 3 * alg.jmap(alg.split.z_basis[0])
    res = extend_skew(alg, t)
    assert res.feasible and res.freedom == 0
    assert is_derivation(alg, res.derivation)


def test_freedom_appears_without_injective_j():
    alg, _ = load("h1-plus-abelian2")
    assert not j_injective(alg)
    (d,) = [d for d in skew_derivations(alg).basis if d[0, 1] != 0][:1] or [None]
    t = alg.split.pv @ d @ alg.split.pv
    res = extend_skew(alg, t)
    assert res.feasible
    # so(z) directions rotating the central plane are invisible to j
    assert res.freedom > 0
