import numpy as np
import pytest

from conftest import killing, load
from nilkilling import catalog
from nilkilling.errors import NotSymmetric
from nilkilling.killing import (
    component_split,
    connection_matrix,
    is_killing,
    killing_space,
    killing_two_forms,
    parallel_space,
    sym_basis,
    sym_coords,
    sym_coords_to_matrix,
    sym_product,
)
from nilkilling.linalg import Subspace, eye, qarray, zeros

# Killing dimensions worked out by hand: Sym^2 z, plus the commutant of j on v,
# plus mixed z.v terms (only dim6-free2step has one)
KILLING_DIMS = {
    "heisenberg-1": 2,
    "heisenberg-2": 5,
    "heisenberg-3": 10,
    "dim6-free2step": 8,
    "h1-plus-h1": 5,
    "h1-plus-abelian2": 7,
    "dim8-double": 8,
}


def test_sym_coordinates_round_trip():
    s = qarray([[1, 2, 3], [2, 4, 5], [3, 5, 6]])
    assert (sym_coords_to_matrix(sym_coords(s), 3) == s).all()
    assert len(sym_basis(4)) == 10


def test_sym_product_is_symmetric_and_bilinear():
    u, w = qarray([1, 2, 0]), qarray([0, 1, 1])
    p = sym_product(u, w)
    assert (p == p.T).all()
    assert (sym_product(u, 2 * w) == 2 * p).all()


def test_h1_killing_space():
    alg, _ = load("heisenberg-1")
    ks = killing_space(alg)
    expected = Subspace.span([sym_coords(qarray(np.diag([1, 1, 0]).tolist())), sym_coords(qarray(np.diag([0, 0, 1]).tolist()))])
    assert ks.space == expected


def test_non_killing_witness_on_h1():
    alg, _ = load("heisenberg-1")
    e11 = zeros((3, 3))
    e11[0, 0] = 1
    check = is_killing(alg, e11)
    assert not check
    assert check.witness == ("v", 0, 1)


def test_is_killing_rejects_asymmetric():
    alg, _ = load("heisenberg-1")
    m = zeros((3, 3))
    m[0, 1] = 1
    with pytest.raises(NotSymmetric):
        is_killing(alg, m)


def test_killing_dimensions(catalog_name):
    assert killing(catalog_name).dim == KILLING_DIMS[catalog_name]


def test_metric_and_center_tensors_always_killing(catalog_name):
    alg, _ = load(catalog_name)
    ks = killing(catalog_name)
    assert ks.contains(eye(alg.dim))
    assert ks.contains(alg.split.pv)
    zb = alg.split.z_basis
    for a in range(len(zb)):
        for b in range(a, len(zb)):
            assert ks.contains(sym_product(zb[a], zb[b]))


def test_nonsingular_forces_no_mixed_part():
    for name in ["heisenberg-1", "heisenberg-2", "heisenberg-3"]:
        alg, _ = load(name)
        for t in killing(name).tensors:
            assert all(x == 0 for x in component_split(t, alg.split).s_m.flat)


def test_component_split_reassembles():
    alg, _ = load("dim6-free2step")
    for t in killing("dim6-free2step").tensors:
        parts = component_split(t, alg.split)
        assert ((parts.s_v + parts.s_m + parts.s_z) == t).all()


def test_connection_is_skew_and_torsion_free():
    alg, _ = load("dim6-free2step")
    n = alg.dim
    basis = [eye(n)[i] for i in range(n)]
    for x in basis:
        lam = connection_matrix(alg, x)
        assert ((lam + lam.T) == 0).all()
        for y in basis:
            torsion = lam @ y - connection_matrix(alg, y) @ x - alg.bracket(x, y)
            assert all(v == 0 for v in torsion)


def test_parallel_inside_killing(catalog_name):
    par = parallel_space(load(catalog_name)[0])
    assert killing(catalog_name).space.contains_space(par.space)


def test_parallel_dims():
    assert parallel_space(load("h1-plus-h1")[0]).dim == 2
    # identity on h1 plus Sym^2 of the abelian plane
    assert parallel_space(load("h1-plus-abelian2")[0]).dim == 4


def test_two_forms():
    assert killing_two_forms(load("heisenberg-1")[0]).dim == 0
    forms = killing_two_forms(load("h1-plus-abelian2")[0])
    assert forms.dim == 1
    t = forms.forms[0]
    # a rotation of the abelian plane
    support = {(i, j) for i in range(5) for j in range(5) if t[i, j] != 0}
    assert support == {(3, 4), (4, 3)}


def test_float_mode_matches_exact():
    alg, _ = load("dim8-double")
    fa = alg.to_float()
    kf = killing_space(fa)
    assert kf.dim == killing("dim8-double").dim
    for t in killing("dim8-double").tensors:
        assert is_killing(fa, np.asarray(t, dtype=float))


def test_catalog_covers_all_names():
    assert set(KILLING_DIMS) == set(catalog.VALID_NAMES)
