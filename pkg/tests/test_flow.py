import numpy as np
import pytest

from conftest import killing, load, oracle_span
from nilkilling import flow
from nilkilling.errors import NonFloatMode
from nilkilling.flow import _rk4_py
from nilkilling.oracle import omega_vector


def short_run(name, steps=2000, kernel=None, states=4):
    alg, _ = load(name)
    y0, w0 = flow.random_states(alg.dim, states, seed=1)
    return alg, flow.integrate(alg, y0, w0, t_max=2.0, steps=steps, kernel=kernel)


def test_trajectory_shapes():
    alg, traj = short_run("heisenberg-1", steps=100)
    assert traj.w.shape == (101, 4, 3)
    assert traj.y.shape == (101, 4, 3)
    assert traj.t[-1] == pytest.approx(2.0)


def test_center_velocity_is_constant():
    alg, traj = short_run("dim6-free2step")
    z = np.asarray(alg.split.pz, dtype=float)
    assert np.allclose(traj.y @ z, traj.y[0] @ z, atol=1e-14)


def test_velocity_matches_closed_form():
    alg, traj = short_run("dim8-double")
    exact = flow.exact_velocity(alg, traj.y[0, 0], traj.t[-1])
    assert np.allclose(traj.y[-1, 0], exact, atol=1e-10)
    assert flow.velocity_error(alg, traj) < 1e-10


def test_kernels_agree():
    if flow.KERNEL != "cython":
        pytest.skip("compiled kernel not built")
    _, a = short_run("dim8-double", steps=500, kernel="cython")
    _, b = short_run("dim8-double", steps=500, kernel="numpy")
    assert np.allclose(a.w, b.w, rtol=0, atol=1e-12)
    assert np.allclose(a.y, b.y, rtol=0, atol=1e-12)


def test_right_invariant_fields_are_first_integrals():
    # g(Omega_xi(w), y) is conserved for every Killing field xi
    alg, traj = short_run("dim6-free2step")
    for i in range(alg.dim):
        poly = omega_vector(alg, ("x", np.eye(alg.dim)[i]))
        assert flow.drift(alg, ("field", poly), traj) < 1e-9


def test_position_equation_against_finite_difference():
    alg, traj = short_run("heisenberg-2", steps=4000)
    h = traj.h
    dw = (traj.w[2:] - traj.w[:-2]) / (2 * h)
    w, y = traj.w[1:-1], traj.y[1:-1]
    c = np.asarray(alg.c, dtype=float)
    rhs = y + 0.5 * np.einsum("sbi,sbj,ijk->sbk", w, y, c)
    assert np.max(np.abs(dw - rhs)) < 1e-5


def test_polynomial_first_integral_from_the_oracle():
    alg, traj = short_run("heisenberg-1")
    span = oracle_span("heisenberg-1")
    for poly in span.polys:
        assert flow.drift(alg, poly, traj) < 1e-9


def test_killing_basis_conserved_short(catalog_name):
    alg, traj = short_run(catalog_name, steps=1000)
    for s in killing(catalog_name).tensors:
        assert flow.drift(alg, s, traj) < 1e-9


def test_rejects_exact_initial_state():
    alg, _ = load("heisenberg-1")
    with pytest.raises(NonFloatMode):
        flow.integrate(alg, np.array([[1, 0, 0]], dtype=object))


def test_numpy_field_is_quadratic():
    alg, _ = load("heisenberg-1")
    terms = flow.flow_terms(alg)
    y = np.array([[0.3, -0.2, 0.7]])
    w = np.zeros_like(y)
    W1, Y1 = _rk4_py.rk4_batch(w, y, 1e-3, 1, 1, *terms)
    W2, Y2 = _rk4_py.rk4_batch(w, 2 * y, 1e-3 / 2, 1, 1, *terms)
    # time rescaling: y(t) with 2*y0 equals 2*y(2t) for a quadratic field
    assert np.allclose(Y2[1], 2 * Y1[1], atol=1e-15)
