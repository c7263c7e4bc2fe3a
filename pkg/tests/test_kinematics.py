import numpy as np
import pytest
from numpy.testing import assert_allclose

from grainstiff.kinematics import (PlacementField, h_from_strain_gradient,
                                   h_tensor_direct, h_tensor_from_strain,
                                   kinematic_state,
                                   objective_relative_displacement,
                                   project_displacement, random_placement,
                                   relative_displacement,
                                   squared_projections_closed_form,
                                   squared_projections_from_strain)
from grainstiff.tensors import max_abs_diff


def test_identity_placement_has_trivial_state():
    chi = PlacementField.identity(3)
    state = kinematic_state(chi, np.array([0.3, -0.2, 0.5]))
    assert_allclose(state.F, np.eye(3), atol=0)
    assert_allclose(state.G, 0.0, atol=0)
    assert_allclose(state.gradG, 0.0, atol=0)


def test_affine_placement_gradient_is_exact():
    A = np.array([[1.2, 0.3], [-0.1, 0.9]])
    chi = PlacementField.affine(A, offset=np.array([2.0, -1.0]))
    x = np.array([0.7, 0.4])
    assert_allclose(chi.evaluate(x), A @ x + np.array([2.0, -1.0]), rtol=1e-15)
    assert_allclose(chi.deformation_gradient(x), A, atol=0)
    assert_allclose(chi.second_gradient(x), 0.0, atol=0)


def test_placement_rejects_degree_above_cap():
    # a quartic term exceeds the supported polynomial degree
    with pytest.raises(ValueError):
        PlacementField(2, ({(4, 0): 1.0}, {(0, 1): 1.0}))


def test_uniform_dilation_strain():
    alpha = 1.2
    chi = PlacementField.affine(alpha * np.eye(2))
    state = kinematic_state(chi, np.zeros(2))
    g = 0.5 * (alpha ** 2 - 1.0)
    assert_allclose(state.G, g * np.eye(2), rtol=1e-15)
    assert g == pytest.approx(0.22)


def test_simple_shear_projections():
    gamma = 0.1
    A = np.eye(2)
    A[0, 1] = gamma
    chi = PlacementField.affine(A)
    state = kinematic_state(chi, np.zeros(2))
    c_hat = np.array([1.0, 0.0])
    u = relative_displacement(state.G, state.gradG, c_hat, 1.0, "corrected")
    u_eta, u_tau = project_displacement(u, c_hat)
    assert u_eta == pytest.approx(0.0, abs=1e-15)
    assert float(u_tau @ u_tau) == pytest.approx(0.01, rel=1e-12)


def test_h_tensor_known_gradient():
    # gradG with the single entry dG_11/dx_2 = 1 maps to H_112 = H_121 = 1
    # and H_211 = -1
    gradG = np.zeros((2, 2, 2))
    gradG[0, 0, 1] = 1.0
    H = h_from_strain_gradient(gradG)
    assert H[0, 0, 1] == pytest.approx(1.0)
    assert H[0, 1, 0] == pytest.approx(1.0)
    assert H[1, 0, 0] == pytest.approx(-1.0)
    assert np.count_nonzero(H) == 3


@pytest.mark.parametrize("dim", [2, 3])
def test_h_identity_near_identity_placements(dim):
    rng = np.random.default_rng(100 + dim)
    for _ in range(50):
        chi = random_placement(dim, rng)
        state = kinematic_state(chi, rng.uniform(-1.0, 1.0, size=dim))
        h_direct = h_tensor_direct(state)
        h_strain = h_tensor_from_strain(state)
        assert max_abs_diff(h_direct, h_strain) < 1e-12
        assert max_abs_diff(h_direct, h_direct.transpose(0, 2, 1)) < 1e-12


@pytest.mark.parametrize("dim", [2, 3])
def test_h_identity_wild_placements(dim):
    rng = np.random.default_rng(200 + dim)
    for _ in range(50):
        chi = random_placement(dim, rng, linear_scale=2.0, higher_scale=1.0,
                               identity_base=False)
        state = kinematic_state(chi, rng.uniform(-1.0, 1.0, size=dim))
        assert max_abs_diff(h_tensor_direct(state),
                            h_tensor_from_strain(state)) < 1e-9


def test_relative_displacement_modes_differ_with_gradients():
    rng = np.random.default_rng(5)
    chi = random_placement(3, rng)
    state = kinematic_state(chi, np.array([0.1, 0.2, -0.3]))
    c_hat = np.array([0.0, 0.0, 1.0])
    u_corr = relative_displacement(state.G, state.gradG, c_hat, 1.0,
                                   "corrected")
    u_leg = relative_displacement(state.G, state.gradG, c_hat, 1.0, "legacy")
    assert max_abs_diff(u_corr, u_leg) > 1e-6
    assert_allclose(objective_relative_displacement(state, c_hat, 1.0),
                    u_corr, atol=0)


def test_displacement_rejects_non_unit_orientation():
    G = np.zeros((2, 2))
    gradG = np.zeros((2, 2, 2))
    with pytest.raises(ValueError):
        relative_displacement(G, gradG, np.array([1.0, 1.0]), 1.0, "corrected")
    with pytest.raises(ValueError):
        project_displacement(np.zeros(2), np.array([0.5, 0.5]))


def test_displacement_rejects_bad_mode_and_length():
    G = np.zeros((2, 2))
    gradG = np.zeros((2, 2, 2))
    c = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        relative_displacement(G, gradG, c, 1.0, "original")
    with pytest.raises(ValueError):
        relative_displacement(G, gradG, c, -1.0, "corrected")


@pytest.mark.parametrize("dim", [2, 3])
def test_squared_projections_match_direct_computation(dim):
    rng = np.random.default_rng(300 + dim)
    for _ in range(50):
        chi = random_placement(dim, rng)
        state = kinematic_state(chi, rng.uniform(-1.0, 1.0, size=dim))
        v = rng.normal(size=dim)
        c_hat = v / np.linalg.norm(v)
        L = float(rng.uniform(0.5, 2.0))
        u = relative_displacement(state.G, state.gradG, c_hat, L, "corrected")
        u_eta, u_tau = project_displacement(u, c_hat)
        sq_eta, sq_tau = squared_projections_from_strain(state.G, state.gradG,
                                                         c_hat, L)
        assert sq_eta == pytest.approx(u_eta ** 2, abs=1e-13, rel=1e-10)
        assert sq_tau == pytest.approx(float(u_tau @ u_tau), abs=1e-13,
                                       rel=1e-10)
        sq_eta2, sq_tau2 = squared_projections_closed_form(state, c_hat, L)
        assert sq_eta2 == pytest.approx(sq_eta, rel=1e-12, abs=1e-15)
        assert sq_tau2 == pytest.approx(sq_tau, rel=1e-12, abs=1e-15)


def test_pythagorean_split():
    rng = np.random.default_rng(17)
    for _ in range(20):
        chi = random_placement(3, rng)
        state = kinematic_state(chi, rng.uniform(-1.0, 1.0, size=3))
        v = rng.normal(size=3)
        c_hat = v / np.linalg.norm(v)
        u = relative_displacement(state.G, state.gradG, c_hat, 1.3,
                                  "corrected")
        u_eta, u_tau = project_displacement(u, c_hat)
        assert float(u @ u) == pytest.approx(
            4.0 * u_eta ** 2 + float(u_tau @ u_tau), rel=1e-12, abs=1e-15)
        # the tangential part carries no component along the orientation
        assert abs(float(c_hat @ u_tau)) < 1e-14
