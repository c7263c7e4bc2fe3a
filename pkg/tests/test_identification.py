from math import pi

import numpy as np
import pytest
from numpy.testing import assert_allclose

from grainstiff.distributions import StiffnessDistribution
from grainstiff.identification import (MINDLIN_FACTORS, NotIsotropicError,
                                       SYM_C, SYM_D, SYM_M, c_group_values,
                                       c_groups, c_tensor, compare_legacy,
                                       d_from_iso_params, d_group_rows,
                                       d_group_values, d_groups, d_tensor,
                                       engineering_from_k, identify,
                                       iso_c_params, iso_params_from_d,
                                       isotropic_closed_forms,
                                       isotropic_material, k_from_engineering,
                                       lame_from_k, m_tensor, mindlin_from_c,
                                       tensors_from_energy)
from grainstiff.tensors import check_symmetry, max_abs_diff, parse_component


def test_group_component_census():
    # every listed component appears exactly once across the groups
    for dim, n_c, n_d in ((2, 8, 32), (3, 21, 183)):
        c_comps = [c for *_, comps in c_groups(dim) for c in comps]
        d_comps = [c for *_, comps in d_groups(dim) for c in comps]
        assert len(c_comps) == len(set(c_comps)) == n_c
        assert len(d_comps) == len(set(d_comps)) == n_d


@pytest.mark.parametrize("dim, keta, expected", [
    (2, 8.0, (3.0, 1.0, 1.0)),
    (3, 15.0, (3.0, 1.0, 1.0)),
])
def test_first_gradient_spot_values(dim, keta, expected):
    values = c_group_values(dim, 1.0, keta, 0.0)
    assert values["axial"] == pytest.approx(expected[0], rel=1e-15)
    assert values["cross"] == pytest.approx(expected[1], rel=1e-15)
    assert values["shear"] == pytest.approx(expected[2], rel=1e-15)


def test_second_gradient_spot_values_2d():
    # denominators clear at kbar_eta = 256
    values = d_group_values(2, 1.0, 256.0, 0.0)
    assert values == pytest.approx(
        {"d1": 5.0, "d2": 1.0, "d3": 1.0, "d4": 1.0, "d5": 1.0, "d6": 1.0})
    values_t = d_group_values(2, 1.0, 0.0, 256.0)
    assert values_t == pytest.approx(
        {"d1": 4.0, "d2": 4.0, "d3": -12.0, "d4": 52.0, "d5": -28.0,
         "d6": 20.0})


def test_second_gradient_spot_values_3d():
    values = d_group_values(3, 1.0, 1680.0, 0.0)
    assert values == pytest.approx(
        {"d1": 15.0, "d2": 3.0, "d3": 3.0, "d4": 3.0, "d5": 3.0,
         "d5_sub": 1.0, "d6": 1.0, "d6_sub": 3.0, "d7": 1.0})
    values_t = d_group_values(3, 1.0, 0.0, 1680.0)
    assert values_t == pytest.approx(
        {"d1": 24.0, "d2": 16.0, "d3": -40.0, "d4": 184.0, "d5": -96.0,
         "d5_sub": -32.0, "d6": 24.0, "d6_sub": 72.0, "d7": 80.0})


def test_subfamily_scalings_hold_for_both_coefficients():
    # the d5 subfamily is the d5 value divided by 3 and the d6 subfamily is
    # three times d6, for arbitrary stiffness mixes
    for keta, ktau in ((1.0, 0.0), (0.0, 1.0), (2.7, 1.3)):
        values = d_group_values(3, 1.0, keta, ktau)
        assert values["d5_sub"] == pytest.approx(values["d5"] / 3.0,
                                                 rel=1e-14)
        assert values["d6_sub"] == pytest.approx(3.0 * values["d6"],
                                                 rel=1e-14)


def test_length_scaling_powers():
    # C scales as L^2 and D as L^4
    c1 = c_group_values(3, 1.0, 5.0, 2.0)
    c2 = c_group_values(3, 2.0, 5.0, 2.0)
    for name in c1:
        assert c2[name] == pytest.approx(4.0 * c1[name], rel=1e-14)
    d1 = d_group_values(3, 1.0, 5.0, 2.0)
    d2 = d_group_values(3, 2.0, 5.0, 2.0)
    for name in d1:
        assert d2[name] == pytest.approx(16.0 * d1[name], rel=1e-14)


@pytest.mark.parametrize("dim", [2, 3])
def test_closed_forms_match_quadrature(dim):
    rng = np.random.default_rng(40 + dim)
    for _ in range(5):
        keta = float(rng.uniform(0.2, 5.0))
        ktau = float(rng.uniform(0.0, 3.0))
        L = float(rng.uniform(0.5, 1.5))
        dist = StiffnessDistribution.isotropic(dim, keta, ktau)
        closed, _ = isotropic_closed_forms(dim, L, keta, ktau)
        Cq = c_tensor(dist, L)
        Dq = d_tensor(dist, L)
        scale_c = float(np.max(np.abs(Cq)))
        scale_d = float(np.max(np.abs(Dq)))
        assert max_abs_diff(closed.C, Cq) < 1e-12 * max(1.0, scale_c)
        assert max_abs_diff(closed.D, Dq) < 1e-12 * max(1.0, scale_d)
        assert float(np.max(np.abs(m_tensor(dist, L)))) < 1e-12 * max(
            1.0, scale_c)


def test_quadrature_census_zeros():
    # components outside the listed groups vanish identically
    for dim in (2, 3):
        dist = StiffnessDistribution.isotropic(dim, 3.1, 1.7)
        Dq = d_tensor(dist, 1.0)
        listed = np.zeros(Dq.shape, dtype=bool)
        for *_, comps in d_groups(dim):
            for comp in comps:
                listed[parse_component(comp)] = True
        scale = max(1.0, float(np.max(np.abs(Dq))))
        assert float(np.max(np.abs(Dq[~listed]))) < 1e-12 * scale


def test_anisotropic_m_spot_value():
    dist = StiffnessDistribution.biased_c1(2, kappa=1.0, beta=1.0)
    M = m_tensor(dist, 1.0)
    assert M[0, 0, 0, 0, 0] == pytest.approx(5 * pi / 32, abs=1e-13)


def test_identified_tensors_have_declared_symmetries():
    for dim in (2, 3):
        dist = StiffnessDistribution.biased_c1(dim, kappa=1.1, beta=0.7,
                                               ktau=0.3)
        t = identify(dist, 1.0)
        assert check_symmetry(t.C, SYM_C, tol=1e-12)
        assert check_symmetry(t.M, SYM_M, tol=1e-12)
        assert check_symmetry(t.D, SYM_D, tol=1e-12)


def test_energy_route_matches_direct_integrands():
    for dim in (2, 3):
        dist = StiffnessDistribution.fabric_c1sq(dim, kappa=0.8, beta=1.4,
                                                 ktau=0.5)
        t = identify(dist, 1.1, "corrected")
        C2, M2, D2 = tensors_from_energy(dist, 1.1, "corrected")
        scale = max(1.0, float(np.max(np.abs(t.D))))
        assert max_abs_diff(t.C, C2) < 1e-12 * scale
        assert max_abs_diff(t.M, M2) < 1e-12 * scale
        assert max_abs_diff(t.D, D2) < 1e-12 * scale


def test_iso_c_params_and_probes():
    params = iso_c_params(1.0, 1680.0, 0.0)
    assert params == pytest.approx(
        {"c3": 1.0, "c4": 1.0, "c5": 1.0, "c6": 1.0, "c7": 1.0})
    params_t = iso_c_params(1.0, 0.0, 1680.0)
    assert params_t == pytest.approx(
        {"c3": -32.0, "c4": 24.0, "c5": 24.0, "c6": 80.0, "c7": -32.0})
    closed, _ = isotropic_closed_forms(3, 1.3, 2.2, 0.9)
    extracted = iso_params_from_d(closed.D)
    expected = iso_c_params(1.3, 2.2, 0.9)
    for key, val in expected.items():
        assert extracted[key] == pytest.approx(val, rel=1e-12, abs=1e-15)


def test_d_from_iso_params_roundtrip():
    params = iso_c_params(1.0, 4.4, 1.9)
    D = d_from_iso_params(**params)
    closed, _ = isotropic_closed_forms(3, 1.0, 4.4, 1.9)
    assert max_abs_diff(D, closed.D) < 1e-13


def test_iso_params_rejects_non_isotropic_tensor():
    dist = StiffnessDistribution.fabric_c1sq(3, kappa=1.0, beta=1.5,
                                             ktau=0.4)
    D = d_tensor(dist, 1.0)
    with pytest.raises(NotIsotropicError):
        iso_params_from_d(D)


def test_mindlin_map():
    assert MINDLIN_FACTORS == {"a1": ("c3", 2.0), "a2": ("c4", 2.0),
                               "a3": ("c5", 2.0), "a4": ("c6", 1.0),
                               "a5": ("c7", 2.0)}
    a = mindlin_from_c(iso_c_params(1.0, 1680.0, 0.0))
    assert a == pytest.approx(
        {"a1": 2.0, "a2": 2.0, "a3": 2.0, "a4": 1.0, "a5": 2.0})


@pytest.mark.parametrize("dim, keta, ktau, young, nu", [
    (2, 3.0, 0.0, 1.0, 1.0 / 3.0),
    (3, 6.0, 0.0, 1.0, 0.25),
])
def test_engineering_spot_values(dim, keta, ktau, young, nu):
    y, n = engineering_from_k(dim, 1.0, keta, ktau)
    assert y == pytest.approx(young, rel=1e-14)
    assert n == pytest.approx(nu, rel=1e-14)
    ke, kt = k_from_engineering(dim, 1.0, young, nu)
    assert ke == pytest.approx(keta, rel=1e-14)
    assert kt == pytest.approx(ktau, abs=1e-14)


def test_equal_stiffness_gives_zero_poisson_2d():
    # kbar_eta = 4 kbar_tau makes the cross group vanish
    y, n = engineering_from_k(2, 1.0, 4.0, 1.0)
    assert n == pytest.approx(0.0, abs=1e-15)
    assert y == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("dim", [2, 3])
def test_conversion_roundtrips(dim):
    rng = np.random.default_rng(60 + dim)
    for _ in range(25):
        keta = float(rng.uniform(0.3, 5.0))
        ktau = float(rng.uniform(0.0, 3.0))
        L = float(rng.uniform(0.5, 2.0))
        y, n = engineering_from_k(dim, L, keta, ktau)
        ke, kt = k_from_engineering(dim, L, y, n)
        assert ke == pytest.approx(keta, rel=1e-12)
        assert kt == pytest.approx(ktau, rel=1e-12, abs=1e-12)


def test_conversion_domain_errors():
    with pytest.raises(ValueError):
        k_from_engineering(2, 1.0, -1.0, 0.2)
    with pytest.raises(ValueError):
        k_from_engineering(2, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        k_from_engineering(3, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        k_from_engineering(3, 1.0, 1.0, -1.0)


def test_lame_matches_group_values():
    for dim in (2, 3):
        lam, mu = lame_from_k(dim, 1.2, 6.0, 1.4)
        values = c_group_values(dim, 1.2, 6.0, 1.4)
        assert lam == pytest.approx(values["cross"], rel=1e-14)
        assert mu == pytest.approx(values["shear"], rel=1e-14)


def test_isotropic_material_summary():
    mat = isotropic_material(3, 1.0, 1680.0, 0.0)
    assert mat.c_params == pytest.approx(
        {"c3": 1.0, "c4": 1.0, "c5": 1.0, "c6": 1.0, "c7": 1.0})
    assert mat.a_params == pytest.approx(
        {"a1": 2.0, "a2": 2.0, "a3": 2.0, "a4": 1.0, "a5": 2.0})
    assert mat.young == pytest.approx(280.0, rel=1e-14)
    assert mat.nu == pytest.approx(0.25, rel=1e-14)
    assert mat.d_groups["d1"] == pytest.approx(15.0, rel=1e-14)


def test_legacy_mode_shifts_second_gradient_only():
    for dim in (2, 3):
        dist = StiffnessDistribution.isotropic(dim, 2.0, 1.0)
        comp = compare_legacy(dist, 1.0)
        scale_c = max(1.0, float(np.max(np.abs(comp.corrected.C))))
        assert comp.c_max_abs_diff < 1e-12 * scale_c
        assert comp.m_max_abs_diff < 1e-14
        rows = d_group_rows(comp)
        assert max(r["rel_diff"] for r in rows) > 0.01
        # with no tangential stiffness the two modes coincide entirely
        comp0 = compare_legacy(StiffnessDistribution.isotropic(dim, 2.0, 0.0),
                               1.0)
        assert comp0.d_max_abs_diff < 1e-13


def test_legacy_identify_reproduces_same_c():
    dist = StiffnessDistribution.biased_c1(3, kappa=1.2, beta=0.5, ktau=0.8)
    t_corr = identify(dist, 1.0, "corrected")
    t_leg = identify(dist, 1.0, "legacy")
    scale = max(1.0, float(np.max(np.abs(t_corr.C))))
    assert max_abs_diff(t_corr.C, t_leg.C) < 1e-12 * scale
    assert max_abs_diff(t_corr.D, t_leg.D) > 1e-3


def test_identify_rejects_unknown_mode():
    dist = StiffnessDistribution.isotropic(2, 1.0, 0.0)
    with pytest.raises(ValueError):
        identify(dist, 1.0, "original")
    with pytest.raises(ValueError):
        identify(dist, -1.0)
