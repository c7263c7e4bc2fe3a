"""Self-verification suites: every library invariant as a runnable check.

Each check returns a CheckResult with the worst violation it observed and
the tolerance it enforced. run_all_checks drives the full battery from one
seed, which is what the verify service endpoint and CLI subcommand execute.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product
from math import pi

import numpy as np

from .distributions import StiffnessDistribution
from .energy import EnergyInput, energy_continuum, energy_micro
from .identification import (SYM_C, SYM_D, SYM_M, c_groups, c_tensor,
                             compare_legacy, d_group_rows, d_groups, d_tensor,
                             engineering_from_k, identify, iso_c_params,
                             iso_params_from_d, isotropic_closed_forms,
                             k_from_engineering, m_tensor, mindlin_from_c,
                             tensors_from_energy)
from .kinematics import (h_tensor_direct, h_tensor_from_strain,
                         kinematic_state, project_displacement,
                         random_placement, relative_displacement,
                         squared_projections_from_strain)
from .quadrature import (MOMENT_DEGREE_CAP, OrientationDomain, build_rule,
                         integrate, monomial_moment)
from .tensors import check_symmetry, max_abs_diff, parse_component

DEFAULT_SEED = 12345
DEFAULT_SAMPLES = 40


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_violation: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _result(name: str, worst: float, tol: float, detail: str = "") -> CheckResult:
    worst = float(worst)
    return CheckResult(name=name, passed=bool(worst <= tol),
                       max_violation=worst, tolerance=float(tol),
                       detail=detail)


def random_orientation(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_strain_pair(dim: int, rng: np.random.Generator,
                       scale: float = 0.4) -> tuple[np.ndarray, np.ndarray]:
    """Random symmetric G and first-two-symmetric gradG, unconstrained
    otherwise (need not derive from any placement)."""
    G = rng.uniform(-scale, scale, size=(dim, dim))
    G = 0.5 * (G + G.T)
    gradG = rng.uniform(-scale, scale, size=(dim, dim, dim))
    gradG = 0.5 * (gradG + gradG.transpose(1, 0, 2))
    return G, gradG


def check_quadrature_moments(tol: float = 1e-13) -> CheckResult:
    """Default rules reproduce every closed-form monomial moment."""
    worst = 0.0
    for dim in (2, 3):
        dom = OrientationDomain(dim)
        rule = build_rule(dom)
        for exps in product(range(MOMENT_DEGREE_CAP + 1), repeat=dim):
            if sum(exps) > MOMENT_DEGREE_CAP:
                continue
            exact = monomial_moment(dom, exps)

            def mono(c, exps=exps):
                out = 1.0
                for ci, e in zip(c, exps):
                    out *= ci ** e
                return out

            approx = integrate(rule, mono)
            worst = max(worst, abs(approx - exact) / dom.measure)
    return _result("quadrature_moments", worst, tol,
                   "all monomials of total degree <= 8, both dims")


def check_h_identity(rng: np.random.Generator, samples: int = DEFAULT_SAMPLES,
                     wild: bool = False) -> CheckResult:
    """h_tensor_direct == h_tensor_from_strain on random placements."""
    tol = 1e-9 if wild else 1e-12
    kwargs = (dict(linear_scale=2.0, higher_scale=1.0, identity_base=False)
              if wild else dict(linear_scale=0.3, higher_scale=0.3))
    worst = 0.0
    for dim in (2, 3):
        for _ in range(samples):
            chi = random_placement(dim, rng, **kwargs)
            x = rng.uniform(-1.0, 1.0, size=dim)
            state = kinematic_state(chi, x)
            h1 = h_tensor_direct(state)
            h2 = h_tensor_from_strain(state)
            worst = max(worst, max_abs_diff(h1, h2))
            # H must be symmetric in its last two indices on both routes
            worst = max(worst, max_abs_diff(h1, h1.transpose(0, 2, 1)))
    tier = "wild" if wild else "near-identity"
    return _result(f"h_identity_{tier.replace('-', '_')}", worst, tol,
                   f"{samples} placements per dim, {tier} tier")


def check_projection_identities(rng: np.random.Generator,
                                samples: int = DEFAULT_SAMPLES,
                                tol: float = 1e-12) -> CheckResult:
    """Decomposition, orthogonality, the Pythagorean split, and the
    closed-form squared projections, on random states and orientations."""
    worst = 0.0
    for dim in (2, 3):
        for _ in range(samples):
            chi = random_placement(dim, rng)
            state = kinematic_state(chi, rng.uniform(-1, 1, size=dim))
            c_hat = random_orientation(dim, rng)
            L = float(rng.uniform(0.5, 2.0))
            for mode in ("corrected", "legacy"):
                u = relative_displacement(state.G, state.gradG, c_hat, L, mode)
                u_eta, u_tau = project_displacement(u, c_hat)
                scale = max(1.0, float(np.max(np.abs(u))))
                worst = max(worst, float(np.max(np.abs(
                    u - (2.0 * u_eta * c_hat + u_tau)))) / scale)
                worst = max(worst, abs(float(np.dot(c_hat, u_tau))) / scale)
                worst = max(worst, abs(float(np.dot(u, u))
                                       - 4.0 * u_eta**2
                                       - float(np.dot(u_tau, u_tau))) / scale**2)
                if mode == "corrected":
                    sq_eta, sq_tau = squared_projections_from_strain(
                        state.G, state.gradG, c_hat, L)
                    worst = max(worst, abs(sq_eta - u_eta**2) / scale**2)
                    worst = max(worst,
                                abs(sq_tau - float(np.dot(u_tau, u_tau)))
                                / scale**2)
    return _result("projection_identities", worst, tol,
                   f"{samples} states per dim, both modes")


def check_closed_forms(rng: np.random.Generator, triples: int = 8,
                       rel_tol: float = 1e-10,
                       zero_tol: float = 1e-12) -> CheckResult:
    """Isotropic closed-form tables against quadrature: group values match
    relative, unlisted components vanish, M vanishes entrywise."""
    worst = 0.0
    for dim in (2, 3):
        for _ in range(triples):
            keta = float(rng.uniform(0.2, 5.0))
            ktau = float(rng.uniform(0.0, 3.0))
            L = float(rng.uniform(0.5, 1.5))
            dist = StiffnessDistribution.isotropic(dim, keta, ktau)
            closed, _ = isotropic_closed_forms(dim, L, keta, ktau)
            Cq = c_tensor(dist, L)
            Dq = d_tensor(dist, L)
            Mq = m_tensor(dist, L)
            listed_c = np.zeros_like(Cq, dtype=bool)
            for _, _, _, _, comps in c_groups(dim):
                for comp in comps:
                    idx = parse_component(comp)
                    listed_c[idx] = True
                    denom = max(abs(closed.C[idx]), abs(Cq[idx]), 1e-300)
                    worst = max(worst, abs(closed.C[idx] - Cq[idx]) / denom)
            listed_d = np.zeros_like(Dq, dtype=bool)
            for _, _, _, _, comps in d_groups(dim):
                for comp in comps:
                    idx = parse_component(comp)
                    listed_d[idx] = True
                    denom = max(abs(closed.D[idx]), abs(Dq[idx]), 1e-300)
                    worst = max(worst, abs(closed.D[idx] - Dq[idx]) / denom)
            scale_c = max(1.0, float(np.max(np.abs(Cq))))
            scale_d = max(1.0, float(np.max(np.abs(Dq))))
            # census: everything outside the listed groups is zero
            worst = max(worst, float(np.max(np.abs(Cq[~listed_c])))
                        / scale_c * (rel_tol / zero_tol))
            worst = max(worst, float(np.max(np.abs(Dq[~listed_d])))
                        / scale_d * (rel_tol / zero_tol))
            worst = max(worst, float(np.max(np.abs(Mq)))
                        / max(1.0, scale_c) * (rel_tol / zero_tol))
    return _result("isotropic_closed_forms", worst, rel_tol,
                   f"{triples} random (keta, ktau, L) triples per dim; "
                   "census and M = 0 folded in at 1e-12")


def check_anisotropic_m(tol: float = 1e-12) -> CheckResult:
    """The odd distribution drives M_11111 to 5 pi/32 (2D, kappa=beta=L=1);
    the even distribution leaves M identically zero."""
    biased = StiffnessDistribution.biased_c1(2, kappa=1.0, beta=1.0)
    M = m_tensor(biased, 1.0)
    worst = abs(M[0, 0, 0, 0, 0] - 5.0 * pi / 32.0)
    fabric = StiffnessDistribution.fabric_c1sq(2, kappa=1.0, beta=1.0,
                                               ktau=0.3)
    worst = max(worst, float(np.max(np.abs(m_tensor(fabric, 1.0)))))
    return _result("anisotropic_m", worst, tol,
                   "M_11111 = 5 pi/32 for biased-c1; M = 0 for fabric-c1sq")


def _energy_dists(dim: int) -> list[StiffnessDistribution]:
    return [
        StiffnessDistribution.isotropic(dim, 2.0, 0.7),
        StiffnessDistribution.biased_c1(dim, kappa=1.3, beta=0.6, ktau=0.4),
        StiffnessDistribution.fabric_c1sq(dim, kappa=0.9, beta=1.1, ktau=0.25),
    ]


def check_energy_equivalence(rng: np.random.Generator,
                             samples: int = DEFAULT_SAMPLES,
                             tol: float = 1e-10) -> CheckResult:
    """Micro quadrature energy equals the continuum tensor energy for random
    strain states, both modes, isotropic and built-in anisotropic inputs."""
    worst = 0.0
    for dim in (2, 3):
        for dist in _energy_dists(dim):
            tensors = {mode: identify(dist, 1.2, mode)
                       for mode in ("corrected", "legacy")}
            for _ in range(samples):
                G, gradG = random_strain_pair(dim, rng)
                inp = EnergyInput(G, gradG, 1.2, dist)
                for mode, t in tensors.items():
                    u_micro = energy_micro(inp, mode=mode)
                    u_cont = energy_continuum(t.C, t.M, t.D, G, gradG)
                    worst = max(worst, abs(u_micro - u_cont)
                                / max(1.0, abs(u_micro)))
    return _result("energy_equivalence", worst, tol,
                   f"{samples} states x 3 distributions x 2 dims x 2 modes")


def check_conversion_roundtrips(rng: np.random.Generator,
                                samples: int = DEFAULT_SAMPLES,
                                tol: float = 1e-12) -> CheckResult:
    """k <-> engineering roundtrips, c-parameter extraction, Mindlin map."""
    worst = 0.0
    for dim in (2, 3):
        for _ in range(samples):
            keta = float(rng.uniform(0.3, 5.0))
            ktau = float(rng.uniform(0.0, 3.0))
            L = float(rng.uniform(0.5, 2.0))
            young, nu = engineering_from_k(dim, L, keta, ktau)
            keta2, ktau2 = k_from_engineering(dim, L, young, nu)
            worst = max(worst, abs(keta2 - keta) / keta,
                        abs(ktau2 - ktau) / max(ktau, 1.0))
            young3, nu3 = engineering_from_k(dim, L, keta2, ktau2)
            worst = max(worst, abs(young3 - young) / young,
                        abs(nu3 - nu) / max(abs(nu), 1.0))
    for _ in range(samples):
        keta = float(rng.uniform(0.3, 5.0))
        ktau = float(rng.uniform(0.0, 3.0))
        L = float(rng.uniform(0.5, 2.0))
        closed, _ = isotropic_closed_forms(3, L, keta, ktau)
        extracted = iso_params_from_d(closed.D)
        formulas = iso_c_params(L, keta, ktau)
        scale = max(abs(v) for v in formulas.values())
        for key, val in formulas.items():
            worst = max(worst, abs(extracted[key] - val) / max(scale, 1e-300))
        a = mindlin_from_c(extracted)
        worst = max(worst, abs(a["a1"] - 2 * extracted["c3"]),
                    abs(a["a4"] - extracted["c6"]))
    return _result("conversion_roundtrips", worst, tol,
                   f"{samples} random parameter draws per conversion")


def check_legacy_difference(tol_c: float = 1e-12) -> CheckResult:
    """Legacy mode leaves C (and isotropic M) unchanged but must shift at
    least one d-group by more than 1 percent when kbar_tau > 0."""
    worst = 0.0
    detail = []
    for dim in (2, 3):
        dist = StiffnessDistribution.isotropic(dim, 2.0, 1.0)
        comp = compare_legacy(dist, 1.0)
        scale_c = max(1.0, float(np.max(np.abs(comp.corrected.C))))
        worst = max(worst, comp.c_max_abs_diff / scale_c)
        worst = max(worst, comp.m_max_abs_diff)
        best_group = max(d_group_rows(comp), key=lambda r: r["rel_diff"])
        detail.append(f"{dim}D max group rel diff "
                      f"{best_group['rel_diff']:.3f} ({best_group['name']})")
        if best_group["rel_diff"] <= 0.01:
            worst = max(worst, 1.0)
    return _result("legacy_difference", worst, tol_c, "; ".join(detail))


def check_tensor_symmetries(tol: float = 1e-12) -> CheckResult:
    """Identified tensors carry their declared symmetries for every built-in
    distribution shape, both modes; the quadrature and outer-product routes
    agree in corrected mode."""
    worst = 0.0
    for dim in (2, 3):
        for dist in _energy_dists(dim):
            for mode in ("corrected", "legacy"):
                t = identify(dist, 1.0, mode)
                scale = max(1.0, float(np.max(np.abs(t.C))),
                            float(np.max(np.abs(t.M))),
                            float(np.max(np.abs(t.D))))
                worst = max(worst,
                            check_symmetry(t.C, SYM_C, 0).max_violation / scale,
                            check_symmetry(t.M, SYM_M, 0).max_violation / scale,
                            check_symmetry(t.D, SYM_D, 0).max_violation / scale)
            t = identify(dist, 1.0, "corrected")
            C2, M2, D2 = tensors_from_energy(dist, 1.0, "corrected")
            scale = max(1.0, float(np.max(np.abs(t.D))))
            worst = max(worst, max_abs_diff(t.C, C2) / scale,
                        max_abs_diff(t.M, M2) / scale,
                        max_abs_diff(t.D, D2) / scale)
    return _result("tensor_symmetries", worst, tol,
                   "minor/major symmetries + route agreement, all built-ins")


def run_all_checks(seed: int = DEFAULT_SEED,
                   samples: int = DEFAULT_SAMPLES) -> list[CheckResult]:
    """The full battery with one seed; deterministic for fixed inputs."""
    rng = np.random.default_rng(seed)
    return [
        check_quadrature_moments(),
        check_h_identity(rng, samples),
        check_h_identity(rng, samples, wild=True),
        check_projection_identities(rng, samples),
        check_closed_forms(rng, max(2, samples // 5)),
        check_anisotropic_m(),
        check_energy_equivalence(rng, samples),
        check_conversion_roundtrips(rng, samples),
        check_legacy_difference(),
        check_tensor_symmetries(),
    ]
