"""Strain energy density: grain-pair quadrature vs continuum tensor form.

The two evaluations must agree for every admissible strain state; that
equivalence is the end-to-end validation of the identification chain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import StiffnessDistribution
from .kinematics import h_from_strain_gradient
from .quadrature import OrientationDomain, QuadratureRule, build_rule


@dataclass(frozen=True)
class EnergyInput:
    """A strain state (G, gradG) with pair length and distribution.

    G and gradG are free inputs: they need not derive from any single
    placement field, only carry the right symmetries.
    """
    G: np.ndarray
    gradG: np.ndarray
    L: float
    dist: StiffnessDistribution

    def __post_init__(self) -> None:
        G = np.asarray(self.G, dtype=float)
        gradG = np.asarray(self.gradG, dtype=float)
        d = self.dist.dim
        if G.shape != (d, d):
            raise ValueError(f"G must have shape ({d}, {d})")
        if gradG.shape != (d, d, d):
            raise ValueError(f"gradG must have shape ({d}, {d}, {d})")
        if not (np.isfinite(G).all() and np.isfinite(gradG).all()):
            raise ValueError("non-finite strain input")
        scale = max(1.0, float(np.max(np.abs(G))))
        if np.max(np.abs(G - G.T)) > 1e-12 * scale:
            raise ValueError("G must be symmetric")
        gscale = max(1.0, float(np.max(np.abs(gradG))))
        if np.max(np.abs(gradG - gradG.transpose(1, 0, 2))) > 1e-12 * gscale:
            raise ValueError("gradG must be symmetric in its first two indices")
        if not (float(self.L) > 0.0):
            raise ValueError("L must be positive")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "gradG", gradG)


def energy_micro(inp: EnergyInput, rule: QuadratureRule | None = None,
                 mode: str = "corrected") -> float:
    """Orientation integral of (1/2) k_eta u_eta^2 + (1/2) k_tau |u_tau|^2.

    The pair displacement at each node follows the selected kinematics mode.
    """
    if mode not in ("corrected", "legacy"):
        raise ValueError(f"unknown mode {mode!r}")
    if rule is None:
        rule = build_rule(OrientationDomain(inp.dist.dim))
    cn = rule.nodes
    ke, kt = inp.dist.sample(cn)
    second = h_from_strain_gradient(inp.gradG) if mode == "corrected" \
        else inp.gradG
    L = float(inp.L)
    # u[n, i] = 2 L G_ij c_j + (L^2/2) T_ibc c_c c_b at every node at once
    u = (2.0 * L * np.einsum("ij,nj->ni", inp.G, cn)
         + 0.5 * L**2 * np.einsum("ibc,nc,nb->ni", second, cn, cn))
    u_eta = 0.5 * np.einsum("ni,ni->n", u, cn)
    u_tau = u - 2.0 * u_eta[:, None] * cn
    u_tau_sq = np.einsum("ni,ni->n", u_tau, u_tau)
    return float(np.sum(rule.weights
                        * (0.5 * ke * u_eta**2 + 0.5 * kt * u_tau_sq)))


def energy_continuum(C: np.ndarray, M: np.ndarray, D: np.ndarray,
                     G: np.ndarray, gradG: np.ndarray) -> float:
    """1/2 C_abij G_ij G_ab + M_abijh G_ab G_ij,h
    + 1/2 D_abcijh G_ij,h G_ab,c."""
    return float(0.5 * np.einsum("abij,ij,ab", C, G, G)
                 + np.einsum("abijh,ab,ijh", M, G, gradG)
                 + 0.5 * np.einsum("abcijh,abc,ijh", D, gradG, gradG))
