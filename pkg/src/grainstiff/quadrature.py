"""Orientation-space integration: exact monomial moments and product rules.

The orientation domain is the unit circle S^1 (dim 2) or the unit sphere S^2
(dim 3). Rules integrate polynomials in the orientation components exactly up
to a requested total degree; moments of unit-vector monomials have closed
double-factorial forms used as the independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi
from typing import Callable

import numpy as np

MOMENT_DEGREE_CAP = 8
DEFAULT_TARGET_DEGREE = 10


@dataclass(frozen=True)
class OrientationDomain:
    """Unit circle (dim 2) or unit sphere (dim 3)."""
    dim: int

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dimension {self.dim} not in (2, 3)")

    @property
    def measure(self) -> float:
        """Total surface measure: 2 pi for S^1, 4 pi for S^2."""
        return 2.0 * pi if self.dim == 2 else 4.0 * pi


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes on the unit circle/sphere with positive weights.

    Weights sum to the domain measure; polynomials of total degree up to
    exact_degree integrate exactly (to rounding).
    """
    domain: OrientationDomain
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.domain.dim:
            raise ValueError("nodes must have shape (n, dim)")
        if weights.shape != (nodes.shape[0],):
            raise ValueError("weights must have shape (n,)")
        norms = np.linalg.norm(nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-14:
            raise ValueError("quadrature nodes must lie on the unit sphere")
        if abs(float(weights.sum()) - self.domain.measure) > 1e-12:
            raise ValueError("weights must sum to the domain measure")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def monomial_moment(domain: OrientationDomain,
                    exponents: tuple[int, ...]) -> float:
    """Exact integral of prod_i c_i**e_i over the domain.

    Zero when any exponent is odd; otherwise the double-factorial closed form
    measure * prod (e_i - 1)!! / (sum e + dim - 2)!!.
    Total degree above MOMENT_DEGREE_CAP is rejected.
    """
    if len(exponents) != domain.dim:
        raise ValueError(f"need {domain.dim} exponents, got {len(exponents)}")
    if any(e < 0 or int(e) != e for e in exponents):
        raise ValueError("exponents must be nonnegative integers")
    total = int(sum(exponents))
    if total > MOMENT_DEGREE_CAP:
        raise ValueError(f"total degree {total} exceeds supported cap "
                         f"{MOMENT_DEGREE_CAP}")
    if any(e % 2 for e in exponents):
        return 0.0
    num = 1
    for e in exponents:
        num *= _double_factorial(int(e) - 1)
    den = _double_factorial(total + (1 if domain.dim == 3 else 0))
    return domain.measure * num / den


def build_rule(domain: OrientationDomain,
               target_degree: int = DEFAULT_TARGET_DEGREE) -> QuadratureRule:
    """Rule exact for polynomials of total degree <= target_degree.

    S^1: equally spaced angles (trapezoid on the circle), n = target_degree+1.
    S^2: Gauss-Legendre in the polar cosine times equally spaced azimuths.
    """
    if target_degree < 0:
        raise ValueError("target_degree must be nonnegative")
    if domain.dim == 2:
        n = target_degree + 1
        theta = 2.0 * pi * np.arange(n) / n
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(n, 2.0 * pi / n)
        return QuadratureRule(domain, nodes, weights, target_degree)
    n_polar = (target_degree + 2) // 2
    n_azim = target_degree + 1
    z, wz = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * pi * np.arange(n_azim) / n_azim
    r = np.sqrt(1.0 - z**2)
    nodes = np.empty((n_polar * n_azim, 3))
    weights = np.empty(n_polar * n_azim)
    k = 0
    for iz in range(n_polar):
        for ip in range(n_azim):
            nodes[k] = (r[iz] * np.cos(phi[ip]), r[iz] * np.sin(phi[ip]), z[iz])
            weights[k] = wz[iz] * 2.0 * pi / n_azim
            k += 1
    return QuadratureRule(domain, nodes, weights, target_degree)


def integrate(rule: QuadratureRule,
              f: Callable[[np.ndarray], float]) -> float:
    """Weighted sum of f over the rule nodes.

    Raises ValueError naming the node index if f returns a non-finite value.
    """
    total = 0.0
    for k in range(rule.nodes.shape[0]):
        v = float(f(rule.nodes[k]))
        if not np.isfinite(v):
            raise ValueError(f"integrand returned non-finite value at node {k}")
        total += rule.weights[k] * v
    return total
