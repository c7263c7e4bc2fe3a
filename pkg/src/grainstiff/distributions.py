"""Grain-pair stiffness distributions over orientation space.

A distribution assigns a normal density k_eta(c_hat) and a tangential
density k_tau(c_hat) to every orientation. Isotropic distributions carry
their integrated stiffnesses kbar so closed forms can be compared against
quadrature. Admissibility (nonnegative densities) is warned about, never
enforced: the library identifies, it does not legislate.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import OrientationDomain


class AdmissibilityWarning(UserWarning):
    """Physically questionable but numerically well-defined input."""


@dataclass(frozen=True)
class StiffnessDistribution:
    dim: int
    k_eta: Callable[[np.ndarray], float]
    k_tau: Callable[[np.ndarray], float]
    kbar_eta: float | None = None
    kbar_tau: float | None = None
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dimension {self.dim} not in (2, 3)")

    @property
    def is_isotropic(self) -> bool:
        return self.kbar_eta is not None

    def sample(self, nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Evaluate both densities at quadrature nodes (n, dim).

        Non-finite values raise; negative values trigger an
        AdmissibilityWarning (spot check, not a proof of admissibility).
        """
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.dim:
            raise ValueError(
                f"nodes must have shape (n, {self.dim}), got {nodes.shape}")
        ke = np.array([float(self.k_eta(c)) for c in nodes])
        kt = np.array([float(self.k_tau(c)) for c in nodes])
        if not (np.isfinite(ke).all() and np.isfinite(kt).all()):
            raise ValueError("stiffness density returned a non-finite value")
        if ke.min(initial=0.0) < -1e-12 or kt.min(initial=0.0) < -1e-12:
            warnings.warn(
                f"distribution {self.label!r} is negative at sampled "
                "orientations", AdmissibilityWarning, stacklevel=2)
        return ke, kt

    @classmethod
    def isotropic(cls, dim: int, kbar_eta: float,
                  kbar_tau: float) -> "StiffnessDistribution":
        """Uniform densities integrating to kbar_eta, kbar_tau."""
        if kbar_eta < 0.0 or kbar_tau < 0.0:
            warnings.warn("negative integrated stiffness",
                          AdmissibilityWarning, stacklevel=2)
        measure = OrientationDomain(dim).measure
        ke = float(kbar_eta) / measure
        kt = float(kbar_tau) / measure
        return cls(dim, lambda c: ke, lambda c: kt,
                   kbar_eta=float(kbar_eta), kbar_tau=float(kbar_tau),
                   label="isotropic",
                   params={"kbar_eta": float(kbar_eta),
                           "kbar_tau": float(kbar_tau)})

    @classmethod
    def biased_c1(cls, dim: int, kappa: float = 1.0, beta: float = 1.0,
                  ktau: float = 0.0) -> "StiffnessDistribution":
        """k_eta(c) = kappa (1 + beta c_1), constant k_tau density."""
        kappa = float(kappa)
        beta = float(beta)
        ktau = float(ktau)
        return cls(dim,
                   lambda c: kappa * (1.0 + beta * c[0]),
                   lambda c: ktau,
                   label="biased-c1",
                   params={"kappa": kappa, "beta": beta, "ktau": ktau})

    @classmethod
    def fabric_c1sq(cls, dim: int, kappa: float = 1.0, beta: float = 1.0,
                    ktau: float = 0.0) -> "StiffnessDistribution":
        """k_eta(c) = kappa (1 + beta c_1^2), constant k_tau density."""
        kappa = float(kappa)
        beta = float(beta)
        ktau = float(ktau)
        return cls(dim,
                   lambda c: kappa * (1.0 + beta * c[0] ** 2),
                   lambda c: ktau,
                   label="fabric-c1sq",
                   params={"kappa": kappa, "beta": beta, "ktau": ktau})


BUILTIN_DISTRIBUTIONS = {
    "biased-c1": StiffnessDistribution.biased_c1,
    "fabric-c1sq": StiffnessDistribution.fabric_c1sq,
}


def builtin_distribution(name: str, dim: int,
                         **params: float) -> StiffnessDistribution:
    """Look up a built-in anisotropic distribution by CLI name."""
    try:
        factory = BUILTIN_DISTRIBUTIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown distribution {name!r}; known: "
            f"{sorted(BUILTIN_DISTRIBUTIONS)}") from None
    allowed = {"kappa", "beta", "ktau"}
    bad = set(params) - allowed
    if bad:
        raise ValueError(f"unknown distribution parameters {sorted(bad)}; "
                         f"allowed: {sorted(allowed)}")
    return factory(dim, **params)
