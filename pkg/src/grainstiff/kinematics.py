"""Kinematics of grain-pair deformation.

A placement field maps reference coordinates to current coordinates; its
first gradient F and second gradient drive the Green-Saint-Venant strain
G = (F^T F - I)/2 and the strain gradient. The relative displacement between
a grain pair separated by L c_hat decomposes into a normal part along c_hat
and a tangential remainder; both corrected and legacy second-gradient terms
are provided, selected by a mode switch.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

MAX_PLACEMENT_DEGREE = 3
UNIT_TOL = 1e-12

MODES = ("corrected", "legacy")

Monomial = tuple[int, ...]
Polynomial = dict[Monomial, float]


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _check_unit(c_hat: np.ndarray, dim: int) -> np.ndarray:
    c_hat = np.asarray(c_hat, dtype=float)
    if c_hat.shape != (dim,):
        raise ValueError(f"orientation must have shape ({dim},)")
    norm = float(np.linalg.norm(c_hat))
    if abs(norm - 1.0) > UNIT_TOL:
        raise ValueError(f"orientation norm {norm} deviates from 1 beyond "
                         f"{UNIT_TOL}; renormalize explicitly if intended")
    return c_hat


def _check_length(L: float) -> float:
    L = float(L)
    if not (L > 0.0) or not np.isfinite(L):
        raise ValueError(f"grain-pair distance L must be positive, got {L}")
    return L


def _diff_poly(poly: Polynomial, axis: int) -> Polynomial:
    out: Polynomial = {}
    for exps, coef in poly.items():
        e = exps[axis]
        if e > 0:
            key = exps[:axis] + (e - 1,) + exps[axis + 1:]
            out[key] = out.get(key, 0.0) + coef * e
    return out


def _eval_poly(poly: Polynomial, x: np.ndarray) -> float:
    total = 0.0
    for exps, coef in poly.items():
        term = coef
        for xi, e in zip(x, exps):
            if e:
                term *= xi ** e
        total += term
    return total


@dataclass(frozen=True)
class PlacementField:
    """Polynomial placement chi: R^dim -> R^dim, total degree <= 3.

    components[a] maps exponent tuples to coefficients for the a-th output.
    Differentiation is exact (polynomial calculus, no finite differences).
    """
    dim: int
    components: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dimension {self.dim} not in (2, 3)")
        if len(self.components) != self.dim:
            raise ValueError("need one polynomial per spatial component")
        for poly in self.components:
            for exps, coef in poly.items():
                if len(exps) != self.dim:
                    raise ValueError(f"exponent tuple {exps} has wrong length")
                if any(e < 0 or int(e) != e for e in exps):
                    raise ValueError(f"bad exponents {exps}")
                if sum(exps) > MAX_PLACEMENT_DEGREE:
                    raise ValueError(
                        f"monomial {exps} exceeds total degree "
                        f"{MAX_PLACEMENT_DEGREE}")
                if not np.isfinite(coef):
                    raise ValueError("non-finite coefficient")

    @classmethod
    def identity(cls, dim: int) -> "PlacementField":
        comps = []
        for a in range(dim):
            exps = tuple(1 if b == a else 0 for b in range(dim))
            comps.append({exps: 1.0})
        return cls(dim, tuple(comps))

    @classmethod
    def affine(cls, matrix: np.ndarray,
               offset: np.ndarray | None = None) -> "PlacementField":
        matrix = np.asarray(matrix, dtype=float)
        dim = matrix.shape[0]
        if matrix.shape != (dim, dim):
            raise ValueError("matrix must be square")
        comps = []
        for a in range(dim):
            poly: Polynomial = {}
            for b in range(dim):
                if matrix[a, b] != 0.0:
                    exps = tuple(1 if k == b else 0 for k in range(dim))
                    poly[exps] = float(matrix[a, b])
            if offset is not None and offset[a] != 0.0:
                poly[(0,) * dim] = float(offset[a])
            comps.append(poly)
        return cls(dim, tuple(comps))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([_eval_poly(p, x) for p in self.components])

    def deformation_gradient(self, x: np.ndarray) -> np.ndarray:
        """F[a, b] = d chi_a / d x_b, exact."""
        x = np.asarray(x, dtype=float)
        F = np.empty((self.dim, self.dim))
        for a, poly in enumerate(self.components):
            for b in range(self.dim):
                F[a, b] = _eval_poly(_diff_poly(poly, b), x)
        return F

    def second_gradient(self, x: np.ndarray) -> np.ndarray:
        """gradF[a, b, c] = d^2 chi_a / d x_b d x_c, exact."""
        x = np.asarray(x, dtype=float)
        out = np.empty((self.dim, self.dim, self.dim))
        for a, poly in enumerate(self.components):
            for b in range(self.dim):
                db = _diff_poly(poly, b)
                for c in range(self.dim):
                    out[a, b, c] = _eval_poly(_diff_poly(db, c), x)
        return out


@dataclass(frozen=True)
class KinematicState:
    """Deformation measures at one material point.

    F is the placement gradient, gradF its gradient (symmetric in the last
    two indices), G the Green-Saint-Venant strain (symmetric), and gradG the
    strain gradient G_ij,h (symmetric in the first two indices).
    """
    dim: int
    F: np.ndarray
    gradF: np.ndarray
    G: np.ndarray
    gradG: np.ndarray

    def __post_init__(self) -> None:
        d = self.dim
        for name, arr, shape in (("F", self.F, (d, d)),
                                 ("gradF", self.gradF, (d, d, d)),
                                 ("G", self.G, (d, d)),
                                 ("gradG", self.gradG, (d, d, d))):
            arr = np.asarray(arr, dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}")
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} has non-finite entries")
            object.__setattr__(self, name, arr)
        scale = max(1.0, float(np.max(np.abs(self.G))))
        if np.max(np.abs(self.G - self.G.T)) > 1e-12 * scale:
            raise ValueError("G must be symmetric")
        gscale = max(1.0, float(np.max(np.abs(self.gradG))))
        if np.max(np.abs(self.gradG - self.gradG.transpose(1, 0, 2))) \
                > 1e-12 * gscale:
            raise ValueError("gradG must be symmetric in its first two indices")


def kinematic_state(chi: PlacementField, x: np.ndarray) -> KinematicState:
    """Evaluate F, gradF, G and gradG of a placement field at x."""
    F = chi.deformation_gradient(x)
    gradF = chi.second_gradient(x)
    G = 0.5 * (F.T @ F - np.eye(chi.dim))
    gradG = 0.5 * (np.einsum("kih,kj->ijh", gradF, F)
                   + np.einsum("ki,kjh->ijh", F, gradF))
    return KinematicState(chi.dim, F, gradF, G, gradG)


def h_tensor_direct(state: KinematicState) -> np.ndarray:
    """H[i, b, c] = sum_a F[a, i] gradF[a, b, c]."""
    return np.einsum("ai,abc->ibc", state.F, state.gradF)


def h_from_strain_gradient(gradG: np.ndarray) -> np.ndarray:
    """H[i, b, c] = gradG[i, b, c] + gradG[i, c, b] - gradG[b, c, i].

    The Christoffel-style rearrangement; requires only the strain gradient,
    which must be symmetric in its first two indices.
    """
    gradG = np.asarray(gradG, dtype=float)
    return (gradG + gradG.transpose(0, 2, 1) - np.transpose(gradG, (2, 0, 1)))


def h_tensor_from_strain(state: KinematicState) -> np.ndarray:
    return h_from_strain_gradient(state.gradG)


def relative_displacement(G: np.ndarray, gradG: np.ndarray,
                          c_hat: np.ndarray, L: float,
                          mode: str = "corrected") -> np.ndarray:
    """Objective relative displacement of a grain pair at separation L c_hat.

    u_i = 2 L G_ij c_j + (L^2/2) T_ibc c_c c_b, where T is the corrected
    H tensor (mode "corrected") or the bare strain gradient (mode "legacy").
    """
    _check_mode(mode)
    G = np.asarray(G, dtype=float)
    dim = G.shape[0]
    c_hat = _check_unit(c_hat, dim)
    L = _check_length(L)
    second = h_from_strain_gradient(gradG) if mode == "corrected" \
        else np.asarray(gradG, dtype=float)
    return (2.0 * L * G @ c_hat
            + 0.5 * L**2 * np.einsum("ibc,c,b->i", second, c_hat, c_hat))


def objective_relative_displacement(state: KinematicState, c_hat: np.ndarray,
                                    L: float,
                                    mode: str = "corrected") -> np.ndarray:
    return relative_displacement(state.G, state.gradG, c_hat, L, mode)


def project_displacement(u_np: np.ndarray,
                         c_hat: np.ndarray) -> tuple[float, np.ndarray]:
    """Split u into the normal measure u_eta = (1/2) c.u and the tangential
    remainder u_tau = u - 2 u_eta c, so that u = 2 u_eta c + u_tau."""
    u_np = np.asarray(u_np, dtype=float)
    c_hat = _check_unit(c_hat, u_np.shape[0])
    u_eta = 0.5 * float(np.dot(c_hat, u_np))
    u_tau = u_np - 2.0 * u_eta * c_hat
    return u_eta, u_tau


@dataclass(frozen=True)
class PairDisplacement:
    """Relative displacement of one grain pair and its projections."""
    c_hat: np.ndarray
    L: float
    u_np: np.ndarray
    u_eta: float
    u_tau: np.ndarray

    @classmethod
    def from_state(cls, state: KinematicState, c_hat: np.ndarray, L: float,
                   mode: str = "corrected") -> "PairDisplacement":
        u = objective_relative_displacement(state, c_hat, L, mode)
        u_eta, u_tau = project_displacement(u, c_hat)
        return cls(np.asarray(c_hat, dtype=float), float(L), u, u_eta, u_tau)


def squared_projections_from_strain(G: np.ndarray, gradG: np.ndarray,
                                    c_hat: np.ndarray,
                                    L: float) -> tuple[float, float]:
    """Closed-form expansions of u_eta^2 and |u_tau|^2 (corrected mode).

    Evaluated term by term from the expanded polynomial forms; agreement with
    squaring the projected displacement directly is a library invariant.
    """
    G = np.asarray(G, dtype=float)
    gradG = np.asarray(gradG, dtype=float)
    dim = G.shape[0]
    c = _check_unit(c_hat, dim)
    L = _check_length(L)
    eye = np.eye(dim)
    es = np.einsum

    u_eta_sq = (L**2 * es("ij,ab,i,j,a,b", G, G, c, c, c, c)
                + 0.5 * L**3 * es("ij,abc,i,j,a,b,c", G, gradG, c, c, c, c, c)
                + L**4 / 16.0
                * es("ijh,abc,i,j,h,a,b,c", gradG, gradG, c, c, c, c, c, c))

    t2 = L**2 * (es("ab,ij,ia,b,j", G, G, eye, c, c)
                 + es("ab,ij,ja,b,i", G, G, eye, c, c)
                 + es("ab,ij,ib,a,j", G, G, eye, c, c)
                 + es("ab,ij,jb,a,i", G, G, eye, c, c)
                 - 4.0 * es("ab,ij,i,j,a,b", G, G, c, c, c, c))
    t3 = 0.5 * L**3 * (
        2.0 * es("ab,ijh,ia,b,h,j", G, gradG, eye, c, c, c)
        + 2.0 * es("ab,ijh,ja,b,h,i", G, gradG, eye, c, c, c)
        - 2.0 * es("ab,ijh,ha,b,j,i", G, gradG, eye, c, c, c)
        + 2.0 * es("ab,ijh,ib,a,h,j", G, gradG, eye, c, c, c)
        + 2.0 * es("ab,ijh,jb,a,h,i", G, gradG, eye, c, c, c)
        - 2.0 * es("ab,ijh,hb,a,j,i", G, gradG, eye, c, c, c)
        - 4.0 * es("ab,ijh,a,b,i,j,h", G, gradG, c, c, c, c, c))
    t4 = 0.25 * L**4 * (
        es("abc,ijh,ia,c,b,h,j", gradG, gradG, eye, c, c, c, c)
        + es("abc,ijh,ja,c,b,h,i", gradG, gradG, eye, c, c, c, c)
        - es("abc,ijh,ha,c,b,j,i", gradG, gradG, eye, c, c, c, c)
        + es("abc,ijh,ib,c,a,h,j", gradG, gradG, eye, c, c, c, c)
        + es("abc,ijh,jb,c,a,h,i", gradG, gradG, eye, c, c, c, c)
        - es("abc,ijh,hb,c,a,j,i", gradG, gradG, eye, c, c, c, c)
        - es("abc,ijh,ic,b,a,h,j", gradG, gradG, eye, c, c, c, c)
        - es("abc,ijh,jc,b,a,h,i", gradG, gradG, eye, c, c, c, c)
        + es("abc,ijh,hc,b,a,j,i", gradG, gradG, eye, c, c, c, c)
        - es("abc,ijh,a,b,c,i,j,h", gradG, gradG, c, c, c, c, c, c))
    return float(u_eta_sq), float(t2 + t3 + t4)


def squared_projections_closed_form(state: KinematicState, c_hat: np.ndarray,
                                    L: float) -> tuple[float, float]:
    return squared_projections_from_strain(state.G, state.gradG, c_hat, L)


def random_placement(dim: int, rng: np.random.Generator,
                     linear_scale: float = 0.3,
                     higher_scale: float = 0.3,
                     identity_base: bool = True) -> PlacementField:
    """Random polynomial placement of full degree 3.

    With identity_base, linear coefficients sit within linear_scale of the
    identity map (near-identity tier); without it they are drawn directly in
    [-linear_scale, linear_scale] (wild tier). Quadratic and cubic
    coefficients are always drawn in [-higher_scale, higher_scale].
    """
    comps = []
    exps_by_degree = {
        deg: [e for e in product(range(MAX_PLACEMENT_DEGREE + 1), repeat=dim)
              if sum(e) == deg]
        for deg in (1, 2, 3)
    }
    for a in range(dim):
        poly: Polynomial = {}
        for e in exps_by_degree[1]:
            base = 1.0 if identity_base and e.index(1) == a else 0.0
            poly[e] = base + float(rng.uniform(-linear_scale, linear_scale))
        for deg in (2, 3):
            for e in exps_by_degree[deg]:
                poly[e] = float(rng.uniform(-higher_scale, higher_scale))
        comps.append(poly)
    return PlacementField(dim, tuple(comps))
