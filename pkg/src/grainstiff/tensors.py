"""Dense tensor helpers: validation, index symmetrization, symmetry checks.

All tensors are plain numpy arrays of shape (dim,) * rank with dim in {2, 3}
and rank in {2, ..., 6}. Components are addressed 0-based internally;
human-facing names (C_1212, D_112233) are 1-based digit strings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

RANK_MIN = 2
RANK_MAX = 6
SUPPORTED_DIMS = (2, 3)


def validate_tensor(t: np.ndarray, rank: int | None = None,
                    dim: int | None = None) -> np.ndarray:
    """Check that t is a dense (dim,)*rank array of finite reals and return it.

    Raises ValueError on wrong shape, unsupported dim/rank, or non-finite
    entries.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim < RANK_MIN or t.ndim > RANK_MAX:
        raise ValueError(f"rank {t.ndim} outside supported range "
                         f"[{RANK_MIN}, {RANK_MAX}]")
    d = t.shape[0]
    if d not in SUPPORTED_DIMS:
        raise ValueError(f"dimension {d} not in {SUPPORTED_DIMS}")
    if t.shape != (d,) * t.ndim:
        raise ValueError(f"shape {t.shape} is not cubical (d,)*rank")
    if rank is not None and t.ndim != rank:
        raise ValueError(f"expected rank {rank}, got {t.ndim}")
    if dim is not None and d != dim:
        raise ValueError(f"expected dimension {dim}, got {d}")
    if not np.isfinite(t).all():
        raise ValueError("tensor has non-finite entries")
    return t


def component_name(index: tuple[int, ...]) -> str:
    """0-based multi-index -> 1-based digit string, e.g. (0,0,1,1) -> '1122'."""
    return "".join(str(i + 1) for i in index)


def parse_component(name: str) -> tuple[int, ...]:
    """1-based digit string -> 0-based multi-index."""
    if not name or any(ch not in "123" for ch in name):
        raise ValueError(f"bad component name {name!r}")
    return tuple(int(ch) - 1 for ch in name)


@dataclass(frozen=True)
class SymmetrySpec:
    """Declares index symmetries of a tensor.

    groups: position tuples whose indices may be permuted freely,
            e.g. ((0, 1), (2, 3)) for minor symmetries of a rank-4 tensor.
    pair_swaps: pairs of equal-length position blocks that may be exchanged
            wholesale (major symmetry), e.g. (((0, 1, 2), (3, 4, 5)),).
    """
    groups: tuple[tuple[int, ...], ...] = ()
    pair_swaps: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    def validate(self, rank: int) -> None:
        seen: set[int] = set()
        for g in self.groups:
            if len(g) < 2:
                raise ValueError("symmetry group needs at least two positions")
            for p in g:
                if not 0 <= p < rank:
                    raise IndexError(f"position {p} out of range for rank {rank}")
                if p in seen:
                    raise ValueError(f"position {p} appears in two groups")
                seen.add(p)
        for left, right in self.pair_swaps:
            if len(left) != len(right):
                raise ValueError("pair swap blocks must have equal length")
            for p in (*left, *right):
                if not 0 <= p < rank:
                    raise IndexError(f"position {p} out of range for rank {rank}")
            if set(left) & set(right):
                raise ValueError("pair swap blocks overlap")

    def axis_permutations(self, rank: int):
        """All axis permutations generated by the declared symmetries."""
        self.validate(rank)
        identity = tuple(range(rank))
        perms = {identity}
        for g in self.groups:
            new = set()
            for base in perms:
                for sigma in permutations(g):
                    p = list(base)
                    for src, dst in zip(g, sigma):
                        p[src] = base[dst]
                    new.add(tuple(p))
            perms = new
        for left, right in self.pair_swaps:
            swap = list(range(rank))
            for a, b in zip(left, right):
                swap[a], swap[b] = swap[b], swap[a]
            perms |= {tuple(p[swap[k]] for k in range(rank)) for p in perms}
        perms.discard(identity)
        return sorted(perms)


@dataclass
class SymmetryReport:
    ok: bool
    max_violation: float
    worst_index: tuple[int, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def symmetrize_single(t: np.ndarray, i: int, j: int) -> np.ndarray:
    """Average t with itself after swapping index positions i and j."""
    t = validate_tensor(t)
    if not (0 <= i < t.ndim and 0 <= j < t.ndim):
        raise IndexError(f"positions ({i}, {j}) out of range for rank {t.ndim}")
    if i == j:
        raise ValueError("positions must differ")
    return 0.5 * (t + np.swapaxes(t, i, j))


def symmetrize_nested(t: np.ndarray, outer: tuple[int, int],
                      inner: tuple[int, int]) -> np.ndarray:
    """Quarter-average over the outer-pair swap, the inner-pair swap, and both.

    All four positions must be distinct.
    """
    t = validate_tensor(t)
    positions = (*outer, *inner)
    if len(set(positions)) != 4:
        raise ValueError("outer and inner positions must be four distinct indices")
    for p in positions:
        if not 0 <= p < t.ndim:
            raise IndexError(f"position {p} out of range for rank {t.ndim}")
    inner_sw = np.swapaxes(t, *inner)
    outer_sw = np.swapaxes(t, *outer)
    both = np.swapaxes(inner_sw, *outer)
    return 0.25 * (t + inner_sw + outer_sw + both)


def check_symmetry(t: np.ndarray, spec: SymmetrySpec,
                   tol: float = 1e-10) -> SymmetryReport:
    """Check invariance of t under every permutation the spec generates."""
    t = validate_tensor(t)
    worst = 0.0
    worst_index: tuple[int, ...] = ()
    for perm in spec.axis_permutations(t.ndim):
        diff = np.abs(t - np.transpose(t, perm))
        k = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[k] > worst:
            worst = float(diff[k])
            worst_index = tuple(int(v) for v in k)
    return SymmetryReport(ok=worst <= tol, max_violation=worst,
                          worst_index=worst_index)


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Largest absolute entrywise difference; shapes must match exactly."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))
