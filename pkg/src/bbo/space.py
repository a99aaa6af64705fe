"""Axis-aligned hypercube search spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DimensionMismatch(ValueError):
    pass


class OutOfBounds(ValueError):
    pass


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch(f"point must be one-dimensional, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"point has non-finite coordinates: {p}")
    return p


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Hypercube ``[lower[0], upper[0]] x ... x [lower[d-1], upper[d-1]]``.

    Bounds are stored as read-only float arrays; instances are immutable.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float).reshape(-1)
        hi = np.array(self.upper, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise DimensionMismatch("lower and upper bounds differ in length")
        if lo.size < 1:
            raise ValueError("search space needs at least one dimension")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bounds must be finite")
        if not np.all(lo < hi):
            raise ValueError(f"need lower < upper on every axis, got {lo} / {hi}")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, low: float, high: float, dim: int) -> "SearchSpace":
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def volume(self) -> float:
        return float(np.prod(self.widths))

    def __eq__(self, other):
        if not isinstance(other, SearchSpace):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))

    def __repr__(self):
        axes = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(self.lower, self.upper))
        return f"SearchSpace({axes})"

    def bounds(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in zip(self.lower, self.upper)]

    def center(self) -> np.ndarray:
        return center(self)

    def contains(self, x) -> bool:
        return contains(self, x)


def center(space: SearchSpace) -> np.ndarray:
    return (space.lower + space.upper) / 2.0


def split_dimension(space: SearchSpace, dim: int, K: int) -> list[SearchSpace]:
    """Cut ``space`` into ``K`` equal slabs along axis ``dim``.

    Slabs are ordered by ascending lower bound. Cut positions are computed
    as ``lower + i * width / K`` rather than by accumulation, so adjacent
    slabs share bit-identical faces.
    """
    if not 0 <= dim < space.dim:
        raise IndexError(f"axis {dim} out of range for a {space.dim}-d space")
    if K < 1:
        raise ValueError(f"division number must be positive, got {K}")
    if K == 1:
        return [space]
    lo = space.lower[dim]
    width = space.upper[dim] - lo
    cuts = [lo + i * width / K for i in range(K)] + [space.upper[dim]]
    children = []
    for i in range(K):
        new_lo = space.lower.copy()
        new_hi = space.upper.copy()
        new_lo[dim] = cuts[i]
        new_hi[dim] = cuts[i + 1]
        children.append(SearchSpace(new_lo, new_hi))
    return children


def contains(space: SearchSpace, x) -> bool:
    p = np.asarray(x, dtype=float)
    if p.shape != (space.dim,):
        raise DimensionMismatch(f"point of shape {p.shape} in a {space.dim}-d space")
    return bool(np.all(space.lower <= p) and np.all(p <= space.upper))


def to_unit(space: SearchSpace, x) -> np.ndarray:
    """Map points of ``space`` (shape ``(d,)`` or ``(n, d)``) onto the unit cube."""
    p = np.asarray(x, dtype=float)
    if p.shape[-1] != space.dim:
        raise DimensionMismatch(f"points of shape {p.shape} in a {space.dim}-d space")
    if np.any(p < space.lower) or np.any(p > space.upper):
        raise OutOfBounds(f"point outside {space!r}")
    return (p - space.lower) / space.widths


def from_unit(space: SearchSpace, u) -> np.ndarray:
    p = np.asarray(u, dtype=float)
    if p.shape[-1] != space.dim:
        raise DimensionMismatch(f"points of shape {p.shape} in a {space.dim}-d space")
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise OutOfBounds("unit coordinates outside [0, 1]")
    # clip guards the upper face against round-off in lower + width * 1.0
    return np.clip(space.lower + p * space.widths, space.lower, space.upper)
