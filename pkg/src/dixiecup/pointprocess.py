"""Finite point patterns and the transformations applied to them.

Houses the affine centering/scaling of arrival times, interval counting,
last-but-j order statistics, the log map between the exponential-intensity
process and the homogeneous one, rare-type counting paths, and direct
simulation of the limiting Poisson pattern.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator

__all__ = [
    "Normalization",
    "PointPattern",
    "RarePath",
    "normalize",
    "h_transform",
    "h_inverse_transform",
    "map_h",
    "map_h_inverse",
    "rare_path",
    "sample_limit_process",
]


@dataclass(frozen=True)
class Normalization:
    """The strictly increasing affine map x -> x/n - ln n - (r-1) ln ln n."""

    n: int
    r: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n={self.n}")
        if self.r < 1:
            raise ValueError(f"need r >= 1, got r={self.r}")

    @property
    def shift(self) -> float:
        return math.log(self.n) + (self.r - 1) * math.log(math.log(self.n))

    def apply(self, x):
        return np.asarray(x, dtype=np.float64) / self.n - self.shift

    def invert(self, y):
        return (np.asarray(y, dtype=np.float64) + self.shift) * self.n


@dataclass(frozen=True)
class PointPattern:
    """A finite multiset of real points, stored sorted ascending."""

    points: np.ndarray = field(default_factory=lambda: np.empty(0))

    @classmethod
    def from_values(cls, values) -> "PointPattern":
        pts = np.sort(np.asarray(values, dtype=np.float64))
        return cls(pts)

    @property
    def mass(self) -> int:
        return len(self.points)

    def count(self, a: float, b: float) -> int:
        """Number of points in the closed interval [a, b]; b may be +inf."""
        if a > b:
            raise ValueError(f"need a <= b, got [{a}, {b}]")
        lo = np.searchsorted(self.points, a, side="left")
        hi = np.searchsorted(self.points, b, side="right")
        return int(hi - lo)

    def count_from(self, x: float) -> int:
        """Number of points in [x, +inf)."""
        return self.mass - int(np.searchsorted(self.points, x, side="left"))

    def count_open_closed(self, a: float, b: float) -> int:
        """Number of points in the half-open interval (a, b], for additivity checks."""
        if a > b:
            raise ValueError(f"need a <= b, got ({a}, {b}]")
        lo = np.searchsorted(self.points, a, side="right")
        hi = np.searchsorted(self.points, b, side="right")
        return int(hi - lo)

    def last_but(self, m: int) -> np.ndarray:
        """The m+1 largest points, largest first."""
        if m < 0:
            raise ValueError(f"need m >= 0, got m={m}")
        if self.mass < m + 1:
            raise ValueError(f"pattern of mass {self.mass} has no last-but-{m} point")
        return self.points[-1 : -(m + 2) : -1].copy()


def normalize(raw_times, norm: Normalization) -> PointPattern:
    """Center and scale raw arrival times into a point pattern."""
    return PointPattern.from_values(norm.apply(raw_times))


def h_transform(x, r: int):
    """-ln (r-1)! - ln x, mapping (0, inf) onto the real line."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise ValueError("h is defined for strictly positive points only")
    return -math.lgamma(r) - np.log(x)


def h_inverse_transform(x, r: int):
    """exp(-x) / (r-1)!, the inverse of :func:`h_transform`."""
    return np.exp(-np.asarray(x, dtype=np.float64) - math.lgamma(r))


def map_h(pattern: PointPattern, r: int) -> PointPattern:
    return PointPattern.from_values(h_transform(pattern.points, r))


def map_h_inverse(pattern: PointPattern, r: int) -> PointPattern:
    return PointPattern.from_values(h_inverse_transform(pattern.points, r))


@dataclass(frozen=True)
class RarePath:
    """Nonincreasing step path x -> number of pattern points in [x, +inf)."""

    thresholds: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        if len(self.thresholds) != len(self.counts):
            raise ValueError("thresholds and counts must have equal length")
        if np.any(np.diff(self.counts) > 0):
            raise ValueError("counts must be nonincreasing in the threshold")


def rare_path(pattern: PointPattern, thresholds) -> RarePath:
    """Evaluate the rare-type counting path at sorted thresholds."""
    thresholds = np.asarray(thresholds, dtype=np.float64)
    if np.any(np.diff(thresholds) < 0):
        raise ValueError("thresholds must be sorted ascending")
    counts = np.array([pattern.count_from(x) for x in thresholds], dtype=np.int64)
    return RarePath(thresholds, counts)


def sample_limit_process(r: int, a: float, rng: Generator) -> PointPattern:
    """One realization of the limiting Poisson pattern restricted to [a, +inf).

    Simulates a homogeneous unit-rate pattern on (0, exp(-a)/(r-1)!] and pushes
    it through the log map, so the point count is Poisson with that mean and
    the intensity on [a, inf) is exp(-x)/(r-1)! dx.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got r={r}")
    if not math.isfinite(a):
        raise ValueError("left endpoint must be finite")
    upper = math.exp(-a) / math.factorial(r - 1)
    total = rng.poisson(upper)
    if total == 0:
        return PointPattern()
    # (0, upper] so the log map is always defined
    uniform_pts = upper * (1.0 - rng.random(total))
    return PointPattern.from_values(h_transform(uniform_pts, r))
