"""Discrete coupon scheme: arrival-time matrices and collection times."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from .samplers import SeedSpec

__all__ = [
    "CollectorTrace",
    "run_discrete",
    "trace_from_sequence",
    "collection_time",
    "partial_collection_time",
]


@dataclass(frozen=True)
class CollectorTrace:
    """Arrival-time record of one discrete collection run.

    ``arrivals[i, k]`` is the 1-based draw number at which type ``i`` (0-based
    here) appeared for the (k+1)-th time.  Rows are strictly increasing, all
    entries are pairwise distinct (one coupon per time slot), and the matrix
    maximum equals the number of draws the collection needed.
    """

    n: int
    r_max: int
    arrivals: np.ndarray

    def __post_init__(self) -> None:
        if self.arrivals.shape != (self.n, self.r_max):
            raise ValueError("arrival matrix shape does not match (n, r_max)")

    @property
    def total_draws(self) -> int:
        return int(self.arrivals[:, -1].max())

    def arrival_column(self, r: int) -> np.ndarray:
        """Arrival times of the r-th coupon of every type."""
        if not 1 <= r <= self.r_max:
            raise ValueError(f"multiplicity r={r} outside 1..{self.r_max}")
        return self.arrivals[:, r - 1]


def _expected_draws(n: int, r_max: int) -> float:
    log_n = math.log(n)
    loglog = math.log(log_n) if log_n > 1.0 else 0.0
    return n * (log_n + (r_max - 1) * loglog + 1.0)


def _fill_arrivals(rng: Generator, n: int, r_max: int) -> np.ndarray:
    """Draw uniform types until every type has ``r_max`` arrivals.

    Works in vectorized blocks; only the first ``r_max`` arrival times per type
    are kept, so memory stays O(n * r_max + block).
    """
    counts = np.zeros(n, dtype=np.int64)
    arrivals = np.zeros((n, r_max), dtype=np.int64)
    drawn = 0
    block = int(1.1 * _expected_draws(n, r_max)) + 64
    while True:
        types = rng.integers(0, n, size=block)
        # stable sort by type via a composite (type, position) integer key;
        # faster than a stable argsort for these sizes
        key = types * block + np.arange(block, dtype=np.int64)
        key.sort()
        sorted_types = key // block
        order = key % block
        group_start = np.concatenate(
            ([0], np.flatnonzero(np.diff(sorted_types)) + 1)
        )
        group_len = np.diff(np.append(group_start, block))
        within = np.arange(block, dtype=np.int64) - np.repeat(group_start, group_len)
        occurrence = counts[sorted_types] + within
        mask = occurrence < r_max
        arrivals[sorted_types[mask], occurrence[mask]] = drawn + order[mask] + 1
        counts += np.bincount(types, minlength=n)
        drawn += block
        incomplete = int(np.count_nonzero(counts < r_max))
        if incomplete == 0:
            return arrivals
        block = max(2048, 2 * n)


def run_discrete(n: int, r_max: int, stream: SeedSpec) -> CollectorTrace:
    """Simulate the discrete scheme until every type has ``r_max`` arrivals."""
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    if r_max < 1:
        raise ValueError(f"need r_max >= 1, got r_max={r_max}")
    rng = stream.generator()
    return CollectorTrace(n, r_max, _fill_arrivals(rng, n, r_max))


def trace_from_sequence(types, n: int, r_max: int) -> CollectorTrace:
    """Build a trace by scanning an explicit 1-based coupon type sequence.

    The sequence must contain at least ``r_max`` occurrences of every type.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    counts = np.zeros(n, dtype=np.int64)
    arrivals = np.zeros((n, r_max), dtype=np.int64)
    for t, label in enumerate(types, start=1):
        i = int(label) - 1
        if not 0 <= i < n:
            raise ValueError(f"type {label} outside 1..{n}")
        if counts[i] < r_max:
            arrivals[i, counts[i]] = t
        counts[i] += 1
    if np.any(counts < r_max):
        raise ValueError("sequence ended before every type arrived r_max times")
    return CollectorTrace(n, r_max, arrivals)


def collection_time(trace: CollectorTrace, c: int) -> int:
    """Draws needed to assemble ``c`` complete collections."""
    return int(trace.arrival_column(c).max())


def partial_collection_time(trace: CollectorTrace, r: int, m: int) -> int:
    """First time all but ``m`` (unspecified) types have ``r`` arrivals each.

    Zero when ``m >= n``; otherwise the (n-m)-th smallest r-th arrival time.
    """
    if m < 0:
        raise ValueError(f"need m >= 0, got m={m}")
    if m >= trace.n:
        return 0
    column = trace.arrival_column(r)
    k = trace.n - m - 1
    return int(np.partition(column, k)[k])
