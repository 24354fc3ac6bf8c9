"""Goodness-of-fit machinery: KS against continuous laws, chi-square for counts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats

__all__ = ["GofResult", "ks_test", "ks_statistic", "poisson_count_test", "increment_test"]

# Minimum expected cell count after merging in the chi-square test.
_MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class GofResult:
    statistic: float
    p_value: float
    sample_size: int
    law: str
    details: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.statistic < 0:
            raise ValueError("statistic must be nonnegative")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")


def _cdf_callable(cdf):
    return cdf.cdf if hasattr(cdf, "cdf") else cdf


def _law_name(cdf) -> str:
    return getattr(cdf, "name", getattr(cdf, "__name__", "custom-cdf"))


def ks_statistic(sample, cdf) -> float:
    """Two-sided sup-distance between the empirical CDF and a reference CDF."""
    sample = np.sort(np.asarray(sample, dtype=np.float64))
    size = len(sample)
    if size == 0:
        raise ValueError("KS test needs a nonempty sample")
    ref = np.asarray(_cdf_callable(cdf)(sample), dtype=np.float64)
    grid = np.arange(1, size + 1) / size
    d_plus = np.max(grid - ref)
    d_minus = np.max(ref - (grid - 1.0 / size))
    return float(max(d_plus, d_minus, 0.0))


def ks_test(sample, cdf) -> GofResult:
    """KS test with the asymptotic Kolmogorov p-value (samples here are >= 1e3)."""
    statistic = ks_statistic(sample, cdf)
    size = len(np.asarray(sample))
    p_value = float(special.kolmogorov(math.sqrt(size) * statistic))
    return GofResult(statistic, p_value, size, _law_name(cdf))


def _poisson_cells(counts: np.ndarray, mean: float):
    """Observed/expected cells over {0,...,k_max} plus the upper tail, merged so
    every expected count is at least 5.  Probabilities sum to one exactly."""
    total = len(counts)
    k_max = int(counts.max())
    support = np.arange(k_max + 1)
    probs = stats.poisson.pmf(support, mean)
    tail = max(float(stats.poisson.sf(k_max, mean)), 0.0)
    probs = np.append(probs, tail)
    observed = np.append(np.bincount(counts, minlength=k_max + 1).astype(float), 0.0)
    expected = total * probs

    obs_cells = list(observed)
    exp_cells = list(expected)
    # Merge right-to-left into the left neighbor, then sweep once more from the
    # left; terminates with every cell >= threshold or a single cell.
    i = len(exp_cells) - 1
    while i > 0:
        if exp_cells[i] < _MIN_EXPECTED:
            exp_cells[i - 1] += exp_cells.pop(i)
            obs_cells[i - 1] += obs_cells.pop(i)
        i -= 1
    while len(exp_cells) > 1 and exp_cells[0] < _MIN_EXPECTED:
        exp_cells[0] += exp_cells.pop(1)
        obs_cells[0] += obs_cells.pop(1)
    return np.asarray(obs_cells), np.asarray(exp_cells)


def poisson_count_test(counts, mean: float) -> GofResult:
    """Chi-square goodness of fit of integer counts against a Poisson mean."""
    counts = np.asarray(counts, dtype=np.int64)
    if len(counts) == 0:
        raise ValueError("count test needs a nonempty sample")
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    if not mean > 0:
        raise ValueError(f"need a positive mean, got {mean}")
    observed, expected = _poisson_cells(counts, mean)
    dof = len(expected) - 1
    if dof == 0:
        return GofResult(0.0, 1.0, len(counts), f"poisson(mean={mean})")
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    p_value = float(stats.chi2.sf(statistic, dof))
    return GofResult(statistic, p_value, len(counts), f"poisson(mean={mean})",
                     details={"dof": dof, "cells": len(expected)})


def increment_test(lastbut_vectors, r: int, m: int) -> GofResult:
    """Test that transformed gaps between consecutive last-but-j points are Exp(1).

    Each input row holds the m+1 largest normalized points, largest first.  The
    map w_j = (r-1)! exp(-L_j) turns them into partial sums of the limiting
    unit exponentials, whose first differences (and the j=0 term itself) are
    pooled and KS-tested against Exp(1).  Pairwise increment correlations are
    reported in ``details``.
    """
    vectors = np.asarray(lastbut_vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] != m + 1:
        raise ValueError(f"expected rows of length m+1={m + 1}, got shape {vectors.shape}")
    if np.any(np.diff(vectors, axis=1) > 0):
        raise ValueError("rows must be nonincreasing (largest point first)")
    partial_sums = math.factorial(r - 1) * np.exp(-vectors)
    increments = np.diff(partial_sums, axis=1, prepend=0.0)
    pooled = increments.ravel()

    def exp1_cdf(x):
        return -np.expm1(-np.asarray(x, dtype=np.float64))

    statistic = ks_statistic(pooled, exp1_cdf)
    p_value = float(special.kolmogorov(math.sqrt(len(pooled)) * statistic))
    details: dict = {"pooled_size": len(pooled)}
    if m >= 1 and len(vectors) >= 2:
        corr = np.corrcoef(increments, rowvar=False)
        off_diag = corr[~np.eye(m + 1, dtype=bool)]
        details["max_abs_increment_correlation"] = float(np.max(np.abs(off_diag)))
        details["correlations"] = [
            [float(corr[i, j]) for j in range(m + 1)] for i in range(m + 1)
        ]
    return GofResult(statistic, p_value, len(vectors), f"exp1-increments(r={r}, m={m})",
                     details=details)
