#!/usr/bin/env python3
"""One-off calibration pilot for the frozen regression constants.

Runs the n-grid pilots behind ``dixiecup.calibration`` and prints the raw
numbers; the chosen thresholds are then frozen by hand into that module.
"""
from __future__ import annotations

import json
import math
import sys
import time

import numpy as np

from dixiecup.discrete import collection_time, partial_collection_time, run_discrete
from dixiecup.gof import ks_statistic
from dixiecup.limitlaws import ChiSqLog, GumbelType, LogGamma
from dixiecup.pointprocess import Normalization
from dixiecup.poissonized import count_mismatch, run_coupled
from dixiecup.samplers import SeedSpec

PILOT_SEED = 20240817
REPS = 2000
PAIRS = [(1, 0), (1, 1), (1, 3), (2, 0), (2, 1), (3, 2)]


def discrete_bank(n: int, reps: int) -> dict:
    """Partial-collection statistics from one bank of discrete runs."""
    t_rm = {pair: np.empty(reps) for pair in PAIRS}
    t_c = {c: np.empty(reps) for c in (1, 2)}
    for j in range(reps):
        trace = run_discrete(n, 3, SeedSpec(PILOT_SEED, j))
        for r, m in PAIRS:
            t_rm[(r, m)][j] = partial_collection_time(trace, r, m)
        for c in (1, 2):
            t_c[c][j] = collection_time(trace, c)
    out = {}
    for c in (1, 2):
        values = Normalization(n, c).apply(t_c[c])
        out[f"erdos_renyi_ks_c{c}"] = ks_statistic(values, GumbelType(c))
    for r, m in PAIRS:
        if r == 1:
            values = np.log(2 * n) - t_rm[(r, m)] / n
            law = ChiSqLog(m)
        else:
            values = Normalization(n, r).apply(t_rm[(r, m)])
            law = LogGamma(r, m)
        out[f"partial_ks_r{r}_m{m}"] = ks_statistic(values, law)
    return out


def mismatch_bank(n: int, reps: int) -> float:
    hits = sum(
        count_mismatch(run_coupled(n, 1, SeedSpec(PILOT_SEED, j)), 1, -2.0, 2.0)
        for j in range(reps)
    )
    return hits / reps


def main() -> None:
    results: dict = {}
    for n in (100, 1000, 10000, 100000):
        start = time.time()
        results[f"discrete_n{n}"] = discrete_bank(n, REPS)
        print(f"discrete n={n}: {time.time() - start:.0f}s", file=sys.stderr)
        print(json.dumps(results[f"discrete_n{n}"], indent=2))
    for n in (100, 1000, 10000):
        start = time.time()
        freq = mismatch_bank(n, REPS)
        results[f"mismatch_n{n}"] = freq
        print(f"mismatch n={n}: freq={freq:.4f} ({time.time() - start:.0f}s)",
              file=sys.stderr)
    print(json.dumps(results, indent=2))


if __name__ == "__main__":
    main()
