"""Measure the noise-sensitive acceptance gates under the candidate seed."""
import json
import math
import sys
import time

import numpy as np

from dixiecup.discrete import partial_collection_time, run_discrete
from dixiecup.gof import increment_test, ks_statistic, poisson_count_test
from dixiecup.limitlaws import ChiSqLog, GumbelType, LogGamma, intensity_mass
from dixiecup.pointprocess import Normalization, normalize
from dixiecup.samplers import SeedSpec

SEED = int(sys.argv[1]) if len(sys.argv) > 1 else 42
REPS = 2000
GRID = (100, 1000, 10000)
INTERVALS = [(0.0, math.inf), (-1.0, 0.0), (0.0, 1.0)]
THRESHOLDS = [-1.0, 0.0, 1.0, 2.0]

out = {"seed": SEED}
bank = {}
for gi, n in enumerate(GRID):
    t0 = time.time()
    per = {"counts": {1: [], 2: []}, "first": {1: [], 2: []},
           "rare": {1: [], 2: []}, "T": {1: [], 2: []},
           "psiT": {}, "vec12": []}
    for j in range(REPS):
        trace = run_discrete(n, 3, SeedSpec(SEED, gi * REPS + j))
        for r in (1, 2):
            norm = Normalization(n, r)
            pattern = normalize(trace.arrival_column(r), norm)
            per["counts"][r].append([pattern.count(a, b) for a, b in INTERVALS])
            per["first"][r].append(float(pattern.points[-1]))
            per["rare"][r].append([pattern.count_from(x) for x in THRESHOLDS])
            per["T"][r].append(int(trace.arrivals[:, r - 1].max()))
        for (r, m) in ((1, 0), (1, 1), (1, 3), (2, 0), (2, 1), (3, 2)):
            per["psiT"].setdefault((r, m), []).append(
                partial_collection_time(trace, r, m))
        norm1 = Normalization(n, 1)
        per["vec12"].append([float(norm1.apply(partial_collection_time(trace, 1, j2)))
                             for j2 in range(3)])
    bank[n] = per
    print(f"bank n={n}: {time.time()-t0:.0f}s", file=sys.stderr, flush=True)

# criterion 2: Poisson count tests at n=1e4 + first-point KS decrease
for r in (1, 2):
    per = bank[10000]
    counts = np.array(per["counts"][r])
    out[f"c2_poisson_p_r{r}"] = [
        poisson_count_test(counts[:, k], intensity_mass(r, a, b)).p_value
        for k, (a, b) in enumerate(INTERVALS)]
    out[f"c2_count_means_r{r}"] = counts.mean(axis=0).tolist()
    out[f"c2_first_ks_r{r}"] = {
        n: ks_statistic(np.array(bank[n]["first"][r]), GumbelType(r))
        for n in GRID}

# criterion 3: erdos-renyi KS per n
for c in (1, 2):
    out[f"c3_ks_c{c}"] = {}
    for n in GRID:
        values = Normalization(n, c).apply(
            np.array(bank[n]["T"][c], dtype=np.float64))
        out[f"c3_ks_c{c}"][n] = ks_statistic(values, GumbelType(c))

# criterion 4 exact-mean gate (n=1e4 T1 vs n H_n, from the same bank)
t1 = np.array(bank[10000]["T"][1], dtype=np.float64)
target = 10000 * sum(1.0 / k for k in range(1, 10001))
out["c4_t1_dev_se"] = float((t1.mean() - target) / (t1.std(ddof=1) / math.sqrt(len(t1))))

# criterion 5: chi2-law KS at n=1e4
n = 10000
for (r, m) in ((1, 0), (1, 1), (1, 3), (2, 0), (2, 1), (3, 2)):
    t_rm = np.array(bank[n]["psiT"][(r, m)], dtype=np.float64)
    if r == 1:
        values = math.log(2 * n) - t_rm / n
        law = ChiSqLog(m)
    else:
        values = Normalization(n, r).apply(t_rm)
        law = LogGamma(r, m)
    out[f"c5_ks_r{r}_m{m}"] = ks_statistic(values, law)

# criterion 6: increment test at n=1e4, r=1, m=2
res = increment_test(np.array(bank[10000]["vec12"]), 1, 2)
out["c6_increment_p"] = res.p_value
out["c6_max_corr"] = res.details["max_abs_increment_correlation"]

# criterion 7: rare-path Poisson tests at n=1e4
for r in (1, 2):
    rare = np.array(bank[10000]["rare"][r])
    out[f"c7_marginal_p_r{r}"] = [
        poisson_count_test(rare[:, k], intensity_mass(r, x, math.inf)).p_value
        for k, x in enumerate(THRESHOLDS)]
    out[f"c7_increment_p_r{r}"] = [
        poisson_count_test(rare[:, k] - rare[:, k + 1],
                           intensity_mass(r, THRESHOLDS[k], THRESHOLDS[k + 1])).p_value
        for k in range(len(THRESHOLDS) - 1)]

def default(o):
    if isinstance(o, (np.floating, np.integer)):
        return float(o)
    raise TypeError
print(json.dumps(out, indent=2, default=default))
