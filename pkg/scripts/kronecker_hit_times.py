"""Hit time of the Kronecker search against the tolerance.

Each coordinate lands within eps with probability about eps/pi per step, so
for two coordinates the mean first hit is about (pi / eps)^2; this
script measures the median and worst m over random targets and prints a
table (or writes CSV with --out).
"""

import argparse
import csv
import math
import statistics
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from jsynth.kronecker import KroneckerQuery, default_constants, find_power


@dataclass
class HitTimeConfig:
    eps_values: list = field(default_factory=lambda: [0.1, 0.05, 0.02, 0.01, 0.005])
    targets: int = 50
    seed: int = 0
    m_max: int = 10**8


def run(cfg):
    rng = np.random.default_rng(cfg.seed)
    points = rng.uniform(0, 2 * math.pi, size=(cfg.targets, 2))
    alphas = default_constants()
    for eps in cfg.eps_values:
        ms, times, misses = [], [], 0
        for t in points:
            t0 = time.perf_counter()
            r = find_power(KroneckerQuery(alphas, t, eps, cfg.m_max))
            times.append(time.perf_counter() - t0)
            misses += r.exhausted
            ms.append(r.m)
        yield {
            "eps": eps,
            "median_m": statistics.median(ms),
            "max_m": max(ms),
            "predicted": (math.pi / eps) ** 2,
            "median_ms": 1000 * statistics.median(times),
            "misses": misses,
        }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", type=float, nargs="+", default=HitTimeConfig().eps_values)
    p.add_argument("--targets", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    a = p.parse_args(argv)
    rows = list(run(HitTimeConfig(a.eps, a.targets, a.seed)))
    if a.out:
        with open(a.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    else:
        print(f"{'eps':>8} {'median m':>12} {'max m':>12} {'~(pi/eps)^2':>16} {'ms':>8} misses")
        for r in rows:
            print(f"{r['eps']:8.3g} {r['median_m']:12.0f} {r['max_m']:12d} {r['predicted']:16.0f}"
                  f" {r['median_ms']:8.2f} {r['misses']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
