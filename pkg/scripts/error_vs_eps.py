"""Sequence length, budget and measured error of full synthesis against eps_step.

Runs synth_unitary on fixed-seed Haar-random targets for each eps_step and
reports per-eps medians; the measured error should sit below the budget and
both should shrink roughly linearly with eps_step.
"""

import argparse
import statistics
import sys
from dataclasses import dataclass, field

import numpy as np

from jsynth.numerics import haar_unitary
from jsynth.synthesis import synth_unitary


@dataclass
class SweepConfig:
    eps_steps: list = field(default_factory=lambda: [2e-2, 1e-2, 5e-3, 2e-3])
    trials: int = 5
    seed: int = 0


def sweep(cfg):
    targets = [haar_unitary(np.random.default_rng([cfg.seed, k])) for k in range(cfg.trials)]
    for eps in cfg.eps_steps:
        reps = [synth_unitary(g, eps) for g in targets]
        yield eps, reps


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps-step", type=float, nargs="+", default=SweepConfig().eps_steps)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    cfg = SweepConfig(a.eps_step, a.trials, a.seed)
    print(f"{'eps_step':>9} {'length':>7} {'budget':>9} {'measured':>9} {'sound':>6} {'time s':>7}")
    for eps, reps in sweep(cfg):
        sound = all(r.measured_error <= r.total_budget + 1e-9 for r in reps)
        print(f"{eps:9.3g} {statistics.median(len(r.sequence) for r in reps):7.0f}"
              f" {statistics.median(r.total_budget for r in reps):9.4f}"
              f" {statistics.median(r.measured_error for r in reps):9.4f}"
              f" {str(sound):>6} {statistics.median(r.wall_time for r in reps):7.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
