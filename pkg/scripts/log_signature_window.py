#!/usr/bin/env python3
"""Relative change of R(n)/ln n across successive decades for DLP and DLF.

Shows where the regret of each scenario enters its logarithmic regime.
"""

import argparse

from osa_bandits.harness import ExperimentConfig, run_experiment
from reproduce_fig2 import SCENARIOS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon-exp", type=int, default=6)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=20110415)
    ap.add_argument("--collision", default="M2", choices=("M1", "M2"))
    args = ap.parse_args()

    decades = [10 ** k for k in range(3, args.horizon_exp + 1)]
    for name, (theta, users) in SCENARIOS.items():
        for policy in ("dlp", "dlf"):
            cfg = ExperimentConfig(theta=theta, num_users=users, policy=policy,
                                   collision_model=args.collision, horizon=decades[-1],
                                   replications=args.reps, base_seed=args.seed)
            res = run_experiment(cfg)
            vals = [res.normalized_regret[res.at(n)] for n in decades]
            steps = "  ".join(f"{a:.0e}->{b:.0e}: {abs(y - x) / x:6.1%}"
                              for a, b, x, y in zip(decades, decades[1:], vals, vals[1:]))
            print(f"{name} {policy:<4} {steps}")


if __name__ == "__main__":
    main()
