#!/usr/bin/env python3
"""Normalized regret R(n)/ln n of DLP, DLF and DLF-Naive on the three channel scenarios.

Writes one directory per scenario with comparison.csv and per-policy
regret.csv / counts.csv.

    python scripts/reproduce_fig2.py --out results/fig2 --horizon 1000000 --reps 50
"""

import argparse
from pathlib import Path

from osa_bandits.harness import ExperimentConfig, compare_policies, emit_comparison_csv, with_policy

SCENARIOS = {
    "fig2a": ((0.9, 0.8, 0.7, 0.6), 2),
    "fig2b": ((0.9, 0.8, 0.7, 0.6, 0.5), 3),
    "fig2c": ((0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3), 4),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="results/fig2")
    ap.add_argument("--horizon", type=int, default=10 ** 6)
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2011)
    ap.add_argument("--collision", default="M2", choices=("M1", "M2"))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for name, (theta, users) in SCENARIOS.items():
        base = ExperimentConfig(theta=theta, num_users=users, collision_model=args.collision,
                                horizon=args.horizon, replications=args.reps, base_seed=args.seed)
        results = compare_policies([with_policy(base, p) for p in ("dlp", "dlf", "dlf-naive")],
                                   workers=args.workers)
        path = emit_comparison_csv(results, Path(args.out) / name)
        summary = "  ".join(f"{k.value}={r.normalized_regret[-1]:.1f}" for k, r in results.items())
        print(f"{name} (N={len(theta)}, M={users}) at n={args.horizon}: {summary}  -> {path}")


if __name__ == "__main__":
    main()
