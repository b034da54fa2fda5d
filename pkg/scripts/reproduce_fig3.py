#!/usr/bin/env python3
"""Play counts: times channel i was chosen by user m up to n (N=5, M=3).

    python scripts/reproduce_fig3.py --out results/fig3
"""

import argparse
from pathlib import Path

import numpy as np

from osa_bandits.harness import ExperimentConfig, emit_csv, run_experiment

THETA = (0.9, 0.8, 0.7, 0.6, 0.5)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/fig3")
    ap.add_argument("--horizon", type=int, default=10 ** 6)
    ap.add_argument("--reps", type=int, default=1)
    ap.add_argument("--seed", type=int, default=2011)
    ap.add_argument("--collision", default="M2", choices=("M1", "M2"))
    args = ap.parse_args()

    np.set_printoptions(suppress=True, linewidth=120)
    for policy in ("dlp", "dlf", "dlf-naive"):
        cfg = ExperimentConfig(theta=THETA, num_users=3, policy=policy, collision_model=args.collision,
                               horizon=args.horizon, replications=args.reps, base_seed=args.seed)
        res = run_experiment(cfg)
        emit_csv(res, Path(args.out) / policy)
        print(f"{policy}: rows = users, columns = channels")
        print(np.round(res.counts).astype(np.int64))


if __name__ == "__main__":
    main()
