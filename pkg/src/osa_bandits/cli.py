"""Command line: ``osa-sim simulate|bounds|compare``."""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import bounds
from .config import load_config
from .core import ConfigError
from .harness import (compare_policies, emit_comparison_csv, emit_csv, overlay_bounds,
                      run_experiment, with_policy)
from .policies import PolicyKind


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="key = value experiment file")
    p.add_argument("--seed", type=int, help="base seed (u64), overrides the config")
    p.add_argument("--reps", type=int, help="replications, overrides the config")
    p.add_argument("--log-all", action="store_true", help="record regret at every slot")
    p.add_argument("--workers", type=int, default=1, help="worker processes for replications")
    p.add_argument("--engine", choices=("fast", "reference"), default="fast")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osa-sim", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one policy, write regret.csv and counts.csv")
    _common(sim)
    sim.add_argument("--out", required=True)
    sim.add_argument("--overlay", action="store_true", help="also print measured regret vs. bound")

    bnd = sub.add_parser("bounds", help="print the analytic bounds for a config")
    bnd.add_argument("--config", required=True)
    bnd.add_argument("--n", type=float, action="append", help="horizon(s); default powers of 10")

    cmp_ = sub.add_parser("compare", help="run several policies on common random numbers")
    _common(cmp_)
    cmp_.add_argument("--policies", default="dlp,dlf,dlf-naive")
    cmp_.add_argument("--out", required=True)
    return parser


def _overrides(args) -> dict:
    return {"base_seed": args.seed, "replications": args.reps,
            "log_all": True if args.log_all else None}


def bound_rows(cfg, horizons):
    table = bounds.GapTable.from_means(cfg.theta)
    M = cfg.num_users
    rows = []
    for n in horizons:
        for k in range(1, M + 1):
            rows.append((f"corollary1[K={k}]", n, bounds.bound_slk_regret(table, k, n), math.nan))
        for name, fn in (("dlp", bounds.bound_dlp), ("dlf-naive", bounds.bound_dlf_naive),
                         ("dlf", bounds.bound_dlf)):
            pair = fn(table, M, n)
            rows.append((name, n, pair.tight, pair.loose))
        if bounds.in_large_n_regime(table, M, n):
            pair = bounds.bound_dlf_large_n(table, M, n)
            rows.append(("dlf-large-n", n, pair.tight, pair.loose))
        else:
            rows.append(("dlf-large-n", n, math.nan, math.nan))
    return rows


def _cmd_bounds(args) -> None:
    cfg = load_config(args.config)
    horizons = args.n or [10.0 ** k for k in range(2, int(math.log10(cfg.horizon)) + 1)]
    table = bounds.GapTable.from_means(cfg.theta)
    print(f"# N={cfg.num_arms} M={cfg.num_users} large-n threshold C="
          f"{bounds.dlf_large_n_threshold(table, cfg.num_users):.10g}")
    print(f"{'theorem':<16}{'n':>12}{'tight':>18}{'loose':>18}")
    for name, n, tight, loose in bound_rows(cfg, horizons):
        loose_s = "n/a" if math.isnan(loose) else f"{loose:.6f}"
        tight_s = "n/a" if math.isnan(tight) else f"{tight:.6f}"
        print(f"{name:<16}{n:>12.0f}{tight_s:>18}{loose_s:>18}")


def _cmd_simulate(args) -> None:
    cfg = load_config(args.config, **_overrides(args))
    result = run_experiment(cfg, args.engine, args.workers)
    regret_path, counts_path = emit_csv(result, args.out)
    print(f"wrote {regret_path} and {counts_path}")
    if args.overlay:
        for row in overlay_bounds(result):
            flag = " VIOLATED" if row.violated else ""
            print(f"{row.n:>10} {row.mean_regret:>14.3f} {row.bound:>16.3f}{flag}")


def _cmd_compare(args) -> None:
    base = load_config(args.config, **_overrides(args))
    kinds = [PolicyKind.parse(p) for p in args.policies.split(",") if p.strip()]
    results = compare_policies([with_policy(base, k) for k in kinds], args.engine, args.workers)
    path = emit_comparison_csv(results, args.out)
    last = -1
    for kind, res in results.items():
        print(f"{kind.value:<10} n={int(res.log_points[last])} normalized regret "
              f"{res.normalized_regret[last]:.4f} +/- {res.normalized_stderr[last]:.4f}")
    print(f"wrote {path}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"simulate": _cmd_simulate, "bounds": _cmd_bounds, "compare": _cmd_compare}
    try:
        handlers[args.command](args)
    except (ConfigError, OSError) as exc:
        print(f"osa-sim: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
