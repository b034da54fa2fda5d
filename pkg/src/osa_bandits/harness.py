"""Experiment orchestration: configs, replications, aggregation, CSV output."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bounds
from .core import ConfigError, RewardSource, realization_matrix
from .env import ChannelEnvironment, CollisionModel, genie_reward, run_replication
from .policies import Agent, PolicyKind

log = logging.getLogger(__name__)

DEFAULT_HORIZON = 10 ** 6
DEFAULT_REPS = 50


def geometric_log_points(horizon: int, ratio: float = 1.25) -> np.ndarray:
    """Slots at which regret is recorded: powers of ``ratio`` and of 10, plus the horizon."""
    pts = {horizon}
    x = 2.0
    while x <= horizon:
        pts.add(int(round(x)))
        x *= ratio
    p = 10
    while p <= horizon:
        pts.add(p)
        p *= 10
    return np.array(sorted(q for q in pts if 2 <= q <= horizon), dtype=np.int64)


@dataclass
class ExperimentConfig:
    theta: tuple[float, ...]
    num_users: int
    policy: PolicyKind = PolicyKind.DLF
    collision_model: CollisionModel = CollisionModel.M2
    horizon: int = DEFAULT_HORIZON
    replications: int = DEFAULT_REPS
    base_seed: int = 0
    log_all: bool = False
    target_rank: int | None = None
    log_points: tuple[int, ...] | None = None

    def __post_init__(self):
        self.theta = tuple(float(p) for p in self.theta)
        self.policy = PolicyKind.parse(self.policy) if isinstance(self.policy, str) else self.policy
        self.collision_model = CollisionModel.parse(self.collision_model)
        self.validate()

    @property
    def num_arms(self) -> int:
        return len(self.theta)

    def validate(self) -> None:
        if not self.theta:
            raise ConfigError("theta is empty")
        if any(not 0.0 <= p <= 1.0 for p in self.theta):
            raise ConfigError("theta values must lie in [0, 1]")
        if not 1 <= self.num_users <= self.num_arms:
            raise ConfigError(f"need 1 <= M <= N, got M={self.num_users}, N={self.num_arms}")
        if self.horizon < self.num_arms:
            raise ConfigError(f"horizon {self.horizon} shorter than the {self.num_arms}-slot initialization")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.policy is PolicyKind.SLK:
            if self.num_users != 1:
                raise ConfigError("SL(K) is a single-user policy")
            if self.target_rank is None or not 1 <= self.target_rank <= self.num_arms:
                raise ConfigError("SL(K) needs target_rank in [1, N]")

    def schedule(self) -> np.ndarray:
        if self.log_points is not None:
            pts = np.array(sorted(set(self.log_points)), dtype=np.int64)
            if pts[0] < 1 or pts[-1] > self.horizon:
                raise ConfigError("log points must lie in [1, horizon]")
            return pts
        if self.log_all:
            return np.arange(1, self.horizon + 1, dtype=np.int64)
        return geometric_log_points(self.horizon)


@dataclass
class ReplicationResult:
    replication: int
    regret: np.ndarray  # at each log point
    counts: np.ndarray  # M x N plays


@dataclass
class AggregateResult:
    config: ExperimentConfig
    log_points: np.ndarray
    mean_regret: np.ndarray
    stderr_regret: np.ndarray
    counts: np.ndarray  # mean M x N play counts
    per_replication: np.ndarray = field(repr=False)  # reps x log points

    @property
    def normalized_regret(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.log_points >= 2, self.mean_regret / np.log(self.log_points), np.nan)

    @property
    def normalized_stderr(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.log_points >= 2, self.stderr_regret / np.log(self.log_points), np.nan)

    def at(self, n: int) -> int:
        """Position of slot ``n`` in the log schedule."""
        idx = np.flatnonzero(self.log_points == n)
        if not len(idx):
            raise KeyError(f"slot {n} was not logged")
        return int(idx[0])


def run_replication_fast(cfg: ExperimentConfig, replication: int) -> ReplicationResult:
    from ._kernel import KIND_CODES, run_kernel

    sources = [RewardSource.bernoulli(p) for p in cfg.theta]
    real = realization_matrix(sources, cfg.base_seed, replication, cfg.horizon)
    regret, counts = run_kernel(
        real, KIND_CODES[cfg.policy.value], cfg.num_users, cfg.target_rank or 1,
        cfg.collision_model is CollisionModel.M2,
        genie_reward([s.true_mean for s in sources], cfg.num_users), cfg.schedule())
    return ReplicationResult(replication, regret, counts)


def make_agents(cfg: ExperimentConfig) -> list[Agent]:
    return [Agent(cfg.policy, cfg.num_arms, user=m, num_users=cfg.num_users,
                  target_rank=cfg.target_rank) for m in range(1, cfg.num_users + 1)]


def run_replication_reference(cfg: ExperimentConfig, replication: int) -> ReplicationResult:
    env = ChannelEnvironment.bernoulli(cfg.theta, cfg.collision_model, cfg.num_users)
    trace = run_replication(env, make_agents(cfg), cfg.horizon, cfg.base_seed, replication)
    cum = np.asarray(trace.regret.cumulative)
    return ReplicationResult(replication, cum[cfg.schedule() - 1], trace.counts)


ENGINES = {"fast": run_replication_fast, "reference": run_replication_reference}


def _run_one(args):
    cfg, rep, engine = args
    try:
        return ENGINES[engine](cfg, rep)
    except Exception as exc:
        raise RuntimeError(f"replication {rep} (base_seed={cfg.base_seed}) failed: {exc}") from exc


def run_replications(cfg: ExperimentConfig, engine: str = "fast", workers: int = 1,
                     order=None) -> list[ReplicationResult]:
    reps = list(range(cfg.replications)) if order is None else list(order)
    jobs = [(cfg, r, engine) for r in reps]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return sorted(results, key=lambda r: r.replication)


def aggregate(cfg: ExperimentConfig, results: list[ReplicationResult]) -> AggregateResult:
    results = sorted(results, key=lambda r: r.replication)
    per_rep = np.stack([r.regret for r in results])
    reps = len(results)
    mean = per_rep.mean(axis=0)
    stderr = per_rep.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.zeros_like(mean)
    counts = np.stack([r.counts for r in results]).mean(axis=0)
    return AggregateResult(cfg, cfg.schedule(), mean, stderr, counts, per_rep)


def run_experiment(cfg: ExperimentConfig, engine: str = "fast", workers: int = 1) -> AggregateResult:
    cfg.validate()
    log.info("running %s: N=%d M=%d n=%d reps=%d", cfg.policy.value, cfg.num_arms,
             cfg.num_users, cfg.horizon, cfg.replications)
    return aggregate(cfg, run_replications(cfg, engine, workers))


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def emit_csv(result: AggregateResult, out_dir) -> tuple[Path, Path]:
    """Write ``regret.csv`` and ``counts.csv`` (users and arms 1-based)."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        regret_path = out / "regret.csv"
        counts_path = out / "counts.csv"
        norm = result.normalized_regret
        with open(regret_path, "w", newline="") as fh:
            fh.write("n,mean_regret,stderr,normalized\n")
            for i, n in enumerate(result.log_points):
                fh.write(f"{int(n)},{_fmt(result.mean_regret[i])},"
                         f"{_fmt(result.stderr_regret[i])},{_fmt(norm[i])}\n")
        with open(counts_path, "w", newline="") as fh:
            fh.write("user,arm,mean_count\n")
            for j, row in enumerate(result.counts, start=1):
                for i, c in enumerate(row, start=1):
                    fh.write(f"{j},{i},{_fmt(c)}\n")
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return regret_path, counts_path


_SHARED = ("theta", "num_users", "collision_model", "horizon", "replications",
           "base_seed", "log_all", "log_points")


def compare_policies(cfgs: list[ExperimentConfig], engine: str = "fast",
                     workers: int = 1) -> dict[PolicyKind, AggregateResult]:
    """Run configs that differ only in policy; channel draws are shared across them."""
    if not cfgs:
        raise ConfigError("nothing to compare")
    first = cfgs[0]
    for cfg in cfgs[1:]:
        bad = [f for f in _SHARED if getattr(cfg, f) != getattr(first, f)]
        if bad:
            raise ConfigError(f"configs differ in shared fields: {', '.join(bad)}")
    return {cfg.policy: run_experiment(cfg, engine, workers) for cfg in cfgs}


def comparison_table(results: dict[PolicyKind, AggregateResult]) -> list[dict]:
    any_result = next(iter(results.values()))
    rows = []
    for i, n in enumerate(any_result.log_points):
        row = {"n": int(n)}
        for kind, res in results.items():
            row[f"{kind.value}_normalized"] = float(res.normalized_regret[i])
            row[f"{kind.value}_stderr"] = float(res.normalized_stderr[i])
        rows.append(row)
    return rows


def emit_comparison_csv(results, out_dir) -> Path:
    rows = comparison_table(results)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "comparison.csv"
    keys = list(rows[0])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(str(row["n"]) if k == "n" else _fmt(row[k]) for k in keys) + "\n")
    for kind, res in results.items():
        emit_csv(res, out / kind.value)
    return path


def applicable_bound(cfg: ExperimentConfig, n: int) -> float:
    """Tight regret bound matching the configured policy at slot ``n``."""
    table = bounds.GapTable.from_means(cfg.theta)
    if cfg.policy is PolicyKind.SLK:
        return bounds.bound_slk_regret(table, cfg.target_rank, n)
    if cfg.num_users == 1 or cfg.policy is PolicyKind.UCB1:
        # single user: every policy is SL(1), whose regret is the Corollary-1 quantity
        return bounds.bound_slk_regret(table, 1, n) if cfg.num_users == 1 else math.inf
    if cfg.policy is PolicyKind.DLP:
        return bounds.bound_dlp(table, cfg.num_users, n).tight
    if cfg.policy is PolicyKind.DLF_NAIVE:
        return bounds.bound_dlf_naive(table, cfg.num_users, n).tight
    return bounds.bound_dlf(table, cfg.num_users, n).tight


@dataclass(frozen=True)
class OverlayRow:
    n: int
    mean_regret: float
    stderr: float
    bound: float
    violated: bool
    large_n_bound: float | None  # DLF only; None below the threshold


def overlay_bounds(result: AggregateResult, cfg: ExperimentConfig | None = None) -> list[OverlayRow]:
    cfg = cfg or result.config
    table = bounds.GapTable.from_means(cfg.theta)
    rows = []
    for i, n in enumerate(result.log_points):
        n = int(n)
        b = applicable_bound(cfg, n)
        large = None
        if cfg.policy is PolicyKind.DLF and table.distinct and bounds.in_large_n_regime(table, cfg.num_users, n):
            large = bounds.bound_dlf_large_n(table, cfg.num_users, n).tight
        mean = float(result.mean_regret[i])
        rows.append(OverlayRow(n, mean, float(result.stderr_regret[i]), b, mean > b, large))
    return rows


def with_policy(cfg: ExperimentConfig, policy) -> ExperimentConfig:
    return replace(cfg, policy=PolicyKind.parse(policy) if isinstance(policy, str) else policy)


def default_workers() -> int:
    return max(1, (os.cpu_count() or 1) - 1)
