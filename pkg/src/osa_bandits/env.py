"""Multi-user channel environment: collisions, rewards and regret accounting."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, RewardSource, RngStream, sample


class CollisionModel(str, enum.Enum):
    M1 = "M1"  # perfect collision: nobody on a contested channel is paid
    M2 = "M2"  # CSMA: the lowest-indexed contender is paid

    @classmethod
    def parse(cls, name) -> CollisionModel:
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            raise ConfigError(f"unknown collision model {name!r}") from None


@dataclass(frozen=True)
class SlotOutcome:
    choices: tuple[int, ...]
    realizations: tuple[float, ...]
    rewards: tuple[float, ...]
    flags: tuple[bool, ...]


def assign_rewards(choices, observed, model: CollisionModel):
    """Rewards and paid-flags for one slot given what each user observed."""
    model = CollisionModel.parse(model)
    m = len(choices)
    flags = [False] * m
    seen: dict[int, list[int]] = {}
    for j, arm in enumerate(choices):
        seen.setdefault(arm, []).append(j)
    for users in seen.values():
        if len(users) == 1:
            flags[users[0]] = True
        elif model is CollisionModel.M2:
            flags[users[0]] = True  # users are visited in index order
    rewards = [observed[j] if flags[j] else 0.0 for j in range(m)]
    return rewards, flags


class ChannelEnvironment:
    def __init__(self, sources, collision_model="M1", num_users: int = 1):
        self.sources = [s if isinstance(s, RewardSource) else RewardSource.bernoulli(s)
                        for s in sources]
        self.collision_model = CollisionModel.parse(collision_model)
        self.num_users = int(num_users)
        if not 1 <= self.num_users <= self.num_arms:
            raise ConfigError(f"need 1 <= M <= N, got M={num_users}, N={self.num_arms}")
        self.theta = np.array([s.true_mean for s in self.sources])
        if len(np.unique(self.theta)) < len(self.theta):
            warnings.warn("channel means are not distinct; rank targets are ambiguous",
                          stacklevel=2)
        self.genie = genie_reward(self.theta, self.num_users)

    @classmethod
    def bernoulli(cls, theta, collision_model="M1", num_users: int = 1):
        return cls([RewardSource.bernoulli(p) for p in theta], collision_model, num_users)

    @property
    def num_arms(self) -> int:
        return len(self.sources)

    def resolve_slot(self, choices, t: int, streams: list[RngStream]) -> SlotOutcome:
        if len(choices) != self.num_users:
            raise ValueError(f"expected {self.num_users} choices, got {len(choices)}")
        draws = {}
        for arm in choices:
            if not 0 <= arm < self.num_arms:
                raise IndexError(f"arm {arm} outside [0, {self.num_arms})")
            if arm not in draws:
                draws[arm] = sample(self.sources[arm], streams[arm], t)
        observed = [draws[arm] for arm in choices]
        rewards, flags = assign_rewards(choices, observed, self.collision_model)
        return SlotOutcome(tuple(int(a) for a in choices), tuple(observed),
                           tuple(rewards), tuple(flags))


def genie_reward(theta, num_users: int) -> float:
    """Per-slot reward of a model-aware genie: sum of the M largest means."""
    return float(np.sum(np.sort(np.asarray(theta, dtype=float))[::-1][:num_users]))


@dataclass
class RegretSeries:
    genie: float
    cumulative: list[float] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.cumulative)

    def accumulate(self, outcome: SlotOutcome) -> RegretSeries:
        prev = self.cumulative[-1] if self.cumulative else 0.0
        self.cumulative.append(prev + self.genie - sum(outcome.rewards))
        return self

    @property
    def normalized(self) -> list[float]:
        """Regret over ln n, for n >= 2."""
        return [r / np.log(n) for n, r in enumerate(self.cumulative, start=1) if n >= 2]


def regret_type1_slot(chosen_mean: float, theta_k: float) -> float:
    return abs(theta_k - chosen_mean)


def regret_type1(chosen_means, theta_k: float) -> np.ndarray:
    """Per-prefix sum of per-slot absolute deviations from the rank-K mean."""
    return np.cumsum(np.abs(theta_k - np.asarray(chosen_means, dtype=float)))


def regret_type2(chosen_means, theta_k: float) -> np.ndarray:
    """Per-prefix absolute deviation of the running total from n * theta_K."""
    chosen = np.asarray(chosen_means, dtype=float)
    n = np.arange(1, len(chosen) + 1)
    return np.abs(n * theta_k - np.cumsum(chosen))


@dataclass
class ReplicationTrace:
    regret: RegretSeries
    counts: np.ndarray
    outcomes: list[SlotOutcome] | None


def run_replication(env: ChannelEnvironment, agents, horizon: int, seed: int,
                    replication: int = 0, record: bool = False) -> ReplicationTrace:
    """Step agents and environment slot by slot (reference engine)."""
    streams = [RngStream(seed, (replication, i)) for i in range(env.num_arms)]
    series = RegretSeries(env.genie)
    counts = np.zeros((len(agents), env.num_arms), dtype=np.int64)
    outcomes = [] if record else None
    for t in range(1, horizon + 1):
        choices = [a.select(t) for a in agents]
        out = env.resolve_slot(choices, t, streams)
        for j, a in enumerate(agents):
            a.update(t, choices[j], out.realizations[j])
            counts[j, choices[j]] += 1
        series.accumulate(out)
        if record:
            outcomes.append(out)
    return ReplicationTrace(series, counts, outcomes)
