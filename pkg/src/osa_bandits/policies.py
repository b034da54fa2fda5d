"""Index policies: SL(K), the decentralized DLP / DLF / DLF-Naive agents, UCB1.

Arms are 0-based. Users are identified by their 1-based priority ``m`` and
slots are 1-based, so the rotation formulas read as in the algorithms; a
target rank ``K`` is 1-based (K=1 is the best arm).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import ArmStats, ConfigError, RewardDomainError


class PolicyKind(str, enum.Enum):
    SLK = "slk"
    UCB1 = "ucb1"
    DLP = "dlp"
    DLF = "dlf"
    DLF_NAIVE = "dlf-naive"

    @classmethod
    def parse(cls, name: str) -> PolicyKind:
        key = name.strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ConfigError(f"unknown policy {name!r}")


@dataclass(frozen=True)
class IndexPair:
    ucb: float
    lcb: float


def _padding(count, t):
    # scalar libm log so the compiled engine reproduces this bit for bit
    return np.sqrt(2.0 * math.log(t) / count)


def ucb_index(stats: ArmStats, t: int) -> float:
    if stats.count < 1:
        raise ValueError("arm has no observations; run the initialization phase first")
    return stats.mean_estimate + math.sqrt(2.0 * math.log(t) / stats.count)


def lcb_index(stats: ArmStats, t: int) -> float:
    if stats.count < 1:
        raise ValueError("arm has no observations; run the initialization phase first")
    return stats.mean_estimate - math.sqrt(2.0 * math.log(t) / stats.count)


def index_pair(stats: ArmStats, t: int) -> IndexPair:
    return IndexPair(ucb_index(stats, t), lcb_index(stats, t))


def top_k_arms(ucb: np.ndarray, k: int) -> np.ndarray:
    """The k arms with the largest upper indices, ties to the lower arm; sorted by arm."""
    order = np.argsort(-ucb, kind="stable")
    return np.sort(order[:k])


def slk_select(means: np.ndarray, counts: np.ndarray, t: int, k: int) -> int:
    """Two-stage SL(K) choice: among the K best upper indices, the smallest lower index.

    Ties in both stages go to the lowest arm index.
    """
    n_arms = len(means)
    if not 1 <= k <= n_arms:
        raise ConfigError(f"target rank {k} outside [1, {n_arms}]")
    if np.any(counts < 1):
        raise ValueError("every arm must be observed once before the main loop")
    pad = _padding(counts, t)
    candidates = top_k_arms(means + pad, k)
    lcb = means[candidates] - pad[candidates]
    return int(candidates[np.argmin(lcb)])


def slk_init_arm(t: int, num_arms: int) -> int:
    if not 1 <= t <= num_arms:
        raise ValueError(f"slot {t} is outside the initialization phase 1..{num_arms}")
    return t - 1


def dlp_init_arm(m: int, t: int, num_arms: int) -> int:
    """Staggered initialization: user m plays arm (m + t) mod N at slot t."""
    if not 1 <= t <= num_arms:
        raise ValueError(f"slot {t} is outside the initialization phase 1..{num_arms}")
    if not 1 <= m <= num_arms:
        raise ConfigError("more users than arms")
    return (m + t) % num_arms


def dlf_priority(m: int, t: int, num_users: int) -> int:
    return (m + t) % num_users + 1


class Agent:
    """One user's learning state.

    DLF-Naive keeps one statistics row per rotating priority; every other
    kind keeps a single pooled row.
    """

    def __init__(self, kind, num_arms: int, user: int = 1, num_users: int = 1,
                 target_rank: int | None = None):
        self.kind = PolicyKind.parse(kind) if isinstance(kind, str) else kind
        if num_users > num_arms:
            raise ConfigError(f"M={num_users} users exceeds N={num_arms} arms")
        if not 1 <= user <= num_users:
            raise ConfigError(f"user {user} outside [1, {num_users}]")
        if self.kind is PolicyKind.SLK:
            if target_rank is None:
                raise ConfigError("SL(K) needs a target rank")
            if not 1 <= target_rank <= num_arms:
                raise ConfigError(f"target rank {target_rank} outside [1, {num_arms}]")
        self.num_arms = num_arms
        self.num_users = num_users
        self.user = user
        self.target_rank = target_rank
        rows = num_users if self.kind is PolicyKind.DLF_NAIVE else 1
        self.means = np.zeros((rows, num_arms))
        self.counts = np.zeros((rows, num_arms), dtype=np.int64)
        self.slot = 0

    def rank(self, t: int) -> int:
        """Target rank K used at main-loop slot t."""
        if self.kind is PolicyKind.SLK:
            return self.target_rank
        if self.kind is PolicyKind.UCB1:
            return 1
        if self.kind is PolicyKind.DLP:
            return self.user
        return dlf_priority(self.user, t, self.num_users)

    def _row(self, t: int) -> int:
        if self.kind is PolicyKind.DLF_NAIVE and t > self.num_arms:
            return self.rank(t) - 1
        return 0

    def select(self, t: int) -> int:
        if t <= self.num_arms:
            if self.kind in (PolicyKind.SLK, PolicyKind.UCB1):
                return slk_init_arm(t, self.num_arms)
            return dlp_init_arm(self.user, t, self.num_arms)
        row = self._row(t)
        return slk_select(self.means[row], self.counts[row], t, self.rank(t))

    def update(self, t: int, arm: int, observed: float) -> None:
        if not 0.0 <= observed <= 1.0:
            raise RewardDomainError(f"observation {observed!r} outside [0, 1]")
        if t <= self.num_arms and self.kind is PolicyKind.DLF_NAIVE:
            rows = slice(None)  # shared warm-start copied into every priority row
        else:
            rows = self._row(t)
        n = self.counts[rows, arm]
        self.means[rows, arm] = (self.means[rows, arm] * n + observed) / (n + 1)
        self.counts[rows, arm] = n + 1
        self.slot = t

    def stats(self, row: int = 0) -> list[ArmStats]:
        return [ArmStats(float(mu), int(c)) for mu, c in zip(self.means[row], self.counts[row])]

    @property
    def storage(self) -> int:
        """Number of (mean, count) entries held."""
        return self.counts.size
