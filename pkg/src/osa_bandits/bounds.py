"""Closed-form regret bounds for SL(K), DLP, DLF-Naive and DLF.

All exploration terms use squared gaps, ``8 ln n / gap**2``; the
Corollary-1 regret bound is the gap-weighted sum of the play bound, so its
terms carry first-power gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigError

# 1 + 2*pi^2/3 = 7.579736267...
PLAY_CONST = 1.0 + 2.0 * math.pi ** 2 / 3.0


class BoundDomainError(ValueError):
    """Bound undefined for the requested arguments."""


@dataclass(frozen=True)
class GapTable:
    theta: np.ndarray  # original arm order
    order: np.ndarray  # order[m-1] = arm with m-th largest mean

    @classmethod
    def from_means(cls, theta) -> GapTable:
        theta = np.asarray(theta, dtype=float)
        order = np.argsort(-theta, kind="stable")
        return cls(theta, order)

    @property
    def num_arms(self) -> int:
        return len(self.theta)

    @property
    def theta_sorted(self) -> np.ndarray:
        return self.theta[self.order]

    @property
    def theta_max(self) -> float:
        return float(self.theta.max())

    @property
    def distinct(self) -> bool:
        return len(np.unique(self.theta)) == len(self.theta)

    def rank_arm(self, m: int) -> int:
        """Arm holding the m-th largest mean (1-based m)."""
        return int(self.order[m - 1])

    def theta_rank(self, k: int) -> float:
        return float(self.theta_sorted[k - 1])

    def gap(self, k: int, i: int) -> float:
        """|theta_K - theta_i| for target rank K and arm i."""
        return abs(self.theta_rank(k) - float(self.theta[i]))

    def optimal_set(self, k: int) -> set[int]:
        """Arms whose mean equals the K-th largest."""
        return {int(i) for i in np.flatnonzero(self.theta == self.theta_rank(k))}

    def top_set(self, num_users: int) -> list[int]:
        return [int(a) for a in self.order[:num_users]]

    def delta_min(self, num_users: int) -> float:
        """Smallest gap between a top-M arm and any other arm (inf if none)."""
        gaps = [self.gap(m, i) for m in range(1, num_users + 1)
                for i in range(self.num_arms) if i != self.rank_arm(m)]
        return min(gaps, default=math.inf)

    def delta_min_arm(self, i: int, num_users: int) -> float:
        """Smallest gap from arm i to a top-M arm other than i itself."""
        gaps = [self.gap(m, i) for m in range(1, num_users + 1) if self.rank_arm(m) != i]
        return min(gaps, default=math.inf)


def _as_table(gaps) -> GapTable:
    return gaps if isinstance(gaps, GapTable) else GapTable.from_means(gaps)


def _play_term(n: float, gap: float) -> float:
    return 8.0 * math.log(n) / gap ** 2 + PLAY_CONST


def _check(table: GapTable, num_users: int) -> None:
    if not 1 <= num_users <= table.num_arms:
        raise ConfigError(f"need 1 <= M <= N, got M={num_users}, N={table.num_arms}")
    if not table.distinct:
        raise BoundDomainError("bounds with user ranks need distinct means")


def bound_t1_plays(gaps, k: int, i: int, n: float) -> float:
    """Bound on expected plays of a non-target arm i by SL(K) within n slots."""
    table = _as_table(gaps)
    if i in table.optimal_set(k):
        raise BoundDomainError(f"arm {i} holds the rank-{k} mean; its gap is zero")
    return _play_term(n, table.gap(k, i))


def bound_slk_regret(gaps, k: int, n: float) -> float:
    table = _as_table(gaps)
    off = [i for i in range(table.num_arms) if i not in table.optimal_set(k)]
    d = [table.gap(k, i) for i in off]
    return sum(8.0 * math.log(n) / g for g in d) + PLAY_CONST * sum(d)


@dataclass(frozen=True)
class BoundPair:
    tight: float
    loose: float


def bound_dlp(gaps, num_users: int, n: float) -> BoundPair:
    table = _as_table(gaps)
    _check(table, num_users)
    M, N = num_users, table.num_arms
    tight = 0.0
    for m in range(1, M + 1):
        sm = table.rank_arm(m)
        w = float(table.theta[sm])
        tight += sum(_play_term(n, table.gap(m, i)) for i in range(N) if i != sm) * w
        tight += sum(_play_term(n, table.gap(h, sm)) for h in range(1, M + 1) if h != m) * w
    loose = M * (N + M - 2) * _play_term(n, table.delta_min(M)) * table.theta_max
    return BoundPair(tight, loose)


def bound_dlf_naive(gaps, num_users: int, n: float) -> BoundPair:
    """DLP bound at horizon ceil(n/M), once per rotating rank."""
    table = _as_table(gaps)
    per_rank = bound_dlp(table, num_users, math.ceil(n / num_users))
    return BoundPair(num_users * per_rank.tight, num_users * per_rank.loose)


def bound_dlf(gaps, num_users: int, n: float) -> BoundPair:
    table = _as_table(gaps)
    _check(table, num_users)
    M, N = num_users, table.num_arms
    tight = M * sum(_play_term(n, table.delta_min_arm(i, M)) for i in range(N)) * table.theta_max
    tight += M * (M - 1) * sum(_play_term(n, table.delta_min_arm(i, M)) * table.theta[i]
                               for i in table.top_set(M))
    loose = M * (N + M * (M - 1)) * _play_term(n, table.delta_min(M)) * table.theta_max
    return BoundPair(tight, loose)


def dlf_large_n_threshold(gaps, num_users: int) -> float:
    """Constant C such that the large-n DLF bound applies once n / ln n >= C."""
    table = _as_table(gaps)
    _check(table, num_users)
    N, M = table.num_arms, num_users
    return 8.0 * (N + M) / table.delta_min(M) ** 2 + PLAY_CONST * N + M


def in_large_n_regime(gaps, num_users: int, n: float) -> bool:
    return n > 1 and n / math.log(n) >= dlf_large_n_threshold(gaps, num_users)


def bound_dlf_large_n(gaps, num_users: int, n: float) -> BoundPair:
    table = _as_table(gaps)
    if not in_large_n_regime(table, num_users, n):
        raise BoundDomainError(f"n={n} is below the large-n threshold "
                               f"C={dlf_large_n_threshold(table, num_users):.6g}")
    M, N = num_users, table.num_arms
    top = table.top_set(M)
    theta_max = table.theta_max
    tight = M * sum(_play_term(n, table.delta_min_arm(i, M))
                    for i in range(N) if i not in top) * theta_max
    tight += M ** 2 * PLAY_CONST * theta_max
    tight += M * (M - 1) * PLAY_CONST * sum(float(table.theta[i]) for i in top)
    loose = M * (N - M) * _play_term(n, table.delta_min(M)) * theta_max
    loose += M ** 3 * PLAY_CONST * theta_max
    return BoundPair(tight, loose)
