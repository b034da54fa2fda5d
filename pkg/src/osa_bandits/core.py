"""Shared data types, reward sources and seedable random streams."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Uniform draws are generated in fixed-size chunks; chunk c of stream
# (seed, rep, channel) is an independent Philox stream keyed by
# (rep, channel, c), so any slot can be read without replaying the prefix.
CHUNK = 1 << 14


class RewardDomainError(ValueError):
    """An observation fell outside [0, 1]."""


class ConfigError(ValueError):
    """Inconsistent problem dimensions or parameters."""


@dataclass(frozen=True)
class ArmStats:
    mean_estimate: float = 0.0
    count: int = 0


def update_stats(stats: ArmStats, value: float) -> ArmStats:
    """Fold one observation into the running sample mean."""
    if not 0.0 <= value <= 1.0:
        raise RewardDomainError(f"observation {value!r} outside [0, 1]")
    n = stats.count
    return ArmStats((stats.mean_estimate * n + value) / (n + 1), n + 1)


@dataclass(frozen=True)
class RewardSource:
    """Finite-support i.i.d. reward process on [0, 1].

    Draws use inverse-CDF on one uniform per slot, so each (slot, channel)
    consumes exactly one uniform regardless of the distribution.
    """

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.probs) or not self.values:
            raise ValueError("values and probs must be non-empty and aligned")
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise ValueError("support values must lie in [0, 1]")
        if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-9:
            raise ValueError("probs must be a probability vector")

    @classmethod
    def bernoulli(cls, p: float) -> RewardSource:
        # value 1 listed first so that a draw is 1 exactly when u < p
        return cls((1.0, 0.0), (float(p), 1.0 - float(p)))

    @classmethod
    def discrete(cls, values, probs) -> RewardSource:
        return cls(tuple(float(v) for v in values), tuple(float(p) for p in probs))

    @property
    def true_mean(self) -> float:
        return float(sum(v * p for v, p in zip(self.values, self.probs)))

    def from_uniform(self, u):
        cum = np.cumsum(self.probs)
        idx = np.searchsorted(cum, u, side="right")
        idx = np.minimum(idx, len(self.values) - 1)
        return np.asarray(self.values, dtype=np.float64)[idx]


class RngStream:
    """Uniform stream for one (replication, channel) pair.

    ``uniform(t)`` is the draw for slot ``t`` (1-based) and depends only on
    ``(seed, stream_id, t)``.
    """

    def __init__(self, seed: int, stream_id: tuple[int, int]):
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self.stream_id = (int(stream_id[0]), int(stream_id[1]))
        self._cached_chunk = -1
        self._cache = None

    def _chunk(self, c: int) -> np.ndarray:
        if c != self._cached_chunk:
            self._cache = _chunk_draws(self.seed, self.stream_id, c)
            self._cached_chunk = c
        return self._cache

    def uniform(self, t: int) -> float:
        if t < 1:
            raise ValueError("slot index starts at 1")
        c, off = divmod(t - 1, CHUNK)
        return float(self._chunk(c)[off])

    def uniforms(self, t0: int, count: int) -> np.ndarray:
        """Draws for slots ``t0 .. t0 + count - 1``."""
        if t0 < 1:
            raise ValueError("slot index starts at 1")
        out = np.empty(count, dtype=np.float64)
        pos = 0
        while pos < count:
            c, off = divmod(t0 - 1 + pos, CHUNK)
            take = min(CHUNK - off, count - pos)
            out[pos:pos + take] = self._chunk(c)[off:off + take]
            pos += take
        return out


@lru_cache(maxsize=64)
def _chunk_draws(seed: int, stream_id: tuple[int, int], c: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(*stream_id, c))
    draws = np.random.Generator(np.random.Philox(ss)).random(CHUNK)
    draws.setflags(write=False)
    return draws


def sample(source: RewardSource, stream: RngStream, t: int) -> float:
    """Realization of ``source`` at slot ``t``."""
    return float(source.from_uniform(stream.uniform(t)))


def channel_streams(seed: int, replication: int, num_channels: int) -> list[RngStream]:
    return [RngStream(seed, (replication, i)) for i in range(num_channels)]


def realization_matrix(sources, seed: int, replication: int, horizon: int) -> np.ndarray:
    """``horizon x N`` matrix of channel realizations for one replication."""
    out = np.empty((horizon, len(sources)), dtype=np.float64)
    for i, (src, stream) in enumerate(zip(sources, channel_streams(seed, replication, len(sources)))):
        out[:, i] = src.from_uniform(stream.uniforms(1, horizon))
    return out
