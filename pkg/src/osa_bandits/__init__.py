"""Decentralized bandit learning for opportunistic spectrum access."""

from .bounds import (GapTable, bound_dlf, bound_dlf_large_n, bound_dlf_naive, bound_dlp,
                     bound_slk_regret, bound_t1_plays, dlf_large_n_threshold)
from .core import ArmStats, ConfigError, RewardSource, RngStream, sample, update_stats
from .env import ChannelEnvironment, CollisionModel, RegretSeries, SlotOutcome, genie_reward
from .harness import (AggregateResult, ExperimentConfig, compare_policies, emit_csv,
                      overlay_bounds, run_experiment)
from .policies import Agent, PolicyKind, dlf_priority, dlp_init_arm, lcb_index, slk_select, ucb_index

__version__ = "0.1.0"
