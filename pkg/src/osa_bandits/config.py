"""Flat ``key = value`` experiment files.

Grammar, one entry per line::

    # comment (also allowed after a value)
    theta = 0.9, 0.8, 0.7      # comma or whitespace separated; repeated lines append
    theta = 0.6 0.5
    M = 3                      # alias: num_users
    N = 5                      # optional, must equal len(theta)
    policy = dlf               # dlp | dlf | dlf-naive | ucb1 | slk
    collision_model = M2       # M1 | M2
    horizon = 100000
    replications = 50
    base_seed = 12345
    log_all = false
    target_rank = 2            # slk only

Keys are case-insensitive; unknown keys are rejected.
"""

from __future__ import annotations

import re
from pathlib import Path

from .core import ConfigError
from .harness import ExperimentConfig

_ALIASES = {
    "m": "num_users", "num_users": "num_users", "users": "num_users",
    "n": "num_arms", "num_arms": "num_arms", "arms": "num_arms",
    "theta": "theta", "policy": "policy", "collision_model": "collision_model",
    "collision": "collision_model", "horizon": "horizon", "replications": "replications",
    "reps": "replications", "base_seed": "base_seed", "seed": "base_seed",
    "log_all": "log_all", "target_rank": "target_rank", "k": "target_rank",
}
_INT_KEYS = {"num_users", "num_arms", "horizon", "replications", "base_seed", "target_rank"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_config(text: str, source: str = "<config>") -> dict:
    values: dict = {}
    theta: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        name = _ALIASES.get(key.lower())
        if name is None:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            if name == "theta":
                theta.extend(float(v) for v in re.split(r"[,\s]+", value) if v)
            elif name in _INT_KEYS:
                values[name] = int(float(value)) if "e" in value.lower() else int(value)
            elif name == "log_all":
                if value.lower() not in _TRUE | _FALSE:
                    raise ValueError(value)
                values[name] = value.lower() in _TRUE
            else:
                values[name] = value
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from None
    if theta:
        values["theta"] = tuple(theta)
    return values


def build_config(values: dict, **overrides) -> ExperimentConfig:
    values = {**values, **{k: v for k, v in overrides.items() if v is not None}}
    if "theta" not in values:
        raise ConfigError("config must list theta")
    if "num_users" not in values:
        raise ConfigError("config must set M")
    n = values.pop("num_arms", None)
    if n is not None and n != len(values["theta"]):
        raise ConfigError(f"N={n} but theta has {len(values['theta'])} entries")
    return ExperimentConfig(**values)


def load_config(path, **overrides) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_config(parse_config(text, str(path)), **overrides)
