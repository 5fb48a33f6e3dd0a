"""Engine and service configuration.

Sources merge in precedence order: built-in defaults < config file
(key = value lines) < environment (TEAMREC_<KEY>) < explicit overrides
(CLI flags). Unknown keys in the file are rejected early.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .metrics import MetricWeights

ENV_PREFIX = "TEAMREC_"


@dataclass(frozen=True)
class EngineConfig:
    t_m1: float = 0.8  # string-match threshold
    t_m2: float = 0.7  # taxonomy-match threshold (concept names are short canonical phrases)
    max_teams: int = 10
    max_team_size: int = 5
    size_norm_cap: int = 10  # set-size normalization constant, distinct from max_team_size
    min_depth: int = 1  # ancestor expansion floor: roots never count as overlap
    p_min: float = 0.5
    rng_seed: int = 0
    max_phrase_len: int = 3
    bandit_iterations: int = 10
    bandit_max_depth: int = 3
    bandit_min_leaf: int = 5
    weights: MetricWeights = field(default_factory=MetricWeights)

    def __post_init__(self) -> None:
        if not 0 < self.t_m1 <= 1 or not 0 < self.t_m2 <= 1:
            raise ConfigError(f"thresholds must be in (0, 1]: t_m1={self.t_m1}, t_m2={self.t_m2}")
        if self.max_teams < 1 or self.max_team_size < 2:
            raise ConfigError("max_teams must be >= 1 and max_team_size >= 2")


@dataclass(frozen=True)
class ServiceConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    port: int = 8080
    calls_path: str = ""
    researchers_path: str = ""
    taxonomy_path: str = ""  # empty -> bundled taxonomy
    model_path: str = ""  # empty -> M3 unavailable until trained
    feedback_log: str = "feedback.ndjson"
    recommendations_log: str = "recommendations.ndjson"
    webui_dir: str = ""  # empty -> no static assets mounted
    cors_origins: str = "*"


_ENGINE_KEYS = {f.name for f in fields(EngineConfig)} - {"weights"}
_WEIGHT_KEYS = {f.name for f in fields(MetricWeights)}
_SERVICE_KEYS = {f.name for f in fields(ServiceConfig)} - {"engine"}
_INT_KEYS = {
    "max_teams", "max_team_size", "size_norm_cap", "min_depth", "rng_seed",
    "max_phrase_len", "bandit_iterations", "bandit_max_depth", "bandit_min_leaf", "port",
}
_FLOAT_KEYS = {"t_m1", "t_m2", "p_min"} | _WEIGHT_KEYS


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Parse `key = value` lines; '#' starts a comment; quotes are optional."""
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        values[key] = value
    return values


def _coerce(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from exc
    return raw


def _env_overrides() -> dict[str, str]:
    found = {}
    for key in _ENGINE_KEYS | _WEIGHT_KEYS | _SERVICE_KEYS:
        env_value = os.environ.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            found[key] = env_value
    return found


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ServiceConfig:
    """Build a ServiceConfig from file + environment + explicit overrides."""
    raw: dict[str, str] = {}
    if path is not None:
        raw.update(parse_config_file(path))
    raw.update(_env_overrides())

    merged: dict = {k: _coerce(k, v) for k, v in raw.items()}
    if overrides:
        merged.update(overrides)

    unknown = set(merged) - _ENGINE_KEYS - _WEIGHT_KEYS - _SERVICE_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    weights = MetricWeights(**{k: merged[k] for k in _WEIGHT_KEYS if k in merged})
    engine = EngineConfig(
        weights=weights, **{k: merged[k] for k in _ENGINE_KEYS if k in merged}
    )
    return ServiceConfig(
        engine=engine, **{k: merged[k] for k in _SERVICE_KEYS if k in merged}
    )


def with_engine(config: ServiceConfig, **engine_overrides) -> ServiceConfig:
    return replace(config, engine=replace(config.engine, **engine_overrides))
