"""Engine configuration.

Config files are flat ``key = value`` lines with dotted keys and ``#``
comments. Environment variables override file values with the prefix
``MORAG_`` and dots mapped to underscores (``MORAG_LOSS_TAU`` overrides
``loss.tau``). Unknown keys are rejected. Referenced paths are validated by
the commands that consume them, not at load time, so a config may name
artifacts that are about to be built.
"""

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .contrastive.losses import LossWeights
from .errors import ConfigError
from .metrics.suite import DEFAULT_PAIRS, DEFAULT_POOL_SIZE, DEFAULT_SUBSET_SIZE
from .prompts.client import DEFAULT_MAX_TOKENS
from .skeleton import DEFAULT_CONTACT_THRESHOLD

ENV_PREFIX = "MORAG_"


@dataclass
class LlmSettings:
    endpoint: str = ""
    model: str = ""
    max_tokens: int = DEFAULT_MAX_TOKENS
    cache: str = ""
    retries: int = 2


@dataclass
class ComposeOptions:
    k: int = 3
    trim: str = "prefix"


@dataclass
class MetricOptions:
    seed: int = 0
    subset_size: int = DEFAULT_SUBSET_SIZE
    pool_size: int = DEFAULT_POOL_SIZE
    mm_pairs: int = DEFAULT_PAIRS


@dataclass
class EngineConfig:
    db_paths: dict = field(default_factory=dict)  # part -> path
    llm: LlmSettings = field(default_factory=LlmSettings)
    loss: LossWeights = field(default_factory=LossWeights)
    compose: ComposeOptions = field(default_factory=ComposeOptions)
    metrics: MetricOptions = field(default_factory=MetricOptions)
    partition_override: dict = field(default_factory=dict)  # part -> joint list
    embeddings_lookup: str = ""
    embeddings_endpoint: str = ""
    contact_threshold: float = DEFAULT_CONTACT_THRESHOLD
    service_url: str = ""

    def validate(self) -> "EngineConfig":
        if self.compose.k < 1:
            raise ConfigError(f"compose.k must be >= 1, got {self.compose.k}")
        if self.compose.trim not in ("prefix", "center"):
            raise ConfigError(f"compose.trim must be prefix or center, got {self.compose.trim!r}")
        if self.llm.max_tokens < 1:
            raise ConfigError(f"llm.max_tokens must be >= 1, got {self.llm.max_tokens}")
        if self.llm.retries < 0:
            raise ConfigError(f"llm.retries must be >= 0, got {self.llm.retries}")
        if self.metrics.subset_size < 1 or self.metrics.pool_size < 2 or self.metrics.mm_pairs < 1:
            raise ConfigError("metric sizes must be positive (pool_size >= 2)")
        if self.contact_threshold <= 0:
            raise ConfigError("motion.contact_threshold must be positive")
        return self


def _parse_int(key, value):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected integer, got {value!r}") from None


def _parse_float(key, value):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected number, got {value!r}") from None


def _parse_joints(key, value):
    try:
        return [int(v) for v in value.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"{key}: expected joint index list, got {value!r}") from None


def _setter(section: str, attr: str, parser=None):
    def apply(cfg: EngineConfig, key: str, value: str):
        parsed = parser(key, value) if parser else value
        setattr(getattr(cfg, section), attr, parsed)

    return apply


def _loss_setter(attr: str):
    def apply(cfg: EngineConfig, key: str, value: str):
        current = {f.name: getattr(cfg.loss, f.name) for f in fields(LossWeights)}
        current[attr] = _parse_float(key, value)
        cfg.loss = LossWeights(**current)

    return apply


_KEYS = {
    "db.torso": lambda cfg, k, v: cfg.db_paths.__setitem__("torso", v),
    "db.hands": lambda cfg, k, v: cfg.db_paths.__setitem__("hands", v),
    "db.legs": lambda cfg, k, v: cfg.db_paths.__setitem__("legs", v),
    "llm.endpoint": _setter("llm", "endpoint"),
    "llm.model": _setter("llm", "model"),
    "llm.max_tokens": _setter("llm", "max_tokens", _parse_int),
    "llm.cache": _setter("llm", "cache"),
    "llm.retries": _setter("llm", "retries", _parse_int),
    "loss.tau": _loss_setter("tau"),
    "loss.lambda_nce": _loss_setter("lambda_nce"),
    "loss.lambda_kl": _loss_setter("lambda_kl"),
    "loss.lambda_e": _loss_setter("lambda_e"),
    "loss.filter_threshold": _loss_setter("filter_threshold"),
    "compose.k": _setter("compose", "k", _parse_int),
    "compose.trim": _setter("compose", "trim"),
    "metrics.seed": _setter("metrics", "seed", _parse_int),
    "metrics.subset_size": _setter("metrics", "subset_size", _parse_int),
    "metrics.pool_size": _setter("metrics", "pool_size", _parse_int),
    "metrics.mm_pairs": _setter("metrics", "mm_pairs", _parse_int),
    "partition.torso": lambda cfg, k, v: cfg.partition_override.__setitem__("torso", _parse_joints(k, v)),
    "partition.hands": lambda cfg, k, v: cfg.partition_override.__setitem__("hands", _parse_joints(k, v)),
    "partition.legs": lambda cfg, k, v: cfg.partition_override.__setitem__("legs", _parse_joints(k, v)),
    "embeddings.lookup": lambda cfg, k, v: setattr(cfg, "embeddings_lookup", v),
    "embeddings.endpoint": lambda cfg, k, v: setattr(cfg, "embeddings_endpoint", v),
    "motion.contact_threshold": lambda cfg, k, v: setattr(cfg, "contact_threshold", _parse_float(k, v)),
    "service.url": lambda cfg, k, v: setattr(cfg, "service_url", v),
}

KNOWN_KEYS = tuple(sorted(_KEYS))


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _env_overrides() -> dict:
    overrides = {}
    for key in _KEYS:
        env_name = ENV_PREFIX + key.replace(".", "_").upper()
        if env_name in os.environ:
            overrides[key] = os.environ[env_name]
    return overrides


def load_config(path=None, overrides: dict | None = None) -> EngineConfig:
    """Build a validated config from an optional file, env, and overrides."""
    values: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            from .errors import IoError

            raise IoError(f"config file not found: {path}")
        values.update(parse_config_text(p.read_text(encoding="utf-8"), str(path)))
    values.update(_env_overrides())
    values.update(overrides or {})

    cfg = EngineConfig()
    for key, value in values.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        _KEYS[key](cfg, key, value)
    return cfg.validate()
