"""Run configuration: defaults, key=value config files, and flag overrides."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .errors import ConfigError

MODES = ("relational", "attributional", "hybrid-add", "hybrid-mul")
TRANSFORMS = ("ppmic", "logentropy")


@dataclass
class Config:
    """Pipeline settings; the defaults are the baseline configuration."""

    corpus_dir: Optional[str] = None
    cache_dir: Optional[str] = None
    k: int = 300
    t: int = 20
    transform: str = "ppmic"
    svd: bool = True
    mode: str = "relational"
    provider: str = "pos"
    seed: int = 0
    pmi_window: int = 10
    m_max: int = 10
    max_phrases_per_pair: Optional[int] = None

    def validate(self) -> "Config":
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"unknown transform {self.transform!r}; "
                              f"expected one of {TRANSFORMS}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.t < 1:
            raise ConfigError(f"t must be >= 1, got {self.t}")
        if self.pmi_window < 1:
            raise ConfigError(f"pmi_window must be >= 1, got {self.pmi_window}")
        if self.m_max < 1:
            raise ConfigError(f"m_max must be >= 1, got {self.m_max}")
        return self

    def needs_corpus(self) -> bool:
        if self.mode in ("relational", "hybrid-add", "hybrid-mul"):
            return True
        return "pmi-ir" in (p.strip() for p in self.provider.split("+"))

    def summary(self) -> dict:
        """Config echo for report sidecars (strings and numbers only)."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value if value is None or isinstance(
                value, (str, int, float, bool)) else str(value)
        return out


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, value: str, target_type):
    value = value.strip()
    if target_type is bool or name == "svd":
        low = value.lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        raise ConfigError(f"config key {name}: expected a boolean, got {value!r}")
    if value.lower() == "none":
        return None
    if target_type is int:
        try:
            return int(value)
        except ValueError as exc:
            raise ConfigError(f"config key {name}: expected an integer, "
                              f"got {value!r}") from exc
    return value


def load_config_file(path: str | Path, base: Optional[Config] = None) -> Config:
    """Apply `key = value` lines (with # comments) on top of a base config."""
    cfg = base or Config()
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config file {p}: {exc}") from exc
    known = {f.name: f for f in fields(Config)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{p}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{p}:{lineno}: unknown config key {key!r}")
        current = getattr(cfg, key)
        target = type(current) if current is not None else (
            int if key in ("k", "t", "seed", "pmi_window", "m_max",
                           "max_phrases_per_pair") else str)
        setattr(cfg, key, _coerce(key, value, target))
    return cfg.validate()
