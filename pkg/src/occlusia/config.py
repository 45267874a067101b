"""Tracker configuration.

Settings are grouped per subsystem and addressed with dotted keys such as
``kf.sigma_measure`` or ``assoc.gate``.  Config files hold one ``key = value``
pair per line; ``#`` starts a comment.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

ENV_VAR = "OCCLUSIA_CONFIG"


@dataclass
class KalmanConfig:
    sigma_process_pos: float = 1.0
    sigma_process_size: float = 0.5
    sigma_measure: float = 2.0
    init_var_pos: float = 10.0
    init_var_vel: float = 100.0


@dataclass
class AppearanceConfig:
    bins: int = 8
    ms_max_iters: int = 20
    ms_epsilon: float = 0.5
    ratio_threshold: float = 0.8
    grid_cells: int = 4
    orient_bins: int = 8
    # each grid cell is split into sub_cells x sub_cells orientation histograms
    sub_cells: int = 2
    patch_size: int = 64
    min_patch: int = 16


@dataclass
class AssociationConfig:
    alpha1: float = 0.5
    alpha2: float = 0.5
    gate: float = 0.1
    solver: str = "bip"


@dataclass
class OcclusionConfig:
    enabled: bool = True
    min_overlap_area: float = 0.0


@dataclass
class PipelineConfig:
    t_max: int = 15
    hist_blend: float = 0.1
    min_hits: int = 1
    ms_fuse_threshold: float = 0.5


@dataclass
class EvalConfig:
    iou_threshold: float = 0.5


_SECTIONS = {
    "kf": "kf",
    "app": "app",
    "assoc": "assoc",
    "occ": "occ",
    "pipe": "pipe",
    "eval": "eval",
}


@dataclass
class Config:
    kf: KalmanConfig = field(default_factory=KalmanConfig)
    app: AppearanceConfig = field(default_factory=AppearanceConfig)
    assoc: AssociationConfig = field(default_factory=AssociationConfig)
    occ: OcclusionConfig = field(default_factory=OcclusionConfig)
    pipe: PipelineConfig = field(default_factory=PipelineConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)

    def set(self, key: str, value) -> None:
        """Set a dotted key, coercing strings to the field's type."""
        try:
            section_name, name = key.split(".", 1)
        except ValueError:
            raise ConfigError(f"config key must look like 'section.name': {key!r}") from None
        if section_name not in _SECTIONS:
            raise ConfigError(f"unknown config section in {key!r}")
        section = getattr(self, section_name)
        fields = {f.name: f for f in dataclasses.fields(section)}
        if name not in fields:
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(section, name)
        setattr(section, name, _coerce(key, value, type(current)))
        if key == "assoc.solver" and section.solver not in ("bip", "hungarian"):
            raise ConfigError(f"assoc.solver must be 'bip' or 'hungarian', got {section.solver!r}")

    def get(self, key: str):
        section_name, name = key.split(".", 1)
        return getattr(getattr(self, section_name), name)

    def items(self):
        for section_name in _SECTIONS:
            section = getattr(self, section_name)
            for f in dataclasses.fields(section):
                yield f"{section_name}.{f.name}", getattr(section, f.name)

    def copy(self) -> "Config":
        return dataclasses.replace(
            self,
            **{name: dataclasses.replace(getattr(self, name)) for name in _SECTIONS},
        )

    def updated(self, **overrides) -> "Config":
        """Return a copy with dotted-key overrides; use ``__`` for the dot.

        >>> Config().updated(occ__enabled=False).occ.enabled
        False
        """
        cfg = self.copy()
        for key, value in overrides.items():
            cfg.set(key.replace("__", "."), value)
        return cfg

    @classmethod
    def from_mapping(cls, mapping) -> "Config":
        cfg = cls()
        for key, value in mapping.items():
            cfg.set(key, value)
        return cfg


def _coerce(key, value, kind):
    if isinstance(value, kind) and not (kind is int and isinstance(value, bool)):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            if kind is bool:
                lowered = text.lower()
                if lowered in ("1", "true", "yes", "on"):
                    return True
                if lowered in ("0", "false", "no", "off"):
                    return False
                raise ValueError(text)
            if kind is int:
                return int(text)
            if kind is float:
                return float(text)
            return text
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}") from None
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    raise ConfigError(f"bad value for {key}: {value!r}")


def parse_config(text: str) -> Config:
    cfg = Config()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        try:
            cfg.set(key.strip(), value.strip())
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return cfg


def load_config(path=None) -> Config:
    """Load a config file; fall back to ``$OCCLUSIA_CONFIG``, then defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return Config()
    return parse_config(Path(path).read_text())
