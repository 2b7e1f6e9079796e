"""Run configuration: one flat dataclass, a key=value file format, and
converters into the per-module config objects.

The file format is deliberately plain so a run can be reproduced from
the echoed copy alone: one ``key = value`` per line, ``#`` comments,
booleans as ``true``/``false``.  Unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Dict, Mapping

from .enhance import INNER_APPROACHES, EnhanceConfig
from .geometry import HullConfig
from .sugiyama import LayoutConfig


class ConfigError(ValueError):
    """Raised for unreadable or out-of-range configuration input."""


@dataclass(frozen=True)
class RunConfig:
    """Every knob of the layout, enhancement, and evaluation stages."""

    # layout
    horizontal_spacing: float = 80.0
    vertical_spacing: float = 200.0
    barycenter_sweeps: int = 8
    # hull
    ray_spacing: float = 20.0
    concavity: float = 0.80
    enclosure: float = 0.10
    # enhancement
    outer_adaption: float = 80.0
    inner_adaption: float = 160.0
    hausdorff_threshold: float = 0.15
    whitespace_threshold: float = 0.05
    aesthetics_tolerance: float = 0.10
    crossing_tolerance: int = 24
    max_iterations: int = 10
    inner_approach: str = "ws3"
    circle_precision: float = 0.5
    # evaluation corpus
    seed: int = 0
    base_count: int = 10
    base_nodes: int = 21
    base_edges: int = 61
    multi_cap: int = 200

    def validate(self) -> "RunConfig":
        positive = ("horizontal_spacing", "vertical_spacing", "ray_spacing",
                    "outer_adaption", "inner_adaption", "circle_precision")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("concavity", "enclosure", "aesthetics_tolerance"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.hausdorff_threshold < 0 or self.whitespace_threshold < 0:
            raise ConfigError("thresholds must be non-negative")
        if self.crossing_tolerance < 0:
            raise ConfigError("crossing_tolerance must be non-negative")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.inner_approach not in INNER_APPROACHES:
            raise ConfigError(
                f"inner_approach must be one of {', '.join(INNER_APPROACHES)}")
        if self.barycenter_sweeps < 0:
            raise ConfigError("barycenter_sweeps must be non-negative")
        for name in ("base_count", "base_nodes", "multi_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        if self.base_edges < 0:
            raise ConfigError("base_edges must be non-negative")
        return self

    def to_layout_config(self) -> LayoutConfig:
        return LayoutConfig(horizontal_spacing=self.horizontal_spacing,
                            vertical_spacing=self.vertical_spacing,
                            barycenter_sweeps=self.barycenter_sweeps)

    def to_hull_config(self) -> HullConfig:
        return HullConfig(ray_spacing=self.ray_spacing,
                          concavity=self.concavity,
                          enclosure=self.enclosure,
                          horizontal_spacing=self.horizontal_spacing)

    def to_enhance_config(self) -> EnhanceConfig:
        return EnhanceConfig(layout=self.to_layout_config(),
                             hull=self.to_hull_config(),
                             outer_adaption=self.outer_adaption,
                             inner_adaption=self.inner_adaption,
                             hausdorff_threshold=self.hausdorff_threshold,
                             whitespace_threshold=self.whitespace_threshold,
                             aesthetics_tolerance=self.aesthetics_tolerance,
                             crossing_tolerance=self.crossing_tolerance,
                             max_iterations=self.max_iterations,
                             inner_approach=self.inner_approach,
                             circle_precision=self.circle_precision)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "bool":
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines into a validated RunConfig."""
    values: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = body.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw)
    return RunConfig(**values).validate()


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def format_config(config: RunConfig) -> str:
    """Round-trippable echo of every setting, one per line."""
    lines = []
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def resolve(config: RunConfig, overrides: Mapping[str, object]) -> RunConfig:
    """Apply non-None overrides (CLI flags) on top of a config."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(changes) - set(_FIELD_TYPES)
    if unknown:
        raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")
    return replace(config, **changes).validate() if changes else config.validate()
