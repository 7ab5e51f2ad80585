"""Runtime configuration with documented defaults.

Config files are JSON; unknown keys are rejected so typos fail loudly.
Angles are written in degrees in the file and held in radians in memory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError


@dataclass
class PlacementConfig:
    grid_step_m: float = 0.1
    weight_referent_proximity: float = 0.5
    weight_incidence: float = 0.3
    weight_learner_visibility: float = 0.2
    max_incidence_rad: float = math.radians(60.0)
    pan_limits_rad: tuple[float, float] = (-math.pi, math.pi)
    tilt_limits_rad: tuple[float, float] = (-math.pi / 2.0, math.pi / 2.0)


@dataclass
class Config:
    stub_speech_rate_chars_per_sec: float = 5.0
    base_pause_ms: int = 500
    max_gestures_per_segment: int = 1
    # None means unbounded: overruns only warn, the pause still absorbs them.
    max_pause_extension_ms: int | None = None
    sentence_terminators: str = ".!?。！？"
    n_variants: int = 3
    text_gen_client: str = "stub"
    speech_client: str = "stub"
    placement: PlacementConfig = field(default_factory=PlacementConfig)


def _take(raw: dict, key: str, default, where: str, kinds) -> object:
    if key not in raw:
        return default
    value = raw.pop(key)
    if value is None and type(None) in kinds:
        return None
    if isinstance(value, bool) and bool not in kinds:
        raise ConfigError(f"{where}.{key}: unexpected boolean")
    if not isinstance(value, tuple(k for k in kinds if k is not type(None))):
        raise ConfigError(f"{where}.{key}: expected {', '.join(k.__name__ for k in kinds)}")
    return value


def _angle_pair(raw: dict, key: str, default: tuple[float, float], where: str):
    if key not in raw:
        return default
    value = raw.pop(key)
    if (not isinstance(value, list) or len(value) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise ConfigError(f"{where}.{key}: expected [low_deg, high_deg]")
    low, high = math.radians(value[0]), math.radians(value[1])
    if low >= high:
        raise ConfigError(f"{where}.{key}: low must be below high")
    return (low, high)


def _placement_from_dict(raw: dict) -> PlacementConfig:
    cfg = PlacementConfig()
    cfg.grid_step_m = float(_take(raw, "grid_step_m", cfg.grid_step_m, "placement", (int, float)))
    if cfg.grid_step_m <= 0:
        raise ConfigError("placement.grid_step_m: must be positive")
    if "weights" in raw:
        weights = raw.pop("weights")
        if not isinstance(weights, dict):
            raise ConfigError("placement.weights: expected an object")
        cfg.weight_referent_proximity = float(_take(
            weights, "referent_proximity", cfg.weight_referent_proximity,
            "placement.weights", (int, float)))
        cfg.weight_incidence = float(_take(
            weights, "incidence", cfg.weight_incidence, "placement.weights", (int, float)))
        cfg.weight_learner_visibility = float(_take(
            weights, "learner_visibility", cfg.weight_learner_visibility,
            "placement.weights", (int, float)))
        if weights:
            raise ConfigError(f"placement.weights: unknown keys {sorted(weights)}")
    max_incidence_deg = _take(raw, "max_incidence_deg", None, "placement", (int, float, type(None)))
    if max_incidence_deg is not None:
        cfg.max_incidence_rad = math.radians(float(max_incidence_deg))
    cfg.pan_limits_rad = _angle_pair(raw, "pan_limits_deg", cfg.pan_limits_rad, "placement")
    cfg.tilt_limits_rad = _angle_pair(raw, "tilt_limits_deg", cfg.tilt_limits_rad, "placement")
    if raw:
        raise ConfigError(f"placement: unknown keys {sorted(raw)}")
    return cfg


def config_from_dict(raw: dict) -> Config:
    raw = dict(raw)
    cfg = Config()
    cfg.stub_speech_rate_chars_per_sec = float(_take(
        raw, "stub_speech_rate_chars_per_sec", cfg.stub_speech_rate_chars_per_sec,
        "config", (int, float)))
    if cfg.stub_speech_rate_chars_per_sec <= 0:
        raise ConfigError("stub_speech_rate_chars_per_sec: must be positive")
    cfg.base_pause_ms = int(_take(raw, "base_pause_ms", cfg.base_pause_ms, "config", (int,)))
    if cfg.base_pause_ms < 0:
        raise ConfigError("base_pause_ms: must be non-negative")
    cfg.max_gestures_per_segment = int(_take(
        raw, "max_gestures_per_segment", cfg.max_gestures_per_segment, "config", (int,)))
    if cfg.max_gestures_per_segment < 0:
        raise ConfigError("max_gestures_per_segment: must be non-negative")
    cfg.max_pause_extension_ms = _take(
        raw, "max_pause_extension_ms", cfg.max_pause_extension_ms, "config", (int, type(None)))
    cfg.sentence_terminators = str(_take(
        raw, "sentence_terminators", cfg.sentence_terminators, "config", (str,)))
    if not cfg.sentence_terminators:
        raise ConfigError("sentence_terminators: must not be empty")
    cfg.n_variants = int(_take(raw, "n_variants", cfg.n_variants, "config", (int,)))
    if cfg.n_variants < 1:
        raise ConfigError("n_variants: must be at least 1")
    if "clients" in raw:
        clients = raw.pop("clients")
        if not isinstance(clients, dict):
            raise ConfigError("clients: expected an object")
        cfg.text_gen_client = str(_take(clients, "text_gen", cfg.text_gen_client,
                                        "clients", (str,)))
        cfg.speech_client = str(_take(clients, "speech", cfg.speech_client,
                                      "clients", (str,)))
        if clients:
            raise ConfigError(f"clients: unknown keys {sorted(clients)}")
    if "placement" in raw:
        placement = raw.pop("placement")
        if not isinstance(placement, dict):
            raise ConfigError("placement: expected an object")
        cfg.placement = _placement_from_dict(dict(placement))
    if raw:
        raise ConfigError(f"config: unknown keys {sorted(raw)}")
    return cfg


def load_config(path: str | Path | None) -> Config:
    """Load a JSON config file; None gives all defaults."""
    if path is None:
        return Config()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return config_from_dict(raw)
