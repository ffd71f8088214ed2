"""JSON config files for :class:`ScenarioConfig`.

The document is a flat object mirroring the config fields, with per-tier
overrides nested under ``"tiers"``::

    {
      "external_load": 2,
      "desk_retry_limit": "unlimited",
      "tiers": {"T1": {"desk_reject_prob_baseline": 0.6,
                       "rounds": [[0.0, 0.55], [0.05, 0.5], [0.5, 0.45]]}}
    }

Absent keys keep their baseline defaults. Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path

from .model import ScenarioConfig, Tier, TierParams, default_baseline_config, validate_config

__all__ = [
    "ConfigError",
    "ConfigNotFoundError",
    "ConfigParseError",
    "UnknownConfigKeyError",
    "ConfigValidationError",
    "parse_config",
    "config_from_dict",
    "config_to_dict",
]


class ConfigError(Exception):
    pass


class ConfigNotFoundError(ConfigError, FileNotFoundError):
    pass


class ConfigParseError(ConfigError):
    pass


class UnknownConfigKeyError(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"unknown config key {key!r}")
        self.key = key


class ConfigValidationError(ConfigError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid config: " + "; ".join(self.violations))


_TOP_KEYS = {f.name for f in dataclasses.fields(ScenarioConfig)} - {"tier_params"}
_TIER_KEYS = {f.name for f in dataclasses.fields(TierParams)}


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError([f"{key}: expected a number, got {value!r}"])
    return value


def _integer(key, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigValidationError([f"{key}: expected an integer, got {value!r}"])
    return value


def _top_value(key, value):
    if key == "start_tier":
        try:
            return Tier.parse(value)
        except ValueError as exc:
            raise ConfigValidationError([f"start_tier: {exc}"]) from None
    if key == "t3_review_reject_policy":
        if not isinstance(value, str):
            raise ConfigValidationError([f"{key}: expected a string, got {value!r}"])
        return value
    if key == "desk_retry_limit":
        if value is None or value == "unlimited":
            return None
        return _integer(key, value)
    if key == "horizon_months" and value in ("inf", "infinity"):
        return math.inf
    if key in ("faculty_pool", "master_seed", "t3_review_retry_limit"):
        return _integer(key, value)
    return _number(key, value)


def _tier_params(label, base: TierParams, overrides: dict) -> TierParams:
    if not isinstance(overrides, dict):
        raise ConfigValidationError([f"tiers.{label}: expected an object"])
    changes = {}
    for key, value in overrides.items():
        if key not in _TIER_KEYS:
            raise UnknownConfigKeyError(f"tiers.{label}.{key}")
        if key == "rounds":
            try:
                value = tuple((_number(key, a), _number(key, m)) for a, m in value)
            except (TypeError, ValueError):
                raise ConfigValidationError([f"tiers.{label}.rounds: expected [[accept, major_revision], ...]"]) from None
        elif key == "target_eventual_acceptance" and value is None:
            pass
        else:
            value = _number(f"tiers.{label}.{key}", value)
        changes[key] = value
    return dataclasses.replace(base, **changes)


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Apply a parsed document on top of the baseline config and validate it."""
    if not isinstance(doc, dict):
        raise ConfigParseError("config document must be a JSON object")
    base = default_baseline_config()
    changes = {}
    tiers = dict(base.tier_params)
    for key, value in doc.items():
        if key == "tiers":
            if not isinstance(value, dict):
                raise ConfigValidationError(["tiers: expected an object"])
            for label, overrides in value.items():
                try:
                    tier = Tier.parse(label)
                except ValueError:
                    raise UnknownConfigKeyError(f"tiers.{label}") from None
                tiers[tier] = _tier_params(tier.name, tiers[tier], overrides)
        elif key in _TOP_KEYS:
            changes[key] = _top_value(key, value)
        else:
            raise UnknownConfigKeyError(key)
    config = dataclasses.replace(base, tier_params=tiers, **changes)
    violations = validate_config(config)
    if violations:
        raise ConfigValidationError(violations)
    return config


def parse_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigNotFoundError(f"config file not found: {path}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return config_from_dict(doc)


def config_to_dict(config: ScenarioConfig) -> dict:
    """Inverse of :func:`config_from_dict`; every field is written out."""
    doc = {}
    for f in dataclasses.fields(ScenarioConfig):
        if f.name == "tier_params":
            continue
        value = getattr(config, f.name)
        if f.name == "start_tier":
            value = value.name
        elif f.name == "desk_retry_limit" and value is None:
            value = "unlimited"
        elif isinstance(value, float) and math.isinf(value):
            value = "inf"
        doc[f.name] = value
    doc["tiers"] = {}
    for tier in Tier:
        params = config.tier_params[tier]
        entry = {}
        for f in dataclasses.fields(TierParams):
            value = getattr(params, f.name)
            if f.name == "rounds":
                value = [[r.accept, r.major_revision] for r in value]
            entry[f.name] = value
        doc["tiers"][tier.name] = entry
    return doc
