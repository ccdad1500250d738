"""YAML threshold configuration: defaults, user file merge, overrides, validation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

import yaml

from smellscope.catalog import DETECTORS, KEY_OWNERS, RULE_KEYS, SECTION_FOR_CATEGORY
from smellscope.findings import SEVERITIES

SECTIONS = tuple(SECTION_FOR_CATEGORY.values())
LIST_FIELDS = ("excludes", "name_whitelist")
TOP_LEVEL = SECTIONS + LIST_FIELDS + ("stdlib_override",)
ENTRY_FIELDS = ("value", "enabled", "severity")

Number = Union[int, float]


class ConfigError(Exception):
    """Invalid or unreadable configuration."""


@dataclass(frozen=True)
class Setting:
    value: Optional[Number]
    enabled: bool = True
    severity: str = "medium"

    def as_dict(self) -> dict:
        return {"value": self.value, "enabled": self.enabled, "severity": self.severity}


@dataclass(frozen=True)
class ThresholdConfig:
    code_smells: dict[str, Setting]
    structural_smells: dict[str, Setting]
    architectural_smells: dict[str, Setting]
    excludes: tuple[str, ...] = ()
    stdlib_override: Optional[tuple[str, ...]] = None
    name_whitelist: tuple[str, ...] = field(default=())

    def section(self, name: str) -> dict[str, Setting]:
        return getattr(self, name)

    def setting(self, key: str) -> Setting:
        section, _ = KEY_OWNERS[key]
        return self.section(section)[key]

    def value(self, key: str) -> Number:
        return self.setting(key).value

    def enabled(self, catalog_id: str) -> bool:
        return self.setting(DETECTORS[catalog_id].primary_key).enabled

    def severity(self, catalog_id: str) -> str:
        return self.setting(DETECTORS[catalog_id].primary_key).severity

    def as_dict(self) -> dict:
        out = {s: {k: v.as_dict() for k, v in sorted(self.section(s).items())} for s in SECTIONS}
        out["excludes"] = list(self.excludes)
        out["stdlib_override"] = list(self.stdlib_override) if self.stdlib_override is not None else None
        out["name_whitelist"] = list(self.name_whitelist)
        return out

    def digest(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def dump(self) -> str:
        return yaml.safe_dump(self.as_dict(), sort_keys=False, default_flow_style=False)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _validate_entry(section: str, key: str, raw, base: Setting) -> Setting:
    where = f"{section}.{key}"
    if not isinstance(raw, dict):
        raw = {"value": raw}
    for name in raw:
        if name not in ENTRY_FIELDS:
            raise ConfigError(f"unknown field '{name}' at {where}")
    value = raw.get("value", base.value)
    if key in RULE_KEYS:
        if value is not None:
            raise ConfigError(f"{where}.value: {key} is rule-based and takes no value")
    elif not _is_number(value) or value < 0:
        raise ConfigError(f"{where}.value: expected a non-negative number, got {value!r}")
    enabled = raw.get("enabled", base.enabled)
    if not isinstance(enabled, bool):
        raise ConfigError(f"{where}.enabled: expected true or false, got {enabled!r}")
    severity = raw.get("severity", base.severity)
    if severity not in SEVERITIES:
        raise ConfigError(f"{where}.severity: expected one of {', '.join(SEVERITIES)}, got {severity!r}")
    return Setting(value=value, enabled=enabled, severity=severity)


def _string_list(raw, where: str) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ConfigError(f"{where}: expected a list of strings")
    return tuple(raw)


def merge(config: Optional[ThresholdConfig], document: dict, origin: str = "config") -> ThresholdConfig:
    """Overlay a parsed YAML document on ``config`` key by key."""
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigError(f"{origin}: top level must be a mapping")
    for name in document:
        if name not in TOP_LEVEL:
            if name in KEY_OWNERS:
                raise ConfigError(f"{origin}: threshold key '{name}' must be nested under '{KEY_OWNERS[name][0]}'")
            raise ConfigError(f"{origin}: unknown section '{name}'")
    sections = {s: dict(config.section(s)) if config else {} for s in SECTIONS}
    for section in SECTIONS:
        entries = document.get(section)
        if entries is None:
            continue
        if not isinstance(entries, dict):
            raise ConfigError(f"{origin}: '{section}' must be a mapping of threshold keys")
        for key, raw in entries.items():
            owner = KEY_OWNERS.get(key)
            if owner is None or owner[0] != section:
                raise ConfigError(f"{origin}: unknown threshold key '{key}' in {section}")
            base = sections[section].get(key, Setting(value=None))
            sections[section][key] = _validate_entry(section, key, raw, base)
    excludes = config.excludes if config else ()
    whitelist = config.name_whitelist if config else ()
    stdlib = config.stdlib_override if config else None
    if "excludes" in document:
        excludes = _string_list(document["excludes"] or [], "excludes")
    if "name_whitelist" in document:
        whitelist = _string_list(document["name_whitelist"] or [], "name_whitelist")
    if "stdlib_override" in document:
        raw = document["stdlib_override"]
        stdlib = None if raw is None else _string_list(raw, "stdlib_override")
    return ThresholdConfig(
        code_smells=sections["code_smells"],
        structural_smells=sections["structural_smells"],
        architectural_smells=sections["architectural_smells"],
        excludes=excludes,
        stdlib_override=stdlib,
        name_whitelist=whitelist,
    )


def default_config() -> ThresholdConfig:
    text = resources.files("smellscope").joinpath("default_config.yaml").read_text(encoding="utf-8")
    config = merge(None, yaml.safe_load(text), origin="default_config.yaml")
    missing = sorted(set(KEY_OWNERS) - {k for s in SECTIONS for k in config.section(s)})
    if missing:
        raise ConfigError(f"default configuration lacks keys: {', '.join(missing)}")
    return config


def apply_override(config: ThresholdConfig, assignment: str) -> ThresholdConfig:
    """Apply ``KEY=VALUE`` or ``KEY.enabled=false`` / ``KEY.severity=high``.

    ``KEY`` is a threshold key or a detector id.
    """
    if "=" not in assignment:
        raise ConfigError(f"--set expects KEY=VALUE, got {assignment!r}")
    lhs, rhs = assignment.split("=", 1)
    key, _, fieldname = lhs.strip().partition(".")
    fieldname = fieldname or "value"
    if key not in KEY_OWNERS and key in DETECTORS:
        key = DETECTORS[key].primary_key  # a detector id addresses its first key
    if key not in KEY_OWNERS:
        raise ConfigError(f"--set: unknown threshold key '{key}'")
    if fieldname not in ENTRY_FIELDS:
        raise ConfigError(f"--set: unknown field '{fieldname}' for {key}")
    try:
        parsed = yaml.safe_load(rhs) if rhs.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"--set {lhs}: cannot parse value {rhs!r}") from exc
    section, _ = KEY_OWNERS[key]
    return merge(config, {section: {key: {fieldname: parsed}}}, origin="--set")


def load_config(path=None, overrides: Iterable[str] = ()) -> ThresholdConfig:
    """Defaults, then the YAML file at ``path`` (if any), then ``--set`` overrides."""
    config = default_config()
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            document = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
        config = merge(config, document, origin=str(path))
    for assignment in overrides:
        config = apply_override(config, assignment)
    return config


def scaled(config: ThresholdConfig, factor: float) -> ThresholdConfig:
    """Copy of ``config`` with every numeric threshold multiplied by ``factor``."""
    sections = {}
    for s in SECTIONS:
        sections[s] = {
            k: v if v.value is None else replace(v, value=type(v.value)(v.value * factor))
            for k, v in config.section(s).items()
        }
    return replace(config, **sections)
