"""Finding and diagnostic records shared by every detector bank."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

CATEGORIES = ("code", "structural", "architectural")
SEVERITIES = ("low", "medium", "high")
SEVERITY_RANK = {name: rank for rank, name in enumerate(SEVERITIES)}

Measured = Union[int, float, str]


@dataclass(frozen=True)
class SmellFinding:
    catalog_id: str
    category: str
    file: str
    line_start: int
    line_end: int
    entity: str
    measured: Measured
    threshold: Union[int, float, str]  # "n/a" for rule-based detectors
    severity: str
    message: str

    def sort_key(self) -> tuple:
        return (
            self.file,
            self.line_start,
            self.catalog_id,
            self.line_end,
            self.entity,
            self.message,
        )

    def as_dict(self) -> dict:
        return {
            "catalog_id": self.catalog_id,
            "category": self.category,
            "file": self.file,
            "line_start": self.line_start,
            "line_end": self.line_end,
            "entity": self.entity,
            "measured": self.measured,
            "threshold": self.threshold,
            "severity": self.severity,
            "message": self.message,
        }


@dataclass(frozen=True)
class Diagnostic:
    """A non-smell event worth surfacing: parse failures, truncations, etc."""

    kind: str
    file: str
    line: int
    message: str

    def sort_key(self) -> tuple:
        return (self.kind, self.file, self.line, self.message)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "file": self.file, "line": self.line, "message": self.message}


def sort_findings(findings) -> list[SmellFinding]:
    return sorted(findings, key=SmellFinding.sort_key)
