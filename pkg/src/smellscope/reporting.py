"""Report assembly, rendering (text/json/csv) and corpus aggregation."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from smellscope.catalog import ALL_DETECTORS, DETECTORS, title_of
from smellscope.findings import CATEGORIES, Diagnostic, SmellFinding, sort_findings

SCHEMA_VERSION = 1
FORMATS = ("text", "json", "csv")
CSV_HEADER = [
    "catalog_id", "category", "file", "line_start", "line_end",
    "entity", "measured", "threshold", "severity", "message",
]


class UsageError(Exception):
    """Bad command-line usage, such as an unknown output format."""


def summarize(findings: Iterable[SmellFinding]) -> dict:
    findings = list(findings)
    by_category = Counter(f.category for f in findings)
    by_detector = Counter(f.catalog_id for f in findings)
    return {
        "total": len(findings),
        "by_category": {c: by_category.get(c, 0) for c in CATEGORIES},
        "by_detector": dict(sorted(by_detector.items())),
    }


@dataclass
class AnalysisReport:
    project_root: str
    tool_version: str
    config_digest: str
    findings: list[SmellFinding]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    module_count: int = 0

    def __post_init__(self):
        self.findings = sort_findings(self.findings)
        self.diagnostics = sorted(set(self.diagnostics), key=Diagnostic.sort_key)

    @property
    def summary(self) -> dict:
        return summarize(self.findings)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "project_root": self.project_root,
            "config_digest": self.config_digest,
            "module_count": self.module_count,
            "summary": self.summary,
            "findings": [f.as_dict() for f in self.findings],
            "diagnostics": [d.as_dict() for d in self.diagnostics],
        }


def report_from_dict(data: dict) -> AnalysisReport:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema_version {data.get('schema_version')!r}")
    return AnalysisReport(
        project_root=data["project_root"],
        tool_version=data["tool_version"],
        config_digest=data["config_digest"],
        findings=[SmellFinding(**f) for f in data["findings"]],
        diagnostics=[Diagnostic(**d) for d in data["diagnostics"]],
        module_count=data.get("module_count", 0),
    )


def _render_text(report: AnalysisReport) -> str:
    lines = [f"smellscope {report.tool_version} report for {report.project_root}",
             f"config digest {report.config_digest[:16]}", ""]
    summary = report.summary
    for category in CATEGORIES:
        subset = [f for f in report.findings if f.category == category]
        if not subset:
            continue
        lines.append(f"== {category} smells ({len(subset)}) ==")
        current = None
        for f in subset:
            if f.file != current:
                current = f.file
                lines.append(current)
            span = f"{f.line_start}" if f.line_start == f.line_end else f"{f.line_start}-{f.line_end}"
            lines.append(f"  {span:>9}  {f.catalog_id} [{f.severity}] {f.entity}: {f.message}")
        lines.append("")
    if report.diagnostics:
        lines.append(f"== diagnostics ({len(report.diagnostics)}) ==")
        for d in report.diagnostics:
            lines.append(f"  {d.file}:{d.line} {d.kind}: {d.message}")
        lines.append("")
    by_cat = ", ".join(f"{c}: {summary['by_category'][c]}" for c in CATEGORIES)
    lines.append(f"{summary['total']} smells detected ({by_cat})")
    return "\n".join(lines) + "\n"


def _render_csv(report: AnalysisReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for f in report.findings:
        row = f.as_dict()
        writer.writerow([row[c] for c in CSV_HEADER])
    return buf.getvalue()


def render(report: AnalysisReport, fmt: str) -> bytes:
    if fmt == "json":
        text = json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _render_csv(report)
    elif fmt == "text":
        text = _render_text(report)
    else:
        raise UsageError(f"unknown format {fmt!r}; choose one of {', '.join(FORMATS)}")
    return text.encode("utf-8")


# ---------------------------------------------------------------------------
# Corpus aggregation
# ---------------------------------------------------------------------------


def percent(part: int, whole: int) -> float:
    return round(part * 100.0 / whole, 2) if whole else 0.0


@dataclass
class CorpusSummary:
    total_smells: int
    affected_files: int
    unique_smell_names: int
    project_count: int
    module_count: int
    most_common: list[dict]
    by_category: dict[str, list[dict]]
    category_totals: dict[str, int]
    diagnostics: list[str] = field(default_factory=list)

    def statistics_rows(self) -> list[tuple[str, int]]:
        return [
            ("Total Smells Detected", self.total_smells),
            ("Total Files Affected", self.affected_files),
            ("Unique Smell Names", self.unique_smell_names),
            ("Total Projects", self.project_count),
            ("Total Modules", self.module_count),
        ]

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "summary_statistics": {name: value for name, value in self.statistics_rows()},
            "most_common_smells": self.most_common,
            "category_totals": self.category_totals,
            "distribution_by_category": self.by_category,
            "diagnostics": self.diagnostics,
        }

    def render_json(self) -> bytes:
        return (json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n").encode("utf-8")

    def csv_tables(self) -> dict[str, bytes]:
        """Three CSV tables: summary statistics, most common smells, distribution by category."""
        tables = {}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Metric", "Value"])
        w.writerows(self.statistics_rows())
        tables["summary_statistics.csv"] = buf.getvalue().encode("utf-8")

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Smell Type", "Count", "Percentage"])
        for row in self.most_common:
            w.writerow([row["smell"], row["count"], f"{row['percentage']:.2f}"])
        tables["most_common_smells.csv"] = buf.getvalue().encode("utf-8")

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Category", "Smell Type", "Count", "Percentage"])
        for category in CATEGORIES:
            for row in self.by_category[category]:
                w.writerow([category.capitalize(), row["smell"], row["count"], f"{row['percentage']:.2f}"])
        tables["category_distribution.csv"] = buf.getvalue().encode("utf-8")
        return tables


def _ranked(counts: Counter, whole: int) -> list[dict]:
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        {"catalog_id": cid, "smell": title_of(cid), "count": n, "percentage": percent(n, whole)}
        for cid, n in rows
    ]


def aggregate_corpus(reports: list[AnalysisReport], diagnostics: Iterable[str] = ()) -> CorpusSummary:
    """Corpus totals plus overall and per-category smell distributions."""
    if not reports:
        raise ValueError("aggregate_corpus needs at least one report")
    counts = Counter()
    files = set()
    for r in reports:
        for f in r.findings:
            counts[f.catalog_id] += 1
            files.add((r.project_root, f.file))
    total = sum(counts.values())
    category_totals = {c: 0 for c in CATEGORIES}
    per_category = {c: Counter() for c in CATEGORIES}
    for cid, n in counts.items():
        category = DETECTORS[cid].category
        category_totals[category] += n
        per_category[category][cid] = n
    return CorpusSummary(
        total_smells=total,
        affected_files=len(files),
        unique_smell_names=len(counts),
        project_count=len(reports),
        module_count=sum(r.module_count for r in reports),
        most_common=_ranked(counts, total),
        by_category={c: _ranked(per_category[c], category_totals[c]) for c in CATEGORIES},
        category_totals=category_totals,
        diagnostics=sorted(diagnostics),
    )


def catalog_listing() -> list[tuple[str, str, str]]:
    return [(d.catalog_id, d.category, d.title) for d in ALL_DETECTORS]
