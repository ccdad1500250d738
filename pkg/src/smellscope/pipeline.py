"""End-to-end analysis: discovery through the three detector banks."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Optional

from smellscope import __version__
from smellscope.config import ThresholdConfig
from smellscope.context import ProjectContext
from smellscope.detectors.architectural import detect_architectural
from smellscope.detectors.code import detect_code_smells
from smellscope.detectors.structural import detect_structural
from smellscope.findings import CATEGORIES
from smellscope.graph import build_graph
from smellscope.metrics import build_hierarchy, compute_metrics
from smellscope.reporting import AnalysisReport, aggregate_corpus, CorpusSummary
from smellscope.source import (
    InputError,
    discover_project,
    extract_entities,
    import_diagnostics,
    parse_diagnostics,
    resolve_imports,
)
from smellscope.stdlib_names import STDLIB_NAMES

log = logging.getLogger(__name__)

BANKS = {
    "code": detect_code_smells,
    "structural": detect_structural,
    "architectural": detect_architectural,
}


class AnalysisError(Exception):
    """A project could not be analyzed at all."""


def build_context(root, config: ThresholdConfig, jobs: int = 1) -> ProjectContext:
    modules = discover_project(root, config.excludes, jobs=jobs)
    entities = [e for m in modules for e in extract_entities(m)]
    stdlib = config.stdlib_override if config.stdlib_override is not None else STDLIB_NAMES
    records = resolve_imports(modules, stdlib)
    graph = build_graph(records, modules)
    hierarchy = build_hierarchy(entities, records)
    metrics = compute_metrics(modules, entities, records, hierarchy)
    diagnostics = parse_diagnostics(modules) + import_diagnostics(records, modules)
    diagnostics += graph.diagnostics + hierarchy.diagnostics
    return ProjectContext(
        modules=modules,
        entities=entities,
        records=records,
        graph=graph,
        metrics=metrics,
        hierarchy=hierarchy,
        config=config,
        diagnostics=diagnostics,
    )


def analyze_project(
    root,
    config: ThresholdConfig,
    only: Optional[Iterable[str]] = None,
    jobs: int = 1,
) -> AnalysisReport:
    """Run the selected banks (all by default) over one project tree."""
    return report_for(build_context(root, config, jobs), root, only)


def report_for(ctx: ProjectContext, root, only: Optional[Iterable[str]] = None) -> AnalysisReport:
    selected = set(only or CATEGORIES)
    unknown = selected - set(CATEGORIES)
    if unknown:
        raise ValueError(f"unknown detector bank(s): {', '.join(sorted(unknown))}")
    config = ctx.config
    findings = []
    for category in CATEGORIES:
        if category in selected:
            findings.extend(BANKS[category](ctx))
    return AnalysisReport(
        project_root=Path(root).resolve().as_posix(),
        tool_version=__version__,
        config_digest=config.digest(),
        findings=findings,
        diagnostics=ctx.diagnostics,
        module_count=len(ctx.modules),
    )


def corpus_projects(corpus_root) -> list[Path]:
    root = Path(corpus_root)
    if not root.is_dir():
        raise InputError(f"corpus root does not exist or is not a directory: {root}")
    projects = sorted(p for p in root.iterdir() if p.is_dir() and not p.is_symlink() and not p.name.startswith("."))
    if not projects:
        raise InputError(f"corpus root {root} contains no project directories")
    return projects


def analyze_corpus(
    corpus_root,
    config: ThresholdConfig,
    jobs: int = 1,
) -> tuple[dict[str, AnalysisReport], CorpusSummary]:
    """Analyze each project subdirectory; failed projects are skipped and noted."""
    reports: dict[str, AnalysisReport] = {}
    failures = []
    for project in corpus_projects(corpus_root):
        try:
            ctx = build_context(project, config, jobs)
            if not ctx.ok_modules:
                raise AnalysisError("no parseable Python modules")
            report = report_for(ctx, project)
        except Exception as exc:  # one broken project must not stop the batch
            log.warning("skipping project %s: %s", project.name, exc)
            failures.append(f"{project.name}: analysis failed: {exc}")
            continue
        reports[project.name] = report
    if not reports:
        raise AnalysisError("no project in the corpus could be analyzed; " + "; ".join(failures))
    summary = aggregate_corpus(list(reports.values()), failures)
    return reports, summary

