"""Project-wide index shared by the detector banks."""

from __future__ import annotations

import ast
import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from smellscope.catalog import DETECTORS
from smellscope.config import ThresholdConfig
from smellscope.findings import Diagnostic, SmellFinding
from smellscope.graph import DependencyGraph
from smellscope.metrics import ClassHierarchy, MetricVector, methods_by_class
from smellscope.source import Entity, ImportRecord, SourceModule


@dataclass
class ProjectContext:
    modules: list[SourceModule]
    entities: list[Entity]
    records: list[ImportRecord]
    graph: DependencyGraph
    metrics: dict[str, MetricVector]
    hierarchy: ClassHierarchy
    config: ThresholdConfig
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @cached_property
    def ok_modules(self) -> list[SourceModule]:
        return [m for m in self.modules if m.parse_ok]

    @cached_property
    def module_by_name(self) -> dict[str, SourceModule]:
        return {m.module_name: m for m in self.modules}

    @cached_property
    def entities_by_module(self) -> dict[str, list[Entity]]:
        out = defaultdict(list)
        for e in self.entities:
            out[e.module].append(e)
        return dict(out)

    @cached_property
    def methods(self) -> dict[tuple[str, str], list[Entity]]:
        return methods_by_class(self.entities)

    @cached_property
    def records_by_module(self) -> dict[str, list[ImportRecord]]:
        out = defaultdict(list)
        for r in self.records:
            out[r.importer].append(r)
        return dict(out)

    @cached_property
    def class_by_name(self) -> dict[tuple[str, str], Entity]:
        return {(e.module, e.qualified_name): e for e in self.entities if e.kind == "class"}

    def methods_of(self, cls: Entity) -> list[Entity]:
        return self.methods.get((cls.module, cls.qualified_name), [])

    def external_aliases(self, module_name: str) -> dict[str, ImportRecord]:
        """Local names bound to stdlib or third-party imports in a module."""
        return {
            r.alias: r
            for r in self.records_by_module.get(module_name, [])
            if r.kind in ("stdlib", "third_party") and r.alias != "*"
        }

    @cached_property
    def referenced_names(self) -> dict[str, set[str]]:
        """Per module: every Name/attribute identifier read, plus ``__all__`` strings."""
        out = {}
        for m in self.ok_modules:
            names = set()
            for n in ast.walk(m.tree):
                if isinstance(n, ast.Name) and not isinstance(n.ctx, ast.Store):
                    names.add(n.id)
                elif isinstance(n, ast.Attribute):
                    names.add(n.attr)
            names |= set(dunder_all(m.tree))
            out[m.module_name] = names
        return out

    @cached_property
    def _spans(self) -> dict[str, tuple[list[int], list[Entity]]]:
        out = {}
        for module, ents in self.entities_by_module.items():
            scoped = sorted((e for e in ents if e.kind != "module"), key=lambda e: (e.line_start, -e.line_end))
            out[module] = ([e.line_start for e in scoped], scoped)
        return out

    def enclosing_entity(self, module_name: str, line: int) -> str:
        """Qualified name of the innermost entity containing ``line``."""
        starts, scoped = self._spans.get(module_name, ([], []))
        best: Optional[Entity] = None
        for e in scoped[: bisect.bisect_right(starts, line)]:
            if e.line_start <= line <= e.line_end:
                if best is None or e.line_start >= best.line_start:
                    best = e
        return best.qualified_name if best else module_name

    def finding(
        self,
        catalog_id: str,
        file: str,
        line_start: int,
        line_end: int,
        entity: str,
        measured: Union[int, float, str],
        threshold: Union[int, float, str],
        message: str,
    ) -> SmellFinding:
        detector = DETECTORS[catalog_id]
        return SmellFinding(
            catalog_id=catalog_id,
            category=detector.category,
            file=file,
            line_start=line_start,
            line_end=line_end,
            entity=entity,
            measured=measured,
            threshold="n/a" if detector.rule_based else threshold,
            severity=self.config.severity(catalog_id),
            message=message,
        )


def dunder_all(tree: ast.Module) -> list[str]:
    names = []
    for stmt in tree.body:
        if isinstance(stmt, (ast.Assign, ast.AugAssign, ast.AnnAssign)):
            targets = stmt.targets if isinstance(stmt, ast.Assign) else [stmt.target]
            if any(isinstance(t, ast.Name) and t.id == "__all__" for t in targets):
                if isinstance(stmt.value, (ast.List, ast.Tuple, ast.Set)):
                    names.extend(
                        e.value for e in stmt.value.elts
                        if isinstance(e, ast.Constant) and isinstance(e.value, str)
                    )
    return names
