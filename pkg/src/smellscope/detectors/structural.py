"""Structural detector bank: threshold checks over the 19 bound metrics."""

from __future__ import annotations

from smellscope.catalog import STRUCTURAL_BINDINGS
from smellscope.context import ProjectContext
from smellscope.findings import SmellFinding, sort_findings
from smellscope.graph import fan_in_out

SCOPE_KINDS = {
    "function": ("function", "method"),
    "class": ("class",),
    "module": ("module",),
}

HINTS = {
    "TOO_MANY_BRANCHES": "replace branching with dispatch tables or smaller functions",
    "HIGH_LOC": "split the class along its responsibilities",
    "HIGH_RFC": "reduce the set of methods the class can trigger",
    "HIGH_CYCLOMATIC": "extract conditional logic into well-named helpers",
    "HIGH_NOM": "move groups of methods to collaborating classes",
    "HIGH_WMPC1": "simplify the most complex methods",
    "HIGH_WMPC2": "move groups of methods to collaborating classes",
    "HIGH_LCOM": "split the class into cohesive parts",
    "HIGH_CBO": "depend on fewer concrete classes",
    "HIGH_MPC": "reduce calls into other objects",
    "DEEP_INHERITANCE": "prefer composition over deep inheritance",
    "MANY_CHILDREN": "check that the base class abstraction is not overloaded",
    "HIGH_FAN_IN": "keep this widely used module small and stable",
    "HIGH_FAN_OUT": "reduce the number of modules this one depends on",
    "DEEP_NESTING": "use guard clauses or extract inner blocks",
    "LONG_FILE": "split the module",
    "HIGH_SIZE2": "split the class into smaller parts",
    "HIGH_ATTR_COUNT": "group related attributes into value objects",
    "LONG_MODULE_IMPORTS": "the module depends on too much; split it",
}


def module_quantities(ctx: ProjectContext) -> dict[str, dict[str, int]]:
    """Graph- and file-level quantities for module-scoped detectors."""
    degrees = fan_in_out(ctx.graph)
    out = {}
    for m in ctx.ok_modules:
        fan_in, fan_out = degrees.get(m.module_name, (0, 0))
        out[m.module_name] = {
            "FAN_IN": fan_in,
            "FAN_OUT": fan_out,
            "FILE_LENGTH": len(m.lines),
            "IMPORT_COUNT": len(ctx.records_by_module.get(m.module_name, [])),
        }
    return out


def detect_structural(ctx: ProjectContext) -> list[SmellFinding]:
    modules = module_quantities(ctx)
    findings = []
    for catalog_id, title, metric, scope in STRUCTURAL_BINDINGS:
        if not ctx.config.enabled(catalog_id):
            continue
        limit = ctx.config.value(catalog_id)
        for e in ctx.entities:
            if e.kind not in SCOPE_KINDS[scope]:
                continue
            if scope == "module":
                value = modules.get(e.module, {}).get(metric)
            else:
                value = ctx.metrics[e.uid].get(metric)
            if value is None or not value > limit:
                continue
            findings.append(ctx.finding(
                catalog_id, e.file, e.line_start, e.line_end, e.qualified_name, value, limit,
                f"{title}: {e.kind} '{e.qualified_name}' measures {metric}={value} (limit {limit}); "
                f"{HINTS[catalog_id]}.",
            ))
    return sort_findings(findings)
