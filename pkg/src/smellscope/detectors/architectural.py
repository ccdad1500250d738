"""Architectural detector bank over the dependency graph and entity index."""

from __future__ import annotations

import ast
from collections import Counter, defaultdict
from fnmatch import fnmatchcase
from itertools import combinations

from smellscope.context import ProjectContext
from smellscope.findings import SmellFinding, sort_findings
from smellscope.graph import fan_in_out, find_cycles, instability
from smellscope.metrics import walk_local
from smellscope.source import FUNCTION_NODES

DYNAMIC_IMPORT_FUNCTIONS = {"import_module", "__import__"}


def _module_span(ctx: ProjectContext, module: str) -> tuple[str, int, int]:
    m = ctx.module_by_name[module]
    return m.rel_path, 1, max(1, len(m.lines))


def _edge_line(ctx: ProjectContext, a: str, b: str) -> int:
    return ctx.graph.edge_meta[(a, b)][0]


def detect_cycles(ctx: ProjectContext) -> list[SmellFinding]:
    max_length = int(ctx.config.value("MAX_CYCLE_LENGTH"))
    cap = int(ctx.config.value("CYCLE_REPORT_CAP"))
    if max_length < 2:
        return []
    out = []
    for cycle in find_cycles(ctx.graph, max_length, cap, ctx.diagnostics):
        first, second = cycle[0], cycle[1 % len(cycle)]
        line = _edge_line(ctx, first, second)
        path = " -> ".join(cycle + [cycle[0]])
        out.append(ctx.finding(
            "CYCLIC_DEPENDENCY", ctx.module_by_name[first].rel_path, line, line, first, len(cycle), max_length,
            f"import cycle {path}; break it by inverting one dependency.",
        ))
    return out


def detect_hubs(ctx: ProjectContext) -> list[SmellFinding]:
    min_degree = ctx.config.value("HUB_MIN_DEGREE")
    ratio = ctx.config.value("HUB_RATIO")
    degrees = fan_in_out(ctx.graph)
    if len(degrees) < 2:
        return []
    mean = sum(i + o for i, o in degrees.values()) / len(degrees)
    out = []
    for module, (fan_in, fan_out) in degrees.items():
        total = fan_in + fan_out
        if fan_in > min_degree and fan_out > min_degree and total > ratio * mean:
            file, start, end = _module_span(ctx, module)
            out.append(ctx.finding(
                "HUB_LIKE_DEPENDENCY", file, start, end, module, total, round(ratio * mean, 4),
                f"module '{module}' has fan-in {fan_in} and fan-out {fan_out} (mean total degree {mean:.2f}); "
                "split it so dependencies do not funnel through one hub.",
            ))
    return out


def detect_unstable_dependencies(ctx: ProjectContext) -> list[SmellFinding]:
    gap = ctx.config.value("INSTABILITY_GAP")
    inst = instability(ctx.graph)
    out = []
    for a, b in sorted(ctx.graph.edges):
        delta = inst[b] - inst[a]
        if delta > gap:
            line = _edge_line(ctx, a, b)
            out.append(ctx.finding(
                "UNSTABLE_DEPENDENCY", ctx.module_by_name[a].rel_path, line, line, a, round(delta, 4), gap,
                f"'{a}' (instability {inst[a]:.2f}) depends on less stable '{b}' ({inst[b]:.2f}); "
                "depend on an abstraction or a more stable module.",
            ))
    return out


def detect_god_objects(ctx: ProjectContext) -> list[SmellFinding]:
    module_limit = ctx.config.value("GOD_OBJECT_FUNCTIONS")
    class_limit = ctx.config.value("GOD_OBJECT_METHODS")
    out = []
    for m in ctx.ok_modules:
        ents = ctx.entities_by_module.get(m.module_name, [])
        count = sum(
            1 for e in ents
            if e.kind == "method" or (e.kind == "function" and e.parent is None)
        )
        if count > module_limit:
            file, start, end = _module_span(ctx, m.module_name)
            out.append(ctx.finding(
                "GOD_OBJECT", file, start, end, m.module_name, count, module_limit,
                f"module '{m.module_name}' holds {count} functions and methods; split it by responsibility.",
            ))
        for cls in (e for e in ents if e.kind == "class"):
            methods = len(ctx.methods_of(cls))
            if methods > class_limit:
                out.append(ctx.finding(
                    "GOD_OBJECT", cls.file, cls.line_start, cls.line_end, cls.qualified_name, methods, class_limit,
                    f"class '{cls.qualified_name}' concentrates {methods} methods; distribute its duties.",
                ))
    return out


def detect_scattered_functionality(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("SCATTER_MODULES")
    whitelist = ctx.config.name_whitelist
    sites = defaultdict(list)
    for e in ctx.entities:
        if e.kind == "function" and e.parent is None:
            sites[e.name].append(e)
    out = []
    for name, defs in sorted(sites.items()):
        if name.startswith("__") or any(fnmatchcase(name, p) for p in whitelist):
            continue
        modules = sorted({e.module for e in defs})
        if len(modules) > limit:
            defs = sorted(defs, key=lambda e: (e.file, e.line_start))
            first = defs[0]
            where = ", ".join(f"{e.file}:{e.line_start}" for e in defs)
            out.append(ctx.finding(
                "SCATTERED_FUNCTIONALITY", first.file, first.line_start, first.line_end, name, len(modules), limit,
                f"function '{name}' is defined in {len(modules)} modules ({where}); consolidate it in one place.",
            ))
    return out


def jaccard(a: set, b: set) -> float:
    union = a | b
    return len(a & b) / len(union) if union else 0.0


def detect_redundant_abstractions(ctx: ProjectContext) -> list[SmellFinding]:
    threshold = ctx.config.value("SIMILARITY_THRESHOLD")
    floor = ctx.config.value("REDUNDANT_MIN_METHODS")
    interfaces = []
    for cls in sorted((e for e in ctx.entities if e.kind == "class"), key=lambda e: (e.file, e.line_start)):
        public = {m.name for m in ctx.methods_of(cls) if not m.name.startswith("_")}
        if len(public) >= floor:
            interfaces.append((cls, public))
    out = []
    for (c1, m1), (c2, m2) in combinations(interfaces, 2):
        if c1.module == c2.module:
            continue
        score = jaccard(m1, m2)
        if score >= threshold:
            out.append(ctx.finding(
                "REDUNDANT_ABSTRACTION", c1.file, c1.line_start, c1.line_end, c1.qualified_name,
                round(score, 4), threshold,
                f"'{c1.qualified_name}' and '{c2.module}.{c2.qualified_name}' ({c2.file}:{c2.line_start}) expose "
                f"near-identical interfaces (Jaccard {score:.2f}); merge them or extract a shared base.",
            ))
    return out


def _chain_root(node: ast.AST):
    while isinstance(node, ast.Attribute):
        node = node.value
    return node


def _call_key(call: ast.Call) -> str:
    return ast.dump(call, annotate_fields=False, include_attributes=False)


def detect_improper_api_usage(ctx: ProjectContext) -> list[SmellFinding]:
    repeat_limit = ctx.config.value("API_REPEAT_CALLS")
    out = []
    for m in ctx.ok_modules:
        aliases = ctx.external_aliases(m.module_name)
        entity_of = ctx.enclosing_entity

        # (a) private members of external packages
        for r in ctx.records_by_module.get(m.module_name, []):
            if r.kind in ("stdlib", "third_party") and r.imported_name and _is_private(r.imported_name):
                out.append(ctx.finding(
                    "IMPROPER_API_USAGE", m.rel_path, r.line, r.line, entity_of(m.module_name, r.line),
                    f"{r.target}.{r.imported_name}", "n/a",
                    f"imports private member '{r.imported_name}' of external package '{r.target}'; "
                    "use the public API.",
                ))
        for node in ast.walk(m.tree):
            if isinstance(node, ast.Attribute) and _is_private(node.attr):
                root = _chain_root(node)
                if isinstance(root, ast.Name) and root.id in aliases and isinstance(node.value, (ast.Name, ast.Attribute)):
                    if _chain_has_private(node.value):
                        continue  # reported on the innermost private link
                    out.append(ctx.finding(
                        "IMPROPER_API_USAGE", m.rel_path, node.lineno, node.end_lineno or node.lineno,
                        entity_of(m.module_name, node.lineno), ast.unparse(node), "n/a",
                        f"accesses private member '{node.attr}' of external import '{aliases[root.id].target}'; "
                        "use the public API.",
                    ))
            # (b) dynamic imports
            if isinstance(node, ast.Call) and _is_dynamic_import(node, aliases):
                out.append(ctx.finding(
                    "IMPROPER_API_USAGE", m.rel_path, node.lineno, node.end_lineno or node.lineno,
                    entity_of(m.module_name, node.lineno), ast.unparse(node.func), "n/a",
                    "dynamic import hides the dependency from static analysis; import the module explicitly.",
                ))

        # (c) the same external call repeated inside one function
        for fn in ctx.entities_by_module.get(m.module_name, []):
            if not isinstance(fn.node, FUNCTION_NODES):
                continue
            calls = Counter()
            first = {}
            for node in walk_local(fn.node):
                if isinstance(node, ast.Call):
                    root = _chain_root(node.func)
                    if isinstance(node.func, ast.Attribute) and isinstance(root, ast.Name) and root.id in aliases:
                        key = _call_key(node)
                        calls[key] += 1
                        if key not in first or (node.lineno, node.col_offset) < first[key][:2]:
                            first[key] = (node.lineno, node.col_offset, node)
            for key, count in sorted(calls.items()):
                if count > repeat_limit:
                    line, _, node = first[key]
                    out.append(ctx.finding(
                        "IMPROPER_API_USAGE", m.rel_path, line, node.end_lineno or line, fn.qualified_name,
                        count, repeat_limit,
                        f"'{ast.unparse(node)}' is called {count} times in '{fn.qualified_name}'; "
                        "call it once and reuse the result.",
                    ))
    return out


def _is_private(name: str) -> bool:
    return name.startswith("_") and not (name.startswith("__") and name.endswith("__"))


def _chain_has_private(node: ast.AST) -> bool:
    while isinstance(node, ast.Attribute):
        if _is_private(node.attr):
            return True
        node = node.value
    return False


def _is_dynamic_import(call: ast.Call, aliases) -> bool:
    func = call.func
    if isinstance(func, ast.Name):
        if func.id == "__import__":
            return True
        record = aliases.get(func.id)
        return bool(record and record.target == "importlib" and record.imported_name == "import_module")
    if isinstance(func, ast.Attribute) and func.attr in DYNAMIC_IMPORT_FUNCTIONS:
        root = _chain_root(func)
        return isinstance(root, ast.Name) and root.id in aliases and aliases[root.id].target == "importlib"
    return False


BANK = {
    "CYCLIC_DEPENDENCY": detect_cycles,
    "HUB_LIKE_DEPENDENCY": detect_hubs,
    "UNSTABLE_DEPENDENCY": detect_unstable_dependencies,
    "GOD_OBJECT": detect_god_objects,
    "SCATTERED_FUNCTIONALITY": detect_scattered_functionality,
    "REDUNDANT_ABSTRACTION": detect_redundant_abstractions,
    "IMPROPER_API_USAGE": detect_improper_api_usage,
}


def detect_architectural(ctx: ProjectContext) -> list[SmellFinding]:
    findings = []
    for catalog_id, detector in BANK.items():
        if ctx.config.enabled(catalog_id):
            findings.extend(detector(ctx))
    return sort_findings(findings)
