"""Code-level detector bank (24 detectors)."""

from __future__ import annotations

import ast
import re
from collections import Counter, defaultdict
from fnmatch import fnmatchcase
from itertools import combinations
from typing import Callable, Iterable, Optional

from smellscope.context import ProjectContext, dunder_all
from smellscope.detectors.duplicates import find_clones
from smellscope.findings import SmellFinding, sort_findings
from smellscope.metrics import class_body_attributes, receiver_attributes, walk_local
from smellscope.source import FUNCTION_NODES, Entity, SourceModule

PRIMITIVE_TYPES = {"int", "float", "str", "bool", "bytes"}
TRIVIAL_NUMBERS = {0, 1, 2}
INITIALIZERS = {"__init__", "__post_init__"}
_CONSTANT_NAME = re.compile(r"^_*[A-Z][A-Z0-9_]*$")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def is_dunder(name: str) -> bool:
    return len(name) > 4 and name.startswith("__") and name.endswith("__")


def _functions(ctx: ProjectContext) -> list[Entity]:
    return [e for e in ctx.entities if e.kind in ("function", "method")]


def _classes(ctx: ProjectContext) -> list[Entity]:
    return [e for e in ctx.entities if e.kind == "class"]


def _span(node: ast.AST) -> tuple[int, int]:
    return node.lineno, getattr(node, "end_lineno", None) or node.lineno


# ---------------------------------------------------------------------------
# Size and signature detectors
# ---------------------------------------------------------------------------


def long_method(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("LONG_METHOD_LINES")
    out = []
    for fn in _functions(ctx):
        loc = ctx.metrics[fn.uid]["LOC"]
        if loc > limit:
            out.append(ctx.finding(
                "LONG_METHOD", fn.file, fn.line_start, fn.line_end, fn.qualified_name, loc, limit,
                f"'{fn.qualified_name}' spans {loc} lines (limit {limit}); extract cohesive steps into helpers.",
            ))
    return out


def large_class(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("LARGE_CLASS_METHODS")
    out = []
    for cls in _classes(ctx):
        nom = ctx.metrics[cls.uid]["NOM"]
        if nom > limit:
            out.append(ctx.finding(
                "LARGE_CLASS", cls.file, cls.line_start, cls.line_end, cls.qualified_name, nom, limit,
                f"class '{cls.qualified_name}' defines {nom} methods (limit {limit}); split responsibilities.",
            ))
    return out


def long_parameter_list(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("LONG_PARAMETER_LIST_PARAMS")
    out = []
    for fn in _functions(ctx):
        count = len(fn.parameters)
        if count > limit:
            out.append(ctx.finding(
                "LONG_PARAMETER_LIST", fn.file, fn.line_start, fn.line_end, fn.qualified_name, count, limit,
                f"'{fn.qualified_name}' takes {count} parameters (limit {limit}); introduce a parameter object.",
            ))
    return out


def _annotation_name(node: Optional[ast.AST]) -> Optional[str]:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Constant) and isinstance(node.value, str):
        return node.value.strip()
    return None


def _paired_defaults(args: ast.arguments) -> list[tuple[ast.arg, Optional[ast.expr]]]:
    positional = args.posonlyargs + args.args
    defaults = [None] * (len(positional) - len(args.defaults)) + list(args.defaults)
    return list(zip(positional, defaults)) + list(zip(args.kwonlyargs, args.kw_defaults))


def primitive_parameters(fn: Entity) -> list[str]:
    names = []
    params = set(fn.parameters)
    for arg, default in _paired_defaults(fn.node.args):
        if arg.arg not in params:
            continue
        typed = _annotation_name(arg.annotation) in PRIMITIVE_TYPES
        literal = (
            isinstance(default, ast.Constant)
            and default.value is not None
            and type(default.value).__name__ in PRIMITIVE_TYPES
        )
        if typed or literal:
            names.append(arg.arg)
    return names


def primitive_obsession(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("PRIMITIVE_OBSESSION_PARAMS")
    out = []
    for fn in _functions(ctx):
        names = primitive_parameters(fn)
        if len(names) > limit:
            out.append(ctx.finding(
                "PRIMITIVE_OBSESSION", fn.file, fn.line_start, fn.line_end, fn.qualified_name, len(names), limit,
                f"'{fn.qualified_name}' passes {len(names)} primitive values ({', '.join(names)}); "
                "group them into a small value type.",
            ))
    return out


# ---------------------------------------------------------------------------
# Duplication, dead code, speculative generality
# ---------------------------------------------------------------------------


def detect_duplicates(
    modules: Iterable[SourceModule],
    min_lines: int,
    severity: str = "medium",
    entity_of: Optional[Callable[[str, int], str]] = None,
) -> list[SmellFinding]:
    """One finding per occurrence of a repeated region of >= ``min_lines`` statement lines."""
    modules = list(modules)
    out = []
    for region in find_clones(modules, min_lines):
        where = ", ".join(f"{f}:{a}-{b}" for f, a, b in region.others) or "elsewhere in the same block"
        entity = entity_of(region.module, region.line_start) if entity_of else region.module
        out.append(SmellFinding(
            catalog_id="DUPLICATE_CODE",
            category="code",
            file=region.file,
            line_start=region.line_start,
            line_end=region.line_end,
            entity=entity,
            measured=region.length,
            threshold=min_lines,
            severity=severity,
            message=f"{region.length} statement lines duplicated at {where}; extract a shared function.",
        ))
    return out


def duplicate_code(ctx: ProjectContext) -> list[SmellFinding]:
    return detect_duplicates(
        ctx.ok_modules,
        int(ctx.config.value("DUPLICATE_CODE_MIN_LINES")),
        severity=ctx.config.severity("DUPLICATE_CODE"),
        entity_of=ctx.enclosing_entity,
    )


def _whitelisted(name: str, patterns: Iterable[str]) -> bool:
    return any(fnmatchcase(name, p) for p in patterns)


def _has_bases(cls: Optional[Entity]) -> bool:
    return bool(cls and [b for b in cls.bases if b not in ("object", "builtins.object")])


def dead_code(ctx: ProjectContext) -> list[SmellFinding]:
    referenced = set()
    for names in ctx.referenced_names.values():
        referenced |= names
    whitelist = ctx.config.name_whitelist
    out = []
    for e in ctx.entities:
        if e.kind == "module" or e.name in referenced:
            continue
        if is_dunder(e.name) or e.decorators or _whitelisted(e.name, whitelist):
            continue
        if e.kind == "method" and _has_bases(ctx.class_by_name.get((e.module, e.parent))):
            continue  # may override or implement a hook of the base class
        out.append(ctx.finding(
            "DEAD_CODE", e.file, e.line_start, e.line_end, e.qualified_name, 0, "n/a",
            f"{e.kind} '{e.qualified_name}' is never referenced in the project; remove it or document its use.",
        ))
    return out


def is_noop_body(body: list[ast.stmt]) -> bool:
    for i, stmt in enumerate(body):
        if isinstance(stmt, ast.Pass):
            continue
        if isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant):
            if stmt.value.value is Ellipsis or (i == 0 and isinstance(stmt.value.value, str)):
                continue
        if isinstance(stmt, ast.Raise) and stmt.exc is not None:
            target = stmt.exc.func if isinstance(stmt.exc, ast.Call) else stmt.exc
            if isinstance(target, ast.Name) and target.id == "NotImplementedError":
                continue
        return False
    return True


def _is_abstract(fn: Entity) -> bool:
    return any(d.rsplit(".", 1)[-1] in ("abstractmethod", "overload") for d in fn.decorators)


def unused_parameters(fn: Entity) -> list[str]:
    args = fn.node.args
    variadic = {a.arg for a in (args.vararg, args.kwarg) if a is not None}
    loaded = {n.id for n in ast.walk(fn.node) if isinstance(n, ast.Name) and not isinstance(n.ctx, ast.Store)}
    if {"locals", "vars"} & loaded:
        return []
    return [p for p in fn.parameters if p not in variadic and not p.startswith("_") and p not in loaded]


def speculative_generality(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for fn in _functions(ctx):
        if is_dunder(fn.name) or _is_abstract(fn) or is_noop_body(fn.node.body):
            continue
        if fn.kind == "method" and _has_bases(ctx.class_by_name.get((fn.module, fn.parent))):
            continue
        unused = unused_parameters(fn)
        if unused:
            out.append(ctx.finding(
                "SPECULATIVE_GENERALITY", fn.file, fn.line_start, fn.line_end, fn.qualified_name, len(unused), "n/a",
                f"'{fn.qualified_name}' never reads parameter(s) {', '.join(unused)}; drop them until needed.",
            ))
    for cls in _classes(ctx):
        methods = ctx.methods_of(cls)
        if not methods or ctx.metrics[cls.uid]["NOC"] > 0:
            continue
        if any(b.rsplit(".", 1)[-1] == "Protocol" for b in cls.bases):
            continue
        if all(_is_abstract(m) or is_noop_body(m.node.body) for m in methods):
            out.append(ctx.finding(
                "SPECULATIVE_GENERALITY", cls.file, cls.line_start, cls.line_end, cls.qualified_name, 0, "n/a",
                f"class '{cls.qualified_name}' only declares placeholder methods and has no subclasses; "
                "remove the abstraction until a second implementation exists.",
            ))
    return out


# ---------------------------------------------------------------------------
# Coupling-flavoured code smells
# ---------------------------------------------------------------------------


def _module_level_aliases(ctx: ProjectContext, module: str) -> set[str]:
    return {r.alias for r in ctx.records_by_module.get(module, []) if r.alias != "*"}


def divergent_clusters(methods: list[Entity], aliases: set[str]) -> list[list[str]]:
    """Methods grouped by shared references to imported names; methods with none are ignored."""
    refs = {}
    for m in methods:
        used = {n.id for n in walk_local(m.node) if isinstance(n, ast.Name)} & aliases
        if used:
            refs[m.qualified_name] = used
    parent = {name: name for name in refs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(sorted(refs), 2):
        if refs[a] & refs[b]:
            parent[find(a)] = find(b)
    groups = defaultdict(list)
    for name in sorted(refs):
        groups[find(name)].append(name)
    return sorted(groups.values())


def divergent_change(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("DIVERGENT_CHANGE_CLUSTERS")
    out = []
    for cls in _classes(ctx):
        clusters = divergent_clusters(ctx.methods_of(cls), _module_level_aliases(ctx, cls.module))
        if len(clusters) > limit:
            out.append(ctx.finding(
                "DIVERGENT_CHANGE", cls.file, cls.line_start, cls.line_end, cls.qualified_name, len(clusters), limit,
                f"methods of '{cls.qualified_name}' fall into {len(clusters)} unrelated dependency clusters; "
                "each is a separate reason to change, consider splitting the class.",
            ))
    return out


def _bool_operators(expr: ast.AST) -> int:
    return sum(len(n.values) - 1 for n in ast.walk(expr) if isinstance(n, ast.BoolOp))


def complex_conditional(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("COMPLEX_CONDITIONAL_OPERATORS")
    out = []
    for m in ctx.ok_modules:
        for node in ast.walk(m.tree):
            tests = []
            if isinstance(node, (ast.If, ast.While, ast.IfExp)):
                tests = [node.test]
            elif isinstance(node, ast.comprehension):
                tests = list(node.ifs)
            for test in tests:
                count = _bool_operators(test)
                if count > limit:
                    start, end = _span(test)
                    out.append(ctx.finding(
                        "COMPLEX_CONDITIONAL", m.rel_path, start, end, ctx.enclosing_entity(m.module_name, start),
                        count, limit,
                        f"condition combines {count} boolean operators (limit {limit}); "
                        "name the sub-conditions or decompose the check.",
                    ))
    return out


def _chain_child(node: ast.AST) -> Optional[ast.AST]:
    if isinstance(node, ast.Attribute):
        return node.value
    if isinstance(node, ast.Call):
        return node.func
    if isinstance(node, ast.Subscript):
        return node.value
    return None


def chain_length(node: ast.AST) -> int:
    length = 0
    while node is not None:
        if isinstance(node, ast.Attribute):
            length += 1
        node = _chain_child(node)
    return length


def message_chain(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("MESSAGE_CHAIN_LENGTH")
    out = []
    for m in ctx.ok_modules:
        inner = set()
        for node in ast.walk(m.tree):
            child = _chain_child(node)
            if child is not None:
                inner.add(id(child))
        for node in ast.walk(m.tree):
            if not isinstance(node, (ast.Attribute, ast.Call, ast.Subscript)) or id(node) in inner:
                continue
            length = chain_length(node)
            if length > limit:
                start, end = _span(node)
                out.append(ctx.finding(
                    "MESSAGE_CHAIN", m.rel_path, start, end, ctx.enclosing_entity(m.module_name, start),
                    length, limit,
                    f"access chain of {length} links (limit {limit}); hide the navigation behind a method.",
                ))
    return out


def access_table(method: Entity) -> Counter:
    """Attribute accesses per receiver name among the receiver, parameters and locals."""
    candidates = set(method.parameters)
    if method.receiver:
        candidates.add(method.receiver)
    for n in walk_local(method.node):
        if isinstance(n, ast.Name) and isinstance(n.ctx, ast.Store):
            candidates.add(n.id)
    table = Counter()
    for n in walk_local(method.node):
        if isinstance(n, ast.Attribute) and isinstance(n.value, ast.Name) and n.value.id in candidates:
            table[n.value.id] += 1
    return table


def detect_feature_envy(method: Entity, table: Counter, min_accesses: float) -> Optional[tuple[str, int, int]]:
    """(foreign receiver, its accesses, own accesses) when the method envies that receiver."""
    own = table.get(method.receiver, 0) if method.receiver else 0
    foreign = sorted(((n, c) for n, c in table.items() if n != method.receiver), key=lambda nc: (-nc[1], nc[0]))
    if not foreign:
        return None
    name, count = foreign[0]
    if count > own and count > min_accesses:
        return name, count, own
    return None


def feature_envy(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("FEATURE_ENVY_MIN_ACCESSES")
    out = []
    for fn in _functions(ctx):
        if fn.kind != "method" or not fn.receiver:
            continue
        hit = detect_feature_envy(fn, access_table(fn), limit)
        if hit:
            name, count, own = hit
            out.append(ctx.finding(
                "FEATURE_ENVY", fn.file, fn.line_start, fn.line_end, fn.qualified_name, count, limit,
                f"'{fn.qualified_name}' touches '{name}' {count} times but its own object {own} times; "
                f"move the logic closer to '{name}'.",
            ))
    return out


def _signature_names(fn: Entity) -> frozenset[str]:
    args = fn.node.args
    variadic = {a.arg for a in (args.vararg, args.kwarg) if a is not None}
    return frozenset(p for p in fn.parameters if p not in variadic)


def data_clump_groups(signatures: list[frozenset[str]], group_size: float, occurrences: float) -> dict[frozenset, list[int]]:
    """Maximal shared parameter groups larger than ``group_size`` found in more than ``occurrences`` signatures."""
    eligible = [i for i, s in enumerate(signatures) if len(s) > group_size]
    groups = set()
    for a, b in combinations(eligible, 2):
        common = signatures[a] & signatures[b]
        if len(common) > group_size:
            groups.add(common)
    occ = {g: [i for i in eligible if g <= signatures[i]] for g in groups}
    occ = {g: o for g, o in occ.items() if len(o) > occurrences}
    return {
        g: o for g, o in occ.items()
        if not any(g < h and occ[h] == o for h in occ)
    }


def data_clumps(ctx: ProjectContext) -> list[SmellFinding]:
    size = ctx.config.value("DATA_CLUMPS_GROUP_SIZE")
    times = ctx.config.value("DATA_CLUMPS_OCCURRENCES")
    fns = sorted(_functions(ctx), key=lambda e: (e.file, e.line_start))
    groups = data_clump_groups([_signature_names(f) for f in fns], size, times)
    out = []
    for group, indices in sorted(groups.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
        first = fns[indices[0]]
        sites = ", ".join(f"{fns[i].qualified_name} ({fns[i].file}:{fns[i].line_start})" for i in indices)
        out.append(ctx.finding(
            "DATA_CLUMPS", first.file, first.line_start, first.line_end, first.qualified_name, len(indices), times,
            f"parameters ({', '.join(sorted(group))}) travel together in {len(indices)} signatures: {sites}; "
            "bundle them into one object.",
        ))
    return out


def temporary_field(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for cls in _classes(ctx):
        methods = ctx.methods_of(cls)
        if not methods:
            continue
        method_names = {m.name for m in methods}
        initialized = set(class_body_attributes(cls))
        uses = {}
        for m in methods:
            touched = receiver_attributes(m)
            uses[m.uid] = touched
            if m.name in INITIALIZERS:
                initialized |= touched["store"]
        users = defaultdict(set)
        for m in methods:
            for attr in uses[m.uid]["load"] | uses[m.uid]["store"]:
                users[attr].add(m.uid)
        for m in methods:
            if m.name in INITIALIZERS or not m.receiver:
                continue
            for attr in sorted(uses[m.uid]["store"] - initialized - method_names):
                if len(users[attr]) > 1:
                    continue
                node = next(
                    n for n in walk_local(m.node)
                    if isinstance(n, ast.Attribute) and isinstance(n.ctx, ast.Store)
                    and isinstance(n.value, ast.Name) and n.value.id == m.receiver and n.attr == attr
                )
                stmt_line = node.lineno
                out.append(ctx.finding(
                    "TEMPORARY_FIELD", cls.file, stmt_line, node.end_lineno or stmt_line, m.qualified_name,
                    len(users[attr]), "n/a",
                    f"attribute '{attr}' of '{cls.qualified_name}' is set outside the initializer and used only in "
                    f"'{m.name}'; make it a local variable.",
                ))
    return out


def shotgun_surgery(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("SHOTGUN_SURGERY_MODULES")
    importers = defaultdict(set)
    for r in ctx.records:
        if r.kind == "project" and r.resolved:
            importers[r.resolved].add(r.importer)
    out = []
    for fn in _functions(ctx):
        if fn.name.startswith("_"):
            continue
        if fn.kind == "function" and fn.parent is not None:
            continue  # nested helpers are not reachable from other modules
        users = sorted(
            mod for mod in importers.get(fn.module, ())
            if mod != fn.module and fn.name in ctx.referenced_names.get(mod, ())
        )
        if len(users) > limit:
            out.append(ctx.finding(
                "POTENTIAL_SHOTGUN_SURGERY", fn.file, fn.line_start, fn.line_end, fn.qualified_name,
                len(users), limit,
                f"'{fn.qualified_name}' is used from {len(users)} modules ({', '.join(users)}); "
                "a change to it ripples widely, consider a stable facade.",
            ))
    return out


# ---------------------------------------------------------------------------
# Comments and documentation
# ---------------------------------------------------------------------------


def low_comment_ratio(ctx: ProjectContext) -> list[SmellFinding]:
    min_lines = ctx.config.value("LOW_COMMENT_RATIO_MIN_LINES")
    per_comment = ctx.config.value("LOW_COMMENT_RATIO_LINES_PER_COMMENT")
    out = []
    for fn in _functions(ctx):
        loc = fn.line_end - fn.line_start + 1
        if loc <= min_lines:
            continue
        module = ctx.module_by_name[fn.module]
        comments = sum(1 for n in module.comment_lines if fn.line_start <= n <= fn.line_end)
        if comments and loc / comments <= per_comment:
            continue
        measured = round(loc / comments, 2) if comments else "inf"
        out.append(ctx.finding(
            "LOW_COMMENT_RATIO", fn.file, fn.line_start, fn.line_end, fn.qualified_name, measured, per_comment,
            f"'{fn.qualified_name}' has {loc} lines and {comments} comment line(s) "
            f"(ratio {comments / loc:.3f}); explain the non-obvious steps.",
        ))
    return out


def comment_blocks(module: SourceModule) -> list[tuple[int, int]]:
    rows = sorted(module.comment_lines)
    blocks = []
    for row in rows:
        if blocks and row == blocks[-1][1] + 1:
            blocks[-1][1] = row
        else:
            blocks.append([row, row])
    return [tuple(b) for b in blocks]


def large_comment_block(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("LARGE_COMMENT_BLOCK_LINES")
    out = []
    for m in ctx.ok_modules:
        for start, end in comment_blocks(m):
            size = end - start + 1
            if size > limit:
                out.append(ctx.finding(
                    "LARGE_COMMENT_BLOCK", m.rel_path, start, end, ctx.enclosing_entity(m.module_name, start),
                    size, limit,
                    f"{size} consecutive comment lines (limit {limit}); move prose to a docstring or "
                    "delete commented-out code.",
                ))
    return out


def missing_docstring(ctx: ProjectContext) -> list[SmellFinding]:
    kinds = {e.uid: e.kind for e in ctx.entities}
    by_qualname = {(e.module, e.qualified_name): e for e in ctx.entities if e.kind != "module"}
    out = []
    for e in ctx.entities:
        if e.kind == "module" or e.docstring_present:
            continue
        if any(part.startswith("_") for part in e.qualified_name.split(".")):
            continue
        parent = by_qualname.get((e.module, e.parent)) if e.parent else None
        if parent is not None and kinds[parent.uid] in ("function", "method"):
            continue
        if any(d.rsplit(".", 1)[-1] in ("setter", "deleter", "overload") for d in e.decorators):
            continue
        out.append(ctx.finding(
            "MISSING_DOCSTRING", e.file, e.line_start, e.line_end, e.qualified_name, 0, "n/a",
            f"public {e.kind} '{e.qualified_name}' has no docstring; document its purpose and contract.",
        ))
    return out


# ---------------------------------------------------------------------------
# Plumbing detectors
# ---------------------------------------------------------------------------


def _exempt_constants(tree: ast.AST) -> set[int]:
    exempt = set()
    for node in ast.walk(tree):
        roots = []
        if isinstance(node, ast.Assign):
            if all(isinstance(t, ast.Name) and _CONSTANT_NAME.match(t.id) for t in node.targets):
                roots = [node.value]
        elif isinstance(node, ast.AnnAssign):
            if isinstance(node.target, ast.Name) and _CONSTANT_NAME.match(node.target.id) and node.value:
                roots = [node.value]
        elif isinstance(node, ast.arguments):
            roots = [d for d in node.defaults + node.kw_defaults if d is not None]
        for root in roots:
            exempt.update(id(n) for n in ast.walk(root))
    return exempt


def magic_number(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for m in ctx.ok_modules:
        exempt = _exempt_constants(m.tree)
        for node in ast.walk(m.tree):
            if not isinstance(node, ast.Constant) or id(node) in exempt:
                continue
            value = node.value
            if isinstance(value, bool) or not isinstance(value, (int, float, complex)):
                continue
            if value in TRIVIAL_NUMBERS:
                continue
            start, end = _span(node)
            out.append(ctx.finding(
                "MAGIC_NUMBER", m.rel_path, start, end, ctx.enclosing_entity(m.module_name, start),
                repr(value), "n/a",
                f"numeric literal {value!r} has no name; bind it to an UPPER_CASE constant.",
            ))
    return out


def global_variable_abuse(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("GLOBAL_VARIABLE_DECLARATIONS")
    out = []
    for fn in _functions(ctx):
        names = [name for n in walk_local(fn.node) if isinstance(n, ast.Global) for name in n.names]
        if len(names) > limit:
            out.append(ctx.finding(
                "GLOBAL_VARIABLE_ABUSE", fn.file, fn.line_start, fn.line_end, fn.qualified_name, len(names), limit,
                f"'{fn.qualified_name}' rebinds {len(names)} globals ({', '.join(names)}); pass state explicitly.",
            ))
    return out


def too_many_returns(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("TOO_MANY_RETURNS_COUNT")
    out = []
    for fn in _functions(ctx):
        count = ctx.metrics[fn.uid]["RETURN_COUNT"]
        if count > limit:
            out.append(ctx.finding(
                "TOO_MANY_RETURNS", fn.file, fn.line_start, fn.line_end, fn.qualified_name, count, limit,
                f"'{fn.qualified_name}' has {count} return statements (limit {limit}); simplify the exits.",
            ))
    return out


def long_lambda(ctx: ProjectContext) -> list[SmellFinding]:
    limit = ctx.config.value("LONG_LAMBDA_CHARS")
    out = []
    for m in ctx.ok_modules:
        text = "\n".join(m.lines) + "\n"
        for node in ast.walk(m.tree):
            if not isinstance(node, ast.Lambda):
                continue
            body = ast.get_source_segment(text, node.body) or ""
            size = len(" ".join(body.split()))
            if size > limit:
                start, end = _span(node)
                out.append(ctx.finding(
                    "LONG_LAMBDA", m.rel_path, start, end, ctx.enclosing_entity(m.module_name, start), size, limit,
                    f"lambda body is {size} characters (limit {limit}); use a named function.",
                ))
    return out


def _is_mutable_default(node: ast.AST) -> bool:
    if isinstance(node, (ast.List, ast.Dict, ast.Set, ast.ListComp, ast.DictComp, ast.SetComp)):
        return True
    return (
        isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
        and node.func.id in ("list", "dict", "set") and not node.args and not node.keywords
    )


def mutable_default_argument(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for fn in _functions(ctx):
        for arg, default in _paired_defaults(fn.node.args):
            if default is not None and _is_mutable_default(default):
                start, end = _span(default)
                out.append(ctx.finding(
                    "MUTABLE_DEFAULT_ARGUMENT", fn.file, start, end, fn.qualified_name, arg.arg, "n/a",
                    f"parameter '{arg.arg}' of '{fn.qualified_name}' defaults to a shared mutable object; "
                    "default to None and create it inside.",
                ))
    return out


def _is_broad(handler: ast.ExceptHandler) -> bool:
    if handler.type is None:
        return True
    types = handler.type.elts if isinstance(handler.type, ast.Tuple) else [handler.type]
    return any(isinstance(t, ast.Name) and t.id in ("Exception", "BaseException") for t in types)


def broad_except(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for m in ctx.ok_modules:
        for node in ast.walk(m.tree):
            if not isinstance(node, ast.ExceptHandler) or not _is_broad(node):
                continue
            if any(isinstance(n, ast.Raise) and n.exc is None for n in ast.walk(node)):
                continue  # re-raised after cleanup
            caught = "everything" if node.type is None else ast.unparse(node.type)
            out.append(ctx.finding(
                "BROAD_EXCEPT", m.rel_path, node.lineno, node.lineno, ctx.enclosing_entity(m.module_name, node.lineno),
                caught, "n/a",
                f"handler catches {caught}; catch the specific exceptions you expect.",
            ))
    return out


def _annotation_identifiers(tree: ast.AST) -> set[str]:
    names = set()
    for node in ast.walk(tree):
        annotations = []
        if isinstance(node, ast.arg):
            annotations = [node.annotation]
        elif isinstance(node, FUNCTION_NODES):
            annotations = [node.returns]
        elif isinstance(node, ast.AnnAssign):
            annotations = [node.annotation]
        for ann in annotations:
            if ann is None:
                continue
            for n in ast.walk(ann):
                if isinstance(n, ast.Constant) and isinstance(n.value, str):
                    names.update(_IDENTIFIER.findall(n.value))
    return names


def unused_import(ctx: ProjectContext) -> list[SmellFinding]:
    out = []
    for m in ctx.ok_modules:
        if m.is_package:
            continue  # package __init__ modules re-export by convention
        loaded = {n.id for n in ast.walk(m.tree) if isinstance(n, ast.Name) and not isinstance(n.ctx, ast.Store)}
        loaded |= set(dunder_all(m.tree)) | _annotation_identifiers(m.tree)
        for r in ctx.records_by_module.get(m.module_name, []):
            if r.alias == "*" or r.target == "__future__" or r.alias in loaded:
                continue
            if _explicit_reexport(m.tree, r):  # `import x as x` marks a deliberate re-export
                continue
            out.append(ctx.finding(
                "UNUSED_IMPORT", m.rel_path, r.line, r.line, m.module_name, r.alias, "n/a",
                f"imported name '{r.alias}' is never used; remove the import.",
            ))
    return out


def _explicit_reexport(tree: ast.AST, record) -> bool:
    for node in ast.walk(tree):
        if isinstance(node, (ast.Import, ast.ImportFrom)) and node.lineno == record.line:
            return any(a.asname == a.name == record.alias for a in node.names)
    return False


BANK = {
    "LONG_METHOD": long_method,
    "LARGE_CLASS": large_class,
    "LONG_PARAMETER_LIST": long_parameter_list,
    "PRIMITIVE_OBSESSION": primitive_obsession,
    "DUPLICATE_CODE": duplicate_code,
    "DEAD_CODE": dead_code,
    "SPECULATIVE_GENERALITY": speculative_generality,
    "DIVERGENT_CHANGE": divergent_change,
    "COMPLEX_CONDITIONAL": complex_conditional,
    "MESSAGE_CHAIN": message_chain,
    "FEATURE_ENVY": feature_envy,
    "DATA_CLUMPS": data_clumps,
    "TEMPORARY_FIELD": temporary_field,
    "POTENTIAL_SHOTGUN_SURGERY": shotgun_surgery,
    "LOW_COMMENT_RATIO": low_comment_ratio,
    "LARGE_COMMENT_BLOCK": large_comment_block,
    "MISSING_DOCSTRING": missing_docstring,
    "MAGIC_NUMBER": magic_number,
    "GLOBAL_VARIABLE_ABUSE": global_variable_abuse,
    "TOO_MANY_RETURNS": too_many_returns,
    "LONG_LAMBDA": long_lambda,
    "MUTABLE_DEFAULT_ARGUMENT": mutable_default_argument,
    "BROAD_EXCEPT": broad_except,
    "UNUSED_IMPORT": unused_import,
}


def detect_code_smells(ctx: ProjectContext) -> list[SmellFinding]:
    findings = []
    for catalog_id, detector in BANK.items():
        if ctx.config.enabled(catalog_id):
            findings.extend(detector(ctx))
    return sort_findings(findings)
