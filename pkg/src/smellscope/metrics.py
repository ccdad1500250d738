"""Per-entity base metrics: complexity, size, nesting and the CK suite."""

from __future__ import annotations

import ast
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Optional

from smellscope.findings import Diagnostic
from smellscope.source import SCOPE_NODES, Entity, ImportRecord, SourceModule

METRIC_IDS = (
    "CC", "LOC", "NOM", "SIZE2", "WMPC1", "WMPC2", "LCOM", "CBO", "MPC", "RFC",
    "DIT", "NOC", "MAX_NESTING", "BRANCH_COUNT", "PARAM_COUNT", "COMMENT_RATIO",
    "RETURN_COUNT", "ATTR_COUNT",
)

_BLOCK_NODES = (
    ast.If, ast.For, ast.AsyncFor, ast.While, ast.With, ast.AsyncWith, ast.Try, ast.Match,
)
if hasattr(ast, "TryStar"):
    _BLOCK_NODES += (ast.TryStar,)


@dataclass
class MetricVector:
    entity: Entity
    values: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def get(self, key: str, default=None):
        return self.values.get(key, default)


def walk_local(node: ast.AST):
    """Walk a function/class body without entering nested defs or classes."""
    stack = list(ast.iter_child_nodes(node))
    while stack:
        child = stack.pop()
        yield child
        if isinstance(child, SCOPE_NODES):
            continue
        stack.extend(ast.iter_child_nodes(child))


def _decision_points(node: ast.AST) -> int:
    if isinstance(node, (ast.If, ast.While, ast.For, ast.AsyncFor, ast.IfExp, ast.ExceptHandler, ast.match_case)):
        return 1
    if isinstance(node, ast.BoolOp):
        return len(node.values) - 1
    if isinstance(node, ast.comprehension):
        return 1 + len(node.ifs)
    return 0


def cyclomatic_complexity(fn: Entity) -> int:
    """1 + decision points in the body; nested defs are their own entities."""
    return 1 + sum(_decision_points(n) for n in walk_local(fn.node))


def _is_elif(node: ast.If, lines: Optional[list[str]]) -> bool:
    if len(node.orelse) != 1 or not isinstance(node.orelse[0], ast.If):
        return False
    inner = node.orelse[0]
    if lines is None:
        return inner.col_offset == node.col_offset
    text = lines[inner.lineno - 1]
    return text[inner.col_offset:].startswith("elif")


def nesting_and_branches(fn: Entity, lines: Optional[list[str]] = None) -> tuple[int, int]:
    """Deepest block nesting (body at depth 0) and number of branch arms.

    Branch arms are if, each elif, a non-empty else of an if chain, each
    match case and each except handler. An ``elif`` does not add depth.
    """
    max_depth = 0
    branches = 0

    def visit_body(stmts, depth):
        for stmt in stmts:
            visit(stmt, depth)

    def visit(node, depth):
        nonlocal max_depth, branches
        if isinstance(node, SCOPE_NODES):
            return
        if isinstance(node, ast.If):
            branches += 1
            max_depth = max(max_depth, depth + 1)
            visit_body(node.body, depth + 1)
            if _is_elif(node, lines):
                visit(node.orelse[0], depth)
            elif node.orelse:
                branches += 1
                visit_body(node.orelse, depth + 1)
            return
        if isinstance(node, _BLOCK_NODES):
            max_depth = max(max_depth, depth + 1)
            for name in ("body", "orelse", "finalbody"):
                visit_body(getattr(node, name, []), depth + 1)
            for handler in getattr(node, "handlers", []):
                branches += 1
                visit_body(handler.body, depth + 1)
            for case in getattr(node, "cases", []):
                branches += 1
                visit_body(case.body, depth + 1)
            return
        for child in ast.iter_child_nodes(node):
            if isinstance(child, ast.stmt):
                visit(child, depth)

    visit_body(fn.node.body, 0)
    return max_depth, branches


def lcom(cls: Entity, attribute_uses: Mapping[str, set]) -> int:
    """CK LCOM1: method pairs sharing no attribute minus pairs sharing one, floored at 0."""
    methods = sorted(attribute_uses)
    if len(methods) < 2:
        return 0
    disjoint = shared = 0
    for a, b in combinations(methods, 2):
        if attribute_uses[a] & attribute_uses[b]:
            shared += 1
        else:
            disjoint += 1
    return max(disjoint - shared, 0)


def return_count(fn: Entity) -> int:
    return sum(isinstance(n, ast.Return) for n in walk_local(fn.node))


def comment_ratio(entity: Entity, module: SourceModule) -> float:
    loc = entity.line_end - entity.line_start + 1
    if loc <= 0:
        return 0.0
    marked = module.comment_lines
    comments = sum(1 for n in range(entity.line_start, entity.line_end + 1) if n in marked)
    return comments / loc


# ---------------------------------------------------------------------------
# Class-level facts
# ---------------------------------------------------------------------------


def methods_by_class(entities: Iterable[Entity]) -> dict[tuple[str, str], list[Entity]]:
    out: dict[tuple[str, str], list[Entity]] = defaultdict(list)
    for e in entities:
        if e.kind == "method":
            out[(e.module, e.parent)].append(e)
    return out


def receiver_attributes(method: Entity) -> dict[str, set[str]]:
    """Attribute names touched through the receiver, split into 'load' and 'store'."""
    out = {"load": set(), "store": set()}
    if not method.receiver:
        return out
    for n in walk_local(method.node):
        if isinstance(n, ast.Attribute) and isinstance(n.value, ast.Name) and n.value.id == method.receiver:
            out["store" if isinstance(n.ctx, (ast.Store, ast.Del)) else "load"].add(n.attr)
    return out


def class_body_attributes(cls: Entity) -> set[str]:
    names = set()
    for stmt in cls.node.body:
        targets = []
        if isinstance(stmt, ast.Assign):
            targets = stmt.targets
        elif isinstance(stmt, (ast.AnnAssign, ast.AugAssign)):
            targets = [stmt.target]
        for t in targets:
            for n in ast.walk(t):
                if isinstance(n, ast.Name):
                    names.add(n.id)
    return names


def attribute_use_table(cls: Entity, methods: list[Entity]) -> dict[str, set[str]]:
    method_names = {m.name for m in methods}
    table = {}
    for m in methods:
        uses = receiver_attributes(m)
        table[m.uid] = (uses["load"] | uses["store"]) - method_names
    return table


@dataclass
class ClassHierarchy:
    """Project classes with their resolved project-local bases."""

    classes: dict[str, Entity]  # uid -> class entity
    bases: dict[str, list[Optional[str]]]  # uid -> resolved base uids (None = unresolvable)
    by_name: dict[str, list[str]]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    _dit: dict[str, int] = field(default_factory=dict)
    _children: Optional[dict[str, list[str]]] = None

    def children(self, uid: str) -> list[str]:
        if self._children is None:
            index = defaultdict(set)
            for child, bases in self.bases.items():
                for base in bases:
                    if base is not None:
                        index[base].add(child)
            self._children = {k: sorted(v) for k, v in index.items()}
        return self._children.get(uid, [])

    def dit(self, uid: str) -> int:
        if uid in self._dit:
            return self._dit[uid]
        self._compute_dit(uid)
        return self._dit[uid]

    def _compute_dit(self, root: str) -> None:
        # iterative DFS; back edges (inheritance cycles) are ignored
        on_stack = {root}
        work = [(root, iter(self.bases[root]), 0)]
        while work:
            uid, it, best = work[-1]
            advanced = False
            for base in it:
                if base is None:
                    best = max(best, 1)
                    continue
                if base in self._dit:
                    best = max(best, 1 + self._dit[base])
                    continue
                if base in on_stack:
                    cls = self.classes[uid]
                    self.diagnostics.append(
                        Diagnostic("inheritance_cycle", cls.file, cls.line_start,
                                   f"class '{cls.qualified_name}' takes part in an inheritance cycle; edge ignored")
                    )
                    continue
                work[-1] = (uid, it, best)
                on_stack.add(base)
                work.append((base, iter(self.bases[base]), 0))
                advanced = True
                break
            if advanced:
                continue
            work.pop()
            on_stack.discard(uid)
            self._dit[uid] = best
            if work:
                puid, pit, pbest = work[-1]
                work[-1] = (puid, pit, max(pbest, 1 + best))


IMPLICIT_BASES = {"object", "builtins.object"}


def build_hierarchy(entities: Iterable[Entity], records: Iterable[ImportRecord] = ()) -> ClassHierarchy:
    classes = {e.uid: e for e in entities if e.kind == "class"}
    by_name: dict[str, list[str]] = defaultdict(list)
    for uid, cls in sorted(classes.items()):
        by_name[cls.name].append(uid)
    imported: dict[str, set[str]] = defaultdict(set)
    for rec in records:
        if rec.kind == "project" and rec.resolved:
            imported[rec.importer].add(rec.resolved)

    def resolve(cls: Entity, base: str) -> Optional[str]:
        simple = base.rsplit(".", 1)[-1]
        candidates = [u for u in by_name.get(simple, []) if u != cls.uid]
        if not candidates:
            return None
        same = [u for u in candidates if classes[u].module == cls.module]
        if same and "." not in base:
            return same[0]
        visible = [u for u in candidates if classes[u].module in imported[cls.module]]
        if visible:
            return visible[0]
        if len(candidates) == 1:
            return candidates[0]
        return None

    bases = {}
    for uid, cls in classes.items():
        bases[uid] = [resolve(cls, b) for b in cls.bases if b not in IMPLICIT_BASES]
    return ClassHierarchy(classes=classes, bases=bases, by_name=dict(by_name))


def _called_names(methods: list[Entity]) -> set[str]:
    names = set()
    for m in methods:
        for n in walk_local(m.node):
            if isinstance(n, ast.Call):
                if isinstance(n.func, ast.Attribute):
                    names.add(n.func.attr)
                elif isinstance(n.func, ast.Name):
                    names.add(n.func.id)
    return names


def _is_super_call(node: ast.AST) -> bool:
    return isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "super"


def message_passing(methods: list[Entity]) -> int:
    """Calls sent to a receiver other than the method's own (``self``/``super()``)."""
    total = 0
    for m in methods:
        for n in walk_local(m.node):
            if isinstance(n, ast.Call) and isinstance(n.func, ast.Attribute):
                target = n.func.value
                if isinstance(target, ast.Name) and target.id == m.receiver:
                    continue
                if _is_super_call(target):
                    continue
                total += 1
    return total


def coupled_classes(cls: Entity, hierarchy: ClassHierarchy) -> set[str]:
    """Names of other project classes referenced anywhere in the class body."""
    names = set()
    for n in ast.walk(cls.node):
        if isinstance(n, ast.Name):
            names.add(n.id)
        elif isinstance(n, ast.Attribute):
            names.add(n.attr)
    own = cls.name
    return {
        name for name in names
        if name != own and any(u != cls.uid for u in hierarchy.by_name.get(name, ()))
    }


def ck_suite(cls: Entity, methods: list[Entity], hierarchy: ClassHierarchy, cc: Mapping[str, int]) -> dict[str, int]:
    """Class metrics; ``methods`` are the class's own methods, ``cc`` maps uid -> CC."""
    nom = len(methods)
    method_names = {m.name for m in methods}
    attrs = set(class_body_attributes(cls)) - method_names
    for m in methods:
        uses = receiver_attributes(m)
        attrs |= uses["store"] - method_names
    return {
        "NOM": nom,
        "WMPC1": sum(cc[m.uid] for m in methods),
        "WMPC2": nom,
        "LCOM": lcom(cls, attribute_use_table(cls, methods)),
        "CBO": len(coupled_classes(cls, hierarchy)),
        "RFC": nom + len(_called_names(methods)),
        "MPC": message_passing(methods),
        "DIT": hierarchy.dit(cls.uid),
        "NOC": len(hierarchy.children(cls.uid)),
        "ATTR_COUNT": len(attrs),
        "SIZE2": len(attrs) + nom,
    }


def compute_metrics(
    modules: Iterable[SourceModule],
    entities: list[Entity],
    records: Iterable[ImportRecord] = (),
    hierarchy: Optional[ClassHierarchy] = None,
) -> dict[str, MetricVector]:
    """MetricVector for every entity, keyed by entity uid."""
    by_module = {m.module_name: m for m in modules}
    hierarchy = hierarchy or build_hierarchy(entities, records)
    vectors: dict[str, MetricVector] = {}
    cc: dict[str, int] = {}
    for e in entities:
        module = by_module[e.module]
        values: dict[str, float] = {
            "LOC": e.line_end - e.line_start + 1,
            "COMMENT_RATIO": comment_ratio(e, module),
        }
        if e.kind in ("function", "method"):
            cc[e.uid] = values["CC"] = cyclomatic_complexity(e)
            nesting, branches = nesting_and_branches(e, module.lines)
            values["MAX_NESTING"] = nesting
            values["BRANCH_COUNT"] = branches
            values["PARAM_COUNT"] = len(e.parameters)
            values["RETURN_COUNT"] = return_count(e)
        vectors[e.uid] = MetricVector(e, values)
    methods = methods_by_class(entities)
    for e in entities:
        if e.kind == "class":
            vectors[e.uid].values.update(ck_suite(e, methods.get((e.module, e.qualified_name), []), hierarchy, cc))
    return vectors
