"""Module dependency graph and the queries the architectural bank needs."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from smellscope.findings import Diagnostic
from smellscope.source import ImportRecord, SourceModule

DEFAULT_CYCLE_CAP = 100


@dataclass
class DependencyGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    edge_meta: dict[tuple[str, str], list[int]]
    external_edges: dict[str, Counter]
    files: dict[str, str] = field(default_factory=dict)  # module name -> rel path
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def successors(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
        for targets in out.values():
            targets.sort()
        return out

    def dump(self) -> str:
        return "".join(f"{a} -> {b}\n" for a, b in sorted(self.edges))


def build_graph(records: Iterable[ImportRecord], modules: Iterable[SourceModule]) -> DependencyGraph:
    modules = list(modules)
    nodes = frozenset(m.module_name for m in modules if m.parse_ok)
    files = {m.module_name: m.rel_path for m in modules}
    edge_meta: dict[tuple[str, str], list[int]] = defaultdict(list)
    external: dict[str, Counter] = {n: Counter() for n in nodes}
    diagnostics = []
    for rec in records:
        if rec.kind == "third_party":
            external.setdefault(rec.importer, Counter())[rec.top_level] += 1
            continue
        if rec.kind != "project" or rec.resolved not in nodes:
            continue
        if rec.resolved == rec.importer:
            diagnostics.append(
                Diagnostic("self_import", files.get(rec.importer, rec.importer), rec.line,
                           f"module '{rec.importer}' imports itself; edge dropped")
            )
            continue
        edge_meta[(rec.importer, rec.resolved)].append(rec.line)
    return DependencyGraph(
        nodes=nodes,
        edges=frozenset(edge_meta),
        edge_meta={k: sorted(v) for k, v in edge_meta.items()},
        external_edges=external,
        files=files,
        diagnostics=diagnostics,
    )


def strongly_connected_components(nodes: Iterable[str], succ: dict[str, list[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative; each component sorted, list sorted."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components = []
    counter = 0
    for start in sorted(nodes):
        if start in index:
            continue
        work = [(start, iter(succ.get(start, ())))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                components.append(sorted(comp))
    return sorted(components)


def find_cycles(
    g: DependencyGraph,
    max_length: int,
    max_per_scc: Optional[int] = DEFAULT_CYCLE_CAP,
    diagnostics: Optional[list[Diagnostic]] = None,
) -> list[list[str]]:
    """Simple cycles of length <= ``max_length``, each rotated to start at its smallest node.

    Enumeration runs inside each strongly connected component: a cycle is
    found once, from its smallest member, by only extending paths through
    larger members. ``max_per_scc`` caps the count per component.
    """
    if max_length < 2:
        raise ValueError("max_length must be >= 2")
    succ = g.successors()
    cycles: list[list[str]] = []
    for comp in strongly_connected_components(g.nodes, succ):
        if len(comp) < 2:
            continue
        members = set(comp)
        found: list[list[str]] = []
        truncated = False
        for start in comp:
            path = [start]
            on_path = {start}
            work = [iter([n for n in succ[start] if n in members and n >= start])]
            while work and not truncated:
                step = next(work[-1], None)
                if step is None:
                    work.pop()
                    on_path.discard(path.pop())
                    continue
                if step == start:
                    found.append(list(path))
                    if max_per_scc is not None and len(found) >= max_per_scc:
                        truncated = True
                    continue
                if step in on_path or step < start or len(path) >= max_length:
                    continue
                path.append(step)
                on_path.add(step)
                work.append(iter([n for n in succ[step] if n in members and n >= start]))
            if truncated:
                break
        if truncated and diagnostics is not None:
            diagnostics.append(
                Diagnostic("cycle_truncated", g.files.get(comp[0], comp[0]), 0,
                           f"cycle enumeration stopped after {max_per_scc} cycles in a component of {len(comp)} modules")
            )
        cycles.extend(found)
    return sorted(cycles)


def fan_in_out(g: DependencyGraph) -> dict[str, tuple[int, int]]:
    fan_in = Counter(b for _, b in g.edges)
    fan_out = Counter(a for a, _ in g.edges)
    return {
        n: (fan_in[n], fan_out[n] + len(g.external_edges.get(n, ())))
        for n in sorted(g.nodes)
    }


def instability(g: DependencyGraph) -> dict[str, float]:
    out = {}
    for node, (ca, ce) in fan_in_out(g).items():
        out[node] = ce / (ca + ce) if ca + ce else 0.0
    return out
