"""Clone detection over normalized statement lines."""

from __future__ import annotations

import ast
import io
import keyword
import tokenize
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from smellscope.source import SCOPE_NODES, SourceModule

_SKIP_TOKENS = {
    tokenize.COMMENT, tokenize.NL, tokenize.NEWLINE, tokenize.INDENT,
    tokenize.DEDENT, tokenize.ENCODING, tokenize.ENDMARKER,
}


@dataclass(frozen=True)
class NormalizedLine:
    row: int
    end_row: int
    text: str


@dataclass(frozen=True)
class CloneRegion:
    file: str
    module: str
    line_start: int
    line_end: int
    length: int  # normalized statement lines
    others: tuple[tuple[str, int, int], ...]  # (file, start, end) of matching regions


def _header_rows(tree: ast.AST) -> set[int]:
    """Rows holding decorators and def/class signatures; clones never span them."""
    rows = set()
    for node in ast.walk(tree):
        if isinstance(node, SCOPE_NODES):
            first = min([node.lineno] + [d.lineno for d in node.decorator_list])
            body_start = node.body[0].lineno
            if body_start == node.lineno:  # one-liner such as `def f(): pass`
                body_start = node.lineno + 1
            rows.update(range(first, body_start))
    return rows


def normalize(token: tokenize.TokenInfo) -> str:
    if token.type == tokenize.NAME:
        return token.string if keyword.iskeyword(token.string) else "ID"
    if token.type == tokenize.NUMBER:
        return "NUM"
    if token.type == tokenize.STRING:
        return "STR"
    return token.string


def normalized_segments(module: SourceModule) -> list[list[NormalizedLine]]:
    """Runs of normalized lines, split wherever a def/class header intervenes.

    Identifiers become ``ID``, literals become a type tag, and comments and
    whitespace disappear, so renamed copies normalize identically.
    """
    if not module.parse_ok:
        return []
    text = "\n".join(module.lines) + "\n"
    rows: dict[int, list[str]] = defaultdict(list)
    ends: dict[int, int] = {}
    try:
        for tok in tokenize.generate_tokens(io.StringIO(text).readline):
            if tok.type in _SKIP_TOKENS:
                continue
            row = tok.start[0]
            rows[row].append(normalize(tok))
            ends[row] = max(ends.get(row, row), tok.end[0])
    except (tokenize.TokenError, IndentationError, SyntaxError):
        return []
    headers = _header_rows(module.tree)
    segments: list[list[NormalizedLine]] = [[]]
    covered_until = 0
    for row in sorted(rows):
        if row in headers:
            if segments[-1]:
                segments.append([])
            continue
        if row <= covered_until:
            continue
        segments[-1].append(NormalizedLine(row, ends[row], " ".join(rows[row])))
        covered_until = ends[row]
    return [s for s in segments if s]


def find_clones(modules: Iterable[SourceModule], min_lines: int) -> list[CloneRegion]:
    """Maximal regions whose ``min_lines``-windows recur elsewhere, without overlap."""
    if min_lines < 2:
        raise ValueError("min_lines must be >= 2")
    modules = [m for m in modules if m.parse_ok]
    segs: list[tuple[SourceModule, list[NormalizedLine]]] = []
    for m in modules:
        for seg in normalized_segments(m):
            segs.append((m, seg))
    occurrences: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for s_idx, (_, seg) in enumerate(segs):
        texts = [line.text for line in seg]
        for i in range(len(texts) - min_lines + 1):
            occurrences[tuple(texts[i:i + min_lines])].append((s_idx, i))

    covered: dict[int, set[int]] = defaultdict(set)
    window_keys: dict[tuple[int, int], tuple] = {}
    for key, occ in occurrences.items():
        if len(occ) < 2:
            continue
        segs_hit = {s for s, _ in occ}
        if len(segs_hit) == 1:
            starts = [i for _, i in occ]
            if max(starts) - min(starts) < min_lines:
                continue
        for s, i in occ:
            covered[s].update(range(i, i + min_lines))
            window_keys[(s, i)] = key

    regions = []  # (seg index, first pos, last pos)
    for s in sorted(covered):
        positions = sorted(covered[s])
        start = prev = positions[0]
        for p in positions[1:]:
            if p != prev + 1:
                regions.append((s, start, prev))
                start = p
            prev = p
        regions.append((s, start, prev))

    key_regions: dict[tuple, set[int]] = defaultdict(set)
    region_keys: list[set] = []
    for r_idx, (s, first, last) in enumerate(regions):
        keys = {window_keys[(s, i)] for i in range(first, last + 1) if (s, i) in window_keys}
        region_keys.append(keys)
        for k in keys:
            key_regions[k].add(r_idx)

    def span(r_idx):
        s, first, last = regions[r_idx]
        module, seg = segs[s]
        return module.rel_path, seg[first].row, seg[last].end_row

    out = []
    for r_idx, (s, first, last) in enumerate(regions):
        module, _ = segs[s]
        partners = set()
        for k in region_keys[r_idx]:
            partners |= key_regions[k]
        partners.discard(r_idx)
        file, start, end = span(r_idx)
        out.append(
            CloneRegion(
                file=file,
                module=module.module_name,
                line_start=start,
                line_end=end,
                length=last - first + 1,
                others=tuple(sorted(span(p) for p in partners)),
            )
        )
    return sorted(out, key=lambda r: (r.file, r.line_start))
