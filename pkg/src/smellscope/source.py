"""Project discovery, parsing, entity extraction and import resolution."""

from __future__ import annotations

import ast
import io
import os
import re
import tokenize
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, partial
from pathlib import Path
from typing import Iterable, Optional

from smellscope.findings import Diagnostic

FUNCTION_NODES = (ast.FunctionDef, ast.AsyncFunctionDef)
SCOPE_NODES = (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)

_LINE_BREAK = re.compile(r"\r\n|\r|\n")


class InputError(Exception):
    """Fatal problem with the analysis input (missing root, bad corpus)."""


@dataclass
class SourceModule:
    file_path: Path
    rel_path: str
    module_name: str
    is_package: bool
    lines: list[str]
    tree: Optional[ast.Module] = field(default=None, repr=False)
    parse_ok: bool = False
    parse_error: Optional[str] = None

    @cached_property
    def comment_lines(self) -> frozenset[int]:
        """Line numbers whose first token is a comment."""
        found = set()
        text = "\n".join(self.lines) + "\n"
        try:
            for tok in tokenize.generate_tokens(io.StringIO(text).readline):
                if tok.type == tokenize.COMMENT:
                    row, col = tok.start
                    if not self.lines[row - 1][:col].strip():
                        found.add(row)
        except (tokenize.TokenError, IndentationError, SyntaxError):
            found = {i for i, line in enumerate(self.lines, 1) if line.lstrip().startswith("#")}
        return frozenset(found)


@dataclass(frozen=True)
class Entity:
    kind: str  # function | method | class | module
    module: str
    file: str
    qualified_name: str
    line_start: int
    line_end: int
    parameters: tuple[str, ...] = ()
    bases: tuple[str, ...] = ()
    docstring_present: bool = False
    decorators: tuple[str, ...] = ()
    receiver: Optional[str] = None
    parent: Optional[str] = None  # qualified name of the enclosing entity
    node: Optional[ast.AST] = field(default=None, compare=False, repr=False)

    @property
    def line_span(self) -> tuple[int, int]:
        return (self.line_start, self.line_end)

    @property
    def name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1] if self.kind != "module" else self.module

    @property
    def uid(self) -> str:
        return f"{self.module}:{self.kind}:{self.qualified_name}:{self.line_start}"


@dataclass(frozen=True)
class ImportRecord:
    importer: str
    target: str
    resolved: Optional[str]
    kind: str  # project | stdlib | third_party | unresolved_relative
    line: int
    is_relative: bool
    level: int
    alias: str  # local name bound by the statement, "*" for star imports
    imported_name: Optional[str] = None  # Y in ``from X import Y``

    @property
    def top_level(self) -> str:
        return self.target.split(".", 1)[0]


# ---------------------------------------------------------------------------
# Discovery
# ---------------------------------------------------------------------------


def module_name_for(rel_path: str) -> tuple[str, bool]:
    """Dotted module name and package flag for a root-relative posix path."""
    parts = rel_path[:-3].split("/") if rel_path.endswith(".py") else rel_path.split("/")
    if parts[-1] == "__init__" and len(parts) > 1:
        return ".".join(parts[:-1]), True
    return ".".join(parts), False


def glob_to_regex(pattern: str) -> re.Pattern:
    """Translate a path glob with ``**`` support into a compiled regex."""
    out = []
    i = 0
    while i < len(pattern):
        if pattern.startswith("**/", i):
            out.append("(?:.*/)?")
            i += 3
        elif pattern.startswith("/**", i) and i + 3 == len(pattern):
            out.append("(?:/.*)?")
            i += 3
        elif pattern.startswith("**", i):
            out.append(".*")
            i += 2
        elif pattern[i] == "*":
            out.append("[^/]*")
            i += 1
        elif pattern[i] == "?":
            out.append("[^/]")
            i += 1
        else:
            out.append(re.escape(pattern[i]))
            i += 1
    return re.compile("".join(out) + r"\Z")


def is_excluded(rel_path: str, patterns: Iterable[re.Pattern]) -> bool:
    return any(p.match(rel_path) for p in patterns)


def split_lines(text: str) -> list[str]:
    lines = _LINE_BREAK.split(text)
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def load_module(path: Path, root: Path) -> SourceModule:
    rel = path.relative_to(root).as_posix()
    name, is_package = module_name_for(rel)
    module = SourceModule(file_path=path, rel_path=rel, module_name=name, is_package=is_package, lines=[])
    try:
        raw = path.read_bytes()
    except OSError as exc:
        module.parse_error = f"line 0: unreadable file ({exc.strerror})"
        return module
    try:
        encoding, _ = tokenize.detect_encoding(io.BytesIO(raw).readline)
        text = raw.decode(encoding)
    except (SyntaxError, LookupError, UnicodeDecodeError) as exc:
        module.parse_error = f"line 0: cannot decode source ({exc})"
        return module
    if text.startswith("\ufeff"):
        text = text[1:]
    module.lines = split_lines(text)
    try:
        module.tree = ast.parse(text, filename=rel)
    except SyntaxError as exc:
        module.parse_error = f"line {exc.lineno or 0}: {exc.msg}"
        return module
    except (ValueError, RecursionError, MemoryError) as exc:
        module.parse_error = f"line 0: {exc.__class__.__name__}: {exc}"
        return module
    module.parse_ok = True
    return module


def _walk_py_files(root: Path, excludes: list[re.Pattern]) -> list[Path]:
    found = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        base = Path(dirpath)
        dirnames[:] = sorted(d for d in dirnames if not (base / d).is_symlink())
        for name in filenames:
            if not name.endswith(".py"):
                continue
            path = base / name
            if path.is_symlink():
                continue
            if is_excluded(path.relative_to(root).as_posix(), excludes):
                continue
            found.append(path)
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def discover_project(root, excludes: Iterable[str] = (), jobs: int = 1) -> list[SourceModule]:
    """Find and parse every ``*.py`` file under ``root`` in path order.

    Parse failures are recorded on the module (``parse_ok=False``) and never
    raise; a missing root does.
    """
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"project root does not exist or is not a directory: {root}")
    patterns = [glob_to_regex(p) for p in excludes]
    paths = _walk_py_files(root, patterns)
    loader = partial(load_module, root=root)
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(loader, paths, chunksize=max(1, len(paths) // (jobs * 4))))
    return [loader(p) for p in paths]


def parse_diagnostics(modules: Iterable[SourceModule]) -> list[Diagnostic]:
    out = []
    for m in modules:
        if not m.parse_ok:
            line = 0
            match = re.match(r"line (\d+):", m.parse_error or "")
            if match:
                line = int(match.group(1))
            out.append(Diagnostic("parse_error", m.rel_path, line, m.parse_error or "parse failed"))
    return out


# ---------------------------------------------------------------------------
# Entities
# ---------------------------------------------------------------------------


def dotted_name(node: ast.AST) -> Optional[str]:
    """``a.b.c`` for Name/Attribute chains; subscripts and calls are unwrapped."""
    if isinstance(node, ast.Call):
        return dotted_name(node.func)
    if isinstance(node, ast.Subscript):
        return dotted_name(node.value)
    parts = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if isinstance(node, ast.Name):
        parts.append(node.id)
        return ".".join(reversed(parts))
    return None


def _parameters(args: ast.arguments) -> list[str]:
    names = [a.arg for a in args.posonlyargs + args.args]
    if args.vararg:
        names.append(args.vararg.arg)
    names.extend(a.arg for a in args.kwonlyargs)
    if args.kwarg:
        names.append(args.kwarg.arg)
    return names


def _child_statements(node: ast.AST):
    for child in ast.iter_child_nodes(node):
        if isinstance(child, (ast.stmt, ast.excepthandler, ast.match_case)):
            yield child


def extract_entities(module: SourceModule) -> list[Entity]:
    """Module, class, function and method entities in document order."""
    if not module.parse_ok or module.tree is None:
        return []
    entities = [
        Entity(
            kind="module",
            module=module.module_name,
            file=module.rel_path,
            qualified_name=module.module_name,
            line_start=1,
            line_end=max(1, len(module.lines)),
            docstring_present=ast.get_docstring(module.tree) is not None,
            node=module.tree,
        )
    ]

    def visit(node: ast.AST, prefix: str, parent: Optional[str], in_class: bool) -> None:
        for child in _child_statements(node):
            if isinstance(child, SCOPE_NODES):
                qualname = f"{prefix}.{child.name}" if prefix else child.name
                decorators = tuple(filter(None, (dotted_name(d) for d in child.decorator_list)))
                if isinstance(child, ast.ClassDef):
                    entities.append(
                        Entity(
                            kind="class",
                            module=module.module_name,
                            file=module.rel_path,
                            qualified_name=qualname,
                            line_start=child.lineno,
                            line_end=child.end_lineno or child.lineno,
                            bases=tuple(filter(None, (dotted_name(b) for b in child.bases))),
                            docstring_present=ast.get_docstring(child) is not None,
                            decorators=decorators,
                            parent=parent,
                            node=child,
                        )
                    )
                    visit(child, qualname, qualname, True)
                else:
                    params = _parameters(child.args)
                    receiver = None
                    is_static = any(d.rsplit(".", 1)[-1] == "staticmethod" for d in decorators)
                    if in_class and params and not is_static and (child.args.posonlyargs or child.args.args):
                        receiver = params.pop(0)
                    entities.append(
                        Entity(
                            kind="method" if in_class else "function",
                            module=module.module_name,
                            file=module.rel_path,
                            qualified_name=qualname,
                            line_start=child.lineno,
                            line_end=child.end_lineno or child.lineno,
                            parameters=tuple(params),
                            docstring_present=ast.get_docstring(child) is not None,
                            decorators=decorators,
                            receiver=receiver,
                            parent=parent,
                            node=child,
                        )
                    )
                    visit(child, qualname, qualname, False)
            else:
                visit(child, prefix, parent, in_class)

    visit(module.tree, "", None, False)
    return entities


# ---------------------------------------------------------------------------
# Import resolution
# ---------------------------------------------------------------------------


def _longest_project_prefix(name: str, project: set[str]) -> Optional[str]:
    parts = name.split(".")
    for cut in range(len(parts), 0, -1):
        candidate = ".".join(parts[:cut])
        if candidate in project:
            return candidate
    return None


def _package_parts(module: SourceModule) -> list[str]:
    parts = module.module_name.split(".") if module.module_name else []
    return parts if module.is_package else parts[:-1]


def resolve_imports(modules: list[SourceModule], stdlib_names) -> list[ImportRecord]:
    """One record per imported name, resolved project > stdlib > third-party.

    Relative imports are resolved against the importer's package; a relative
    import that climbs above the project root, or that names no discovered
    module, is ``unresolved_relative``.
    """
    project = {m.module_name for m in modules}
    stdlib = frozenset(stdlib_names)
    records = []

    def external_kind(name: str) -> str:
        return "stdlib" if name.split(".", 1)[0] in stdlib else "third_party"

    for module in modules:
        if not module.parse_ok or module.tree is None:
            continue
        importer = module.module_name
        nodes = [n for n in ast.walk(module.tree) if isinstance(n, (ast.Import, ast.ImportFrom))]
        nodes.sort(key=lambda n: (n.lineno, n.col_offset))
        for node in nodes:
            if isinstance(node, ast.Import):
                for alias in node.names:
                    resolved = _longest_project_prefix(alias.name, project)
                    kind = "project" if resolved else external_kind(alias.name)
                    bound = alias.asname or alias.name.split(".", 1)[0]
                    records.append(
                        ImportRecord(importer, alias.name, resolved, kind, node.lineno, False, 0, bound)
                    )
                continue

            level = node.level or 0
            escaped = False
            if level:
                pkg = _package_parts(module)
                keep = len(pkg) - (level - 1)
                if keep < 0:
                    escaped = True
                    base = "." * level + (node.module or "")
                else:
                    base = ".".join(pkg[:keep] + ([node.module] if node.module else []))
            else:
                base = node.module or ""
            for alias in node.names:
                bound = alias.asname or alias.name
                if escaped:
                    records.append(
                        ImportRecord(importer, base, None, "unresolved_relative", node.lineno, True, level, bound, alias.name)
                    )
                    continue
                full = f"{base}.{alias.name}" if base else alias.name
                if alias.name != "*" and full in project:
                    resolved = full
                elif base:
                    resolved = _longest_project_prefix(base, project)
                else:
                    resolved = None
                if resolved:
                    kind = "project"
                    target = resolved if resolved == full else base
                elif level:
                    kind, target = "unresolved_relative", base or full
                else:
                    kind, target = external_kind(base), base
                records.append(
                    ImportRecord(importer, target, resolved, kind, node.lineno, bool(level), level, bound, alias.name)
                )
    return records


def import_diagnostics(records: Iterable[ImportRecord], modules: Iterable[SourceModule]) -> list[Diagnostic]:
    files = {m.module_name: m.rel_path for m in modules}
    return [
        Diagnostic(
            "unresolved_import",
            files.get(r.importer, r.importer),
            r.line,
            f"relative import of '{r.imported_name}' from '{r.target}' does not resolve to a project module",
        )
        for r in records
        if r.kind == "unresolved_relative"
    ]
