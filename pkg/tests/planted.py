"""Planted-smell fixtures: one smelly project and one clean twin per detector.

Every span below is worked out from the fixture text, not from the analyzer.
Generated fixtures compute their spans arithmetically from the generator
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass
class Plant:
    catalog_id: str
    smelly: dict[str, str]
    clean: dict[str, str]
    spans: list[tuple[str, int, int]]  # expected (file, line_start, line_end) per finding


def src(*lines: str) -> str:
    return "\n".join(lines) + "\n"


def write_tree(root: Path, files: dict[str, str]) -> Path:
    for rel, text in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return root


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def long_function(total_lines: int, comments: int = 0) -> str:
    body = ['    """Doc."""']
    body += ["    # step"] * comments
    while len(body) < total_lines - 2:
        body.append(f"    value_{len(body)} = len('{len(body)}')")
    body.append("    return None")
    return src("def work():", *body)


def class_with_methods(count: int, name: str = "Big") -> str:
    lines = [f"class {name}:", '    """Doc."""']
    for i in range(count):
        lines += [f"    def m{i}(self):", "        return None"]
    return src(*lines)


def class_with_attrs(count: int) -> str:
    return src("class Store:", '    """Doc."""', *(f"    a{i} = None" for i in range(count)))


def branchy(ifs: int) -> str:
    lines = ["def pick(x):", '    """Doc."""', "    y = None"]
    for i in range(ifs):
        lines += [f"    if x == '{i}':", f"        y = '{i}'"]
    lines.append("    return y")
    return src(*lines)


def nested(depth: int) -> str:
    lines = ["def dive(x):", '    """Doc."""']
    for level in range(depth):
        lines.append("    " * (level + 1) + "if x:")
    lines.append("    " * (depth + 1) + "return x")
    lines.append("    return None")
    return src(*lines)


def class_calling(count: int) -> str:
    lines = ["class Caller:", '    """Doc."""', "    def run(self):", "        return ["]
    lines += [f"            f{i}()," for i in range(count)]
    lines.append("        ]")
    return src(*lines)


def complex_method(ifs: int) -> str:
    lines = ["class Heavy:", '    """Doc."""', "    def run(self, x):"]
    for i in range(ifs):
        lines += [f"        if x == '{i}':", "            x = None"]
    lines.append("        return x")
    return src(*lines)


def disjoint_lcom(methods: int) -> str:
    lines = ["class Scattered:", '    """Doc."""']
    for i in range(methods):
        lines += [f"    def m{i}(self):", f"        return self.a{i}"]
    return src(*lines)


def coupled(count: int) -> str:
    lines = []
    for i in range(count):
        lines += [f"class C{i}:", '    """Doc."""', ""]
    start = len(lines) + 1
    lines += ["class Hub:", '    """Doc."""', "    def parts(self):", "        return ["]
    lines += [f"            C{i}," for i in range(count)]
    lines.append("        ]")
    return src(*lines), start, len(lines)


def messaging(calls: int) -> str:
    lines = ["class Sender:", '    """Doc."""', "    def send(self, other):"]
    lines += ["        other.ping()"] * calls
    return src(*lines)


def inheritance_chain(depth: int) -> tuple[str, int, int]:
    lines = ["class A0:", '    """Doc."""', ""]
    for i in range(1, depth + 1):
        lines += [f"class A{i}(A{i - 1}):", '    """Doc."""', ""]
    last = 1 + 3 * depth
    return src(*lines), last, last + 1


def children(count: int) -> str:
    lines = ["class Base:", '    """Doc."""', ""]
    for i in range(count):
        lines += [f"class Kid{i}(Base):", '    """Doc."""', ""]
    return src(*lines)


def fan_in(importers: int) -> dict[str, str]:
    files = {"pkg/__init__.py": "", "pkg/core.py": src("VALUE = None")}
    for i in range(importers):
        files[f"pkg/user{i}.py"] = src("from pkg import core", "", "COPY = core.VALUE")
    return files


def fan_out(targets: int) -> dict[str, str]:
    files = {"pkg/__init__.py": ""}
    lines = []
    for i in range(targets):
        files[f"pkg/leaf{i}.py"] = src("VALUE = None")
        lines.append(f"from pkg import leaf{i}")
    lines += ["", "ALL = [" + ", ".join(f"leaf{i}" for i in range(targets)) + "]"]
    files["pkg/hub.py"] = src(*lines)
    return files


def long_file(lines: int) -> str:
    return src(*(f"V{i} = None" for i in range(lines)))


STDLIB_SAMPLE = [
    "abc", "argparse", "base64", "bisect", "calendar", "collections", "contextlib", "copy",
    "csv", "datetime", "decimal", "difflib", "enum", "fnmatch", "functools", "glob",
    "hashlib", "heapq", "hmac", "html", "inspect", "io", "itertools", "json",
]


def many_imports(count: int) -> str:
    names = STDLIB_SAMPLE[:count]
    return src(*(f"import {n}" for n in names), "", "ALL = [" + ", ".join(names) + "]")


def god_module(functions: int) -> str:
    lines = []
    for i in range(functions):
        lines += [f"def f{i}():", '    """Doc."""', "    return None", ""]
    return src(*lines)


def scattered(modules: int) -> dict[str, str]:
    return {f"m{i}.py": src("def configure():", '    """Doc."""', "    return None") for i in range(modules)}


def shotgun(users: int) -> dict[str, str]:
    files = {"pkg/__init__.py": "", "pkg/core.py": src("def helper():", '    """Doc."""', "    return None")}
    for i in range(users):
        files[f"pkg/use{i}.py"] = src("from pkg.core import helper", "", "VALUE = helper()")
    return files


# ---------------------------------------------------------------------------
# code smells
# ---------------------------------------------------------------------------

PLANTS: list[Plant] = []


def plant(catalog_id, smelly, clean, spans):
    if isinstance(smelly, str):
        smelly = {"m.py": smelly}
    if isinstance(clean, str):
        clean = {"m.py": clean}
    PLANTS.append(Plant(catalog_id, smelly, clean, spans))


plant("LONG_METHOD", long_function(46), long_function(45), [("m.py", 1, 46)])
plant("LARGE_CLASS", class_with_methods(16), class_with_methods(15), [("m.py", 1, 2 + 2 * 16)])
plant(
    "LONG_PARAMETER_LIST",
    src("def build(a, b, c, d, e, f):", "    return a + b + c + d + e + f"),
    src("def build(a, b, c, d, e):", "    return a + b + c + d + e"),
    [("m.py", 1, 2)],
)
plant(
    "PRIMITIVE_OBSESSION",
    src("def move(x: int, y: int, speed: float, name: str):", "    return x, y, speed, name"),
    src("def move(x: int, y: int, speed: float, owner):", "    return x, y, speed, owner"),
    [("m.py", 1, 2)],
)
plant(
    "DUPLICATE_CODE",
    src(
        "def first(a, b):",
        "    c = a + b",
        "    d = c * a",
        "    e = d - b",
        "    f = e + c",
        "    g = f * d",
        "    return g",
        "",
        "",
        "def second(x, y):",
        "    z = x + y",
        "    w = z * x",
        "    v = w - y",
        "    u = v + z",
        "    t = u * w",
        "    return t",
    ),
    src(
        "def first(a, b):",
        "    c = a + b",
        "    d = c * a",
        "    e = d - b",
        "    f = e + c",
        "    return f",
        "",
        "",
        "def second(x, y):",
        "    z = x + y",
        "    w = z * x",
        "    v = w - y",
        "    u = v + z",
        "    return u",
    ),
    [("m.py", 2, 7), ("m.py", 11, 16)],
)
plant(
    "DEAD_CODE",
    src('"""Module."""', "", "", "def used():", '    """Used."""', "    return 1", "", "",
        "def unused_helper():", '    """Never called."""', "    return 2", "", "", "VALUE = used()"),
    src('"""Module."""', "", "", "def used():", '    """Used."""', "    return 1", "", "",
        "def unused_helper():", '    """Never called."""', "    return 2", "", "", "VALUE = used() + unused_helper()"),
    [("m.py", 9, 11)],
)
plant(
    "SPECULATIVE_GENERALITY",
    src("def scale(value, factor, unused_flag):", '    """Scale."""', "    return value * factor"),
    src("def scale(value, factor, enabled):", '    """Scale."""', "    return value * factor if enabled else value"),
    [("m.py", 1, 3)],
)
_divergent_head = ["import json", "import os", "import re", "", "", "class Mixed:", '    """Doc."""', "",
                   "    def save(self, data):", "        return json.dumps(data)", "",
                   "    def where(self):", "        return os.getcwd()"]
plant(
    "DIVERGENT_CHANGE",
    src(*_divergent_head, "", "    def match(self, text):", "        return re.match('a', text)"),
    src(*_divergent_head, "", "    def match(self, text):", "        return os.path.basename(text)"),
    [("m.py", 6, 16)],
)
plant(
    "COMPLEX_CONDITIONAL",
    src("def check(a, b, c, d, e):", '    """Doc."""', "    if a and b and c and d and e:",
        "        return True", "    return False"),
    src("def check(a, b, c, d, e):", '    """Doc."""', "    if a and b and c and d:",
        "        return e", "    return False"),
    [("m.py", 3, 3)],
)
plant(
    "MESSAGE_CHAIN",
    src("def city_of(order):", '    """Doc."""', "    return order.customer.address.city.name.upper()"),
    src("def city_of(order):", '    """Doc."""', "    return order.customer.address.city.name"),
    [("m.py", 3, 3)],
)
_envy_head = ["class Invoice:", '    """Doc."""', "", "    def __init__(self):", "        self.rate = 1", "",
              "    def total(self, other):"]
plant(
    "FEATURE_ENVY",
    src(*_envy_head, "        return (other.a + other.b + other.c + other.d + other.e + other.f) * self.rate"),
    src(*_envy_head, "        return (other.a + other.b + other.c + other.d + other.e) * self.rate"),
    [("m.py", 7, 8)],
)
plant(
    "DATA_CLUMPS",
    src("def draw(x, y, color):", '    """Doc."""', "    return x, y, color", "", "",
        "def erase(x, y, color):", '    """Doc."""', "    return x, y, color"),
    src("def draw(x, y, color):", '    """Doc."""', "    return x, y, color", "", "",
        "def erase(x, y):", '    """Doc."""', "    return x, y"),
    [("m.py", 1, 3)],
)
plant(
    "TEMPORARY_FIELD",
    src("class Job:", '    """Doc."""', "", "    def __init__(self):", "        self.name = 'job'", "",
        "    def run(self):", "        self.scratch = [self.name]", "        return self.scratch"),
    src("class Job:", '    """Doc."""', "", "    def __init__(self):", "        self.name = 'job'",
        "        self.scratch = []", "", "    def run(self):", "        self.scratch = [self.name]",
        "        return self.scratch"),
    [("m.py", 8, 8)],
)
plant("POTENTIAL_SHOTGUN_SURGERY", shotgun(6), shotgun(5), [("pkg/core.py", 1, 3)])
plant("LOW_COMMENT_RATIO", long_function(31), long_function(31, comments=1), [("m.py", 1, 31)])
plant(
    "LARGE_COMMENT_BLOCK",
    src(*(["# note"] * 11), "VALUE = None"),
    src(*(["# note"] * 10), "VALUE = None"),
    [("m.py", 1, 11)],
)
plant(
    "MISSING_DOCSTRING",
    src('"""Module."""', "", "", "def public():", "    return 1"),
    src('"""Module."""', "", "", "def public():", '    """Doc."""', "    return 1"),
    [("m.py", 4, 5)],
)
plant(
    "MAGIC_NUMBER",
    src("def area(r):", '    """Doc."""', "    return 3.14159 * r * r"),
    src("PI = 3.14159", "", "", "def area(r):", '    """Doc."""', "    return PI * r * r"),
    [("m.py", 3, 3)],
)
plant(
    "GLOBAL_VARIABLE_ABUSE",
    src("A = B = C = None", "", "", "def reset():", '    """Doc."""', "    global A, B, C", "    A = B = C = 1"),
    src("A = B = C = None", "", "", "def reset():", '    """Doc."""', "    global A, B", "    A = B = 1"),
    [("m.py", 4, 7)],
)
_grades = ["def grade(score):", '    """Doc."""', "    if score > 90:", "        return 'A'", "    if score > 80:",
           "        return 'B'", "    if score > 70:", "        return 'C'"]
plant(
    "TOO_MANY_RETURNS",
    src(*_grades, "    if score > 60:", "        return 'D'", "    return 'F'"),
    src(*_grades, "    return 'F'"),
    [("m.py", 1, 11)],
)
# the body below is 81 characters; the clean twin's is 44
plant(
    "LONG_LAMBDA",
    src("KEY = lambda item: (item.priority, item.created_at, item.owner.name, item.title.lower(), item.ident)"),
    src("KEY = lambda item: (item.priority, item.created_at, item.ident)"),
    [("m.py", 1, 1)],
)
plant(
    "MUTABLE_DEFAULT_ARGUMENT",
    src("def collect(item, bucket=[]):", '    """Doc."""', "    bucket.append(item)", "    return bucket"),
    src("def collect(item, bucket=None):", '    """Doc."""', "    bucket = bucket or []",
        "    bucket.append(item)", "    return bucket"),
    [("m.py", 1, 1)],
)
_load = ["def load(path):", '    """Doc."""', "    try:", "        return open(path).read()"]
plant(
    "BROAD_EXCEPT",
    src(*_load, "    except Exception:", "        return ''"),
    src(*_load, "    except OSError:", "        return ''"),
    [("m.py", 5, 5)],
)
plant(
    "UNUSED_IMPORT",
    src("import os", "import sys", "", "", "ARGS = sys.argv"),
    src("import sys", "", "", "ARGS = sys.argv"),
    [("m.py", 1, 1)],
)

# ---------------------------------------------------------------------------
# structural smells
# ---------------------------------------------------------------------------

plant("TOO_MANY_BRANCHES", branchy(13), branchy(12), [("m.py", 1, 4 + 2 * 13)])
plant("HIGH_LOC", class_with_attrs(399), class_with_attrs(398), [("m.py", 1, 401)])
plant("HIGH_RFC", class_calling(50), class_calling(49), [("m.py", 1, 5 + 50)])
plant("HIGH_CYCLOMATIC", branchy(10), branchy(9), [("m.py", 1, 4 + 2 * 10)])
plant("HIGH_NOM", class_with_methods(21), class_with_methods(20), [("m.py", 1, 2 + 2 * 21)])
plant("HIGH_WMPC1", complex_method(50), complex_method(49), [("m.py", 1, 4 + 2 * 50)])
plant("HIGH_WMPC2", class_with_methods(26), class_with_methods(25), [("m.py", 1, 2 + 2 * 26)])
plant("HIGH_LCOM", disjoint_lcom(6), disjoint_lcom(5), [("m.py", 1, 2 + 2 * 6)])
_cbo_bad, _cbo_start, _cbo_end = coupled(15)
plant("HIGH_CBO", _cbo_bad, coupled(14)[0], [("m.py", _cbo_start, _cbo_end)])
plant("HIGH_MPC", messaging(41), messaging(40), [("m.py", 1, 3 + 41)])
_chain_bad, _chain_start, _chain_end = inheritance_chain(6)
plant("DEEP_INHERITANCE", _chain_bad, inheritance_chain(5)[0], [("m.py", _chain_start, _chain_end)])
plant("MANY_CHILDREN", children(8), children(7), [("m.py", 1, 2)])
plant("HIGH_FAN_IN", fan_in(21), fan_in(20), [("pkg/core.py", 1, 1)])
plant("HIGH_FAN_OUT", fan_out(16), fan_out(15), [("pkg/hub.py", 1, 16 + 2)])
plant("DEEP_NESTING", nested(5), nested(4), [("m.py", 1, 2 + 5 + 2)])
plant("LONG_FILE", long_file(501), long_file(500), [("m.py", 1, 501)])
plant("HIGH_SIZE2", class_with_attrs(41), class_with_attrs(40), [("m.py", 1, 2 + 41)])
plant("HIGH_ATTR_COUNT", class_with_attrs(16), class_with_attrs(15), [("m.py", 1, 2 + 16)])
plant("LONG_MODULE_IMPORTS", many_imports(21), many_imports(20), [("m.py", 1, 21 + 2)])

# ---------------------------------------------------------------------------
# architectural smells
# ---------------------------------------------------------------------------

plant(
    "CYCLIC_DEPENDENCY",
    {"pkg/__init__.py": "", "pkg/a.py": src("from pkg import b", "", "X = b"), "pkg/b.py": src("from pkg import a", "", "Y = a")},
    {"pkg/__init__.py": "", "pkg/a.py": src("from pkg import b", "", "X = b"), "pkg/b.py": src("Y = None")},
    [("pkg/a.py", 1, 1)],
)


def _hub(outgoing: int) -> dict[str, str]:
    files = {f"user{i}.py": src("import hub", "", "X = hub") for i in range(4)}
    files.update({f"dep{i}.py": src("X = None") for i in range(4)})
    files["hub.py"] = src(*(f"import dep{i}" for i in range(outgoing)), "", "Y = None")
    return files


plant("HUB_LIKE_DEPENDENCY", _hub(4), _hub(3), [("hub.py", 1, 4 + 2)])


def _unstable(second_dep: bool) -> dict[str, str]:
    files = {f"{name}.py": src("import stable", "", "X = stable") for name in ("p", "q", "r")}
    files["stable.py"] = src("import volatile", "", "X = volatile")
    files["volatile.py"] = src("import leaf_z", *(["import leaf_w"] if second_dep else []), "", "X = leaf_z")
    files["leaf_z.py"] = src("X = None")
    files["leaf_w.py"] = src("X = None")
    return files


# I(stable) = 1/4; I(volatile) = 2/3 with two outgoing edges (gap 0.417) or 1/2 with one (gap 0.25)
plant("UNSTABLE_DEPENDENCY", _unstable(True), _unstable(False), [("stable.py", 1, 1)])
plant("GOD_OBJECT", god_module(31), god_module(30), [("m.py", 1, 31 * 4)])
plant("SCATTERED_FUNCTIONALITY", scattered(4), scattered(3), [("m0.py", 1, 3)])


def _iface(name: str, methods: list[str]) -> str:
    lines = [f"class {name}:", '    """Doc."""']
    for m in methods:
        lines += [f"    def {m}(self):", "        return None"]
    return src(*lines)


plant(
    "REDUNDANT_ABSTRACTION",
    {"a.py": _iface("Reader", ["open", "read", "close"]), "b.py": _iface("Source", ["open", "read", "close"])},
    {"a.py": _iface("Reader", ["open", "read", "close"]), "b.py": _iface("Sink", ["open", "write", "flush"])},
    [("a.py", 1, 8)],
)
plant(
    "IMPROPER_API_USAGE",
    src("from json import _default_decoder", "", "DECODER = _default_decoder"),
    src("from json import JSONDecoder", "", "DECODER = JSONDecoder()"),
    [("m.py", 1, 1)],
)
