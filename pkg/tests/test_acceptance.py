"""Acceptance criteria, one test each.

Every test records a ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line; the lines are printed as they happen and again in the terminal summary.
"""

import contextlib
import dataclasses
import json
import random
import time
from collections import Counter

import networkx as nx
from hypothesis import given, settings, strategies as st

from planted import PLANTS, class_with_methods, long_function, write_tree
from smellscope.catalog import ALL_DETECTORS
from smellscope.cli import main
from smellscope.config import SECTIONS, apply_override, default_config, load_config, scaled
from smellscope.findings import CATEGORIES
from smellscope.graph import find_cycles, instability
from smellscope.metrics import lcom
from smellscope.pipeline import analyze_corpus, analyze_project, build_context, report_for
from test_detectors import FOUR_NODE_INSTABILITY, FOUR_NODES
from test_graph import brute_force_cycles, canonical, graph, random_graph
from test_metrics import CK_EXPECTED, CK_FIXTURE, ck_values, lcom_oracle, random_table

RESULTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(number: int, description: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"FAIL criterion {number}: {description} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        RESULTS[number] = line
        print(line)
        raise
    line = f"PASS criterion {number}: {description} ({time.perf_counter() - start:.2f}s)"
    RESULTS[number] = line
    print(line)


def fixture_corpus(root):
    """Every planted smelly and clean tree plus the CK fixture, one project each."""
    projects = []
    for plant in PLANTS:
        for kind in ("smelly", "clean"):
            projects.append(write_tree(root / f"{plant.catalog_id.lower()}_{kind}", getattr(plant, kind)))
    projects.append(write_tree(root / "ck_fixture", {"shapes.py": CK_FIXTURE}))
    return projects


def test_criterion_01_planted_suite(tmp_path):
    with criterion(1, "planted smelly fixtures hit their spans exactly, clean twins are silent, under 30 s"):
        start = time.perf_counter()
        assert sorted(p.catalog_id for p in PLANTS) == sorted(d.catalog_id for d in ALL_DETECTORS)
        assert len(PLANTS) == 24 + 19 + 7
        config = default_config()
        for plant in PLANTS:
            smelly = analyze_project(write_tree(tmp_path / plant.catalog_id / "smelly", plant.smelly), config)
            clean = analyze_project(write_tree(tmp_path / plant.catalog_id / "clean", plant.clean), config)
            hits = sorted((f.file, f.line_start, f.line_end) for f in smelly.findings if f.catalog_id == plant.catalog_id)
            assert hits == sorted(plant.spans), plant.catalog_id
            assert not [f for f in clean.findings if f.catalog_id == plant.catalog_id], plant.catalog_id
        assert time.perf_counter() - start < 30


def test_criterion_02_anchored_thresholds(tmp_path):
    with criterion(2, "LONG_METHOD_LINES 45 and LARGE_CLASS_METHODS 15 flag 46/16 but not 45/15"):
        cfg = tmp_path / "anchored.yaml"
        cfg.write_text("code_smells:\n  LONG_METHOD_LINES: 45\n  LARGE_CLASS_METHODS: 15\n")
        config = load_config(cfg)

        roots = iter(range(100))

        def count(files, cid):
            root = write_tree(tmp_path / f"p{next(roots)}", files)
            return sum(f.catalog_id == cid for f in analyze_project(root, config).findings)

        assert count({"m.py": long_function(46)}, "LONG_METHOD") == 1
        assert count({"m.py": long_function(45)}, "LONG_METHOD") == 0
        assert count({"m.py": class_with_methods(16)}, "LARGE_CLASS") == 1
        assert count({"m.py": class_with_methods(15)}, "LARGE_CLASS") == 0


def test_criterion_03_ck_oracle(project):
    with criterion(3, "CK metrics on the five-class fixture equal the hand-computed values"):
        assert ck_values(project) == CK_EXPECTED


def test_criterion_04_cycle_oracle():
    with criterion(4, "find_cycles equals brute-force enumeration on 100 seeded random digraphs, under 10 s"):
        start = time.perf_counter()
        rng = random.Random(7)
        for _ in range(100):
            g = random_graph(rng, rng.randint(1, 10), 0.25)
            ours = find_cycles(g, len(g.nodes) + 1, max_per_scc=None)
            assert ours == brute_force_cycles(g, len(g.nodes) + 1)
            assert ours == sorted(canonical(c) for c in nx.simple_cycles(nx.DiGraph(list(g.edges))))
        assert time.perf_counter() - start < 10


def test_criterion_05_lcom_oracle():
    with criterion(5, "lcom equals the pair-counting oracle on 200 random attribute-use tables"):
        rng = random.Random(20240611)
        for _ in range(200):
            table = random_table(rng)
            assert len(table) <= 8
            assert lcom(None, table) == lcom_oracle(table)


edge_lists = st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)).filter(lambda e: e[0] != e[1]), max_size=25)


@settings(max_examples=200, deadline=None)
@given(edge_lists, st.integers(0, 3))
def instability_properties(edges, isolated):
    names = [(f"n{a}", f"n{b}") for a, b in edges]
    g = graph(names, nodes=[f"iso{i}" for i in range(isolated)])
    inst = instability(g)
    for node, value in inst.items():
        assert 0.0 <= value <= 1.0
        has_in = any(b == node for _, b in g.edges)
        has_out = any(a == node for a, _ in g.edges)
        if has_out and not has_in:
            assert value == 1.0
        if not has_in and not has_out:
            assert value == 0.0


def test_criterion_06_instability(project):
    with criterion(6, "instability bounds hold and exactly the edges with gap > 0.3 are flagged on the 4-node fixture"):
        instability_properties()
        ctx = project(FOUR_NODES)
        assert instability(ctx.graph) == FOUR_NODE_INSTABILITY
        expected = sorted(
            (a, b) for a, b in ctx.graph.edges if FOUR_NODE_INSTABILITY[b] - FOUR_NODE_INSTABILITY[a] > 0.3
        )
        flagged = sorted(
            (f.entity, f.message.split("'")[3]) for f in report_for(ctx, "x", ["architectural"]).findings
            if f.catalog_id == "UNSTABLE_DEPENDENCY"
        )
        assert flagged == expected == [("s", "c")]


def cli(*argv):
    return main([str(a) for a in argv])


def test_criterion_07_determinism(tmp_path, capsysbinary):
    with criterion(7, "two full runs and --jobs 1 vs --jobs 8 give byte-identical JSON"):
        corpus = tmp_path / "corpus"
        fixture_corpus(corpus)
        outputs = []
        for run, jobs in enumerate((1, 1, 8)):
            out = tmp_path / f"run{run}"
            assert cli("analyze-corpus", corpus, "--output-dir", out, "--jobs", 1, "--tables") == 0
            report = tmp_path / f"tree{run}.json"
            assert cli("analyze", corpus, "--format", "json", "--jobs", jobs, "--output", report) == 0
            outputs.append(({p.name: p.read_bytes() for p in sorted(out.iterdir())}, report.read_bytes()))
        capsysbinary.readouterr()
        assert outputs[0] == outputs[1]
        assert outputs[0][1] == outputs[2][1]
        assert len(outputs[0][0]) == 2 * len(PLANTS) + 1 + 1 + 3


def test_criterion_08_config(tmp_path, capsysbinary):
    with criterion(8, "unknown key exits 2 naming it, --set beats the file, dump-config round-trips"):
        root = write_tree(tmp_path / "p", {"m.py": long_function(46)})
        bad = tmp_path / "bad.yaml"
        bad.write_text("code_smells:\n  LONG_METHOD_LINEZ: 45\n")
        assert cli("analyze", root, "--config", bad) == 2
        assert "LONG_METHOD_LINEZ" in capsysbinary.readouterr().err.decode()

        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("code_smells:\n  LONG_METHOD_LINES: 100\n")
        cli("analyze", root, "--config", cfg, "--format", "json")
        quiet = json.loads(capsysbinary.readouterr().out)
        cli("analyze", root, "--config", cfg, "--set", "LONG_METHOD_LINES=45", "--format", "json")
        loud = json.loads(capsysbinary.readouterr().out)
        assert "LONG_METHOD" not in quiet["summary"]["by_detector"]
        assert loud["summary"]["by_detector"]["LONG_METHOD"] == 1

        assert cli("dump-config", "--config", cfg) == 0
        dumped = capsysbinary.readouterr().out
        (tmp_path / "dumped.yaml").write_bytes(dumped)
        assert cli("dump-config", "--config", tmp_path / "dumped.yaml") == 0
        assert capsysbinary.readouterr().out == dumped
        assert load_config(tmp_path / "dumped.yaml") == load_config(cfg)


def test_criterion_09_corpus_aggregation(tmp_path):
    with criterion(9, "3-project corpus totals, category percentages and affected files are consistent"):
        by_id = {p.catalog_id: p for p in PLANTS}
        corpus = tmp_path / "corpus"
        write_tree(corpus / "alpha", {**by_id["LONG_METHOD"].smelly, "x.py": by_id["MAGIC_NUMBER"].smelly["m.py"]})
        write_tree(corpus / "beta", {f"pkg/{k}": v for k, v in by_id["GOD_OBJECT"].smelly.items()})
        write_tree(corpus / "gamma", {**by_id["HIGH_LCOM"].smelly, **by_id["CYCLIC_DEPENDENCY"].smelly})
        reports, summary = analyze_corpus(corpus, default_config())
        assert sorted(reports) == ["alpha", "beta", "gamma"]
        assert summary.total_smells == sum(len(r.findings) for r in reports.values()) > 0
        for category in CATEGORIES:
            rows = summary.by_category[category]
            if rows:
                assert abs(sum(r["percentage"] for r in rows) - 100.0) <= 0.05
        distinct = {(r.project_root, f.file) for r in reports.values() for f in r.findings}
        assert summary.affected_files == len(distinct)
        assert summary.project_count == 3


def per_detector(contexts, config):
    counts = Counter()
    for ctx in contexts:
        ctx = dataclasses.replace(ctx, config=config, diagnostics=list(ctx.diagnostics))
        counts.update(f.catalog_id for f in report_for(ctx, "x").findings)
    return counts


def test_criterion_10_monotonicity(tmp_path):
    with criterion(10, "doubling every numeric threshold never raises any detector's count on the fixture corpus"):
        config = default_config()
        contexts = [build_context(p, config) for p in fixture_corpus(tmp_path / "corpus")]
        base = per_detector(contexts, config)
        doubled = per_detector(contexts, scaled(config, 2))
        assert all(doubled[cid] <= base[cid] for cid in set(base) | set(doubled)), (base, doubled)
        assert sum(base.values()) > sum(doubled.values())


def synthetic_module(index: int, modules: int) -> str:
    """About 200 lines: imports of sibling modules, a class, and plain functions."""
    lines = ['"""Synthetic module."""', "import os", "import json"]
    lines += [f"import mod{(index + k) % modules:03d}" for k in (1, 2, 3)]
    lines += ["", "", f"class Worker{index}:", "    def __init__(self, size):", "        self.size = size",
              "        self.items = []"]
    for m in range(8):
        lines += [f"    def step{m}(self, value):", f"        if value > {m}:",
                  "            self.items.append(value)", "        elif value < 0:",
                  "            return None", "        for item in self.items:",
                  "            value += item * self.size", "        return value", ""]
    for f in range(12):
        lines += ["", f"def helper{f}(a, b, c):", "    total = 0", "    for i in range(a):",
                  "        if i % 2 and b:", "            total += os.sep.count('/') + i",
                  "    return json.dumps(total + c)"]
    return "\n".join(lines) + "\n"


def test_criterion_11_performance(tmp_path, capsysbinary):
    with criterion(11, "analyze finishes a 10,000-line synthetic project in under 10 s"):
        root = tmp_path / "big"
        modules = 0
        total = 0
        while total < 10_000:
            text = synthetic_module(modules, 60)
            write_tree(root, {f"mod{modules:03d}.py": text})
            total += text.count("\n")
            modules += 1
        start = time.perf_counter()
        assert cli("analyze", root, "--format", "json", "--output", tmp_path / "big.json") == 0
        elapsed = time.perf_counter() - start
        capsysbinary.readouterr()
        assert json.loads((tmp_path / "big.json").read_text())["module_count"] == modules
        assert elapsed < 10, f"{elapsed:.1f}s for {total} lines"


_CONTEXTS = {}


def corpus_contexts(tmp_path_factory):
    if "all" not in _CONTEXTS:
        root = tmp_path_factory.mktemp("monotone")
        _CONTEXTS["all"] = [build_context(p, default_config()) for p in fixture_corpus(root)]
    return _CONTEXTS["all"]


# Search bounds rather than thresholds: raising them can only reveal more cycles.
BOUND_KEYS = {"MAX_CYCLE_LENGTH", "CYCLE_REPORT_CAP"}
NUMERIC_KEYS = sorted(k for s in SECTIONS for k, v in default_config().section(s).items() if v.value is not None)


@settings(max_examples=12, deadline=None)
@given(keys=st.sets(st.sampled_from([k for k in NUMERIC_KEYS if k not in BOUND_KEYS]), min_size=1))
def test_raising_any_threshold_subset_is_monotone(tmp_path_factory, keys):
    contexts = corpus_contexts(tmp_path_factory)
    config = default_config()
    base = per_detector(contexts, config)
    for key in sorted(keys):
        config = apply_override(config, f"{key}={config.value(key) * 2}")
    raised = per_detector(contexts, config)
    assert all(raised[cid] <= base[cid] for cid in raised)
