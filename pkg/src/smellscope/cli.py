"""Command-line entry point: analyze, analyze-corpus, dump-config, dump-graph."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from smellscope import __version__
from smellscope.config import ConfigError, load_config
from smellscope.findings import CATEGORIES, SEVERITY_RANK
from smellscope.pipeline import AnalysisError, analyze_corpus, build_context, report_for
from smellscope.reporting import FORMATS, UsageError, render
from smellscope.source import InputError

log = logging.getLogger("smellscope")

FAIL_ON = ("high", "medium", "low", "never")


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="YAML threshold file merged over the defaults")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one setting after the file merge (repeatable); "
                        "KEY.enabled=false and KEY.severity=high are also accepted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smellscope", description="Detect code, structural and architectural smells in Python projects.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one project tree")
    p.add_argument("root", help="project root directory")
    _add_config_args(p)
    p.add_argument("--only", action="append", metavar="BANK",
                   help=f"restrict to detector banks ({', '.join(CATEGORIES)}); comma separated or repeated")
    p.add_argument("--format", default="text", help=f"output format: {', '.join(FORMATS)} (default text)")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--fail-on", choices=FAIL_ON, default="never",
                   help="exit 1 when a finding at or above this severity exists (default never)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for parsing")
    p.add_argument("--dump-graph", metavar="PATH", help="also write the module dependency edge list")

    p = sub.add_parser("analyze-corpus", help="analyze every project directory under a corpus root")
    p.add_argument("corpus_root")
    _add_config_args(p)
    p.add_argument("--output-dir", required=True, metavar="DIR")
    p.add_argument("--tables", action="store_true", help="also write the corpus summary as CSV tables")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("dump-config", help="print the effective merged configuration as YAML")
    _add_config_args(p)

    p = sub.add_parser("dump-graph", help="print the module dependency edge list")
    p.add_argument("root")
    _add_config_args(p)
    p.add_argument("--output", metavar="PATH")
    return parser


def _write(data: bytes, output) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _banks(only) -> list[str] | None:
    if not only:
        return None
    banks = [b.strip() for item in only for b in item.split(",") if b.strip()]
    unknown = sorted(set(banks) - set(CATEGORIES))
    if unknown:
        raise UsageError(f"unknown bank(s) for --only: {', '.join(unknown)}")
    return banks


def _check_root(root: str) -> None:
    if not Path(root).is_dir():
        raise InputError(f"project root does not exist or is not a directory: {root}")


def cmd_analyze(args) -> int:
    if args.format not in FORMATS:
        raise UsageError(f"unknown format {args.format!r}; choose one of {', '.join(FORMATS)}")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    only = _banks(args.only)
    _check_root(args.root)
    config = load_config(args.config, args.overrides)
    ctx = build_context(args.root, config, args.jobs)
    report = report_for(ctx, args.root, only)
    _write(render(report, args.format), args.output)
    if args.dump_graph:
        Path(args.dump_graph).write_text(ctx.graph.dump(), encoding="utf-8")
    if args.fail_on != "never":
        gate = SEVERITY_RANK[args.fail_on]
        if any(SEVERITY_RANK[f.severity] >= gate for f in report.findings):
            return 1
    return 0


def cmd_analyze_corpus(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    config = load_config(args.config, args.overrides)
    reports, summary = analyze_corpus(args.corpus_root, config, jobs=args.jobs)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, report in reports.items():
        (out / f"{name}.json").write_bytes(render(report, "json"))
    (out / "corpus_summary.json").write_bytes(summary.render_json())
    if args.tables:
        for filename, data in summary.csv_tables().items():
            (out / filename).write_bytes(data)
    for line in summary.diagnostics:
        print(f"smellscope: {line}", file=sys.stderr)
    return 0


def cmd_dump_config(args) -> int:
    config = load_config(args.config, args.overrides)
    _write(config.dump().encode("utf-8"), None)
    return 0


def cmd_dump_graph(args) -> int:
    _check_root(args.root)
    config = load_config(args.config, args.overrides)
    ctx = build_context(args.root, config)
    _write(ctx.graph.dump().encode("utf-8"), args.output)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "analyze-corpus": cmd_analyze_corpus,
    "dump-config": cmd_dump_config,
    "dump-graph": cmd_dump_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InputError, UsageError, AnalysisError, OSError, ValueError) as exc:
        print(f"smellscope: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
