"""Command-line entry point.

Every command writes one JSON document to stdout and a short human summary to
stderr.  Exit status: 0 success, 1 a verification found problems, 2 invalid
input or infeasible parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .antoine import first_mismatch, sher_equivalent, tree_from_json
from .cayley import build_graph, graph_to_json, graph_to_svg, shell_summary
from .errors import (
    CayleyCantorError,
    ExportError,
    InfeasibleParametersError,
    SchemaError,
)
from .words import word_count

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would print usage and exit 2 itself
        raise _UsageError(message)


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _say(text: str) -> None:
    sys.stderr.write(text + "\n")


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ExportError(path, exc.strerror or str(exc)) from exc


# -- commands ----------------------------------------------------------------


def cmd_graph(args) -> int:
    graph = build_graph(args.rank, args.radius)
    shells = shell_summary(graph)
    expected = sum(word_count(args.rank, n) for n in range(args.radius + 1))
    doc = {
        "command": "graph",
        "rank": args.rank,
        "radius": args.radius,
        "vertices": len(graph),
        "edges": graph.edge_count,
        "shells": shells,
        "vertices_expected": expected,
    }
    if args.json:
        _write_text(args.json, json.dumps(graph_to_json(graph), indent=1) + "\n")
        doc["json"] = args.json
    if args.svg:
        _write_text(args.svg, graph_to_svg(graph))
        doc["svg"] = args.svg
    _emit(doc)
    _say(f"rank {args.rank} radius {args.radius}: {len(graph)} vertices, {graph.edge_count} edges")
    return EXIT_OK if len(graph) == expected else EXIT_FAILED


def _params(args):
    from .scaffold.build import ScaffoldParams

    d = ScaffoldParams()
    return ScaffoldParams(
        d.ball_radius if args.ball_radius is None else args.ball_radius,
        d.tube_radius if args.tube_radius is None else args.tube_radius,
        d.torus_core_radius if args.core_radius is None else args.core_radius,
        d.torus_tube_radius if args.torus_tube_radius is None else args.torus_tube_radius,
    )


def cmd_scaffold(args) -> int:
    from .scaffold.build import build_scaffold
    from .scaffold.export import export_json, export_obj
    from .scaffold.validate import validate_containment, validate_disjointness, validate_linking

    params = _params(args)
    params.check()
    s = build_scaffold(build_graph(args.rank, args.radius), params)
    report = {
        "disjointness": [v.to_json() for v in validate_disjointness(s)],
        "containment": [v.to_json() for v in validate_containment(s)],
        "linking": [v.to_json() for v in validate_linking(s, args.samples)],
    }
    if args.json:
        export_json(s, args.json)
    if args.obj:
        export_obj(s, args.obj)
    failed = sum(len(v) for v in report.values())
    _emit(
        {
            "command": "scaffold",
            "rank": args.rank,
            "radius": args.radius,
            "params": asdict(params),
            "samples": args.samples,
            "census": s.census(),
            "violations": report,
            "passed": not failed,
        }
    )
    _say(f"scaffold rank {args.rank} radius {args.radius}: {s.census()}; {failed} violations")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_check(args) -> int:
    from .suites import SUITES, run_suites

    names = args.suite or list(SUITES)
    results = run_suites(names, args.rank, args.seed, args.radius, args.samples)
    _emit(
        {
            "command": "check",
            "rank": args.rank,
            "seed": args.seed,
            "suites": [r.to_json() for r in results],
            "passed": all(r.passed for r in results),
        }
    )
    for r in results:
        _say(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.checks - len(r.failures)}/{r.checks}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def _load_tree(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError("$", f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return tree_from_json(data)
    except SchemaError as exc:
        raise SchemaError(exc.path, f"{path}: {exc.message}") from None


def cmd_equiv(args) -> int:
    t1, t2 = _load_tree(args.first), _load_tree(args.second)
    if sher_equivalent(t1, t2):
        _emit({"command": "equiv", "verdict": "equivalent"})
        _say("equivalent")
        return EXIT_OK
    m = first_mismatch(t1, t2)
    _emit(
        {
            "command": "equiv",
            "verdict": "inequivalent",
            "mismatch": {"stage": m.stage, "kind": m.kind, "detail": m.detail},
        }
    )
    _say(f"inequivalent: {m}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES

    p = _Parser(prog="cayley-cantor", description="Cayley graphs of free groups and rigid Cantor set scaffolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("graph", help="build a truncated Cayley graph")
    g.add_argument("--rank", type=_pos, required=True)
    g.add_argument("--radius", type=_nonneg, required=True)
    g.add_argument("--json", metavar="PATH")
    g.add_argument("--svg", metavar="PATH")
    g.set_defaults(func=cmd_graph)

    s = sub.add_parser("scaffold", help="build and validate the 3-D scaffold")
    s.add_argument("--rank", type=_pos, required=True)
    s.add_argument("--radius", type=_nonneg, required=True)
    s.add_argument("--ball-radius", type=float)
    s.add_argument("--tube-radius", type=float)
    s.add_argument("--core-radius", type=float)
    s.add_argument("--torus-tube-radius", type=float)
    s.add_argument("--samples", type=_pos, default=512)
    s.add_argument("--obj", metavar="PATH")
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_scaffold)

    c = sub.add_parser("check", help="run verification suites")
    c.add_argument("--rank", type=_pos, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--radius", type=_nonneg)
    c.add_argument("--suite", action="append", choices=SUITES)
    c.add_argument("--samples", type=_pos, default=512)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("equiv", help="compare two Antoine tree files")
    e.add_argument("first")
    e.add_argument("second")
    e.set_defaults(func=cmd_equiv)
    return p


def _fail(kind: str, message: str, **extra) -> int:
    _emit({"error": kind, "message": message, **extra})
    _say(f"error: {message}")
    return EXIT_INVALID


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return _fail("usage", str(exc))
    try:
        return args.func(args)
    except InfeasibleParametersError as exc:
        return _fail("infeasible-parameters", str(exc), inequality=exc.inequality)
    except SchemaError as exc:
        return _fail("schema", str(exc), path=exc.path)
    except ExportError as exc:
        return _fail("write", str(exc), path=exc.path)
    except (CayleyCantorError, ValueError) as exc:
        return _fail("invalid-input", str(exc))


if __name__ == "__main__":
    sys.exit(main())
