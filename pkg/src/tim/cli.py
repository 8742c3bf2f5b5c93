"""Command-line front end: ``tim <command> ...``.

Exit codes: 0 success, 1 verification failed (or survey flags), 2 parse
error, 3 topology class not supported by the requested synthesizer,
4 synthesis infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import oracle
from .bounds import classify, upper_bound
from .errors import ClassError, ParseError, PlanInfeasible
from .graphs import AlignmentConflictGraphs, analyze
from .rational import parse_fraction
from .scheme import parse_scheme, synthesize
from .topology import load_topology
from .verify import DEFAULT_TRIALS, verify_scheme

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_CLASS = 3
EXIT_INFEASIBLE = 4


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def to_dot(g: AlignmentConflictGraphs) -> str:
    lines = ["digraph topology {", "  node [shape=circle];"]
    lines += [f"  {v};" for v in g.vertices]
    for a, b in sorted(sorted(e) for e in g.alignment_edges):
        lines.append(f"  {a} -> {b} [dir=none, style=solid, color=black];")
    for i, j in sorted(g.conflict_edges):
        lines.append(f"  {i} -> {j} [style=dashed, color=red];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _fraction_arg(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}")


def cmd_analyze(args) -> int:
    a = analyze(load_topology(args.topology))
    emit(dumps(a.to_json_obj()), args.out)
    if args.dot:
        emit(to_dot(a.graphs), args.dot)
    return EXIT_OK


def cmd_bound(args) -> int:
    a = analyze(load_topology(args.topology))
    bound = upper_bound(a)
    emit(dumps(bound.to_json_obj(classify(a))), args.out)
    print(f"upper bound {bound.value} ~ {float(bound.value):.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args) -> int:
    t = load_topology(args.topology)
    scheme = synthesize(t, analyze(t), args.seed)
    emit(dumps(scheme.to_json_obj()), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    t = load_topology(args.topology)
    with open(args.scheme, encoding="utf-8") as fh:
        scheme = parse_scheme(fh.read())
    target = args.target
    if target is None:
        target = Fraction(min(scheme.n(i) for i in scheme.V), scheme.m)
    report = verify_scheme(t, scheme, target, trials=args.trials, seed=args.seed)
    emit(dumps(report.to_json_obj()), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_survey(args) -> int:
    if args.random is not None:
        records = oracle.sampled_survey(args.k, args.random, args.density, args.seed)
    else:
        records = oracle.exhaustive_survey(args.k, args.seed)
    collected = []
    sink = open(args.out, "w", encoding="utf-8", newline="\n") if args.out else sys.stdout
    try:
        for rec in records:
            collected.append(rec)
            sink.write(dumps(rec.to_json_obj()))
    finally:
        if args.out:
            sink.close()
    summary = oracle.summarize(collected)
    # summary goes to stdout only when the records went to a file
    (sys.stdout if args.out else sys.stderr).write(dumps(summary))
    return EXIT_OK if summary["flagged"] == 0 else EXIT_VERIFY_FAILED


def cmd_export_dot(args) -> int:
    a = analyze(load_topology(args.topology))
    emit(to_dot(a.graphs), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="alignment/conflict graph analysis as JSON")
    p.add_argument("topology")
    p.add_argument("--out")
    p.add_argument("--dot", help="also write the graphs in DOT format here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bound", help="upper bound on the linear symmetric DoF")
    p.add_argument("topology")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("synth", help="synthesize a verified linear scheme")
    p.add_argument("topology")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="verify a scheme against a target rate")
    p.add_argument("topology")
    p.add_argument("scheme")
    p.add_argument("--target", type=_fraction_arg)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("survey", help="consistency survey over many topologies (JSON lines)")
    p.add_argument("--k", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", type=int, metavar="N")
    p.add_argument("--density", type=_fraction_arg, default=Fraction(1, 4))
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("export-dot", help="write the alignment/conflict graphs as DOT")
    p.add_argument("topology")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except PlanInfeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
