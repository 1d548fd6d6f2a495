"""Command-line entry point: ``dlattice {dinv,compare,mutant,selftest}``.

Exit codes: 0 equivalent/success, 1 distinct or failed self-test,
2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exact import BudgetExceeded
from .graph_core import EnumerationBudgetError, GraphError, parse_edge_list
from .graph_lattice import cut_d_invariant_via_orientations, cut_lattice, flow_d_invariant
from .lattice_core import DInvariant, LatticeError, d_invariant, serialize_dinvariant
from .links import LinkError, PDCode, mutation_verdict, parse_pd, parse_two_bridge, two_bridge_pd
from .reconstruction import compare_graphs

EXIT_OK, EXIT_DISTINCT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

CHECKERBOARD_NOTE = "black regions at corners 0 and 2 of each crossing (ccw from the incoming under-strand)"


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(lines, out):
    for line in lines:
        print(line, file=out)


def _read(path: str) -> str:
    return Path(path).read_text()


def _dinv_records(d: DInvariant) -> list[str]:
    lines = ["kind: dinvariant", f"rank: {d.rank}",
             "factors: " + " ".join(map(str, d.factors))]
    for label in sorted(d.values):
        lines.append(f"class[{','.join(map(str, label))}]: {_frac(d.values[label])}")
    return lines


def cmd_dinv(args, out) -> int:
    g = parse_edge_list(_read(args.path))
    if args.lattice == "flow":
        d = flow_d_invariant(g, args.method)
    elif args.method == "orientations":
        d = cut_d_invariant_via_orientations(g)
    else:
        d = d_invariant(cut_lattice(g))
    if args.format == "records":
        _emit(_dinv_records(d), out)
    else:
        out.write(serialize_dinvariant(d))
    return EXIT_OK


def _verdict_lines(fmt: str, word: str, stage: str | None, mapping, extra=()) -> list[str]:
    pairs = sorted(mapping.items()) if mapping else []
    if fmt == "records":
        lines = [f"verdict: {word}"]
        lines += [f"{k}: {v}" for k, v in extra]
        if stage:
            lines.append(f"stage: {stage}")
        lines += [f"map: {a} {b}" for a, b in pairs]
        return lines
    lines = [word]
    lines += [f"# {k}: {v}" for k, v in extra]
    if stage:
        lines.append(f"failed stage: {stage}")
    lines += [f"map {a} {b}" for a, b in pairs]
    return lines


def cmd_compare(args, out) -> int:
    g = parse_edge_list(_read(args.path_a))
    h = parse_edge_list(_read(args.path_b))
    result = compare_graphs(g, h)
    if result.equivalent:
        _emit(_verdict_lines(args.format, "EQUIVALENT", None, result.mapping), out)
        return EXIT_OK
    _emit(_verdict_lines(args.format, "DISTINCT", result.stage, None), out)
    return EXIT_DISTINCT


def load_diagram(path: str) -> PDCode:
    """A PD file, or a file holding a single two-bridge spec line."""
    text = _read(path)
    body = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    body = [ln for ln in body if ln]
    if len(body) == 1 and body[0].startswith("tb"):
        return two_bridge_pd(parse_two_bridge(body[0]))
    return parse_pd(text)


def cmd_mutant(args, out) -> int:
    pd1, pd2 = load_diagram(args.pd1), load_diagram(args.pd2)
    v = mutation_verdict(pd1, pd2, reduce_first=args.reduce)
    extra = [("checkerboard", CHECKERBOARD_NOTE),
             ("crossings", f"{pd1.crossing_count} {pd2.crossing_count}")]
    if v.mutants:
        _emit(_verdict_lines(args.format, "MUTANTS", None, v.correspondence, extra), out)
        return EXIT_OK
    _emit(_verdict_lines(args.format, "NOT MUTANTS", v.stage, None, extra), out)
    return EXIT_DISTINCT


def cmd_selftest(args, out) -> int:
    from .suites import run_all

    if not 1 <= args.max_edges <= 6:
        raise GraphError("--max-edges must lie between 1 and 6")
    results = run_all(args.max_edges, args.jobs)
    for r in results:
        if args.format == "records":
            print(f"suite: {r.name}; passed: {str(r.passed).lower()}; checked: {r.checked}; "
                  f"failures: {len(r.failures)}", file=out)
        else:
            print(r.line(), file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_DISTINCT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlattice",
                                     description="d-invariants of graph lattices, 2-isomorphism and mutation")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
    parser.add_argument("--format", choices=("text", "records"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dinv", help="d-invariant of the cut or flow lattice of an edge-list graph")
    p.add_argument("path")
    p.add_argument("--lattice", choices=("cut", "flow"), default="flow")
    p.add_argument("--method", choices=("orientations", "cvp"), default="cvp")
    p.set_defaults(func=cmd_dinv)

    p = sub.add_parser("compare", help="decide 2-isomorphism of two edge-list graphs")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("mutant", help="decide mutation equivalence of two alternating diagrams")
    p.add_argument("pd1")
    p.add_argument("pd2")
    p.add_argument("--reduce", action="store_true", help="remove nugatory crossings first")
    p.set_defaults(func=cmd_mutant)

    p = sub.add_parser("selftest", help="run the acceptance suites")
    p.add_argument("--max-edges", type=int, default=6)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (BudgetExceeded, EnumerationBudgetError) as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphError, LinkError, LatticeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
