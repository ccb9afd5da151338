"""Command-line surface: determinize, verify, gen-table, stats, render.

Exit codes: 0 success (and, for verify, equivalence), 1 a differential
counterexample was found, 2 bad input or exceeded capacity.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .determinize import Determinizer
from .dot import emit_dot
from .errors import HistreeError
from .formats import emit_rabin, parse_nbw
from .oracle import bounded_equiv
from .trees import IdentifierTable


def _read_automaton(path: str):
    if path == "-":
        return parse_nbw(sys.stdin.read())
    return parse_nbw(Path(path).read_text(encoding="utf-8"))


def _cmd_determinize(args) -> int:
    nbw = _read_automaton(args.infile)
    engine = Determinizer(nbw, args.mode, strict_marks=args.strict_paper_marks)
    automaton = engine.build_drw() if args.out == "drw" else engine.build_drtw()
    sys.stdout.write(emit_rabin(automaton))
    return 0


def _cmd_verify(args) -> int:
    nbw = _read_automaton(args.infile)
    strict = args.strict_paper_marks
    targets = [
        ("canonical-drtw", Determinizer(nbw, "canonical", strict).build_drtw()),
        ("baseline-drtw", Determinizer(nbw, "baseline", strict).build_drtw()),
        ("canonical-drw", Determinizer(nbw, "canonical", strict).build_drw()),
    ]
    failed = False
    for label, automaton in targets:
        report = bounded_equiv(nbw, automaton, args.max_u, args.max_v)
        sys.stdout.write(f"target={label}\n")
        sys.stdout.write(report.to_text())
        failed = failed or not report.equivalent
    return 1 if failed else 0


def _cmd_gen_table(args) -> int:
    sys.stdout.write(IdentifierTable(args.n).dump_text())
    return 0


def _cmd_stats(args) -> int:
    nbw = _read_automaton(args.infile)
    for label, build in (
        ("canonical-drtw", lambda: Determinizer(nbw, "canonical").build_drtw()),
        ("baseline-drtw", lambda: Determinizer(nbw, "baseline").build_drtw()),
        ("canonical-drw", lambda: Determinizer(nbw, "canonical").build_drw()),
    ):
        sys.stdout.write(f"target={label}\n")
        sys.stdout.write(build().stats.to_text())
    return 0


def _cmd_render(args) -> int:
    nbw = _read_automaton(args.infile)
    Path(args.dot).write_text(emit_dot(nbw), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="histree",
        description=(
            "Determinize Buchi automata into deterministic Rabin (transition) "
            "automata and check the results against a brute-force oracle."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("determinize", help="write the Rabin automaton as HOA")
    det.add_argument("--in", dest="infile", required=True, help="input file (HOA or native), - for stdin")
    det.add_argument("--mode", choices=("baseline", "canonical"), default="canonical")
    det.add_argument("--out", choices=("drtw", "drw"), default="drtw",
                     help="acceptance on transitions (drtw) or states (drw)")
    det.add_argument("--strict-paper-marks", action="store_true",
                     help="mark only displaced nodes rejecting; skip the vanished-witness rule")
    det.set_defaults(func=_cmd_determinize)

    ver = sub.add_parser("verify", help="differential check against the bounded lasso oracle")
    ver.add_argument("--in", dest="infile", required=True)
    ver.add_argument("--max-u", type=int, default=4, help="largest prefix length")
    ver.add_argument("--max-v", type=int, default=4, help="largest period length")
    ver.add_argument("--strict-paper-marks", action="store_true")
    ver.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("gen-table", help="dump the identifier table in spine order")
    gen.add_argument("--n", type=int, required=True, help="tree capacity")
    gen.set_defaults(func=_cmd_gen_table)

    st = sub.add_parser("stats", help="construction statistics for each build")
    st.add_argument("--in", dest="infile", required=True)
    st.set_defaults(func=_cmd_stats)

    ren = sub.add_parser("render", help="write the input automaton as Graphviz DOT")
    ren.add_argument("--in", dest="infile", required=True)
    ren.add_argument("--dot", required=True, help="output path")
    ren.set_defaults(func=_cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HistreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
