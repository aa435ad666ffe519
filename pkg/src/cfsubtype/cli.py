"""Command-line interface.

Exit codes for ``check``, ``equiv`` and ``oracle``: 0 related, 1 not
related, 2 unknown (budget exhausted).  Any input error exits with 3.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import format_pair
from .gen import GenConfig, GenerationError, pairs
from .grammar import prune, translate
from .lts import BISIMILARITY, SUBTYPING
from .oracle import bounded_sim_types
from .subtype import Budget, check
from .syntax import ParseError, parse_type
from .types import IllFormedType, require_well_formed

EXIT_INPUT_ERROR = 3


class InputError(Exception):
    pass


def _load(arg: str):
    """An inline type, or ``@path`` to read it from a file."""
    if arg.startswith("@"):
        path = Path(arg[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from e
        where = str(path)
    else:
        text, where = arg, "<argument>"
    try:
        return require_well_formed(parse_type(text))
    except ParseError as e:
        raise InputError(f"{where}:{e.line}:{e.column}: {e.message}") from e
    except IllFormedType as e:
        raise InputError(f"{where}: {e}") from e


def _budget(args) -> Budget:
    return Budget(args.max_visits, args.timeout if args.timeout >= 0 else None)


def _cmd_check(args, relation) -> int:
    t, u = _load(args.left), _load(args.right)
    outcome = check(t, u, _budget(args), relation)
    print(outcome.verdict.value)
    if args.stats:
        print(f"visits={outcome.visits} seconds={outcome.seconds:.6f}", file=sys.stderr)
    return outcome.verdict.exit_code


def _cmd_grammar(args) -> int:
    ts = [_load(a) for a in args.types]
    words, g = translate(*ts)
    if not args.no_prune:
        g = prune(g)
    for i, w in enumerate(words):
        print(f"start{i} = {g.show_word(w)}")
    print(g.dump())
    return 0


def _cmd_gen(args) -> int:
    cfg = GenConfig(size=args.size, seed=args.seed)
    try:
        for t, u in pairs(cfg, args.count, valid=not args.invalid, max_nodes=args.max_nodes):
            print(format_pair(t, u))
    except (GenerationError, ValueError) as e:
        raise InputError(str(e)) from e
    return 0


def _cmd_oracle(args) -> int:
    t, u = _load(args.left), _load(args.right)
    relation = BISIMILARITY if args.equiv else SUBTYPING
    ok = bounded_sim_types(t, u, args.depth, relation)
    print("true" if ok else "false")
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    from .bench import format_summary, generated_suite, read_suite, run_bench, summarize, write_csv
    cases = []
    try:
        if args.valid_file:
            cases += read_suite(args.valid_file, "valid")
        if args.invalid_file:
            cases += read_suite(args.invalid_file, "invalid")
        if args.pairs_file:
            cases += read_suite(args.pairs_file, "pair")
    except OSError as e:
        raise InputError(f"cannot read suite: {e}") from e
    except ParseError as e:
        raise InputError(f"suite: {e}") from e
    except ValueError as e:
        raise InputError(str(e)) from e
    if not (args.valid_file or args.invalid_file or args.pairs_file):
        try:
            cases = generated_suite(GenConfig(size=args.size, seed=args.seed), args.count, args.max_nodes)
        except GenerationError as e:
            raise InputError(str(e)) from e
    records = run_bench(cases, args.timeout, args.max_visits, args.workers)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        write_csv(records, fh)
    if args.plot:
        from .plotting import plot_bench
        plot_bench(records, args.plot, title=f"timeout {args.timeout:g}s")
    print(format_summary(summarize(records)))
    return 0


def _cmd_summarize(args) -> int:
    from .bench import format_summary, read_csv, summarize
    try:
        with open(args.csv, encoding="utf-8") as fh:
            records = read_csv(fh)
    except OSError as e:
        raise InputError(f"cannot read {args.csv}: {e.strerror}") from e
    except (ValueError, KeyError) as e:
        raise InputError(f"{args.csv}: {e}") from e
    print(format_summary(summarize(records)))
    if args.plot:
        from .plotting import plot_bench
        plot_bench(records, args.plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cfsub", description=(
        "Subtyping and equivalence for functional and context-free session types. "
        "Types are given inline or as @file."))
    sub = p.add_subparsers(dest="command", required=True)

    def budget_flags(sp):
        sp.add_argument("--max-visits", type=int, default=10**6, help="node visit budget")
        sp.add_argument("--timeout", type=float, default=30.0,
                        help="seconds before giving up (negative: no limit)")

    for name, help_ in (("check", "is LEFT a subtype of RIGHT?"),
                        ("equiv", "are LEFT and RIGHT equivalent?")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("left")
        sp.add_argument("right")
        budget_flags(sp)
        sp.add_argument("--stats", action="store_true", help="print visits and time to stderr")

    sp = sub.add_parser("grammar", help="print the grammar of one or more types")
    sp.add_argument("types", nargs="+")
    sp.add_argument("--no-prune", action="store_true")

    sp = sub.add_parser("gen", help="generate random subtyping pairs")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--valid", action="store_true", help="pairs in the relation (default)")
    kind.add_argument("--invalid", action="store_true", help="pairs outside the relation")
    sp.add_argument("--size", type=int, default=8)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-nodes", type=int, default=None, help="redraw pairs larger than this")

    sp = sub.add_parser("oracle", help="bounded check to a fixed depth")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--equiv", action="store_true", help="bisimilarity instead of subtyping")

    sp = sub.add_parser("bench", help="time checks over a suite and write a CSV")
    sp.add_argument("--valid-file", help="'T <: U' lines expected to hold")
    sp.add_argument("--invalid-file", help="'T <: U' lines expected not to hold")
    sp.add_argument("--pairs-file", help="'T <: U' lines with no expectation")
    sp.add_argument("--count", type=int, default=100, help="generated pairs per kind")
    sp.add_argument("--size", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-nodes", type=int, default=None)
    sp.add_argument("--timeout", type=float, default=30.0)
    sp.add_argument("--max-visits", type=int, default=10**6)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output", default="bench.csv")
    sp.add_argument("--plot", help="also write a scatter plot (PNG, SVG, PDF)")

    sp = sub.add_parser("summarize", help="summarise a bench CSV")
    sp.add_argument("csv")
    sp.add_argument("--plot")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args, SUBTYPING)
        if args.command == "equiv":
            return _cmd_check(args, BISIMILARITY)
        if args.command == "grammar":
            return _cmd_grammar(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_summarize(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
