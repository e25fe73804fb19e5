"""Command-line entry point: ``teqlab <subcommand> ...``.

Exit status: 0 success with no findings, 1 findings (Schwartz violations or
conjecture counterexamples), 2 usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager

from . import analysis, core, domgraph, iso, solutions

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _input_lines(path):
    if path is None or path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _tournaments(args):
    return core.read_codes(_input_lines(args.file), complement=args.complement)


def _size(value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None


def cmd_gen(args) -> int:
    if not 1 <= args.n <= iso.MAX_ENUM_N:
        raise UsageError(f"gen supports 1 <= N <= {iso.MAX_ENUM_N}")
    if args.n >= iso.LONG_RUN_N and not args.long_run:
        raise UsageError(f"gen {args.n} is a long run; add --long-run")
    with _output(args.output) as out:
        for t in iso.enumerate_tournaments(args.n, irreducible=args.irreducible, jobs=args.jobs):
            out.write(core.serialize(t) + "\n")
    return EXIT_OK


def cmd_teq(args) -> int:
    with _output(args.output) as out:
        for _, t in _tournaments(args):
            out.write(solutions.analysis_line(t) + "\n")
    return EXIT_OK


def cmd_domgraph(args) -> int:
    with _output(args.output) as out:
        for _, t in _tournaments(args):
            g = domgraph.domination_graph(t)
            out.write(f"tournament {core.serialize(t)}\n")
            out.write(g.export_arcs())
            out.write(f"verdict {domgraph.classify(g).export()}\n")
    return EXIT_OK


def cmd_canon(args) -> int:
    seen = set()
    with _output(args.output) as out:
        for _, t in _tournaments(args):
            key = iso.canonical_key(t)
            if key not in seen:
                seen.add(key)
                out.write(key + "\n")
    return EXIT_OK


def cmd_beta(args) -> int:
    mode = "filter-only" if args.filter_only else "full"
    keys = None
    if args.input:
        keys = [iso.canonical_key(t) for _, t in core.read_codes(_input_lines(args.input), complement=args.complement)]
        if any(len(k) != args.n * (args.n - 1) // 2 for k in keys):
            raise UsageError(f"input contains tournaments not of size {args.n}")
    try:
        report = analysis.beta_census(args.n, mode, jobs=args.jobs, allow_long=args.long_run, keys=keys)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.output) as out:
        out.write(report.dumps())
    return EXIT_OK


def cmd_schwartz(args) -> int:
    try:
        records = analysis.schwartz_exhaustive(args.n, allow_long=args.long_run)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.output) as out:
        out.write(f"# schwartz n={args.n} violations={len(records)}\n")
        for r in records:
            out.write(r.dumps() + "\n")
    return EXIT_FINDINGS if records else EXIT_OK


def cmd_conjecture(args) -> int:
    if not 1 <= args.n <= 8:
        raise UsageError("conjecture sweeps support 1 <= N <= 8")
    found = analysis.check_conjectures(args.n)[args.which]
    with _output(args.output) as out:
        out.write(f"# conjecture {args.which} n<={args.n} counterexamples={len(found)}\n")
        for key in found:
            t = core.parse(key)
            out.write(json.dumps(solutions.teq(t).to_record(key), separators=(",", ":")) + "\n")
    return EXIT_FINDINGS if found else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teqlab", description="Tournament equilibrium set toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_io(p, file_arg=True):
        if file_arg:
            p.add_argument("file", nargs="?", help="input codes, one per line (default: stdin)")
            p.add_argument("--complement", action="store_true", help="read codes with 1 meaning column beats row")
        p.add_argument("-o", "--output", help="output path (default: stdout)")
        return p

    p = with_io(sub.add_parser("gen", help="one tournament per isomorphism class"), file_arg=False)
    p.add_argument("n", type=_size)
    p.add_argument("--irreducible", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--long-run", action="store_true")
    p.set_defaults(func=cmd_gen)

    with_io(sub.add_parser("teq", help="minimal retentive sets and teq per tournament")).set_defaults(func=cmd_teq)
    with_io(sub.add_parser("domgraph", help="domination digraph arcs and structure verdict")).set_defaults(
        func=cmd_domgraph
    )
    with_io(sub.add_parser("canon", help="canonicalise and deduplicate")).set_defaults(func=cmd_canon)

    p = with_io(sub.add_parser("beta", help="census of retentive tournaments"), file_arg=False)
    p.add_argument("n", type=_size)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--filter-only", action="store_true", help="stop after the bounded-retentive filter")
    group.add_argument("--full", action="store_true", help="also require teq to be the whole set (default)")
    p.add_argument("--long-run", action="store_true", help="allow n >= 9")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--input", help="external corpus of size-N codes instead of enumeration")
    p.add_argument("--complement", action="store_true", help="corpus uses the complementary bit convention")
    p.set_defaults(func=cmd_beta)

    p = with_io(sub.add_parser("schwartz", help="exhaustive check for several minimal retentive sets"), file_arg=False)
    p.add_argument("n", type=_size)
    p.add_argument("--long-run", action="store_true")
    p.set_defaults(func=cmd_schwartz)

    p = with_io(sub.add_parser("conjecture", help="counterexample sweep for one conjecture"), file_arg=False)
    p.add_argument("which", type=int, choices=(1, 2, 3))
    p.add_argument("n", type=_size)
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "jobs", 1) < 1:
        print("teqlab: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"teqlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
    except (core.FormatError, OSError) as exc:
        print(f"teqlab: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
