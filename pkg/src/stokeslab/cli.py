"""Command-line front end: ``stokeslab {run,compare,verify,mesh}``."""
from __future__ import annotations

import argparse
import os
import sys

from . import mesh as meshmod
from .analysis import chain_bounded, format_chain
from .experiments import EXPERIMENTS, ExperimentError, ExperimentSpec, run
from .solver import SolverError
from .spaces import Method

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
MAX_LEVEL = 6


class UsageError(Exception):
    pass


def parse_levels(text: str) -> tuple:
    """``"A..B"`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = (int(s) for s in text.split("..", 1))
        else:
            a = b = int(text)
    except ValueError:
        raise UsageError(f"bad level range {text!r}; expected A..B") from None
    if a < 0 or b < a:
        raise UsageError(f"bad level range {text!r}")
    if b > MAX_LEVEL:
        raise UsageError(f"level {b} exceeds the cap {MAX_LEVEL}")
    return tuple(range(a, b + 1))


def parse_methods(text: str) -> tuple:
    try:
        return tuple(Method.parse(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_eps(text: str) -> tuple:
    try:
        vals = tuple(float(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"bad eps list {text!r}") from None
    return vals


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokeslab", description="Lowest-order Stokes finite elements in 2D.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--experiment", required=True, help=f"one of {', '.join(EXPERIMENTS)}")
        sp.add_argument("--levels", default="0..5", help="inclusive level range A..B")
        sp.add_argument("--eps", default=None, help="comma-separated strip widths for rhombus-eps")
        sp.add_argument("--reference-mode", action="store_true", help="run serially and deterministically")
        sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")

    r = sub.add_parser("run", help="convergence tables for one experiment")
    common(r)
    r.add_argument("--methods", default="cr,mini,p2p0,br")
    r.add_argument("--out", default=None, help="directory for CSV files and the summary")

    c = sub.add_parser("compare", help="comparison-chain report (all four methods)")
    common(c)
    c.add_argument("--bound", type=float, default=10.0)

    v = sub.add_parser("verify", help="run the invariant and property suites")
    v.add_argument("--suite", action="append", default=None, help="restrict to a suite (repeatable)")

    m = sub.add_parser("mesh", help="build and optionally dump a mesh")
    m.add_argument("--domain", required=True, choices=sorted(meshmod.DOMAINS))
    m.add_argument("--level", type=int, default=0)
    m.add_argument("--dump", default=None, help="output file")
    return p


def _spec(args, methods) -> ExperimentSpec:
    if args.experiment not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {args.experiment!r}; expected one of {', '.join(EXPERIMENTS)}")
    kw = {"methods": methods, "levels": parse_levels(args.levels)}
    if args.eps is not None:
        kw["eps"] = parse_eps(args.eps)
    try:
        return ExperimentSpec(args.experiment, **kw)
    except (ExperimentError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _workers(args) -> int:
    if args.reference_mode:
        return 1
    return args.jobs or os.cpu_count() or 1


def _cmd_run(args) -> int:
    spec = _spec(args, parse_methods(args.methods))
    result = run(spec, _workers(args))
    for line in result.summary_lines():
        print(line)
    if args.out:
        for path in result.write(args.out):
            print(f"wrote {path}", file=sys.stderr)
    if result.failures:
        for level, eps, m, msg in result.failures:
            print(f"solver failure: level={level} eps={eps} method={m}: {msg}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_compare(args) -> int:
    spec = _spec(args, ("cr", "mini", "p2p0", "br"))
    result = run(spec, _workers(args))
    if result.failures:
        for level, eps, m, msg in result.failures:
            print(f"solver failure: level={level} eps={eps} method={m}: {msg}", file=sys.stderr)
        return EXIT_SOLVER
    print(format_chain(result.chain), end="")
    ok, msgs = chain_bounded(result.chain, bound=args.bound)
    for msg in msgs:
        print(msg, file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_verify(args) -> int:
    from .verify import SUITES, run_all

    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; expected {sorted(SUITES)}")
    checks = run_all(names)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.ok]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_mesh(args) -> int:
    if args.level < 0 or args.level > MAX_LEVEL:
        raise UsageError(f"level must lie in 0..{MAX_LEVEL}")
    t = meshmod.make_mesh(args.domain, args.level)
    t.check()
    print(f"{args.domain},{args.level},{t.n_vertices},{t.n_edges},{t.n_triangles}")
    if args.dump:
        meshmod.dump(t, args.dump)
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "verify": _cmd_verify, "mesh": _cmd_mesh}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"stokeslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"stokeslab: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
