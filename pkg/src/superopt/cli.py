"""Command-line interface: ``superopt solve | check | example``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import bundled, report
from .core import SolverConfig, run_superopt
from .diagnostics import check_candidate
from .errors import ConfigurationError, NumericalError, SymbolError
from .fourier import CircleGrid
from .symbols import parse_symbol

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

LOGGER = logging.getLogger("superopt")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_candidate(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SymbolError(f"malformed candidate JSON: {exc}") from None
    if isinstance(doc, dict) and "approximant" in doc:
        doc = doc["approximant"]
    return parse_symbol(doc)


def _add_solver_flags(p):
    d = SolverConfig()
    p.add_argument("--grid-size", type=int, default=d.grid_size)
    p.add_argument("--trunc", type=int, default=d.trunc)
    p.add_argument("--max-trunc", type=int, default=d.max_trunc)
    p.add_argument("--max-q-degree", type=int, default=d.max_q_degree)
    p.add_argument("--tol-rank", type=float, default=d.tol_rank)
    p.add_argument("--tol-residual", type=float, default=d.tol_residual)
    p.add_argument("--tol-zero", type=float, default=d.tol_zero)
    p.add_argument("--tol-analytic", type=float, default=d.tol_analytic)
    p.add_argument("--tol-tail", type=float, default=d.tol_tail)
    p.add_argument("--max-grid-size", type=int, default=None,
                   help="double the grid up to this size on an aliasing failure")


def _config(args) -> SolverConfig:
    return SolverConfig(grid_size=args.grid_size, trunc=args.trunc, max_trunc=args.max_trunc,
                        max_q_degree=args.max_q_degree, tol_rank=args.tol_rank,
                        tol_residual=args.tol_residual, tol_zero=args.tol_zero,
                        tol_analytic=args.tol_analytic, tol_tail=args.tol_tail,
                        max_grid_size=args.max_grid_size)


def cmd_solve(args) -> int:
    t_start = time.perf_counter()
    spec = parse_symbol(_read(args.input))
    config = _config(args)
    t_parse = time.perf_counter()
    result = run_superopt(spec, config)
    t_solve = time.perf_counter()
    rep = report.build_report(spec, result, {"parse_s": t_parse - t_start,
                                             "solve_s": t_solve - t_parse})
    Path(args.output).write_text(report.dumps(rep))
    if args.profile:
        report.write_profile(args.profile, result.grid.theta, result.error_profile)
    print(f"r = {result.r}; t = [{', '.join(f'{t:.9f}' for t in result.t)}]; "
          f"diagnostics {'pass' if rep['diagnostics']['ok'] else 'FAIL'}; "
          f"report written to {args.output}")
    return EXIT_OK


def cmd_check(args) -> int:
    spec = parse_symbol(_read(args.input))
    cand = _load_candidate(_read(args.candidate))
    try:
        out = check_candidate(spec, cand, CircleGrid(args.grid_size), args.trunc, args.tol)
    except ValueError as exc:
        raise SymbolError(str(exc)) from None
    text = json.dumps(report._jsonable(out), indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"check {'passed' if out['ok'] else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if out["ok"] else EXIT_CHECK_FAILED


def cmd_example(args) -> int:
    try:
        spec = bundled.EXAMPLES[args.name]()
    except KeyError:
        raise SymbolError(
            f"unknown example {args.name!r}; choose from {sorted(bundled.EXAMPLES)}") from None
    text = json.dumps(spec.to_json(), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superopt",
        description="Superoptimal analytic approximation of rational matrix symbols.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the level recursion on a symbol document")
    p.add_argument("input", help="symbol JSON path, or - for stdin")
    _add_solver_flags(p)
    p.add_argument("--output", default="report.json", help="report path (default report.json)")
    p.add_argument("--profile", help="optional CSV of singular values of G - AG")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a candidate analytic approximant")
    p.add_argument("input")
    p.add_argument("candidate", help="symbol-schema JSON or a report.json")
    p.add_argument("--grid-size", type=int, default=1024)
    p.add_argument("--trunc", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("example", help="write a bundled symbol document")
    p.add_argument("name", help=", ".join(sorted(bundled.EXAMPLES)))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SymbolError, ConfigurationError, OSError) as exc:
        print(f"superopt: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"superopt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        print(f"superopt: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
