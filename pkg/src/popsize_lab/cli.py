"""Command line interface: theory numbers, batch runs, bisection, and the
full replication grid.
"""

import argparse
import logging
import sys
from pathlib import Path

from . import experiments, problems
from .experiments import (BISECTION_HEADER, CELLS_HEADER, BisectionConfig,
                          UnattainableTargetError, bisect_min_popsize,
                          cell_rows, emit_csv, run_cell)
from .strategies import TOKENS, SizingStrategy
from .theory import TheoryParams, WalkSpec, gr_success, p_decide_model, size_static

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNATTAINABLE = 3


def build_problem(token, size):
    if token.startswith("custom:"):
        return problems.load_problem(token.split(":", 1)[1])
    if size is None:
        raise SystemExit("--size is required for built-in problems")
    if token == "onemax":
        return problems.onemax(size)
    if token == "trap4":
        return problems.trap4(size)
    raise SystemExit(f"unknown problem {token!r}")


def cmd_theory(args):
    problem = build_problem(args.problem, args.size)
    params = TheoryParams.from_problem(problem, args.alpha)
    n = size_static(params)
    p = p_decide_model(params)
    success = gr_success(WalkSpec(n=n, x0=n / 2**params.k, p=p))
    print(f"d={params.d}")
    print(f"sigma_bb={params.sigma_bb}")
    print(f"p_decide={p}")
    print(f"n_static={n}")
    print(f"gr_success={success}")


def cmd_run(args):
    problem = build_problem(args.problem, args.size)
    params = TheoryParams.from_problem(problem, args.alpha)
    strategy = SizingStrategy(TOKENS[args.strategy], params)
    summary, records = run_cell(problem, strategy, args.runs, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    param = problem.m if problem.name == "trap4" else problem.length
    emit_csv(out / "cells.csv", CELLS_HEADER,
             cell_rows(problem.name, param, TOKENS[args.strategy], records))
    print(f"runs={summary.runs}")
    print(f"mean_evaluations={summary.mean_evaluations}")
    print(f"mean_quality={summary.mean_quality}")
    print(f"truncated_runs={summary.truncated_runs}")
    print(f"out={out / 'cells.csv'}")


def cmd_bisect(args):
    problem = build_problem(args.problem, args.size)
    cfg = BisectionConfig(target_quality=args.target,
                          runs_per_probe=args.probe_runs, repeats=args.repeats)
    try:
        result = bisect_min_popsize(problem, cfg, args.seed, alpha=args.alpha)
    except UnattainableTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNATTAINABLE
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    param = problem.m if problem.name == "trap4" else problem.length
    rows = [(problem.name, param, rep, size, ev, cfg.target_quality)
            for rep, (size, ev) in enumerate(zip(result.sizes,
                                                 result.evals_per_repeat))]
    emit_csv(out / "bisection.csv", BISECTION_HEADER, rows)
    print(f"mean_min_popsize={result.mean_min_size}")
    print(f"mean_evaluations={result.mean_evaluations}")
    print(f"out={out / 'bisection.csv'}")


def cmd_reproduce(args):
    try:
        results = experiments.reproduce_grid(args.seed, args.out)
    except UnattainableTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNATTAINABLE
    for path in results["files"]:
        print(f"wrote {path}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="popsize-lab",
        description="Population sizing laboratory for selecto-recombinative GAs")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log per-cell progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p):
        p.add_argument("--problem", required=True,
                       help="onemax | trap4 | custom:FILE")
        p.add_argument("--size", type=int,
                       help="string length (onemax) or partition count (trap4)")
        p.add_argument("--alpha", type=float, default=0.05)

    p = sub.add_parser("theory", help="print sizing-theory quantities")
    add_problem_args(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("run", help="batch of independent GA runs")
    add_problem_args(p)
    p.add_argument("--strategy", choices=sorted(TOKENS), default="static")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bisect", help="minimal fixed size reaching a target quality")
    add_problem_args(p)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--probe-runs", type=int, default=50)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bisect)

    p = sub.add_parser("reproduce", help="full replication grid and CSV set")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reproduce)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s")
    return args.func(args) or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
