"""Command line interface: ``analyze``, ``sweep`` and ``oracle``.

Exit codes: 0 on success, 2 for invalid input, 3 for a failed modelling
assumption (``--allow-violations`` overrides it) and 4 when an internal
self-check fails, which always indicates a bug.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from rjvgame.errors import AssumptionViolation, InvariantViolation, ModelError
from rjvgame.model import validate_regularity

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_INPUT", "EXIT_ASSUMPTION", "EXIT_INVARIANT"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ASSUMPTION = 3
EXIT_INVARIANT = 4


def _default_workers() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _dump(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def _cmd_analyze(args: argparse.Namespace) -> int:
    from rjvgame.scenario import analyze, load_scenario

    scenario = load_scenario(args.scenario)
    report = analyze(scenario, allow_violations=args.allow_violations)
    _write_text(args.out, _dump(report))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    from rjvgame.scenario import load_scenario
    from rjvgame.sweep import SweepSpec, parse_axis, rows_to_csv, run_sweep

    scenario = load_scenario(args.scenario)
    spec = SweepSpec(parse_axis(args.x), parse_axis(args.y))
    workers = args.workers if args.workers is not None else _default_workers()
    rows = run_sweep(scenario, spec, workers=workers)
    _write_text(args.csv, rows_to_csv(rows))
    if args.svg:
        from rjvgame.plotting import render_svg

        _write_text(args.svg, render_svg(rows, spec, title=args.title or ""))
    return EXIT_OK


def _equilibrium_dict(eq) -> Dict[str, Any]:
    return {
        "double_cutoff": eq.double_cutoff,
        "low_cut": eq.low_cut,
        "high_cut": eq.high_cut,
        "low_deviation": eq.low_deviation,
        "high_deviation": eq.high_deviation,
        "innovation_prob": eq.innovation_prob,
        "payoffs": list(eq.payoffs),
        "strategy": ["".join("1" if f else "0" for f in flags) for flags in eq.strategy.flags],
    }


def _cmd_oracle(args: argparse.Namespace) -> int:
    from rjvgame.errors import ConfigurationError, MarketValidityError
    from rjvgame.oracle import DiscreteGame, discrete_rjv_optimum, solve_discrete_game
    from rjvgame.scenario import load_scenario, to_jsonable

    scenario = load_scenario(args.scenario)
    if scenario.firms != 2:
        raise ConfigurationError("the discrete oracle covers two-firm markets only")
    if scenario.tables is None:
        raise MarketValidityError(scenario.market_error or "invalid market primitives")
    quad = scenario.tables.quad
    game = DiscreteGame(quad, scenario.cost, scenario.financing, args.cells)
    failed = validate_regularity(quad)
    if not failed and not game.budget_assumption_holds():
        failed = ["A2"]
    if failed and not args.allow_violations:
        raise AssumptionViolation(f"scenario violates {', '.join(failed)}", failed)
    workers = args.workers if args.workers is not None else 1
    solution = solve_discrete_game(game, args.mode, workers=workers)
    optimum = discrete_rjv_optimum(game)
    report = {
        "mode": solution.mode,
        "cells": solution.cells,
        "violations": failed,
        "theta1": solution.theta1,
        "theta2": solution.theta2,
        "budget_assumption": solution.budget_assumption,
        "equilibria": [_equilibrium_dict(eq) for eq in solution.equilibria],
        "fixed_points": [
            {"seed": p.seed, "converged": p.converged, "iterations": p.iterations, **_equilibrium_dict(p.equilibrium)}
            for p in solution.fixed_points
        ],
        "seeds_coincide": solution.seeds_coincide,
        "shapes_coincide": solution.shapes_coincide,
        "ties": solution.ties,
        "all_double_cutoff": solution.all_double_cutoff,
        "max_cutoff_deviation_cells": solution.max_deviation,
        "rjv_optimum": {
            "prefix": optimum.prefix,
            "theta_star": optimum.theta_star,
            "deviation_cells": optimum.deviation,
            "payoff": optimum.payoff,
        },
    }
    _write_text(args.out, _dump(to_jsonable(report)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rjvgame", description="R&D competition, joint ventures and mergers under costly credit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyse one scenario and print a JSON report")
    p.add_argument("scenario")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--allow-violations", action="store_true", help="annotate failed assumptions instead of aborting")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="label a two-parameter grid and write CSV and SVG")
    p.add_argument("scenario")
    p.add_argument("--x", required=True, help="path:min:max:steps for the horizontal axis")
    p.add_argument("--y", required=True, help="path:min:max:steps for the vertical axis")
    p.add_argument("--csv", required=True, help="output CSV file")
    p.add_argument("--svg", help="optional output SVG file")
    p.add_argument("--title", help="optional SVG title")
    p.add_argument("--workers", type=int, help="worker processes (default: available CPUs)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle", help="solve the discretised game and compare with the analytic cut-offs")
    p.add_argument("scenario")
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "bestresponse", "best_response"], default="exhaustive")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--workers", type=int, help="worker processes for exhaustive enumeration (default 1)")
    p.add_argument("--allow-violations", action="store_true", help="run even if assumptions fail")
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal self-check failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except AssumptionViolation as exc:
        codes = f" [{', '.join(exc.codes)}]" if exc.codes else ""
        print(f"assumption violated{codes}: {exc} (use --allow-violations to continue)", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (ModelError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
