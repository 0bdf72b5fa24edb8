"""Command-line entry point: ``balancedga {run,sweep,oracle,props}``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import sys

from . import boolfn, oracle
from .engine import CrossoverKind, GaConfig, ga_run
from .harness import SweepSpec, export_results, format_heatmap, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _table(text: str) -> boolfn.TruthTable:
    try:
        return boolfn.parse_truth_table(text)
    except boolfn.TruthTableFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_ga_flags(p: argparse.ArgumentParser):
    # None defaults let us tell explicit flags from GaConfig defaults
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--k", type=int)
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--tournament", type=int, default=3)
    p.add_argument("--pm", type=float, default=0.7)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--p0", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--interval", type=int)
    p.add_argument("--fitness", choices=["fit1", "fit2"], default="fit2")
    p.add_argument("--crossover", choices=["plain", "adaptive"], default="adaptive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="write per-run CSV records here")
    p.add_argument("--timing", action="store_true", help="fill the wallclock_ms column")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="balancedga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="one GA run")
    _add_ga_flags(run)

    sweep = sub.add_parser("sweep", help="(p0, alpha) parameter sweep")
    _add_ga_flags(sweep)
    sweep.add_argument("--p0-list", type=_float_list, default=[0.5, 0.6, 0.7, 0.8, 0.9])
    sweep.add_argument("--alpha-list", type=_float_list, default=[0.9, 0.95, 0.99])
    sweep.add_argument("--runs", type=int, default=50)
    sweep.add_argument("--threads", type=int, default=1, help="worker processes")
    sweep.add_argument("--aggregate", metavar="PATH", help="write per-combination counts here")
    sweep.add_argument("--threshold", type=int)
    sweep.add_argument("--optimum", type=int)

    orc = sub.add_parser("oracle", help="brute-force reference computations")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    w = orc_sub.add_parser("walsh", help="Walsh spectrum by direct summation")
    w.add_argument("table", type=_table)
    nl = orc_sub.add_parser("nl", help="nonlinearity as distance to affine functions")
    nl.add_argument("table", type=_table)
    ex = orc_sub.add_parser("exhaustive", help="best nonlinearity over all balanced tables")
    ex.add_argument("--n", type=int, required=True)

    props = sub.add_parser("props", help="weight, balancedness, nonlinearity and spectrum")
    props.add_argument("table", type=_table)
    return parser


def _config_from(args) -> GaConfig:
    plain = args.crossover == CrossoverKind.PLAIN.value
    if plain:
        given = [f"--{name}" for name in ("p0", "alpha", "interval") if getattr(args, name) is not None]
        if given:
            raise UsageError(f"{', '.join(given)} only valid with --crossover adaptive")
    extra = {
        name: getattr(args, flag)
        for name, flag in (("p0", "p0"), ("alpha", "alpha"), ("interval_m", "interval"))
        if getattr(args, flag) is not None
    }
    try:
        return GaConfig(
            n=args.n,
            k=args.k,
            pop_size=args.pop,
            tournament_size=args.tournament,
            p_m=args.pm,
            budget=args.budget,
            fitness=args.fitness,
            crossover=args.crossover,
            seed=args.seed,
            **extra,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _cmd_run(args) -> int:
    config = _config_from(args)
    result = ga_run(config)
    print(f"seed: {result.seed}")
    print(f"evaluations: {result.evaluations_used}")
    print(f"best_fitness: {result.best_individual.fitness!r}")
    print(f"best_balanced_nl: {result.best_balanced_nonlinearity}")
    print(f"evals_to_best: {result.evals_to_best}")
    if config.crossover is CrossoverKind.ADAPTIVE:
        print(f"cools_applied: {result.cools_applied}")
        print(f"final_p: {result.final_p!r}")
    if result.best_balanced_table is not None:
        print(f"best_table: {boolfn.format_truth_table(result.best_balanced_table, 'hex' if config.n >= 2 else 'bin')}")
    if args.out:
        export_results(result, args.out, "rows", include_timing=args.timing)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.crossover != CrossoverKind.ADAPTIVE.value:
        raise UsageError("sweep needs --crossover adaptive")
    for flag in ("p0", "alpha"):
        if getattr(args, flag) is not None:
            raise UsageError(f"use --{flag}-list with sweep, not --{flag}")
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    config = _config_from(args)
    try:
        spec = SweepSpec(
            base=config,
            p0_values=args.p0_list,
            alpha_values=args.alpha_list,
            runs=args.runs,
            master_seed=args.seed,
            threshold=args.threshold,
            optimum=args.optimum,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    grid = run_sweep(spec, workers=args.threads)
    print(f"threshold {spec.threshold}, optimum {spec.optimum}, {spec.runs} runs per cell")
    print(format_heatmap(grid))
    if args.out:
        export_results(grid, args.out, "rows", include_timing=args.timing)
    if args.aggregate:
        export_results(grid, args.aggregate, "aggregate")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    try:
        if args.oracle_command == "walsh":
            print(" ".join(map(str, oracle.naive_walsh(args.table).coeffs)))
        elif args.oracle_command == "nl":
            print(oracle.affine_distance_nl(args.table))
        else:
            best, count = oracle.exhaustive_balanced_optimum(args.n)
            print(f"max: {best}")
            print(f"count: {count}")
    except (oracle.OracleGuardError, ValueError) as exc:
        raise UsageError(str(exc))
    return EXIT_OK


def _cmd_props(args) -> int:
    t = args.table
    spectrum = boolfn.walsh_transform(t)
    print(f"n: {t.n}")
    print(f"weight: {boolfn.hamming_weight(t)}")
    print(f"balanced: {'yes' if boolfn.is_balanced(t) else 'no'}")
    print(f"nonlinearity: {boolfn.nonlinearity(spectrum)}")
    print(f"spectrum: {' '.join(map(str, spectrum.coeffs))}")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "oracle": _cmd_oracle, "props": _cmd_props}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"balancedga: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"balancedga: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
