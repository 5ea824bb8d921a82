"""
Command-line interface for sweeps, rate regions, single runs and the gradient check.

    python -m app sweep --config configs/distance_sweep.env --out results/
    python -m app region --config configs/rate_region.env --distances 0,20,50
    python -m app optimize --config defaults --seed 7 --eta 0.5
    python -m app gradcheck --seed 1

Results go to stdout and to files under ``--out``; logs go to stderr.
Exit status is 0 on success, 2 for usage or configuration errors and 1 for
any other failure.
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.core.config import DEFAULTS_KEYWORD, Settings, load_settings
from app.core.errors import ConfigError, RisError
from app.core.logging import logger, setup_logging
from app.schemas.sweep import ALL_SCHEMES, SweepSpec
from app.utils.channel_model import synthesize_channels
from app.utils.objective import gradient_check, two_way_optimize
from app.utils.reporting import emit_csv, emit_plot, emit_region_family
from app.utils.sweep import RegionCurve, execute_sweep, rate_region, summarize

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Invalid command-line arguments."""


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _scheme_list(text: str) -> List[str]:
    schemes = [item.strip() for item in text.split(",") if item.strip()]
    unknown = [s for s in schemes if s not in ALL_SCHEMES]
    if unknown or not schemes:
        raise argparse.ArgumentTypeError(f"unknown scheme(s) {unknown}; choose from {', '.join(ALL_SCHEMES)}")
    return schemes


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so main() can return a status."""

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ris-twoway", description="Two-way RIS passive beamforming experiments")
    parser.add_argument("--log-level", default=None, help="Console log level (default: LOG_LEVEL setting)")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sub, config_required: bool = True):
        sub.add_argument(
            "--config",
            required=config_required,
            metavar="PATH",
            help=f"Scenario file (KEY=value lines) or '{DEFAULTS_KEYWORD}'",
        )
        sub.add_argument("--seed", type=int, default=None, help="Seed (base seed for sweeps; default RIS_SEED)")
        sub.add_argument("--log-level", default=argparse.SUPPRESS, help="Console log level")

    def batch(sub):
        sub.add_argument("--seeds", type=int, default=None, help="Channel realizations per grid value")
        sub.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
        sub.add_argument("--scheme", type=_scheme_list, default=None, help="Comma-separated schemes")
        sub.add_argument("--workers", type=int, default=None, help="Process pool size")
        sub.add_argument("--timing", action="store_true", default=None, help="Record wall time per evaluation")
        sub.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True, help="Write SVG plots")

    sweep = subparsers.add_parser("sweep", help="Run the sweep described by a config file")
    common(sweep)
    batch(sweep)
    sweep.add_argument("--eta", type=float, default=None, help="Weight when eta is not swept")
    sweep.add_argument("--variable", choices=["bs_ris_distance", "eta", "ris_elements"], default=None)
    sweep.add_argument("--values", type=_float_list, default=None, help="Comma-separated grid")

    region = subparsers.add_parser("region", help="Downlink-uplink rate region (eta sweep)")
    common(region)
    batch(region)
    region.add_argument("--values", type=_float_list, default=None, help="Comma-separated eta grid")
    region.add_argument("--distances", type=_float_list, default=None, help="BS-RIS distances for a region family")

    optimize = subparsers.add_parser("optimize", help="Two-way optimization of one channel realization")
    common(optimize)
    optimize.add_argument("--eta", type=float, default=None, help="Downlink weight (default SWEEP_ETA)")

    gradcheck = subparsers.add_parser("gradcheck", help="Finite-difference check of the Riemannian gradient")
    common(gradcheck, config_required=False)
    gradcheck.add_argument("--instances", type=int, default=100)
    gradcheck.add_argument("--directions", type=int, default=20)

    return parser


def _spec_from_args(settings: Settings, args, **overrides) -> SweepSpec:
    return settings.sweep_spec(
        values=getattr(args, "values", None),
        schemes=args.scheme,
        seeds=args.seeds,
        base_seed=args.seed,
        eta=getattr(args, "eta", None),
        workers=args.workers,
        record_timing=args.timing,
        **overrides,
    )


def _print_summary(records) -> None:
    summary = summarize(records)
    with pd.option_context("display.max_rows", None, "display.width", 200):
        print(summary.to_string(index=False))


def cmd_sweep(settings: Settings, args) -> int:
    spec = _spec_from_args(settings, args, variable=args.variable)
    outcome = execute_sweep(spec)
    emit_csv(outcome.records, args.out / f"{spec.variable}.csv")
    if args.plot:
        emit_plot(outcome.records, "objective", args.out / f"{spec.variable}.svg")
        if spec.variable == "eta":
            emit_plot(outcome.records, "region", args.out / "eta_region.svg")
    _print_summary(outcome.records)
    if outcome.failures:
        logger.warning(f"{len(outcome.failures)} evaluations failed and were skipped")
    return EXIT_OK


def _print_region(curves: dict, label: str = "") -> None:
    for scheme, curve in curves.items():
        print(f"{scheme}{label}: sum-rate peak at eta={curve.peak_eta:g}")
        for eta, r_D, r_U in zip(curve.etas[curve.frontier], curve.r_D[curve.frontier], curve.r_U[curve.frontier]):
            print(f"  eta={eta:<6g} r_D={r_D:.6f} r_U={r_U:.6f}")


def cmd_region(settings: Settings, args) -> int:
    spec = _spec_from_args(settings, args, variable="eta")
    if not {0.0, 1.0} <= set(spec.values):
        raise UsageError("region: --values must include both eta endpoints 0 and 1")
    distances = args.distances or [None]
    regions = {}
    for distance in distances:
        suffix = "" if distance is None else f"_d{distance:g}"
        at_distance = spec if distance is None else spec.model_copy(update={"base": spec.base.with_distance(distance)})
        records = execute_sweep(at_distance).records
        emit_csv(records, args.out / f"region{suffix}.csv")
        curves = rate_region(at_distance, records)
        if args.plot:
            emit_plot(records, "region", args.out / f"region{suffix}.svg")
        _print_region(curves, "" if distance is None else f" (d={distance:g} m)")
        if distance is not None:
            regions[distance] = curves
    if args.plot and len(regions) > 1:
        scheme = "two_way" if "two_way" in spec.schemes else spec.schemes[0]
        emit_region_family(regions, scheme, args.out / "region_family.svg")
    return EXIT_OK


def cmd_optimize(settings: Settings, args) -> int:
    params = settings.system_params()
    seed = settings.RIS_SEED if args.seed is None else args.seed
    eta = settings.SWEEP_ETA if args.eta is None else args.eta
    ch = synthesize_channels(params, seed)
    solution = two_way_optimize(ch, params, eta, settings.rcg_config(), rng=np.random.default_rng([seed, 1]))

    print(f"seed        {seed}")
    print(f"eta         {eta:g}")
    print(f"r_D         {solution.r_D:.6f}")
    print(f"r_U         {solution.r_U:.6f}")
    print(f"objective   {solution.objective:.6f}")
    print(f"iterations  {solution.trace.iterations}")
    print(f"termination {solution.trace.termination}")
    print("trace")
    print(f"  {'iter':>5} {'objective':>12} {'grad_norm':>12} {'step':>10}")
    for k, record in enumerate(solution.trace.records):
        print(f"  {k:>5} {record.objective:>12.6f} {record.grad_norm:>12.3e} {record.step:>10.3e}")
    return EXIT_OK


def cmd_gradcheck(settings: Settings, args) -> int:
    seed = settings.RIS_SEED if args.seed is None else args.seed
    result = gradient_check(seed, instances=args.instances, directions=args.directions)
    print(f"instances           {result.instances}")
    print(f"directions          {result.directions}")
    print(f"max relative error  {result.max_relative_error:.3e} (vs ||grad||*||d||)")
    print(f"passed              {result.passed}")
    return EXIT_OK if result.passed else EXIT_FAILURE


COMMANDS = {
    "sweep": cmd_sweep,
    "region": cmd_region,
    "optimize": cmd_optimize,
    "gradcheck": cmd_gradcheck,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Exit status
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(str(e), file=sys.stderr)
        return EXIT_USAGE

    try:
        settings = load_settings(args.config) if args.config else Settings(_env_file=None)
    except ConfigError as e:
        print(f"ris-twoway: error: --config: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_DIR)

    try:
        return COMMANDS[args.command](settings, args)
    except UsageError as e:
        print(f"ris-twoway: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ValidationError) as e:
        print(f"ris-twoway: error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RisError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"ris-twoway: error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {str(e)}", exc_info=True)
        print(f"ris-twoway: error: {e}", file=sys.stderr)
        return EXIT_FAILURE
