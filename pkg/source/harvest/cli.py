#!/usr/bin/env python3
# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Command-line entry point: ``harvest {sweep,figure,corrfunc,decompose,validate}``.

Tables go to stdout (or --output), logs to stderr. Exit codes: 0 success,
1 failed figure checks or validation, 2 usage and configuration errors.
"""
import argparse
import os
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from harvest.cavity_model import (
    REFERENCE_COUPLING,
    REFERENCE_CUTOFF,
    REFERENCE_DETECTOR_FREQUENCY,
    REFERENCE_LENGTH,
    CavityConfig,
    InvalidCavityConfig,
    cavity_correlation_function,
    free_space_correlation,
    initial_diagonal,
)
from harvest.correlations import CorrelationReport, correlation_report
from harvest.decomposition import (
    beam_split,
    decomposed_mutual_information,
    mode_function_couplings,
    passive_entanglement_criterion,
    resonance_bands,
    thermal_approx_mutual_information,
    thermal_approx_surface,
)
from harvest.emit import EmitError, emit, emit_table
from harvest.evolution import PropagatorError, build_generator, evolve_detectors
from harvest.figures import RECIPES, get_recipe, run_figure
from harvest.gaussian_core import GaussianStateError
from harvest.generator_cache import GeneratorCache
from harvest.powertools_logger import get_logger
from harvest.sweep_config import (
    DEFAULT_PRECISION,
    InvalidSweepConfig,
    SweepSpec,
    load_sweep_spec,
)
from harvest.sweeps import convergence_check, run_sweep
from harvest.validation_suite import run_validation

LOG_LEVEL = os.getenv("log_level", "info")
CACHE_DIR = os.getenv("HARVEST_CACHE_DIR")
logger = get_logger("cli", LOG_LEVEL)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

STATE_TABLE_HEADER = (
    "t",
    "r",
    "T",
    "nu_minus",
    "nu_plus",
    "off_block",
    "I",
    "I_decomposed",
    "I_thermal_approx",
    "lambda_product",
    "passive_entangling",
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        return int(args.handler(args))
    except (InvalidSweepConfig, InvalidCavityConfig, FileNotFoundError) as e:
        logger.error("Invalid configuration", error=str(e))
        return EXIT_USAGE
    except EmitError as e:
        logger.error("Could not write output", error=str(e))
        return EXIT_USAGE
    except (PropagatorError, GaussianStateError, ArithmeticError) as e:
        logger.exception("Numerical failure", error=str(e))
        return EXIT_FAILED


def resolve_cache(args: argparse.Namespace) -> Optional[GeneratorCache]:
    if args.no_cache:
        return None
    directory = args.cache_dir or CACHE_DIR
    return GeneratorCache(directory) if directory else None


def _cavity_from_args(args: argparse.Namespace) -> CavityConfig:
    return CavityConfig(
        length=args.length,
        cutoff=args.n_modes,
        detector_frequency=args.detector_frequency,
        coupling=args.coupling,
    )


def _report_drift(
    spec: SweepSpec, args: argparse.Namespace, reports: list[CorrelationReport]
) -> None:
    drift = convergence_check(spec, args.threads, resolve_cache(args), baseline=reports)
    worst = max(drift.values())
    if worst >= 0.01:
        logger.warning("Results drift by more than 1% when the cutoff doubles", **drift)


def run_sweep_command(args: argparse.Namespace) -> int:
    spec = load_sweep_spec(args.config)
    spec = replace(
        spec,
        output=args.output or spec.output,
        output_format=args.format or spec.output_format,
        precision=args.precision or spec.precision,
    )
    reports = run_sweep(spec, args.threads, resolve_cache(args))
    emit(reports, spec.output_format, spec.output, spec.precision)
    if args.convergence_check:
        _report_drift(spec, args, reports)
    return EXIT_OK


def run_figure_command(args: argparse.Namespace) -> int:
    recipe = get_recipe(args.name)
    spec = replace(
        recipe.spec,
        output=args.output,
        output_format=args.format or "csv",
        precision=args.precision or DEFAULT_PRECISION,
    )
    outcome = run_figure(replace(recipe, spec=spec), args.threads, resolve_cache(args))
    emit(outcome.reports, spec.output_format, spec.output, spec.precision)
    if args.convergence_check:
        _report_drift(spec, args, outcome.reports)
    if not outcome.passed:
        logger.error(
            "Figure checks failed", figure=recipe.name, failures=outcome.failures
        )
        return EXIT_FAILED
    logger.info("Figure checks passed", figure=recipe.name, checks=len(recipe.checks))
    return EXIT_OK


def run_corrfunc_command(args: argparse.Namespace) -> int:
    cfg = _cavity_from_args(args)
    r_max = args.r_max if args.r_max is not None else cfg.length
    rows: list[tuple[float, ...]] = []
    for r in np.linspace(0.0, r_max, args.count):
        cavity = cavity_correlation_function(float(r), args.temperature, cfg)
        if r > 0 and args.temperature > 0:
            free = free_space_correlation(float(r), args.temperature)
        else:
            free = float("nan")
        rows.append((float(r), args.temperature, cavity, free))
    emit_table(
        ("r", "T", "C_cavity", "C_free"),
        rows,
        args.format or "csv",
        args.output,
        args.precision or DEFAULT_PRECISION,
    )
    return EXIT_OK


def _decompose_state_rows(
    args: argparse.Namespace, cfg: CavityConfig
) -> list[tuple[float, ...]]:
    placed = cfg.at_separation(args.separation)
    gen = build_generator(placed, resolve_cache(args))
    rows: list[tuple[float, ...]] = []
    for temperature in args.temperature:
        state = evolve_detectors(gen, initial_diagonal(placed, temperature), args.time)
        split = beam_split(state)
        report = correlation_report(state, args.time, args.separation, temperature)
        entangling, product = passive_entanglement_criterion(split)
        rows.append(
            (
                args.time,
                args.separation,
                temperature,
                split.nu_minus,
                split.nu_plus,
                split.off_block_residual,
                report.mutual_information,
                decomposed_mutual_information(split),
                thermal_approx_mutual_information(report.nu1, report.nu2),
                product,
                float(entangling),
            )
        )
    return rows


def run_decompose_command(args: argparse.Namespace) -> int:
    cfg = _cavity_from_args(args)
    header: tuple[str, ...]
    rows: Sequence[Sequence[float]]
    if args.table == "state":
        header = STATE_TABLE_HEADER
        rows = _decompose_state_rows(args, cfg)
    elif args.table == "modes":
        header = ("n", "omega", "c_plus", "c_minus")
        rows = [tuple(p) for p in mode_function_couplings(args.separation, cfg)]
    elif args.table == "bands":
        header = ("r", "order", "strong")
        rows = [
            (band.separation, band.order, float(band.strength == "strong"))
            for band in resonance_bands(cfg, args.r_max)
        ]
    else:
        header = ("nu1", "nu2", "I")
        nu_values = np.linspace(1.0, args.nu_max, args.count).tolist()
        rows = thermal_approx_surface(nu_values)
    precision = args.precision or DEFAULT_PRECISION
    emit_table(header, rows, args.format or "csv", args.output, precision)
    return EXIT_OK


def run_validate_command(args: argparse.Namespace) -> int:
    results = run_validation(cache=resolve_cache(args))
    failed = [result.name for result in results if not result.passed]
    if failed:
        logger.error("Validation suite failed", failed=failed)
        return EXIT_FAILED
    logger.info("Validation suite passed", checks=len(results))
    return EXIT_OK


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="Worker threads; output does not depend on it",
    )
    common.add_argument(
        "--no-cache", action="store_true", help="Disable the on-disk generator cache"
    )
    common.add_argument(
        "--cache-dir", help="Generator cache directory. Defaults to $HARVEST_CACHE_DIR"
    )
    common.add_argument(
        "--convergence-check",
        action="store_true",
        help="Rerun with twice the mode cutoff and report the relative drift",
    )
    common.add_argument("--output", "-o", help="Output file. Defaults to stdout")
    common.add_argument("--format", choices=("csv", "json"), help="Output format")
    common.add_argument(
        "--precision",
        type=int,
        choices=range(1, 18),
        metavar="{1..17}",
        help="Significant digits of emitted numbers",
    )
    return common


def _cavity_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--length", type=float, default=REFERENCE_LENGTH)
    parser.add_argument("--n-modes", type=int, default=REFERENCE_CUTOFF)
    parser.add_argument(
        "--detector-frequency", type=float, default=REFERENCE_DETECTOR_FREQUENCY
    )
    parser.add_argument("--coupling", type=float, default=REFERENCE_COUPLING)


def create_argument_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    argument_parser = argparse.ArgumentParser(
        prog="harvest",
        description="Correlation harvesting by two detectors in a thermal cavity",
    )
    commands = argument_parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser(
        "sweep", parents=[common], help="Run a sweep from a JSON config"
    )
    sweep.add_argument("config", help="Path to the sweep configuration")
    sweep.set_defaults(handler=run_sweep_command)

    figure = commands.add_parser(
        "figure", parents=[common], help="Run a figure recipe and its checks"
    )
    figure.add_argument("name", choices=sorted(RECIPES))
    figure.set_defaults(handler=run_figure_command)

    corrfunc = commands.add_parser(
        "corrfunc", parents=[common], help="Tabulate the equal-time field correlation"
    )
    _cavity_arguments(corrfunc)
    corrfunc.add_argument("--temperature", "-T", type=float, default=10.0)
    corrfunc.add_argument("--r-max", type=float)
    corrfunc.add_argument("--count", type=int, default=201)
    corrfunc.set_defaults(handler=run_corrfunc_command)

    decompose = commands.add_parser(
        "decompose", parents=[common], help="(+)/(-) mode analysis tables"
    )
    _cavity_arguments(decompose)
    decompose.add_argument(
        "--table", choices=("state", "modes", "bands", "surface"), default="state"
    )
    decompose.add_argument("--separation", "-r", type=float, default=4.0)
    decompose.add_argument("--time", "-t", type=float, default=2.0)
    decompose.add_argument(
        "--temperature", "-T", type=float, nargs="+", default=[0.0, 1.0, 2.0, 5.0]
    )
    decompose.add_argument("--r-max", type=float, default=15.0)
    decompose.add_argument("--nu-max", type=float, default=10.0)
    decompose.add_argument("--count", type=int, default=19)
    decompose.set_defaults(handler=run_decompose_command)

    validate = commands.add_parser(
        "validate", parents=[common], help="Run the numerical invariant suite"
    )
    validate.set_defaults(handler=run_validate_command)

    return argument_parser


if __name__ == "__main__":
    raise SystemExit(main())
