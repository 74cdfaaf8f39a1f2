# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Parameter sweeps over interaction time, detector separation and temperature.

S(t) does not depend on the initial state, so one generator is built per
separation and one block of detector rows per (separation, time); every
temperature reuses it with a different initial diagonal.
"""
import os
from dataclasses import replace
from typing import Optional

from joblib import Parallel, delayed

from harvest.cavity_model import initial_diagonal
from harvest.correlations import NUMERICAL_ZERO, CorrelationReport, correlation_report
from harvest.evolution import build_generator, project_detectors, propagator_rows
from harvest.generator_cache import GeneratorCache
from harvest.powertools_logger import get_logger
from harvest.sweep_config import InvalidSweepConfig, SweepSpec

LOG_LEVEL = os.getenv("log_level", "info")
logger = get_logger("sweeps", LOG_LEVEL)

MAX_DIMENSION = 4096
MEASURES = ("E_N", "I", "D")


def _sweep_separation(
    spec: SweepSpec, r: float, cache: Optional[GeneratorCache]
) -> list[CorrelationReport]:
    cfg = spec.config.at_separation(r)
    gen = build_generator(cfg, cache)
    temperatures = spec.temperature.values()
    diagonals = [initial_diagonal(cfg, float(temp)) for temp in temperatures]

    reports: list[CorrelationReport] = []
    for t in spec.time.values():
        rows = propagator_rows(gen, float(t))
        for temp, diagonal in zip(temperatures, diagonals):
            state = project_detectors(rows, diagonal)
            reports.append(correlation_report(state, float(t), r, float(temp)))
    return reports


def run_sweep(
    spec: SweepSpec, workers: int = 1, cache: Optional[GeneratorCache] = None
) -> list[CorrelationReport]:
    dimension = spec.config.layout.dimension
    if dimension > MAX_DIMENSION:
        raise InvalidSweepConfig(
            f"cutoff {spec.config.cutoff} gives a {dimension}x{dimension} system, "
            f"above the limit of {MAX_DIMENSION}"
        )
    if workers < 1:
        raise InvalidSweepConfig(f"worker count must be positive, got {workers}")

    separations = sorted(set(float(r) for r in spec.separation.values()))
    logger.info(
        "Starting sweep",
        points=spec.point_count,
        separations=len(separations),
        dimension=dimension,
        workers=workers,
    )
    with logger.timed("Finished sweep") as summary:
        batches = Parallel(n_jobs=workers, prefer="threads")(
            delayed(_sweep_separation)(spec, r, cache) for r in separations
        )
        reports = [report for batch in batches for report in batch]
        reports.sort(key=lambda rep: (rep.separation, rep.temperature, rep.time))
        summary["points"] = len(reports)
    return reports


def _measure(report: CorrelationReport, name: str) -> float:
    return {
        "E_N": report.log_negativity,
        "I": report.mutual_information,
        "D": report.discord,
    }[name]


def relative_drift(
    baseline: list[CorrelationReport], refined: list[CorrelationReport]
) -> dict[str, float]:
    """Largest relative change of each measure between two sweeps of the same grid."""
    if len(baseline) != len(refined):
        raise ValueError(f"sweeps have {len(baseline)} and {len(refined)} points")
    drift = {name: 0.0 for name in MEASURES}
    for before, after in zip(baseline, refined):
        for name in MEASURES:
            a, b = _measure(before, name), _measure(after, name)
            scale = max(abs(a), abs(b))
            if scale <= NUMERICAL_ZERO:
                continue
            drift[name] = max(drift[name], abs(a - b) / scale)
    return drift


def convergence_check(
    spec: SweepSpec,
    workers: int = 1,
    cache: Optional[GeneratorCache] = None,
    baseline: Optional[list[CorrelationReport]] = None,
) -> dict[str, float]:
    """Reruns the sweep with twice the mode cutoff and reports the relative drift."""
    if baseline is None:
        baseline = run_sweep(spec, workers, cache)
    refined_spec = replace(spec, config=spec.config.with_cutoff(2 * spec.config.cutoff))
    refined = run_sweep(refined_spec, workers, cache)
    drift = relative_drift(baseline, refined)
    logger.info("Cutoff convergence check", cutoff=spec.config.cutoff, **drift)
    return drift
