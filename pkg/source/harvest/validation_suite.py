# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Numerical invariants checked by ``harvest validate``.

Each check returns a ValidationResult instead of raising, so one failing
invariant does not hide the others.
"""
import os
import time
from dataclasses import replace
from typing import Callable, NamedTuple, Optional

import numpy as np

from harvest.cavity_model import (
    CavityConfig,
    cavity_correlation_function,
    initial_diagonal,
    initial_state,
)
from harvest.correlations import (
    correlation_report,
    gaussian_discord,
    logarithmic_negativity,
)
from harvest.decomposition import beam_split, passive_entanglement_criterion
from harvest.evolution import (
    build_generator,
    evolve,
    evolve_detectors,
    integrate_propagator,
    propagator,
)
from harvest.gaussian_core import (
    symplectic_eigenvalues,
    symplectic_form,
    williamson_eigenvalues,
)
from harvest.generator_cache import GeneratorCache
from harvest.powertools_logger import get_logger

LOG_LEVEL = os.getenv("log_level", "info")
logger = get_logger("validation_suite", LOG_LEVEL)

SYMPLECTIC_TIMES = (0.5, 1.0, 2.0, 5.0, 10.0, 50.0)
ORACLE_CUTOFF = 10


class ValidationResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_symplecticity(
    cfg: CavityConfig, cache: Optional[GeneratorCache] = None
) -> ValidationResult:
    gen = build_generator(cfg.at_separation(4.0), cache)
    omega = symplectic_form(gen.config.layout)
    worst = 0.0
    for t in SYMPLECTIC_TIMES:
        s = propagator(gen, t)
        worst = max(worst, float(np.max(np.abs(s @ omega @ s.T - omega))))
    return ValidationResult(
        "symplecticity", worst < 1e-9, f"max |S Omega S^T - Omega| = {worst:.3e}"
    )


def check_purity(
    cfg: CavityConfig, cache: Optional[GeneratorCache] = None
) -> ValidationResult:
    placed = cfg.at_separation(4.0)
    gen = build_generator(placed, cache)
    sigma0 = initial_state(placed, 0.0)
    worst = 0.0
    for t in SYMPLECTIC_TIMES:
        nu = symplectic_eigenvalues(evolve(sigma0, propagator(gen, t)))
        worst = max(worst, float(np.max(np.abs(nu - 1.0))))
    return ValidationResult(
        "global purity", worst < 1e-6, f"max |nu - 1| of the vacuum = {worst:.3e}"
    )


def rk4_deviation(cfg: CavityConfig, t: float, dt: float) -> float:
    exact = propagator(build_generator(cfg), t)
    return float(np.max(np.abs(integrate_propagator(cfg, t, dt) - exact)))


def check_rk4_oracle(cfg: CavityConfig) -> ValidationResult:
    small = cfg.with_cutoff(ORACLE_CUTOFF).at_separation(4.0)
    deviation = rk4_deviation(small, 2.0, 1e-4)
    ratio = rk4_deviation(small, 2.0, 0.04) / rk4_deviation(small, 2.0, 0.02)
    passed = deviation < 1e-6 and 12.0 <= ratio <= 20.0
    return ValidationResult(
        "rk4 oracle", passed, f"deviation {deviation:.3e}, halving ratio {ratio:.2f}"
    )


def check_williamson_oracle(
    cfg: CavityConfig, cache: Optional[GeneratorCache] = None
) -> ValidationResult:
    placed = cfg.at_separation(4.0)
    gen = build_generator(placed, cache)
    worst = 0.0
    for temperature in (0.0, 1.0, 10.0):
        state = evolve_detectors(gen, initial_diagonal(placed, temperature), 2.0)
        spectrum = symplectic_eigenvalues(state.matrix)
        difference = spectrum - williamson_eigenvalues(state.matrix)
        worst = max(worst, float(np.max(np.abs(difference))))
    return ValidationResult(
        "williamson oracle", worst < 1e-9, f"max eigenvalue difference {worst:.3e}"
    )


def check_exchange_symmetry(
    cfg: CavityConfig, cache: Optional[GeneratorCache] = None
) -> ValidationResult:
    placed = cfg.at_separation(4.0)
    gen = build_generator(placed, cache)
    problems: list[str] = []
    for temperature in (0.0, 1.0, 10.0):
        state = evolve_detectors(gen, initial_diagonal(placed, temperature), 2.0)
        asymmetry = state.exchange_asymmetry()
        if asymmetry >= 1e-8:
            problems.append(f"T={temperature}: asymmetry {asymmetry:.3e}")
            continue
        split = beam_split(state)
        report = correlation_report(state, 2.0, 4.0, temperature)
        matched = sorted((split.nu_minus, split.nu_plus))
        if split.off_block_residual >= 1e-8:
            residual = split.off_block_residual
            problems.append(f"T={temperature}: off block {residual:.3e}")
        if max(abs(matched[0] - report.nu1), abs(matched[1] - report.nu2)) >= 1e-9:
            problems.append(f"T={temperature}: (+)/(-) spectrum differs from nu1, nu2")
        if abs(gaussian_discord(state.swapped()) - report.discord) > 1e-9:
            problems.append(f"T={temperature}: D(2:1) differs from D(1:2)")
    detail = "; ".join(problems) or "ok"
    return ValidationResult("exchange symmetry", not problems, detail)


def check_translation_invariance(cfg: CavityConfig) -> ValidationResult:
    rows = []
    for x1, x2 in ((0.0, 4.0), (30.0, 34.0)):
        placed = replace(cfg, x1=x1, x2=x2)
        gen = build_generator(placed)
        state = evolve_detectors(gen, initial_diagonal(placed, 1.0), 2.0)
        rows.append(np.asarray(correlation_report(state, 2.0, 4.0, 1.0).as_row()))
    worst = float(np.max(np.abs(rows[0] - rows[1])))
    return ValidationResult(
        "translation invariance", worst < 1e-8, f"max difference {worst:.3e}"
    )


def check_correlation_zero(cfg: CavityConfig) -> ValidationResult:
    distances = np.linspace(19.0, 23.0, 81)
    values = [cavity_correlation_function(r, 10.0, cfg) for r in distances]
    crossings = [
        float(distances[i])
        for i in range(len(values) - 1)
        if values[i] * values[i + 1] < 0
    ]
    if crossings:
        detail = f"sign changes near r = {crossings}"
    else:
        detail = "no sign change in [19, 23]"
    return ValidationResult("correlation function zero", bool(crossings), detail)


def cross_block_growth(cfg: CavityConfig, t: float) -> float:
    placed = cfg.at_separation(4.0)
    gen = build_generator(placed)
    diagonal = initial_diagonal(placed, 0.0)
    full = evolve_detectors(gen, diagonal, t).gamma12
    half = evolve_detectors(gen, diagonal, 0.5 * t).gamma12
    return float(np.linalg.norm(full) / np.linalg.norm(half))


def check_small_time_scaling(cfg: CavityConfig) -> ValidationResult:
    ratio = cross_block_growth(cfg, 0.05)
    return ValidationResult(
        "small-t growth",
        3.8 <= ratio <= 4.2,
        f"|gamma12(t)| / |gamma12(t/2)| = {ratio:.4f}",
    )


def check_passive_criterion(
    cfg: CavityConfig, cache: Optional[GeneratorCache] = None
) -> ValidationResult:
    placed = cfg.at_separation(3.0)
    gen = build_generator(placed, cache)
    violations = 0
    for temperature in (0.0, 0.1, 0.2):
        diagonal = initial_diagonal(placed, temperature)
        for t in np.linspace(0.5, 14.0, 28):
            state = evolve_detectors(gen, diagonal, float(t))
            entangled = logarithmic_negativity(state) > 0
            allowed, _ = passive_entanglement_criterion(beam_split(state))
            if entangled and not allowed:
                violations += 1
    return ValidationResult(
        "passive entanglement necessity", violations == 0, f"{violations} violations"
    )


def run_validation(
    cfg: Optional[CavityConfig] = None, cache: Optional[GeneratorCache] = None
) -> list[ValidationResult]:
    config = cfg or CavityConfig.reference()
    checks: list[Callable[[], ValidationResult]] = [
        lambda: check_symplecticity(config, cache),
        lambda: check_purity(config, cache),
        lambda: check_rk4_oracle(config),
        lambda: check_williamson_oracle(config, cache),
        lambda: check_exchange_symmetry(config, cache),
        lambda: check_translation_invariance(config),
        lambda: check_correlation_zero(config),
        lambda: check_small_time_scaling(config),
        lambda: check_passive_criterion(config, cache),
    ]
    results: list[ValidationResult] = []
    for check in checks:
        started = time.perf_counter()
        result = check()
        keys = {
            "check": result.name,
            "detail": result.detail,
            "seconds": round(time.perf_counter() - started, 3),
        }
        if result.passed:
            logger.info("Validation passed", **keys)
        else:
            logger.error("Validation failed", **keys)
        results.append(result)
    return results
