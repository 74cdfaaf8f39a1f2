# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Sweep presets for the published figures, each with the qualitative
behaviour its table is expected to show.

All recipes use L = 100, N = 80, Omega = 40 pi / L and lambda = 0.05.
"""
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional, Sequence

import numpy as np

from harvest.cavity_model import CavityConfig
from harvest.correlations import CorrelationReport
from harvest.generator_cache import GeneratorCache
from harvest.powertools_logger import get_logger
from harvest.sweep_config import Axis, SweepSpec
from harvest.sweeps import run_sweep

LOG_LEVEL = os.getenv("log_level", "info")
logger = get_logger("figures", LOG_LEVEL)

Reports = Sequence[CorrelationReport]

# the captions of the (t, r) surfaces give no numeric ranges
SURFACE_TIME_WINDOW = (0.0, 14.0)
SURFACE_SEPARATION_WINDOW = (0.0, 50.0)
# smallest D/I seen over t in [1, 14] at T = 0, r = 4 is 0.526 (t = 5)
VACUUM_DISCORD_RATIO = 0.5
MEASURED_VACUUM_DISCORD_RATIO = 0.526
AMPLIFICATION_RATIO = 10.0
OSCILLATION_PERIOD = 5.0


class FigureCheck(NamedTuple):
    description: str
    evaluate: Callable[[Reports], bool]


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    description: str
    spec: SweepSpec
    checks: tuple[FigureCheck, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class FigureOutcome:
    recipe: FigureRecipe
    reports: list[CorrelationReport]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _close(value: float, target: Optional[float]) -> bool:
    return target is None or math.isclose(value, target, rel_tol=1e-9, abs_tol=1e-9)


def select(
    reports: Reports,
    *,
    time: Optional[float] = None,
    separation: Optional[float] = None,
    temperature: Optional[float] = None,
) -> list[CorrelationReport]:
    return [
        rep
        for rep in reports
        if _close(rep.time, time)
        and _close(rep.separation, separation)
        and _close(rep.temperature, temperature)
    ]


def single(reports: Reports, **coordinates: float) -> CorrelationReport:
    selected = select(reports, **coordinates)
    if len(selected) != 1:
        raise LookupError(
            f"expected one report at {coordinates}, found {len(selected)}"
        )
    return selected[0]


def peak_log_negativity(reports: Reports, temperature: float) -> float:
    return max(rep.log_negativity for rep in select(reports, temperature=temperature))


def eigenvalue_gap(rep: CorrelationReport) -> float:
    return abs(rep.nu2 - rep.nu1)


def strictly_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def dominant_period(times: Sequence[float], values: Sequence[float]) -> float:
    """Period of the largest non-zero-frequency DFT component of a uniform series."""
    samples = np.asarray(values, dtype=np.float64)
    step = float(times[1] - times[0])
    spectrum = np.abs(np.fft.rfft(samples - samples.mean()))
    frequencies = np.fft.rfftfreq(samples.size, d=step)
    peak = int(np.argmax(spectrum[1:])) + 1
    return float(1.0 / frequencies[peak])


def has_local_maximum_near(
    profile: Sequence[tuple[float, float]], target: float, tolerance: float
) -> bool:
    for i in range(1, len(profile) - 1):
        r, value = profile[i]
        if (
            abs(r - target) <= tolerance
            and value > profile[i - 1][1]
            and value > profile[i + 1][1]
        ):
            return True
    return False


def neighbouring_minima(
    profile: Sequence[tuple[float, float]],
    target: float,
    window: tuple[float, float],
) -> list[float]:
    """Values of the interior local minima closest to target on either side."""
    minima = [
        profile[i]
        for i in range(1, len(profile) - 1)
        if window[0] < profile[i][0] < window[1]
        and profile[i][1] < profile[i - 1][1]
        and profile[i][1] < profile[i + 1][1]
    ]
    below = [point for point in minima if point[0] < target]
    above = [point for point in minima if point[0] > target]
    nearest: list[float] = []
    if below:
        nearest.append(below[-1][1])
    if above:
        nearest.append(above[0][1])
    return nearest


def _discord_bounded(reports: Reports) -> bool:
    return all(rep.discord <= rep.mutual_information + 1e-9 for rep in reports)


def _entanglement_harvested(reports: Reports) -> bool:
    return max(rep.log_negativity for rep in reports) > 0


def _no_entanglement_at_start(reports: Reports) -> bool:
    return all(rep.log_negativity == 0 for rep in select(reports, time=0.0))


def _information_harvested(reports: Reports) -> bool:
    return max(rep.mutual_information for rep in reports) > 0


def _vacuum_entangles(reports: Reports) -> bool:
    return peak_log_negativity(reports, 0.0) > 0


def _warm_entangles_less(reports: Reports) -> bool:
    return 0 < peak_log_negativity(reports, 0.1) < peak_log_negativity(reports, 0.0)


def _hot_never_entangles(reports: Reports) -> bool:
    return peak_log_negativity(reports, 0.2) < 1e-12


def _amplified(reports: Reports, attribute: str) -> bool:
    cold = getattr(single(reports, time=2.0, temperature=0.0), attribute)
    hot = getattr(single(reports, time=2.0, temperature=10.0), attribute)
    return bool(cold > 0 and hot >= AMPLIFICATION_RATIO * cold)


def _information_amplified(reports: Reports) -> bool:
    return _amplified(reports, "mutual_information")


def _discord_amplified(reports: Reports) -> bool:
    return _amplified(reports, "discord")


def _vacuum_discord_close(reports: Reports) -> bool:
    window = [
        rep for rep in select(reports, temperature=0.0) if 1.0 <= rep.time <= 14.0
    ]
    return all(
        rep.discord >= VACUUM_DISCORD_RATIO * rep.mutual_information for rep in window
    )


def _information_keeps_rising(reports: Reports) -> bool:
    return strictly_increasing([rep.mutual_information for rep in reports])


def _discord_peaks_mid_range(reports: Reports) -> bool:
    return 4.0 <= max(reports, key=lambda rep: rep.discord).temperature <= 8.0


def _gap_closed_at_start(reports: Reports) -> bool:
    return eigenvalue_gap(single(reports, time=0.0)) < 1e-12


def _gap_opens(reports: Reports) -> bool:
    return max(eigenvalue_gap(rep) for rep in reports) > 0


def _gap_grows_with_temperature(reports: Reports) -> bool:
    gaps = [
        eigenvalue_gap(single(reports, temperature=temp))
        for temp in (0.0, 1.0, 2.0, 5.0)
    ]
    return strictly_increasing(gaps)


def _plus_minus_spectrum_matches(reports: Reports) -> bool:
    return all(
        abs(min(rep.nu_plus, rep.nu_minus) - rep.nu1) < 1e-9
        and abs(max(rep.nu_plus, rep.nu_minus) - rep.nu2) < 1e-9
        for rep in reports
    )


def _resonance_bands_visible(reports: Reports) -> bool:
    late = select(reports, time=14.0)
    profile = [(rep.separation, rep.mutual_information) for rep in late]
    if not (
        has_local_maximum_near(profile, 5.0, 0.25)
        and has_local_maximum_near(profile, 10.0, 0.25)
    ):
        return False
    weak = single(late, separation=2.5).mutual_information
    strong = single(late, separation=5.0).mutual_information
    minima = neighbouring_minima(profile, 2.5, (0.0, 5.0))
    return strong > weak and bool(minima) and all(weak > low for low in minima)


def _oscillates_at_detector_period(reports: Reports) -> bool:
    ordered = sorted(reports, key=lambda rep: rep.time)
    period = dominant_period(
        [rep.time for rep in ordered], [rep.mutual_information for rep in ordered]
    )
    logger.info("Long-time oscillation", period=period)
    return abs(period - OSCILLATION_PERIOD) <= 0.5


def _reference_spec(time: Axis, separation: Axis, temperature: Axis) -> SweepSpec:
    return SweepSpec(
        CavityConfig.reference(),
        time=time,
        separation=separation,
        temperature=temperature,
    )


def _surface_axes() -> tuple[Axis, Axis]:
    return (
        Axis.linspace(*SURFACE_TIME_WINDOW, 71),
        Axis.linspace(*SURFACE_SEPARATION_WINDOW, 51),
    )


def _fig1() -> FigureRecipe:
    return FigureRecipe(
        name="fig1",
        description="Logarithmic negativity over (t, r), vacuum field",
        spec=_reference_spec(*_surface_axes(), Axis.fixed(0.0)),
        checks=(
            FigureCheck(
                "entanglement is harvested in the window", _entanglement_harvested
            ),
            FigureCheck("no entanglement at t = 0", _no_entanglement_at_start),
        ),
        metadata={
            "time_window": SURFACE_TIME_WINDOW,
            "separation_window": SURFACE_SEPARATION_WINDOW,
        },
    )


def _fig2() -> FigureRecipe:
    return FigureRecipe(
        name="fig2",
        description="Logarithmic negativity versus t at r = 3 for rising temperature",
        spec=_reference_spec(
            Axis.linspace(0.0, 14.0, 200),
            Axis.fixed(3.0),
            Axis.of([0.0, 0.1, 0.15, 0.2]),
        ),
        checks=(
            FigureCheck("vacuum harvests entanglement", _vacuum_entangles),
            FigureCheck("T = 0.1 harvests less than the vacuum", _warm_entangles_less),
            FigureCheck("no entanglement at T = 0.2", _hot_never_entangles),
        ),
    )


def _fig3() -> FigureRecipe:
    return FigureRecipe(
        name="fig3",
        description="Mutual information over (t, r), vacuum field",
        spec=_reference_spec(*_surface_axes(), Axis.fixed(0.0)),
        checks=(
            FigureCheck("mutual information is harvested", _information_harvested),
            FigureCheck("discord never exceeds mutual information", _discord_bounded),
        ),
        metadata={
            "time_window": SURFACE_TIME_WINDOW,
            "separation_window": SURFACE_SEPARATION_WINDOW,
        },
    )


def _fig4() -> FigureRecipe:
    return FigureRecipe(
        name="fig4",
        description="Mutual information and discord versus t at r = 4, T = 0, 1, 10",
        spec=_reference_spec(
            Axis.linspace(0.0, 14.0, 141), Axis.fixed(4.0), Axis.of([0.0, 1.0, 10.0])
        ),
        checks=(
            FigureCheck("discord never exceeds mutual information", _discord_bounded),
            FigureCheck(
                "mutual information amplified at T = 10", _information_amplified
            ),
            FigureCheck("discord amplified at T = 10", _discord_amplified),
            FigureCheck(
                "vacuum discord close to mutual information", _vacuum_discord_close
            ),
        ),
        metadata={
            "vacuum_discord_ratio": VACUUM_DISCORD_RATIO,
            "measured_vacuum_discord_ratio": MEASURED_VACUUM_DISCORD_RATIO,
            "amplification_ratio": AMPLIFICATION_RATIO,
        },
    )


def _fig5() -> FigureRecipe:
    return FigureRecipe(
        name="fig5",
        description="Mutual information and discord versus T at r = 4, t = 2",
        spec=_reference_spec(
            Axis.fixed(2.0), Axis.fixed(4.0), Axis.linspace(0.0, 60.0, 61)
        ),
        checks=(
            FigureCheck(
                "mutual information rises up to T = 60", _information_keeps_rising
            ),
            FigureCheck("discord peaks for T in [4, 8]", _discord_peaks_mid_range),
        ),
    )


def _fig6() -> FigureRecipe:
    return FigureRecipe(
        name="fig6",
        description="Symplectic eigenvalue gap |nu1 - nu2| versus t at r = 4, vacuum",
        spec=_reference_spec(
            Axis.linspace(0.0, 14.0, 141), Axis.fixed(4.0), Axis.fixed(0.0)
        ),
        checks=(
            FigureCheck("gap vanishes at t = 0", _gap_closed_at_start),
            FigureCheck("gap opens once the interaction is on", _gap_opens),
        ),
    )


def _fig7() -> FigureRecipe:
    return FigureRecipe(
        name="fig7",
        description="Symplectic eigenvalues nu1, nu2 versus T at r = 4, t = 2",
        spec=_reference_spec(
            Axis.fixed(2.0), Axis.fixed(4.0), Axis.linspace(0.0, 10.0, 11)
        ),
        checks=(
            FigureCheck("gap grows over T = 0, 1, 2, 5", _gap_grows_with_temperature),
            FigureCheck(
                "(+)/(-) eigenvalues equal nu1, nu2", _plus_minus_spectrum_matches
            ),
        ),
    )


def _fig8() -> FigureRecipe:
    return FigureRecipe(
        name="fig8",
        description="Mutual information over (t, r) at T = 2",
        spec=_reference_spec(
            Axis.linspace(0.0, 14.0, 57), Axis.linspace(0.0, 15.0, 61), Axis.fixed(2.0)
        ),
        checks=(
            FigureCheck(
                "bands at r = 5, 10 above r = 2.5 for t = 14", _resonance_bands_visible
            ),
        ),
    )


def _oscillation() -> FigureRecipe:
    return FigureRecipe(
        name="oscillation",
        description="Long-time mutual information at r = 4, T = 1",
        spec=_reference_spec(
            Axis.linspace(20.0, 120.0, 1001), Axis.fixed(4.0), Axis.fixed(1.0)
        ),
        checks=(
            FigureCheck(
                "dominant period is 2 pi / Omega", _oscillates_at_detector_period
            ),
        ),
        metadata={"expected_period": OSCILLATION_PERIOD},
    )


def _thermal_ratio() -> FigureRecipe:
    return FigureRecipe(
        name="thermal-ratio",
        description="Thermal amplification of I and D at r = 4, t = 2",
        spec=_reference_spec(Axis.fixed(2.0), Axis.fixed(4.0), Axis.of([0.0, 10.0])),
        checks=(
            FigureCheck("mutual information amplified", _information_amplified),
            FigureCheck("discord amplified", _discord_amplified),
        ),
        metadata={"amplification_ratio": AMPLIFICATION_RATIO},
    )


RECIPES: dict[str, Callable[[], FigureRecipe]] = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "oscillation": _oscillation,
    "thermal-ratio": _thermal_ratio,
}


def get_recipe(name: str) -> FigureRecipe:
    try:
        factory = RECIPES[name]
    except KeyError:
        raise KeyError(
            f"unknown figure {name!r}, expected one of {', '.join(RECIPES)}"
        ) from None
    return factory()


def evaluate_checks(recipe: FigureRecipe, reports: Reports) -> list[str]:
    failures: list[str] = []
    for check in recipe.checks:
        try:
            passed = check.evaluate(reports)
        except (LookupError, ValueError) as e:
            logger.error(
                "Figure check could not be evaluated",
                figure=recipe.name,
                check=check.description,
                error=str(e),
            )
            passed = False
        if not passed:
            failures.append(check.description)
    return failures


def run_figure(
    recipe: FigureRecipe, workers: int = 1, cache: Optional[GeneratorCache] = None
) -> FigureOutcome:
    reports = run_sweep(recipe.spec, workers, cache)
    failures = evaluate_checks(recipe, reports)
    for failure in failures:
        logger.error("Figure check failed", figure=recipe.name, check=failure)
    return FigureOutcome(recipe, reports, failures)
