# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

from harvest.cavity_model import CavityConfig
from harvest.correlations import CorrelationReport
from harvest.figures import (
    RECIPES,
    dominant_period,
    eigenvalue_gap,
    evaluate_checks,
    get_recipe,
    has_local_maximum_near,
    neighbouring_minima,
    peak_log_negativity,
    run_figure,
    select,
    single,
    strictly_increasing,
)


def report(t, r, temp, e_n=0.0, info=0.0, discord=0.0, nu1=1.0, nu2=1.0):
    return CorrelationReport(
        t, r, temp, e_n, info, discord, nu1, nu2, nu1, nu2, 1.0, 1.0, 1.0, 0.0, 1.0
    )


def test_every_recipe_uses_the_reference_cavity():
    for name in RECIPES:
        recipe = get_recipe(name)
        assert recipe.name == name
        assert recipe.spec.config == CavityConfig.reference()
        assert recipe.checks


def test_unknown_recipe():
    with pytest.raises(KeyError, match="fig9"):
        get_recipe("fig9")


def test_recipe_grids():
    assert get_recipe("fig2").spec.temperature.points == (0.0, 0.1, 0.15, 0.2)
    assert get_recipe("fig5").spec.temperature.points[-1] == 60.0
    assert get_recipe("fig4").metadata["vacuum_discord_ratio"] == 0.5
    assert get_recipe("fig1").spec.point_count == 71 * 51


def test_select_and_single():
    reports = [report(0.0, 4.0, 0.0), report(1.0, 4.0, 0.0), report(1.0, 4.0, 2.0)]
    assert len(select(reports, time=1.0)) == 2
    assert single(reports, time=1.0, temperature=2.0) is reports[2]
    with pytest.raises(LookupError):
        single(reports, time=1.0)
    with pytest.raises(LookupError):
        single(reports, time=5.0)


def test_small_helpers():
    assert strictly_increasing([1.0, 2.0, 3.0])
    assert not strictly_increasing([1.0, 1.0, 3.0])
    assert eigenvalue_gap(report(0.0, 4.0, 0.0, nu1=1.0, nu2=1.5)) == 0.5
    reports = [report(t, 3.0, 0.1, e_n=t / 10) for t in range(4)]
    assert peak_log_negativity(reports, 0.1) == pytest.approx(0.3)


def test_dominant_period():
    times = np.linspace(20.0, 120.0, 1001)
    values = 0.3 + 0.01 * np.sin(2 * math.pi * times / 5.0) + 0.002 * np.sin(times)
    assert dominant_period(times, values) == pytest.approx(5.0, abs=0.05)


def test_has_local_maximum_near():
    profile = [(r, -((r - 5.0) ** 2)) for r in np.linspace(0.0, 10.0, 41)]
    assert has_local_maximum_near(profile, 5.0, 0.25)
    assert not has_local_maximum_near(profile, 8.0, 0.25)
    assert not has_local_maximum_near(profile[:5], 0.0, 0.25)


def test_temperature_checks_on_synthetic_reports():
    recipe = get_recipe("fig2")
    reports = (
        [report(t, 3.0, 0.0, e_n=0.2 * t) for t in (0.0, 1.0)]
        + [report(t, 3.0, 0.1, e_n=0.1 * t) for t in (0.0, 1.0)]
        + [report(t, 3.0, 0.2) for t in (0.0, 1.0)]
    )
    assert evaluate_checks(recipe, reports) == []

    reports[-1] = report(1.0, 3.0, 0.2, e_n=0.01)
    assert evaluate_checks(recipe, reports) == ["no entanglement at T = 0.2"]


def test_amplification_checks():
    recipe = get_recipe("thermal-ratio")
    cold = report(2.0, 4.0, 0.0, info=0.01, discord=0.005)
    hot = report(2.0, 4.0, 10.0, info=0.2, discord=0.02)
    assert evaluate_checks(recipe, [cold, hot]) == ["discord amplified"]


def test_unevaluable_check_fails(mocker):
    error = mocker.patch("harvest.figures.logger.error")
    recipe = get_recipe("thermal-ratio")
    assert evaluate_checks(recipe, []) == [check.description for check in recipe.checks]
    assert error.call_count == 2


def _band_profile(r, dip=0.0):
    decay = 0.05 * math.exp(-r / 0.6)
    first = 0.05 * math.exp(-(((r - 5.0) / 0.7) ** 2))
    second = 0.0103 * math.exp(-(((r - 10.0) / 0.7) ** 2))
    dent = dip * math.exp(-(((r - 2.5) / 0.15) ** 2))
    return 0.0057 + decay + first + second - dent


def test_neighbouring_minima():
    profile = [(r, _band_profile(r)) for r in np.linspace(0.0, 15.0, 61)]
    minima = neighbouring_minima(profile, 2.5, (0.0, 5.0))
    assert len(minima) == 1
    assert minima[0] < _band_profile(2.5)
    assert neighbouring_minima(profile[:3], 0.25, (0.0, 5.0)) == []


def test_resonance_band_check():
    recipe = get_recipe("fig8")
    # I(r) falls monotonically down to the weak band and dips just past it
    reports = [
        report(14.0, r, 2.0, info=_band_profile(r)) for r in np.linspace(0.0, 15.0, 61)
    ]
    assert evaluate_checks(recipe, reports) == []

    dipped = [
        report(14.0, r, 2.0, info=_band_profile(r, dip=0.003))
        for r in np.linspace(0.0, 15.0, 61)
    ]
    assert evaluate_checks(recipe, dipped) == [recipe.checks[0].description]


def test_discord_peak_check():
    recipe = get_recipe("fig5")
    reports = [
        report(2.0, 4.0, temp, info=0.01 * (temp + 1), discord=10 - abs(temp - 6))
        for temp in np.arange(61.0)
    ]
    assert evaluate_checks(recipe, reports) == []


def test_run_figure_with_mocked_sweep(mocker):
    reports = [
        report(2.0, 4.0, 0.0, info=0.01, discord=0.005),
        report(2.0, 4.0, 10.0, info=1.0, discord=0.5),
    ]
    sweep = mocker.patch("harvest.figures.run_sweep", return_value=reports)
    recipe = get_recipe("thermal-ratio")
    outcome = run_figure(recipe, workers=2)
    sweep.assert_called_once_with(recipe.spec, 2, None)
    assert outcome.passed
    assert outcome.reports == reports


def test_run_figure_reports_failures(mocker):
    mocker.patch("harvest.figures.run_sweep", return_value=[report(0.0, 4.0, 0.0)])
    error = mocker.patch("harvest.figures.logger.error")
    outcome = run_figure(get_recipe("fig6"))
    assert not outcome.passed
    assert outcome.failures == ["gap opens once the interaction is on"]
    error.assert_called_once()


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(RECIPES))
def test_recipe_behaviour(name):
    outcome = run_figure(get_recipe(name), workers=4)
    assert outcome.failures == []
