# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import json

import pytest

from harvest.cavity_model import CavityConfig
from harvest.sweep_config import (
    DEFAULT_PRECISION,
    Axis,
    InvalidSweepConfig,
    SweepSpec,
    load_sweep_spec,
    spec_from_document,
)


def document(**overrides):
    doc = {
        "schema_version": 1,
        "cavity": {"n_modes": 10},
        "time": {"min": 0, "max": 2, "count": 3},
        "separation": 4,
        "temperature": 0,
    }
    doc.update(overrides)
    return doc


def test_axis_constructors():
    assert Axis.fixed(3).points == (3.0,)
    assert not Axis.fixed(3).grid
    grid = Axis.linspace(0.0, 1.0, 5)
    assert grid.points == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert grid.describe() == {"min": 0.0, "max": 1.0, "count": 5}
    assert Axis.fixed(2.0).describe() == {"value": 2.0}
    assert Axis.of([0, 0.1, 0.2]).grid
    assert not Axis.of([7]).grid


@pytest.mark.parametrize(
    "build",
    [
        lambda: Axis(()),
        lambda: Axis.fixed(float("nan")),
        lambda: Axis.linspace(0.0, 1.0, 1),
        lambda: Axis.linspace(1.0, 1.0, 4),
        lambda: Axis.linspace(0.0, 1.0, 2.5),
    ],
)
def test_invalid_axis(build):
    with pytest.raises(InvalidSweepConfig):
        build()


def test_sweep_spec_needs_a_grid_axis():
    cfg = CavityConfig(cutoff=10)
    with pytest.raises(InvalidSweepConfig, match="grid"):
        SweepSpec(cfg, Axis.fixed(1.0), Axis.fixed(4.0), Axis.fixed(0.0))


@pytest.mark.parametrize("axis", ["time", "separation", "temperature"])
def test_sweep_spec_rejects_negative_values(axis):
    axes = {
        "time": Axis.linspace(0.0, 1.0, 2),
        "separation": Axis.fixed(4.0),
        "temperature": Axis.fixed(0.0),
    }
    axes[axis] = Axis.of([-1.0, 1.0])
    with pytest.raises(InvalidSweepConfig, match="non-negative"):
        SweepSpec(CavityConfig(cutoff=10), **axes)


def test_point_count():
    spec = spec_from_document(
        document(
            separation={"min": 0, "max": 10, "count": 11},
            temperature={"values": [0, 1]},
        )
    )
    assert spec.point_count == 3 * 11 * 2


def test_spec_from_document_defaults():
    spec = spec_from_document(document())
    assert spec.config == CavityConfig(cutoff=10)
    assert spec.time.points == (0.0, 1.0, 2.0)
    assert spec.separation.points == (4.0,)
    assert spec.output is None
    assert (spec.output_format, spec.precision) == ("csv", DEFAULT_PRECISION)


def test_spec_from_document_overrides():
    spec = spec_from_document(
        document(
            cavity={
                "length": 50,
                "n_modes": 12,
                "detector_frequency": 1.0,
                "coupling": 0.1,
            },
            output="out.json",
            format="json",
            precision=6,
        )
    )
    assert (spec.config.length, spec.config.cutoff) == (50.0, 12)
    assert (spec.config.detector_frequency, spec.config.coupling) == (1.0, 0.1)
    assert (spec.output, spec.output_format, spec.precision) == ("out.json", "json", 6)


@pytest.mark.parametrize(
    "overrides",
    [
        {"schema_version": 2},
        {"unknown": 1},
        {"time": "0..2"},
        {"time": {"min": 0, "max": 2}},
        {"time": {"min": 0, "max": 2, "count": 1}},
        {"time": {"values": []}},
        {"cavity": {"n_modes": 0}},
        {"cavity": {"length": -1}},
        {"cavity": {"cutoff": 10}},
        {"format": "xml"},
        {"precision": 0},
        {"precision": 18},
    ],
)
def test_schema_violations(overrides):
    with pytest.raises(InvalidSweepConfig):
        spec_from_document(document(**overrides))


def test_missing_required_key():
    doc = document()
    del doc["temperature"]
    with pytest.raises(InvalidSweepConfig, match="schema"):
        spec_from_document(doc)


def test_load_sweep_spec(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(document()))
    assert load_sweep_spec(path) == spec_from_document(document())


def test_load_sweep_spec_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_sweep_spec(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InvalidSweepConfig, match="broken.json"):
        load_sweep_spec(broken)

    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps(document(time=-1)))
    with pytest.raises(InvalidSweepConfig, match="invalid.json"):
        load_sweep_spec(invalid)
