# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal, Optional, TypedDict, Union, cast

import numpy as np
from aws_lambda_powertools.utilities.validation import SchemaValidationError, validate

from harvest.cavity_model import (
    REFERENCE_COUPLING,
    REFERENCE_CUTOFF,
    REFERENCE_DETECTOR_FREQUENCY,
    REFERENCE_LENGTH,
    CavityConfig,
    InvalidCavityConfig,
)
from harvest.gaussian_core import FloatArray

SCHEMA_VERSION = 1
DEFAULT_PRECISION = 12

OutputFormat = Literal["csv", "json"]


class InvalidSweepConfig(ValueError):
    pass


class GridSection(TypedDict):
    min: float
    max: float
    count: int


class ValuesSection(TypedDict):
    values: list[float]


AxisSection = Union[float, GridSection, ValuesSection]


class CavitySection(TypedDict, total=False):
    length: float
    n_modes: int
    detector_frequency: float
    coupling: float


class SweepDocument(TypedDict, total=False):
    schema_version: int
    cavity: CavitySection
    time: AxisSection
    separation: AxisSection
    temperature: AxisSection
    output: str
    format: OutputFormat
    precision: int


_AXIS_SCHEMA: dict[str, Any] = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["min", "max", "count"],
            "properties": {
                "min": {"type": "number"},
                "max": {"type": "number"},
                "count": {"type": "integer", "minimum": 2},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["values"],
            "properties": {
                "values": {"type": "array", "minItems": 1, "items": {"type": "number"}}
            },
        },
    ]
}

SWEEP_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "time", "separation", "temperature"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "cavity": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "length": {"type": "number", "exclusiveMinimum": 0},
                "n_modes": {"type": "integer", "minimum": 1},
                "detector_frequency": {"type": "number", "exclusiveMinimum": 0},
                "coupling": {"type": "number", "minimum": 0},
            },
        },
        "time": _AXIS_SCHEMA,
        "separation": _AXIS_SCHEMA,
        "temperature": _AXIS_SCHEMA,
        "output": {"type": "string", "minLength": 1},
        "format": {"enum": ["csv", "json"]},
        "precision": {"type": "integer", "minimum": 1, "maximum": 17},
    },
}


@dataclass(frozen=True)
class Axis:
    points: tuple[float, ...]
    grid: bool = field(default=False)

    def __post_init__(self) -> None:
        if not self.points:
            raise InvalidSweepConfig("axis has no points")
        if not all(math.isfinite(p) for p in self.points):
            raise InvalidSweepConfig(f"axis points must be finite, got {self.points}")

    @classmethod
    def fixed(cls, value: float) -> "Axis":
        return cls((float(value),))

    @classmethod
    def linspace(cls, minimum: float, maximum: float, count: int) -> "Axis":
        if int(count) != count or count < 2:
            raise InvalidSweepConfig(f"grid count must be an integer >= 2, got {count}")
        if not maximum > minimum:
            raise InvalidSweepConfig(f"grid max {maximum} must exceed min {minimum}")
        points = np.linspace(minimum, maximum, int(count))
        return cls(tuple(float(v) for v in points), grid=True)

    @classmethod
    def of(cls, values: list[float]) -> "Axis":
        return cls(tuple(float(v) for v in values), grid=len(values) > 1)

    def values(self) -> FloatArray:
        return np.asarray(self.points, dtype=np.float64)

    def describe(self) -> dict[str, Any]:
        if not self.grid:
            return {"value": self.points[0]}
        return {
            "min": self.points[0],
            "max": self.points[-1],
            "count": len(self.points),
        }


@dataclass(frozen=True)
class SweepSpec:
    config: CavityConfig
    time: Axis
    separation: Axis
    temperature: Axis
    output: Optional[str] = None
    output_format: OutputFormat = "csv"
    precision: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if not (self.time.grid or self.separation.grid or self.temperature.grid):
            raise InvalidSweepConfig(
                "at least one of time, separation, temperature must be a grid"
            )
        if min(self.time.points) < 0:
            raise InvalidSweepConfig(
                f"interaction times must be non-negative, got {self.time.points}"
            )
        if min(self.separation.points) < 0:
            raise InvalidSweepConfig(
                f"separations must be non-negative, got {self.separation.points}"
            )
        if min(self.temperature.points) < 0:
            raise InvalidSweepConfig(
                f"temperatures must be non-negative, got {self.temperature.points}"
            )
        if self.output_format not in ("csv", "json"):
            raise InvalidSweepConfig(f"unknown output format {self.output_format!r}")
        if not 1 <= self.precision <= 17:
            raise InvalidSweepConfig(
                f"precision must be within 1..17, got {self.precision}"
            )

    @property
    def point_count(self) -> int:
        axes = (self.time, self.separation, self.temperature)
        return math.prod(len(axis.points) for axis in axes)


def _axis_from_section(section: AxisSection) -> Axis:
    if not isinstance(section, dict):
        return Axis.fixed(section)
    if "values" in section:
        return Axis.of(cast(ValuesSection, section)["values"])
    grid = cast(GridSection, section)
    return Axis.linspace(grid["min"], grid["max"], grid["count"])


def spec_from_document(document: SweepDocument) -> SweepSpec:
    try:
        validate(event=document, schema=SWEEP_SCHEMA)
    except SchemaValidationError as e:
        raise InvalidSweepConfig(
            f"sweep configuration does not match the schema: {str(e)}"
        ) from e

    cavity = document.get("cavity", {})
    try:
        config = CavityConfig(
            length=float(cavity.get("length", REFERENCE_LENGTH)),
            cutoff=int(cavity.get("n_modes", REFERENCE_CUTOFF)),
            detector_frequency=float(
                cavity.get("detector_frequency", REFERENCE_DETECTOR_FREQUENCY)
            ),
            coupling=float(cavity.get("coupling", REFERENCE_COUPLING)),
        )
    except InvalidCavityConfig as e:
        raise InvalidSweepConfig(str(e)) from e

    return SweepSpec(
        config=config,
        time=_axis_from_section(document["time"]),
        separation=_axis_from_section(document["separation"]),
        temperature=_axis_from_section(document["temperature"]),
        output=document.get("output"),
        output_format=document.get("format", "csv"),
        precision=document.get("precision", DEFAULT_PRECISION),
    )


def load_sweep_spec(path: Union[str, Path]) -> SweepSpec:
    """FileNotFoundError for a missing file, InvalidSweepConfig for bad content."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidSweepConfig(f"{path} is not valid JSON: {str(e)}") from e
    try:
        return spec_from_document(document)
    except InvalidSweepConfig as e:
        raise InvalidSweepConfig(f"{path}: {str(e)}") from e
