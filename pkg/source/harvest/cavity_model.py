# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Two oscillator detectors in a periodic 1-D cavity holding a massless scalar
field truncated to N right- and N left-moving modes (no zero mode).

Positions are stored absolutely, but every sweep places x1 = 0 and x2 = r.
"""
import hashlib
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Union

import numpy as np

from harvest.gaussian_core import (
    CovarianceMatrix,
    FloatArray,
    PhaseSpaceLayout,
    UnphysicalStateError,
)

REFERENCE_LENGTH = 100.0
REFERENCE_CUTOFF = 80
REFERENCE_COUPLING = 0.05
# resonant with the n = +/-20 field modes
REFERENCE_DETECTOR_FREQUENCY = 40.0 * math.pi / REFERENCE_LENGTH


class InvalidCavityConfig(ValueError):
    pass


@dataclass(frozen=True)
class CavityConfig:
    length: float = REFERENCE_LENGTH
    cutoff: int = REFERENCE_CUTOFF
    detector_frequency: float = REFERENCE_DETECTOR_FREQUENCY
    coupling: float = REFERENCE_COUPLING
    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise InvalidCavityConfig(
                f"cavity length must be positive, got {self.length}"
            )
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise InvalidCavityConfig(
                f"mode cutoff must be a positive integer, got {self.cutoff}"
            )
        if not self.detector_frequency > 0:
            raise InvalidCavityConfig(
                f"detector frequency must be positive, got {self.detector_frequency}"
            )
        if not self.coupling >= 0:
            raise InvalidCavityConfig(
                f"coupling must be non-negative, got {self.coupling}"
            )
        for name in ("x1", "x2"):
            position = getattr(self, name)
            if not math.isfinite(position):
                raise InvalidCavityConfig(f"{name} must be finite, got {position}")

    @classmethod
    def reference(cls) -> "CavityConfig":
        return cls()

    @property
    def separation(self) -> float:
        return abs(self.x1 - self.x2)

    @property
    def layout(self) -> PhaseSpaceLayout:
        return PhaseSpaceLayout.cavity(self.cutoff)

    def at_separation(self, r: float) -> "CavityConfig":
        if not r >= 0:
            raise InvalidCavityConfig(
                f"detector separation must be non-negative, got {r}"
            )
        return replace(self, x1=0.0, x2=float(r))

    def with_cutoff(self, cutoff: int) -> "CavityConfig":
        return replace(self, cutoff=cutoff)

    def content_hash(self) -> str:
        fields = (
            float(self.length).hex(),
            str(int(self.cutoff)),
            float(self.detector_frequency).hex(),
            float(self.coupling).hex(),
            float(self.x1).hex(),
            float(self.x2).hex(),
        )
        return hashlib.sha256("|".join(fields).encode("ascii")).hexdigest()


@dataclass(frozen=True)
class FieldTemperature:
    value: float = 0.0

    def __post_init__(self) -> None:
        if not self.value >= 0 or math.isinf(self.value):
            raise InvalidCavityConfig(
                f"temperature must be finite and >= 0, got {self.value}"
            )

    @property
    def is_vacuum(self) -> bool:
        return self.value == 0.0

    @property
    def inverse(self) -> float:
        return math.inf if self.is_vacuum else 1.0 / self.value


TemperatureLike = Union[FieldTemperature, float]


class FieldMode(NamedTuple):
    n: int
    k: float
    omega: float


def _as_temperature(temperature: TemperatureLike) -> FieldTemperature:
    if isinstance(temperature, FieldTemperature):
        return temperature
    return FieldTemperature(float(temperature))


def wave_numbers(cfg: CavityConfig) -> FloatArray:
    n = cfg.layout.field_mode_numbers()
    return np.asarray(2.0 * np.pi * n / cfg.length, dtype=np.float64)


def mode_table(cfg: CavityConfig) -> list[FieldMode]:
    n_values = cfg.layout.field_mode_numbers()
    k = wave_numbers(cfg)
    return [FieldMode(int(n), float(kn), abs(float(kn))) for n, kn in zip(n_values, k)]


def free_hamiltonian_matrix(cfg: CavityConfig) -> FloatArray:
    omega = np.abs(wave_numbers(cfg))
    diagonal = np.concatenate(
        [np.full(4, cfg.detector_frequency), np.repeat(omega, 2)]
    )
    return np.diag(diagonal)


def interaction_matrix(cfg: CavityConfig) -> FloatArray:
    n = cfg.layout.field_mode_numbers()
    k = wave_numbers(cfg)
    norm = np.sqrt(4.0 * np.pi * np.abs(n))

    x_block = np.zeros((4, 4 * cfg.cutoff))
    for row, position in ((0, cfg.x1), (2, cfg.x2)):
        x_block[row, 0::2] = np.cos(k * position) / norm
        x_block[row, 1::2] = -np.sin(k * position) / norm

    dim = cfg.layout.dimension
    matrix = np.zeros((dim, dim))
    matrix[:4, 4:] = x_block
    matrix[4:, :4] = x_block.T
    return np.asarray(2.0 * cfg.coupling * matrix, dtype=np.float64)


def hamiltonian_matrix(cfg: CavityConfig) -> FloatArray:
    return free_hamiltonian_matrix(cfg) + interaction_matrix(cfg)


def thermal_eigenvalue(
    omega: Union[FloatArray, float], temperature: TemperatureLike
) -> FloatArray:
    """coth(omega / 2T), exactly 1 in the vacuum."""
    temperature = _as_temperature(temperature)
    omega = np.asarray(omega, dtype=np.float64)
    if temperature.is_vacuum:
        return np.ones_like(omega)
    with np.errstate(over="ignore"):
        nu = 1.0 + 2.0 / np.expm1(omega / temperature.value)
    return np.asarray(nu, dtype=np.float64)


def thermal_occupations(cfg: CavityConfig, temperature: TemperatureLike) -> FloatArray:
    """Per-mode thermal symplectic eigenvalues in layout order."""
    return thermal_eigenvalue(np.abs(wave_numbers(cfg)), temperature)


def thermal_field_state(
    cfg: CavityConfig, temperature: TemperatureLike
) -> CovarianceMatrix:
    nu = thermal_occupations(cfg, temperature)
    layout = PhaseSpaceLayout(n_modes=2 * cfg.cutoff)
    return CovarianceMatrix(np.diag(np.repeat(nu, 2)), layout)


def initial_diagonal(cfg: CavityConfig, temperature: TemperatureLike) -> FloatArray:
    """Diagonal of the initial state: detector ground states, thermal field."""
    nu = thermal_occupations(cfg, temperature)
    return np.concatenate([np.ones(4), np.repeat(nu, 2)])


def initial_state(cfg: CavityConfig, temperature: TemperatureLike) -> CovarianceMatrix:
    return CovarianceMatrix(np.diag(initial_diagonal(cfg, temperature)), cfg.layout)


def cavity_correlation_function(
    r: float, temperature: TemperatureLike, cfg: CavityConfig
) -> float:
    """Equal-time field correlation <phi(x) phi(x + r)>, summed over n = 1..N."""
    if not r >= 0:
        raise UnphysicalStateError(
            f"correlation distance must be non-negative, got {r}"
        )
    omega = 2.0 * np.pi * np.arange(1, cfg.cutoff + 1) / cfg.length
    nu = thermal_eigenvalue(omega, temperature)
    return float(np.sum(nu / omega * np.cos(omega * r)) / cfg.length)


def free_space_correlation(r: float, temperature: float) -> float:
    """Thermal Wightman function of a massless field in 3-D free space."""
    if not r > 0 or not temperature > 0:
        raise UnphysicalStateError(
            f"free-space correlation needs r > 0 and T > 0, got r={r}, T={temperature}"
        )
    x = math.pi * temperature * r
    return temperature / (4.0 * math.pi * r) / math.tanh(x)
