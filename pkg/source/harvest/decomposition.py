# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
(+)/(-) mode analysis of exchange-symmetric detector pairs.

A 50:50 beam splitter maps the detector quadratures onto the difference mode
(first) and the sum mode (second). For translationally invariant field states
the two modes never become correlated, so each behaves as a single detector
coupled to its own effective field.
"""
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from harvest.cavity_model import CavityConfig, wave_numbers
from harvest.evolution import TwoModeState
from harvest.gaussian_core import (
    PHYSICAL_SLACK,
    FloatArray,
    GaussianStateError,
    UnphysicalStateError,
    direct_sum,
    entropy_f,
)

EXCHANGE_TOLERANCE = 1e-8

_I2 = np.eye(2)
_BEAM_SPLITTER = np.block([[-_I2, _I2], [_I2, _I2]]) / math.sqrt(2.0)


class AsymmetricStateError(GaussianStateError):
    pass


@dataclass(frozen=True)
class PlusMinusDecomposition:
    sigma_minus: FloatArray
    sigma_plus: FloatArray
    nu_minus: float
    nu_plus: float
    off_block_residual: float

    def recombine(self) -> TwoModeState:
        local = 0.5 * (self.sigma_plus + self.sigma_minus)
        cross = 0.5 * (self.sigma_plus - self.sigma_minus)
        return TwoModeState(local, local, cross)


class CouplingProfile(NamedTuple):
    n: int
    omega: float
    c_plus: float
    c_minus: float


class ResonanceBand(NamedTuple):
    separation: float
    order: int
    strength: Literal["strong", "weak"]


def beam_splitter_matrix() -> FloatArray:
    return _BEAM_SPLITTER.copy()


def plus_minus_blocks(s: TwoModeState) -> tuple[FloatArray, FloatArray]:
    """Diagonal blocks (sigma_minus, sigma_plus) of S~ sigma S~^T, for any state."""
    local = 0.5 * (s.sigma1 + s.sigma2)
    cross = 0.5 * (s.gamma12 + s.gamma12.T)
    return local - cross, local + cross


def _single_mode_eigenvalue(block: FloatArray, name: str) -> float:
    det = float(np.linalg.det(block))
    if block[0, 0] <= 0.0 or det < (1.0 - PHYSICAL_SLACK) ** 2:
        raise UnphysicalStateError(
            f"{name} is not a physical single-mode state (det {det:.6e})"
        )
    return math.sqrt(det)


def beam_split(s: TwoModeState) -> PlusMinusDecomposition:
    asymmetry = s.exchange_asymmetry()
    if asymmetry > EXCHANGE_TOLERANCE:
        raise AsymmetricStateError(
            "beam-splitter decomposition needs an exchange-symmetric state "
            f"(asymmetry {asymmetry:.3e})"
        )
    transformed = _BEAM_SPLITTER @ s.matrix @ _BEAM_SPLITTER.T
    sigma_minus, sigma_plus = plus_minus_blocks(s)
    return PlusMinusDecomposition(
        sigma_minus=sigma_minus,
        sigma_plus=sigma_plus,
        nu_minus=_single_mode_eigenvalue(sigma_minus, "sigma_minus"),
        nu_plus=_single_mode_eigenvalue(sigma_plus, "sigma_plus"),
        off_block_residual=float(np.max(np.abs(transformed[:2, 2:]))),
    )


def mode_function_couplings(r: float, cfg: CavityConfig) -> list[CouplingProfile]:
    """Magnitudes of the effective (+)/(-) couplings to every field mode."""
    n_values = cfg.layout.field_mode_numbers()
    k = wave_numbers(cfg)
    half_phase = 0.5 * k * r
    c_plus = math.sqrt(2.0) * np.abs(np.cos(half_phase))
    c_minus = math.sqrt(2.0) * np.abs(np.sin(half_phase))
    return [
        CouplingProfile(int(n), abs(float(kn)), float(cp), float(cm))
        for n, kn, cp, cm in zip(n_values, k, c_plus, c_minus)
    ]


def thermal_approx_mutual_information(nu1: float, nu2: float) -> float:
    for nu in (nu1, nu2):
        if nu < 1.0 - PHYSICAL_SLACK:
            raise UnphysicalStateError(f"symplectic eigenvalue {nu!r} is below 1")
    value = 2.0 * entropy_f(0.5 * (nu1 + nu2)) - entropy_f(nu1) - entropy_f(nu2)
    return max(value, 0.0)


def decomposed_mutual_information(d: PlusMinusDecomposition) -> float:
    """Mutual information of the recombined pair from the (+)/(-) blocks alone."""
    det_local = float(np.linalg.det(0.5 * (d.sigma_plus + d.sigma_minus)))
    local = math.sqrt(max(det_local, 0.0))
    value = 2.0 * entropy_f(local) - entropy_f(d.nu_plus) - entropy_f(d.nu_minus)
    return max(value, 0.0)


def thermal_approx_surface(
    nu_values: Sequence[float],
) -> list[tuple[float, float, float]]:
    return [
        (float(nu1), float(nu2), thermal_approx_mutual_information(nu1, nu2))
        for nu1 in nu_values
        for nu2 in nu_values
    ]


def passive_entanglement_criterion(d: PlusMinusDecomposition) -> tuple[bool, float]:
    """
    Whether some passive operation can entangle the (+)/(-) product: the two
    smallest ordinary eigenvalues of sigma_minus + sigma_plus (direct sum)
    must multiply to less than one.
    """
    eigenvalues = np.linalg.eigvalsh(direct_sum(d.sigma_minus, d.sigma_plus))
    product = float(eigenvalues[0] * eigenvalues[1])
    return product < 1.0, product


def resonance_bands(cfg: CavityConfig, r_max: float) -> list[ResonanceBand]:
    """
    Separations where the resonant (+) coupling is extremal: Omega r / 2 = m pi
    (strong bands) and odd multiples of pi / 2 (weak bands).
    """
    if not r_max >= 0:
        raise ValueError(f"r_max must be non-negative, got {r_max}")
    half_period = math.pi / cfg.detector_frequency
    bands: list[ResonanceBand] = []
    for step in range(math.floor(r_max / half_period + 1e-9) + 1):
        separation = step * half_period
        if step % 2 == 0:
            bands.append(ResonanceBand(separation, step // 2, "strong"))
        else:
            bands.append(ResonanceBand(separation, step, "weak"))
    return bands
