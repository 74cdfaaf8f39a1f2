# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Correlation measures of a two-mode Gaussian detector state.

Everything is expressed through the four local symplectic invariants
alpha = det sigma1, beta = det sigma2, gamma = det gamma12 and
delta = det sigma. These determinant names are unrelated to the inverse
temperature, which lives on FieldTemperature.
"""
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from harvest.decomposition import plus_minus_blocks
from harvest.evolution import TwoModeState
from harvest.gaussian_core import (
    NumericalDegeneracyError,
    UnphysicalStateError,
    entropy_f,
)

NUMERICAL_ZERO = 1e-12
# entropies are sums of O(1) terms; differences this small are roundoff
ENTROPY_SLACK = 1e-9

CSV_FIELDS = ("t", "r", "T", "E_N", "I", "D", "nu1", "nu2", "nu_plus", "nu_minus")


class Determinants(NamedTuple):
    alpha: float
    beta: float
    gamma: float
    delta: float


@dataclass(frozen=True)
class CorrelationReport:
    time: float
    separation: float
    temperature: float
    log_negativity: float
    mutual_information: float
    discord: float
    nu1: float
    nu2: float
    nu_plus: float
    nu_minus: float
    nu_tilde_minus: float
    det_alpha: float
    det_beta: float
    det_gamma: float
    det_delta: float

    def as_row(self) -> tuple[float, ...]:
        return (
            self.time,
            self.separation,
            self.temperature,
            self.log_negativity,
            self.mutual_information,
            self.discord,
            self.nu1,
            self.nu2,
            self.nu_plus,
            self.nu_minus,
        )

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def determinants(s: TwoModeState) -> Determinants:
    return Determinants(
        alpha=float(np.linalg.det(s.sigma1)),
        beta=float(np.linalg.det(s.sigma2)),
        gamma=float(np.linalg.det(s.gamma12)),
        delta=float(np.linalg.det(s.matrix)),
    )


def _clamped_sqrt(value: float, scale: float, what: str) -> float:
    if value < -NUMERICAL_ZERO * max(1.0, scale):
        raise UnphysicalStateError(f"{what} radicand {value:.6e} is negative")
    return math.sqrt(max(value, 0.0))


def _pair_from_invariants(total: float, delta: float, what: str) -> tuple[float, float]:
    """(smaller, larger) x with x^4 - total x^2 + delta = 0."""
    if delta <= 0.0:
        raise UnphysicalStateError(f"{what}: det sigma = {delta:.6e} is not positive")
    root = _clamped_sqrt(total * total - 4.0 * delta, total * total, what)
    larger_sq = 0.5 * (total + root)
    if larger_sq <= 0.0:
        raise UnphysicalStateError(f"{what}: invariant sum {total:.6e} is not positive")
    # product of the squares is delta, which avoids cancellation in the smaller root
    smaller_sq = delta / larger_sq
    return math.sqrt(smaller_sq), math.sqrt(larger_sq)


def symplectic_pair(d: Determinants) -> tuple[float, float]:
    return _pair_from_invariants(
        d.alpha + d.beta + 2.0 * d.gamma, d.delta, "symplectic spectrum"
    )


def partially_transposed_minimum(s: TwoModeState) -> float:
    d = determinants(s)
    smaller, _ = _pair_from_invariants(
        d.alpha + d.beta - 2.0 * d.gamma, d.delta, "partially transposed spectrum"
    )
    return smaller


def _local_entropy(det: float) -> float:
    if det < 0.0:
        raise UnphysicalStateError(f"local determinant {det:.6e} is negative")
    return entropy_f(math.sqrt(det))


def mutual_information(s: TwoModeState) -> float:
    d = determinants(s)
    nu1, nu2 = symplectic_pair(d)
    local = _local_entropy(d.alpha) + _local_entropy(d.beta)
    value = local - entropy_f(nu1) - entropy_f(nu2)
    if value < -ENTROPY_SLACK:
        raise UnphysicalStateError(f"mutual information {value:.6e} is negative")
    return max(value, 0.0)


def logarithmic_negativity(s: TwoModeState) -> float:
    nu_tilde = partially_transposed_minimum(s)
    if nu_tilde >= 1.0:
        return 0.0
    return max(0.0, -math.log2(nu_tilde))


def _first_branch(d: Determinants) -> float:
    beta_m1 = d.beta - 1.0
    cross = d.gamma * d.gamma + beta_m1 * (d.delta - d.alpha)
    root = _clamped_sqrt(cross, d.gamma * d.gamma, "discord first branch")
    numerator = d.gamma * d.gamma + cross + 2.0 * abs(d.gamma) * root
    return numerator / (beta_m1 * beta_m1)


def _second_branch(d: Determinants) -> float:
    ab = d.alpha * d.beta
    g2 = d.gamma * d.gamma
    radicand = g2 * g2 + (d.delta - ab) ** 2 - 2.0 * g2 * (ab + d.delta)
    root = _clamped_sqrt(radicand, (ab + d.delta) ** 2, "discord second branch")
    return (ab - g2 + d.delta - root) / (2.0 * d.beta)


def _admissibility_gap(e: float, d: Determinants) -> float:
    # the conditional state of detector 1 is physical and no wider than sigma1
    return max(1.0 - e, e - d.alpha, 0.0)


def minimized_conditional_determinant(d: Determinants) -> float:
    """Infimum over Gaussian measurements on mode 2 of det of the conditional mode 1."""
    lhs = (d.delta - d.alpha * d.beta) ** 2
    rhs = (1.0 + d.beta) * d.gamma * d.gamma * (d.alpha + d.delta)
    pure_measured_mode = abs(d.beta - 1.0) <= NUMERICAL_ZERO * max(1.0, d.beta)

    if pure_measured_mode:
        # first branch is 0/0 here; the two agree in the limit
        e = _second_branch(d)
    elif abs(lhs - rhs) > NUMERICAL_ZERO * max(lhs, rhs):
        e = _first_branch(d) if lhs < rhs else _second_branch(d)
    else:
        # the branches coincide on the boundary; keep the value inside [1, alpha],
        # the second branch on a tie
        candidates: list[float] = []
        for branch in (_second_branch, _first_branch):
            try:
                candidates.append(branch(d))
            except UnphysicalStateError:
                continue
        if not candidates:
            raise NumericalDegeneracyError(
                f"both discord branches failed at the boundary for {d}"
            )
        e = min(candidates, key=lambda value: _admissibility_gap(value, d))

    if e < -NUMERICAL_ZERO:
        raise NumericalDegeneracyError(
            f"conditional determinant {e:.6e} is negative for {d}"
        )
    return max(e, 0.0)


def gaussian_discord(s: TwoModeState) -> float:
    """D(1:2), optimized over Gaussian measurements on detector 2."""
    d = determinants(s)
    nu1, nu2 = symplectic_pair(d)
    e = minimized_conditional_determinant(d)
    joint = entropy_f(nu1) + entropy_f(nu2)
    value = _local_entropy(d.beta) - joint + entropy_f(math.sqrt(e))
    if value < -ENTROPY_SLACK:
        raise NumericalDegeneracyError(f"discord {value:.6e} is negative for {d}")
    return max(value, 0.0)


def correlation_report(
    s: TwoModeState, time: float, separation: float, temperature: float
) -> CorrelationReport:
    d = determinants(s)
    nu1, nu2 = symplectic_pair(d)
    sigma_minus, sigma_plus = plus_minus_blocks(s)
    return CorrelationReport(
        time=float(time),
        separation=float(separation),
        temperature=float(temperature),
        log_negativity=logarithmic_negativity(s),
        mutual_information=mutual_information(s),
        discord=gaussian_discord(s),
        nu1=nu1,
        nu2=nu2,
        nu_plus=math.sqrt(max(float(np.linalg.det(sigma_plus)), 0.0)),
        nu_minus=math.sqrt(max(float(np.linalg.det(sigma_minus)), 0.0)),
        nu_tilde_minus=partially_transposed_minimum(s),
        det_alpha=d.alpha,
        det_beta=d.beta,
        det_gamma=d.gamma,
        det_delta=d.delta,
    )
