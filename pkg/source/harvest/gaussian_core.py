# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Phase-space primitives for zero-mean Gaussian states.

Quadratures are interleaved per mode, (q_1, p_1, q_2, p_2, ...), and covariance
matrices use the sigma_ij = <x_i x_j + x_j x_i> convention, so the vacuum is the
identity and every physical symplectic eigenvalue is at least 1. Entropies are
in bits.
"""
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt
from scipy.linalg import block_diag
from scipy.special import xlogy

FloatArray = npt.NDArray[np.float64]

# roundoff window below 1 for symplectic eigenvalues and entropy arguments
PHYSICAL_SLACK = 1e-9
SYMMETRY_TOLERANCE = 1e-10
DEGENERACY_TOLERANCE = 1e-8

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


class GaussianStateError(ValueError):
    pass


class DimensionError(GaussianStateError):
    pass


class UnphysicalStateError(GaussianStateError):
    pass


class NumericalDegeneracyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PhaseSpaceLayout:
    n_modes: int
    n_detectors: int = 0
    field_cutoff: int = 0

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise DimensionError(f"layout needs at least one mode, got {self.n_modes}")
        if not 0 <= self.n_detectors <= self.n_modes:
            raise DimensionError(
                f"{self.n_detectors} detectors do not fit in {self.n_modes} modes"
            )
        expected = self.n_detectors + 2 * self.field_cutoff
        if self.field_cutoff and self.n_modes != expected:
            raise DimensionError(
                f"cutoff {self.field_cutoff} implies {expected} modes, got {self.n_modes}"
            )

    @classmethod
    def cavity(cls, cutoff: int) -> "PhaseSpaceLayout":
        """Two detectors followed by field modes n = -N..-1, 1..N."""
        return cls(n_modes=2 + 2 * cutoff, n_detectors=2, field_cutoff=cutoff)

    @property
    def dimension(self) -> int:
        return 2 * self.n_modes

    def field_mode_numbers(self) -> npt.NDArray[np.int64]:
        n = np.arange(1, self.field_cutoff + 1, dtype=np.int64)
        return np.concatenate([-n[::-1], n])

    def quadrature_indices(self, modes: Sequence[int]) -> list[int]:
        indices: list[int] = []
        for mode in modes:
            indices.extend((2 * mode, 2 * mode + 1))
        return indices


@dataclass(frozen=True)
class CovarianceMatrix:
    entries: FloatArray = field(repr=False)
    layout: PhaseSpaceLayout

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64)
        dim = self.layout.dimension
        if entries.shape != (dim, dim):
            raise DimensionError(
                f"covariance matrix of shape {entries.shape} does not match layout dimension {dim}"
            )
        _check_symmetric(entries)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, entries: npt.ArrayLike) -> "CovarianceMatrix":
        array = np.asarray(entries, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] % 2:
            raise DimensionError(f"expected an even square matrix, got {array.shape}")
        return cls(array, PhaseSpaceLayout(array.shape[0] // 2))

    @classmethod
    def vacuum(cls, layout: PhaseSpaceLayout) -> "CovarianceMatrix":
        return cls(np.eye(layout.dimension), layout)

    def is_physical(self) -> bool:
        return bool(np.all(symplectic_eigenvalues(self) >= 1.0 - PHYSICAL_SLACK))


CovarianceLike = Union[CovarianceMatrix, npt.ArrayLike]


def _check_symmetric(entries: FloatArray) -> None:
    scale = max(1.0, float(np.max(np.abs(entries), initial=0.0)))
    asymmetry = float(np.max(np.abs(entries - entries.T), initial=0.0))
    if asymmetry > SYMMETRY_TOLERANCE * scale:
        raise GaussianStateError(
            f"covariance matrix is not symmetric (max asymmetry {asymmetry:.3e})"
        )


def _entries(sigma: CovarianceLike) -> FloatArray:
    if isinstance(sigma, CovarianceMatrix):
        return sigma.entries
    array = np.asarray(sigma, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] % 2:
        raise DimensionError(f"expected an even square matrix, got {array.shape}")
    _check_symmetric(array)
    return array


def symplectic_form(layout: Union[PhaseSpaceLayout, int]) -> FloatArray:
    n_modes = layout.n_modes if isinstance(layout, PhaseSpaceLayout) else int(layout)
    if n_modes < 1:
        raise DimensionError(f"symplectic form needs at least one mode, got {n_modes}")
    return np.kron(np.eye(n_modes), _J)


def is_symplectic(matrix: npt.ArrayLike, tol: float = 1e-9) -> bool:
    s = np.asarray(matrix, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
        raise DimensionError(
            f"symplectic test needs an even square matrix, got {s.shape}"
        )
    omega = symplectic_form(s.shape[0] // 2)
    return bool(np.max(np.abs(s @ omega @ s.T - omega)) <= tol)


def symplectic_eigenvalues(sigma: CovarianceLike) -> FloatArray:
    """
    Symplectic spectrum in ascending order, from the eigenvalues +/- i nu of
    Omega sigma.
    """
    entries = _entries(sigma)
    omega = symplectic_form(entries.shape[0] // 2)
    eigenvalues = np.linalg.eigvals(omega @ entries)

    scale = max(1.0, float(np.max(np.abs(entries))))
    real_part = float(np.max(np.abs(eigenvalues.real)))
    if real_part > DEGENERACY_TOLERANCE * scale:
        raise NumericalDegeneracyError(
            f"Omega*sigma has eigenvalues with real part {real_part:.3e}; the matrix is not positive definite"
        )

    magnitudes = np.sort(np.abs(eigenvalues.imag))
    return np.asarray(0.5 * (magnitudes[0::2] + magnitudes[1::2]), dtype=np.float64)


def williamson_eigenvalues(sigma: CovarianceLike) -> FloatArray:
    """Test oracle: symplectic spectrum via i sqrt(sigma) Omega sqrt(sigma)."""
    entries = _entries(sigma)
    values, vectors = np.linalg.eigh(entries)
    if np.min(values) <= 0.0:
        raise UnphysicalStateError(
            "Williamson decomposition needs a positive definite matrix"
        )
    root = (vectors * np.sqrt(values)) @ vectors.T
    omega = symplectic_form(entries.shape[0] // 2)
    spectrum = np.linalg.eigvalsh(1j * (root @ omega @ root))
    return np.sort(spectrum[spectrum > 0.0])


def entropy_f(x: float) -> float:
    """Entropy in bits of a single mode with symplectic eigenvalue x."""
    if x < 1.0 - PHYSICAL_SLACK:
        raise UnphysicalStateError(f"symplectic eigenvalue {x!r} is below 1")
    x = max(float(x), 1.0)
    plus = 0.5 * (x + 1.0)
    minus = 0.5 * (x - 1.0)
    return float((xlogy(plus, plus) - xlogy(minus, minus)) / np.log(2.0))


def von_neumann_entropy(sigma: CovarianceLike) -> float:
    return float(sum(entropy_f(nu) for nu in symplectic_eigenvalues(sigma)))


def partial_state(
    sigma: CovarianceMatrix, mode_indices: Sequence[int]
) -> CovarianceMatrix:
    modes = list(mode_indices)
    n_modes = sigma.layout.n_modes
    if not modes:
        raise GaussianStateError("at least one mode must be selected")
    if len(set(modes)) != len(modes):
        raise GaussianStateError(f"duplicate mode indices in {modes}")
    out_of_range = [m for m in modes if not 0 <= m < n_modes]
    if out_of_range:
        raise GaussianStateError(
            f"mode indices {out_of_range} are outside a {n_modes}-mode layout"
        )

    idx = sigma.layout.quadrature_indices(modes)
    layout = PhaseSpaceLayout(
        n_modes=len(modes),
        n_detectors=sum(1 for m in modes if m < sigma.layout.n_detectors),
    )
    return CovarianceMatrix(sigma.entries[np.ix_(idx, idx)], layout)


def rotation(theta: float) -> FloatArray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeezer(strength: float) -> FloatArray:
    return np.diag([np.exp(-strength), np.exp(strength)])


def direct_sum(*blocks: npt.ArrayLike) -> FloatArray:
    return np.asarray(block_diag(*blocks), dtype=np.float64)
