# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
"""
Symplectic propagation of the detectors-plus-field system.

For a time-independent quadratic Hamiltonian H = x^T F x / 2 (F = F^sym) the
phase-space propagator is S(t) = exp(K t) with K = Omega F. The spectral
decomposition of K is computed once per geometry and reused for every t and
every initial state, since S(t) does not depend on the state.
"""
import math
import os
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

from harvest.cavity_model import CavityConfig, hamiltonian_matrix
from harvest.gaussian_core import (
    CovarianceMatrix,
    DimensionError,
    FloatArray,
    GaussianStateError,
    symplectic_form,
)
from harvest.powertools_logger import get_logger

if TYPE_CHECKING:
    from harvest.generator_cache import GeneratorCache

ComplexArray = npt.NDArray[np.complex128]

LOG_LEVEL = os.getenv("log_level", "info")
logger = get_logger("evolution", LOG_LEVEL)

IMAGINARY_RESIDUAL_TOLERANCE = 1e-8
DETECTOR_ROWS = (0, 1, 2, 3)


class PropagatorError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagatorGenerator:
    config: CavityConfig
    generator: FloatArray = field(repr=False)
    eigenvalues: ComplexArray = field(repr=False)
    modes: ComplexArray = field(repr=False)
    inverse_modes: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("generator", "eigenvalues", "modes", "inverse_modes"):
            getattr(self, name).setflags(write=False)

    @property
    def dimension(self) -> int:
        return int(self.generator.shape[0])

    def reconstruction_error(self) -> float:
        rebuilt = (self.modes * self.eigenvalues) @ self.inverse_modes
        return float(np.max(np.abs(rebuilt - self.generator)))


@dataclass(frozen=True)
class TwoModeState:
    sigma1: FloatArray
    sigma2: FloatArray
    gamma12: FloatArray

    def __post_init__(self) -> None:
        for name in ("sigma1", "sigma2", "gamma12"):
            block = np.array(getattr(self, name), dtype=np.float64)
            if block.shape != (2, 2):
                raise DimensionError(f"{name} must be 2x2, got {block.shape}")
            block.setflags(write=False)
            object.__setattr__(self, name, block)

    @classmethod
    def from_matrix(cls, matrix: npt.ArrayLike) -> "TwoModeState":
        m = np.asarray(matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise DimensionError(f"two-mode state must be 4x4, got {m.shape}")
        return cls(m[:2, :2], m[2:, 2:], m[:2, 2:])

    @property
    def matrix(self) -> FloatArray:
        return np.block([[self.sigma1, self.gamma12], [self.gamma12.T, self.sigma2]])

    def swapped(self) -> "TwoModeState":
        return TwoModeState(self.sigma2, self.sigma1, self.gamma12.T)

    def exchange_asymmetry(self) -> float:
        return float(
            max(
                np.max(np.abs(self.sigma1 - self.sigma2)),
                np.max(np.abs(self.gamma12 - self.gamma12.T)),
            )
        )


def generator_matrix(cfg: CavityConfig) -> FloatArray:
    generator = symplectic_form(cfg.layout) @ hamiltonian_matrix(cfg)
    return np.asarray(generator, dtype=np.float64)


def _hermitian_decomposition(
    hamiltonian: FloatArray, omega: FloatArray
) -> Optional[tuple[ComplexArray, ComplexArray, ComplexArray]]:
    # With F positive definite, F^1/2 Omega F^1/2 is antisymmetric, so K is
    # similar to i times a Hermitian matrix and has a unitary eigenbasis.
    f_values, f_vectors = np.linalg.eigh(hamiltonian)
    if f_values[0] <= 0.0:
        return None
    root = (f_vectors * np.sqrt(f_values)) @ f_vectors.T
    inverse_root = (f_vectors / np.sqrt(f_values)) @ f_vectors.T
    hermitian = 1j * (root @ omega @ root)
    hermitian = 0.5 * (hermitian + hermitian.conj().T)
    frequencies, unitary = np.linalg.eigh(hermitian)
    eigenvalues = np.asarray(-1j * frequencies, dtype=np.complex128)
    modes = np.asarray(inverse_root @ unitary, dtype=np.complex128)
    inverse_modes = np.asarray(unitary.conj().T @ root, dtype=np.complex128)
    return eigenvalues, modes, inverse_modes


def _general_decomposition(
    generator: FloatArray,
) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    eigenvalues, modes = scipy.linalg.eig(generator)
    inverse_modes = np.linalg.inv(modes)
    return (
        np.asarray(eigenvalues, dtype=np.complex128),
        np.asarray(modes, dtype=np.complex128),
        np.asarray(inverse_modes, dtype=np.complex128),
    )


def build_generator(
    cfg: CavityConfig, cache: Optional["GeneratorCache"] = None
) -> PropagatorGenerator:
    generator = generator_matrix(cfg)

    if cache is not None:
        cached = cache.load(cfg)
        if cached is not None:
            eigenvalues, modes, inverse_modes = cached
            return PropagatorGenerator(
                cfg, generator, eigenvalues, modes, inverse_modes
            )

    started = time.perf_counter()
    omega = symplectic_form(cfg.layout)
    try:
        decomposition = _hermitian_decomposition(hamiltonian_matrix(cfg), omega)
        if decomposition is None:
            logger.warning(
                "Hamiltonian is not positive definite, using general eigensolver",
                config=repr(cfg),
            )
            decomposition = _general_decomposition(generator)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise PropagatorError(
            f"Eigendecomposition of the generator failed for {cfg!r}: {str(e)}"
        ) from e

    eigenvalues, modes, inverse_modes = decomposition
    result = PropagatorGenerator(cfg, generator, eigenvalues, modes, inverse_modes)
    logger.debug(
        "Built propagator generator",
        dimension=result.dimension,
        separation=cfg.separation,
        seconds=round(time.perf_counter() - started, 4),
    )

    if cache is not None:
        cache.store(cfg, eigenvalues, modes, inverse_modes)
    return result


def _realify(matrix: ComplexArray, cfg: CavityConfig, t: float) -> FloatArray:
    real = matrix.real
    residual = float(np.max(np.abs(matrix.imag), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(real), initial=0.0)))
    if residual > IMAGINARY_RESIDUAL_TOLERANCE * scale:
        raise PropagatorError(
            f"propagator at t={t} keeps an imaginary residual {residual:.3e} for {cfg!r}"
        )
    return np.ascontiguousarray(real, dtype=np.float64)


def propagator(gen: PropagatorGenerator, t: float) -> FloatArray:
    if t == 0:
        return np.eye(gen.dimension)
    phases = np.exp(gen.eigenvalues * t)
    return _realify((gen.modes * phases) @ gen.inverse_modes, gen.config, t)


def propagator_rows(
    gen: PropagatorGenerator, t: float, rows: Sequence[int] = DETECTOR_ROWS
) -> FloatArray:
    """Selected rows of S(t), without forming the full matrix."""
    if t == 0:
        return np.eye(gen.dimension)[list(rows)]
    phases = np.exp(gen.eigenvalues * t)
    return _realify((gen.modes[list(rows)] * phases) @ gen.inverse_modes, gen.config, t)


def integrate_propagator(cfg: CavityConfig, t: float, dt: float) -> FloatArray:
    """
    Fixed-step classic RK4 solution of dS/dtau = K S with S(0) = I.

    The system is linear and autonomous, so every RK4 step multiplies by the
    same fourth-order Taylor polynomial of h K; the steps are then applied by
    repeated squaring.
    """
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    steps = max(1, math.ceil(abs(t) / dt - 1e-9))
    h = t / steps
    hk = h * generator_matrix(cfg)
    identity = np.eye(hk.shape[0])

    inner = identity + hk @ (identity + hk / 4.0) / 3.0
    step = identity + hk @ (identity + hk @ inner / 2.0)
    result = np.linalg.matrix_power(step, steps)
    if not np.all(np.isfinite(result)):
        raise PropagatorError(
            f"RK4 integration overflowed at t={t}, dt={dt} for {cfg!r}"
        )
    return np.asarray(result, dtype=np.float64)


def evolve(sigma0: CovarianceMatrix, s: npt.ArrayLike) -> CovarianceMatrix:
    matrix = np.asarray(s, dtype=np.float64)
    dim = sigma0.layout.dimension
    if matrix.shape != (dim, dim):
        raise DimensionError(
            f"propagator of shape {matrix.shape} cannot act on a {dim}-dimensional state"
        )
    evolved = matrix @ sigma0.entries @ matrix.T
    return CovarianceMatrix(0.5 * (evolved + evolved.T), sigma0.layout)


def detector_state(sigma: Union[CovarianceMatrix, npt.ArrayLike]) -> TwoModeState:
    if isinstance(sigma, CovarianceMatrix):
        entries = sigma.entries
    else:
        entries = np.asarray(sigma)
    if entries.ndim != 2 or min(entries.shape) < 4:
        raise DimensionError(f"state of shape {entries.shape} holds no detector pair")
    return TwoModeState.from_matrix(entries[:4, :4])


def project_detectors(
    rows: FloatArray, initial: Union[CovarianceMatrix, FloatArray]
) -> TwoModeState:
    """
    Detector block of S sigma0 S^T given the four detector rows of S.
    A one-dimensional ``initial`` is read as the diagonal of sigma0.
    """
    dim = rows.shape[1]
    if isinstance(initial, CovarianceMatrix):
        if initial.layout.dimension != dim:
            raise DimensionError(
                f"initial state dimension {initial.layout.dimension} does not match propagator {dim}"
            )
        block = rows @ initial.entries @ rows.T
    else:
        diagonal = np.asarray(initial, dtype=np.float64)
        if diagonal.shape != (dim,):
            raise GaussianStateError(
                f"initial diagonal of shape {diagonal.shape} does not match propagator {dim}"
            )
        block = (rows * diagonal) @ rows.T
    return TwoModeState.from_matrix(0.5 * (block + block.T))


def evolve_detectors(
    gen: PropagatorGenerator,
    initial: Union[CovarianceMatrix, FloatArray],
    t: float,
) -> TwoModeState:
    return project_detectors(propagator_rows(gen, t), initial)
