# Copyright Thermal Harvesting contributors. All Rights Reserved.
# SPDX-License-Identifier: Apache-2.0
import numpy as np
import pytest
import scipy.linalg

from harvest.cavity_model import CavityConfig, initial_diagonal, initial_state
from harvest.evolution import (
    PropagatorError,
    TwoModeState,
    build_generator,
    detector_state,
    evolve,
    evolve_detectors,
    generator_matrix,
    integrate_propagator,
    propagator,
    propagator_rows,
)
from harvest.gaussian_core import (
    CovarianceMatrix,
    DimensionError,
    GaussianStateError,
    is_symplectic,
    rotation,
    symplectic_eigenvalues,
)


def test_generator_reconstruction(small_config, generator_for):
    gen = generator_for(small_config)
    assert gen.dimension == 44
    assert gen.reconstruction_error() < 1e-10
    assert np.allclose(gen.eigenvalues.real, 0.0, atol=1e-10)


def test_uncoupled_detectors_rotate_at_their_frequency():
    cfg = CavityConfig(cutoff=4, coupling=0.0, x2=3.0)
    t = 1.7
    rows = propagator_rows(build_generator(cfg), t)
    turn = rotation(cfg.detector_frequency * t)
    assert np.allclose(rows[:2, :2], turn, atol=1e-10)
    assert np.allclose(rows[2:, 2:4], turn, atol=1e-10)
    assert np.allclose(rows[:2, 2:], 0.0, atol=1e-10)
    assert np.allclose(rows[2:, 4:], 0.0, atol=1e-10)


def test_propagator_matches_expm(small_config, generator_for):
    gen = generator_for(small_config)
    expected = scipy.linalg.expm(2.0 * generator_matrix(small_config))
    assert np.allclose(propagator(gen, 2.0), expected, atol=1e-10)


def test_propagator_at_zero_is_identity(small_config, generator_for):
    gen = generator_for(small_config)
    assert np.array_equal(propagator(gen, 0.0), np.eye(44))
    assert np.array_equal(propagator_rows(gen, 0.0), np.eye(44)[:4])


def test_propagator_group_property(small_config, generator_for):
    gen = generator_for(small_config)
    composed = propagator(gen, 1.5) @ propagator(gen, 2.5)
    assert np.allclose(composed, propagator(gen, 4.0), atol=1e-10)
    inverse = propagator(gen, -3.0) @ propagator(gen, 3.0)
    assert np.allclose(inverse, np.eye(44), atol=1e-10)


def test_propagator_rows_match_full_matrix(small_config, generator_for):
    gen = generator_for(small_config)
    assert np.allclose(propagator_rows(gen, 3.7), propagator(gen, 3.7)[:4], atol=1e-13)
    chosen = propagator_rows(gen, 3.7, [5, 9])
    assert np.allclose(chosen, propagator(gen, 3.7)[[5, 9]], atol=1e-13)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 5.0, 10.0, 50.0])
def test_propagator_is_symplectic(small_config, generator_for, t):
    assert is_symplectic(propagator(generator_for(small_config), t), 1e-9)


def test_general_eigensolver_fallback(mocker, small_config):
    mocker.patch("harvest.evolution._hermitian_decomposition", return_value=None)
    gen = build_generator(small_config)
    assert gen.reconstruction_error() < 1e-8
    expected = scipy.linalg.expm(1.0 * generator_matrix(small_config))
    assert np.allclose(propagator(gen, 1.0), expected, atol=1e-8)


def test_eigensolver_failure_names_config(mocker, small_config):
    mocker.patch(
        "harvest.evolution._hermitian_decomposition",
        side_effect=np.linalg.LinAlgError("no convergence"),
    )
    with pytest.raises(PropagatorError, match="cutoff=10"):
        build_generator(small_config)


def test_imaginary_residual_is_rejected(small_config, generator_for):
    gen = generator_for(small_config)
    broken = type(gen)(
        gen.config, gen.generator, gen.eigenvalues + 0.1j, gen.modes, gen.inverse_modes
    )
    with pytest.raises(PropagatorError):
        propagator(broken, 1.0)


def test_rk4_oracle_agreement():
    cfg = CavityConfig(cutoff=10).at_separation(4.0)
    exact = propagator(build_generator(cfg), 2.0)
    assert np.max(np.abs(integrate_propagator(cfg, 2.0, 1e-4) - exact)) < 1e-6


def test_rk4_convergence_order():
    cfg = CavityConfig(cutoff=10).at_separation(4.0)
    exact = propagator(build_generator(cfg), 2.0)
    coarse = np.max(np.abs(integrate_propagator(cfg, 2.0, 0.04) - exact))
    fine = np.max(np.abs(integrate_propagator(cfg, 2.0, 0.02) - exact))
    assert 12.0 <= coarse / fine <= 20.0


def test_rk4_rejects_bad_step(small_config):
    with pytest.raises(ValueError):
        integrate_propagator(small_config, 1.0, 0.0)


def test_rk4_overflow_is_reported(mocker, small_config):
    mocker.patch(
        "harvest.evolution.generator_matrix", return_value=np.full((44, 44), 1e200)
    )
    with pytest.raises(PropagatorError):
        integrate_propagator(small_config, 1.0, 0.5)


def test_evolve_preserves_vacuum_purity(small_config, generator_for):
    gen = generator_for(small_config)
    sigma = evolve(initial_state(small_config, 0.0), propagator(gen, 3.0))
    assert np.array_equal(sigma.entries, sigma.entries.T)
    assert np.allclose(symplectic_eigenvalues(sigma), 1.0, atol=1e-8)


def test_evolve_rejects_mismatched_propagator(small_config):
    with pytest.raises(DimensionError):
        evolve(initial_state(small_config, 0.0), np.eye(10))


def test_detector_state_blocks():
    matrix = np.arange(36, dtype=float).reshape(6, 6)
    matrix = matrix + matrix.T
    state = detector_state(CovarianceMatrix.from_array(matrix))
    assert np.array_equal(state.sigma1, matrix[:2, :2])
    assert np.array_equal(state.sigma2, matrix[2:4, 2:4])
    assert np.array_equal(state.gamma12, matrix[:2, 2:4])
    assert np.array_equal(state.matrix, matrix[:4, :4])
    with pytest.raises(DimensionError):
        detector_state(np.eye(2))


def test_evolve_detectors_matches_full_evolution(small_config, generator_for):
    gen = generator_for(small_config)
    sigma0 = initial_state(small_config, 1.0)
    full = detector_state(evolve(sigma0, propagator(gen, 2.0)))
    from_rows = evolve_detectors(gen, initial_diagonal(small_config, 1.0), 2.0)
    from_matrix = evolve_detectors(gen, sigma0, 2.0)
    assert np.allclose(from_rows.matrix, full.matrix, atol=1e-12)
    assert np.allclose(from_matrix.matrix, full.matrix, atol=1e-12)
    with pytest.raises(GaussianStateError):
        evolve_detectors(gen, np.ones(10), 2.0)


def test_two_mode_state_swap():
    cross = np.array([[0.1, 0.2], [0.3, 0.4]])
    state = TwoModeState(np.diag([2.0, 3.0]), np.diag([4.0, 5.0]), cross)
    swapped = state.swapped()
    assert np.array_equal(swapped.sigma1, state.sigma2)
    assert np.array_equal(swapped.gamma12, state.gamma12.T)
    assert state.exchange_asymmetry() == pytest.approx(2.0)
    with pytest.raises(DimensionError):
        TwoModeState(np.eye(3), np.eye(2), np.eye(2))


def test_translation_invariance():
    near = CavityConfig(cutoff=20, x1=0.0, x2=4.0)
    far = CavityConfig(cutoff=20, x1=30.0, x2=34.0)
    a = evolve_detectors(build_generator(near), initial_diagonal(near, 1.0), 2.0)
    b = evolve_detectors(build_generator(far), initial_diagonal(far, 1.0), 2.0)
    assert np.allclose(a.matrix, b.matrix, atol=1e-10)


def test_small_time_growth_of_cross_block(reference_config, generator_for):
    gen = generator_for(reference_config.at_separation(4.0))
    diagonal = initial_diagonal(gen.config, 0.0)
    full = evolve_detectors(gen, diagonal, 0.05).gamma12
    half = evolve_detectors(gen, diagonal, 0.025).gamma12
    assert 3.8 <= np.linalg.norm(full) / np.linalg.norm(half) <= 4.2


@pytest.mark.slow
@pytest.mark.parametrize("t", [25.0, 50.0, 100.0, 200.0])
def test_vacuum_stays_pure_at_long_times(reference_config, generator_for, t):
    cfg = reference_config.at_separation(4.0)
    sigma = evolve(initial_state(cfg, 0.0), propagator(generator_for(cfg), t))
    assert np.allclose(symplectic_eigenvalues(sigma), 1.0, atol=1e-6)
