"""Cascaded master equation: generator, propagation and relaxation limits"""
import numpy as np
import pytest

from domain import operators as ops
from domain.dynamics import (
    apply_generator, build_liouvillian, cascaded_collapse, cascaded_hamiltonian, fixed_point,
    liouvillian_spectrum, propagate, propagator, steady_state,
)
from domain.errors import ParameterDomainError, SteadyStateAmbiguityError
from domain.linalg import kron, unvec, vec
from domain.states import initial_state, is_x_state, maximally_mixed, published_layout, random_density_matrix
from domain.value_objects import DensityMatrix

THIRD = 1 / 9
STEADY_STATE = np.array([
    [5 / 18, 0, 0, -THIRD],
    [0, 5 / 18, -THIRD, 0],
    [0, -THIRD, 2 / 9, 0],
    [-THIRD, 0, 0, 2 / 9],
])

SIGMA_X_ON_X = kron(ops.identity(), ops.pauli_x())


@pytest.fixture(scope="module")
def generator():
    return build_liouvillian(1.0)


# ============================================================================
# GENERATOR
# ============================================================================

def test_generator_preserves_trace(generator):
    assert generator.trace_defect() < 1e-12


def test_superoperator_matches_matrix_form(generator, rng):
    h, c = cascaded_hamiltonian(), cascaded_collapse()
    for _ in range(5):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        np.testing.assert_allclose(unvec(generator.mat @ vec(m), 4), apply_generator(m, h, c), atol=1e-12)


def test_generator_is_linear_in_kappa(generator):
    np.testing.assert_allclose(build_liouvillian(2.5).mat, 2.5 * generator.mat, atol=1e-12)


@pytest.mark.parametrize("kappa", [0.0, -1.0])
def test_kappa_must_be_positive(kappa):
    with pytest.raises(ParameterDomainError):
        build_liouvillian(kappa)


def test_spectrum_is_stable_with_two_zero_modes(generator):
    spectrum = liouvillian_spectrum(generator)
    assert np.all(spectrum.real <= 1e-9)
    assert np.count_nonzero(np.abs(spectrum) < 1e-9) == 2
    assert abs(spectrum[0]) < 1e-9


def test_sigma_x_of_memory_is_conserved(generator, rng):
    rho = random_density_matrix((2, 2), rng).mat
    drift = np.trace(SIGMA_X_ON_X @ apply_generator(rho, cascaded_hamiltonian(), cascaded_collapse()))
    assert abs(drift) < 1e-12

    conserved = generator.conserved_quantities()
    assert len(conserved) == 2
    # the span holds both the identity and sigma_x on X
    stacked = np.array([a.reshape(-1) for a in conserved]).T
    for target in (np.eye(4), SIGMA_X_ON_X):
        coeffs, *_ = np.linalg.lstsq(stacked, target.reshape(-1), rcond=None)
        np.testing.assert_allclose(stacked @ coeffs, target.reshape(-1), atol=1e-9)


# ============================================================================
# PROPAGATION
# ============================================================================

def test_semigroup_property(generator):
    np.testing.assert_allclose(
        propagator(generator, 0.7) @ propagator(generator, 0.5), propagator(generator, 1.2), atol=1e-12
    )


def test_zero_duration_is_identity(generator, rng):
    rho = random_density_matrix((2, 2), rng)
    np.testing.assert_allclose(propagate(rho, generator, 0.0).mat, rho.mat)


def test_negative_duration_rejected(generator):
    with pytest.raises(ParameterDomainError):
        propagator(generator, -0.1)


def test_propagation_keeps_states_valid(generator, rng):
    rho = random_density_matrix((2, 2), rng)
    for t in (0.1, 1.0, 5.0):
        out = propagate(rho, generator, t)
        assert out.trace() == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.eigvalsh(out.mat)[0] >= -1e-12


def test_x_states_stay_x_states(generator):
    rho = propagate(initial_state(), generator, 0.8)
    assert is_x_state(rho)


def test_x_state_with_coherences_stays_x_state(generator):
    mat = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    mat[0, 3], mat[1, 2] = 0.1 + 0.05j, 0.1j
    mat[3, 0], mat[2, 1] = np.conj(mat[0, 3]), np.conj(mat[1, 2])
    rho = DensityMatrix.create(mat, (2, 2))
    assert is_x_state(rho)
    for t in (0.3, 1.0, 4.0):
        assert is_x_state(propagate(rho, generator, t))


# ============================================================================
# STEADY STATE
# ============================================================================

def test_steady_state_values(generator):
    np.testing.assert_allclose(steady_state(generator).mat, STEADY_STATE, atol=1e-8)


@pytest.mark.parametrize("kappa", [0.5, 2.0])
def test_steady_state_does_not_depend_on_kappa(kappa):
    np.testing.assert_allclose(steady_state(build_liouvillian(kappa)).mat, STEADY_STATE, atol=1e-8)


def test_long_relaxation_reaches_steady_state(generator):
    for start in (initial_state(), maximally_mixed()):
        relaxed = propagate(start, generator, 50.0)
        np.testing.assert_allclose(relaxed.mat, STEADY_STATE, atol=1e-7)


def test_steady_state_remembers_memory_coherence(generator):
    plus = ops.projector(ops.ket_plus())
    reference = DensityMatrix.create(kron(ops.projector(ops.ket(1)), plus))
    limit = steady_state(generator, reference=reference)
    assert np.trace(SIGMA_X_ON_X @ limit.mat).real == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_allclose(propagate(reference, generator, 60.0).mat, limit.mat, atol=1e-7)


def test_published_layout_of_steady_state(generator):
    printed = published_layout(steady_state(generator))
    np.testing.assert_allclose(np.diag(printed).real, [2 / 9, 5 / 18, 2 / 9, 5 / 18], atol=1e-8)


def test_fixed_point_without_kernel_is_ambiguous():
    with pytest.raises(SteadyStateAmbiguityError):
        fixed_point(-np.eye(16), maximally_mixed())
