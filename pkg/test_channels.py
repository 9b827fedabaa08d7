"""Kraus channels, local lifting and decoherence"""
import numpy as np
import pytest

from domain import operators as ops
from domain.channels import (
    apply, apply_local, decohere, identity_channel, lift_local, random_channel, update_channel,
)
from domain.enums import Subsystem
from domain.errors import InvalidChannelError, InvalidDimensionsError, ParameterDomainError
from domain.linalg import kron
from domain.states import is_x_state, marginal, product_state, random_density_matrix, validate
from domain.value_objects import DensityMatrix, KrausChannel, MeasurementBasis


def _qubit(mat) -> DensityMatrix:
    return DensityMatrix.create(np.asarray(mat), dims=(2,))


# ============================================================================
# UPDATE CHANNEL
# ============================================================================

@pytest.mark.parametrize("p", [0.0, 0.3, 0.7, 1.0])
def test_update_channel_is_complete(p):
    assert update_channel(p).completeness_defect() < 1e-12


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_update_channel_rejects_bad_probability(p):
    with pytest.raises(ParameterDomainError):
        update_channel(p)


def test_update_channel_zero_is_identity(rng):
    rho = random_density_matrix((2,), rng)
    np.testing.assert_allclose(apply(update_channel(0.0), rho).mat, rho.mat, atol=1e-14)


def test_update_channel_damps_excited_state():
    out = apply(update_channel(0.7), _qubit(np.diag([0.0, 1.0])))
    np.testing.assert_allclose(out.mat, np.diag([0.7, 0.3]), atol=1e-14)


def test_update_channel_on_maximally_mixed():
    out = apply(update_channel(0.7), _qubit(np.eye(2) / 2))
    np.testing.assert_allclose(out.mat, np.diag([0.85, 0.15]), atol=1e-14)


def test_full_damping_resets_to_ground(rng):
    out = apply(update_channel(1.0), random_density_matrix((2,), rng))
    np.testing.assert_allclose(out.mat, np.diag([1.0, 0.0]), atol=1e-12)


# ============================================================================
# APPLY AND LIFT
# ============================================================================

def test_incomplete_kraus_operators_rejected():
    with pytest.raises(InvalidChannelError):
        KrausChannel.create([np.diag([1.0, 0.5])])


def test_apply_dimension_mismatch(bell):
    with pytest.raises(InvalidDimensionsError):
        apply(update_channel(0.5), bell)


def test_identity_channel_leaves_state_unchanged(bell):
    np.testing.assert_allclose(apply(identity_channel(4), bell).mat, bell.mat)


def test_random_channels_keep_states_valid(rng):
    for _ in range(200):
        channel = random_channel(2, int(rng.integers(1, 5)), rng)
        assert channel.completeness_defect() < 1e-10
        rho = random_density_matrix((2, 2), rng)
        out = apply_local(channel, rho, Subsystem.X)
        assert abs(out.trace() - 1.0) < 1e-12
        assert validate(out).ok


def test_lifted_identity_is_identity():
    lifted = lift_local(identity_channel(2), (2, 2), Subsystem.X)
    np.testing.assert_allclose(lifted.operators[0], np.eye(4))


def test_lift_acts_locally_on_products(rng):
    rho_s = random_density_matrix((2,), rng)
    rho_x = random_density_matrix((2,), rng)
    channel = update_channel(0.7)
    out = apply_local(channel, product_state(rho_s.mat, rho_x.mat), Subsystem.X)
    expected = kron(rho_s.mat, apply(channel, rho_x).mat)
    np.testing.assert_allclose(out.mat, expected, atol=1e-12)


def test_local_channel_commutes_with_tracing_out_s(rng):
    rho = random_density_matrix((2, 2), rng)
    channel = random_channel(2, 3, rng)
    left = marginal(apply_local(channel, rho, Subsystem.X), Subsystem.X)
    right = apply(channel, marginal(rho, Subsystem.X))
    np.testing.assert_allclose(left.mat, right.mat, atol=1e-12)


def test_local_channel_on_x_leaves_s_marginal(rng):
    rho = random_density_matrix((2, 2), rng)
    out = apply_local(update_channel(0.7), rho, Subsystem.X)
    np.testing.assert_allclose(marginal(out, Subsystem.S).mat, marginal(rho, Subsystem.S).mat, atol=1e-12)


def test_update_preserves_x_state_pattern(rng):
    diag = rng.dirichlet(np.ones(4))
    m = np.diag(diag).astype(complex)
    m[0, 3] = m[3, 0] = 0.5 * np.sqrt(diag[0] * diag[3])
    m[1, 2] = m[2, 1] = -0.5 * np.sqrt(diag[1] * diag[2])
    rho = DensityMatrix.create(m)
    assert is_x_state(rho)
    assert is_x_state(apply_local(update_channel(0.7), rho, Subsystem.X))


# ============================================================================
# DECOHERENCE
# ============================================================================

def test_decohere_bell_in_z(bell, classical_copy):
    out = decohere(bell, MeasurementBasis.computational(), Subsystem.X)
    np.testing.assert_allclose(out.mat, classical_copy.mat, atol=1e-15)


def test_decohere_is_idempotent(rng):
    rho = random_density_matrix((2, 2), rng)
    basis = MeasurementBasis.from_angles(1.2, 0.4)
    once = decohere(rho, basis, Subsystem.X)
    np.testing.assert_allclose(decohere(once, basis, Subsystem.X).mat, once.mat, atol=1e-12)


def test_decohered_state_commutes_with_projectors(rng):
    rho = random_density_matrix((2, 2), rng)
    basis = MeasurementBasis.from_angles(0.9, 2.0)
    out = decohere(rho, basis, Subsystem.S)
    for p in basis.projectors():
        lifted = kron(p, ops.identity())
        np.testing.assert_allclose(lifted @ out.mat, out.mat @ lifted, atol=1e-12)
