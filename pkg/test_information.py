"""Entropies and mutual information, in bits"""
import math

import numpy as np
import pytest

from domain.channels import apply_local, random_channel
from domain.enums import Subsystem
from domain.information import conditional_entropy, info_report, mutual_information, spectrum_entropy, von_neumann_entropy
from domain.states import initial_state, marginal, random_density_matrix
from domain.value_objects import DensityMatrix


def test_maximally_mixed_qubit_has_one_bit():
    assert von_neumann_entropy(DensityMatrix.create(np.eye(2) / 2, dims=(2,))) == pytest.approx(1.0, abs=1e-12)


def test_pure_state_has_zero_entropy(bell):
    assert von_neumann_entropy(bell) == pytest.approx(0.0, abs=1e-12)


def test_binary_entropy_value():
    expected = -0.85 * math.log2(0.85) - 0.15 * math.log2(0.15)
    value = von_neumann_entropy(DensityMatrix.create(np.diag([0.85, 0.15]), dims=(2,)))
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.60984, abs=1e-5)


def test_spectrum_entropy_ignores_floor_and_batches():
    spectra = np.array([[0.5, 0.5, 0.0], [1.0, 1e-14, 0.0]])
    np.testing.assert_allclose(spectrum_entropy(spectra), [1.0, 0.0], atol=1e-12)


def test_anchor_states(bell, classical_copy, product):
    assert conditional_entropy(bell) == pytest.approx(-1.0, abs=1e-9)
    assert mutual_information(bell) == pytest.approx(2.0, abs=1e-9)
    assert mutual_information(classical_copy) == pytest.approx(1.0, abs=1e-9)
    assert mutual_information(product) == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(product) == pytest.approx(0.0, abs=1e-12)


def test_product_conditional_entropy_is_marginal_entropy(rng):
    rho_s = random_density_matrix((2,), rng).mat
    rho_x = random_density_matrix((2,), rng).mat
    rho = DensityMatrix.create(np.kron(rho_s, rho_x))
    h_s = von_neumann_entropy(marginal(rho, Subsystem.S))
    assert conditional_entropy(rho) == pytest.approx(h_s, abs=1e-10)


def test_published_steady_state_entropies():
    third = 1 / 9
    rho = DensityMatrix.create(np.array([
        [5 / 18, 0, 0, -third],
        [0, 5 / 18, -third, 0],
        [0, -third, 2 / 9, 0],
        [-third, 0, 0, 2 / 9],
    ]))
    # each 2x2 block [[5/18, -1/9], [-1/9, 2/9]] has eigenvalues 1/4 ± sqrt(17)/36
    radius = math.sqrt(17) / 36
    block = [0.25 + radius, 0.25 - radius]
    h_joint = -2 * sum(x * math.log2(x) for x in block)
    assert conditional_entropy(rho) == pytest.approx(h_joint - 1.0, abs=1e-10)


def test_info_report_is_consistent(rng):
    rho = random_density_matrix((2, 2), rng)
    report = info_report(rho)
    assert report.mutual_info == pytest.approx(report.h_marginal_S - report.h_cond_S_given_X, abs=1e-10)
    assert report.h_cond_S_given_X == pytest.approx(report.h_joint - report.h_marginal_X, abs=1e-10)
    # symmetric form H(S) + H(X) - H(SX)
    assert report.mutual_info == pytest.approx(
        report.h_marginal_S + report.h_marginal_X - report.h_joint, abs=1e-10
    )
    assert report.h_joint <= report.h_marginal_S + report.h_marginal_X + 1e-10


def test_conditioning_on_s(rng):
    rho = random_density_matrix((2, 2), rng)
    h_x_given_s = conditional_entropy(rho, conditioning=Subsystem.S)
    expected = von_neumann_entropy(rho) - von_neumann_entropy(marginal(rho, Subsystem.S))
    assert h_x_given_s == pytest.approx(expected, abs=1e-12)


def test_initial_state_has_no_memory():
    assert mutual_information(initial_state()) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
def test_local_channels_never_increase_mutual_information(rng):
    for _ in range(1000):
        rho = random_density_matrix((2, 2), rng)
        channel = random_channel(2, int(rng.integers(1, 5)), rng)
        assert mutual_information(rho) - mutual_information(apply_local(channel, rho, Subsystem.X)) >= -1e-9
