"""Shared fixtures and the brute-force discord reference"""
from pathlib import Path
from typing import List

import numpy as np
import pytest

from domain.states import bell_state, classical_copy_state, initial_state, random_density_matrix
from domain.value_objects import DensityMatrix

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 20240611

PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


@pytest.fixture
def bell() -> DensityMatrix:
    return bell_state()


@pytest.fixture
def classical_copy() -> DensityMatrix:
    return classical_copy_state()


@pytest.fixture
def product() -> DensityMatrix:
    return initial_state()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def random_states(count: int, seed: int = SEED) -> List[DensityMatrix]:
    rng = np.random.default_rng(seed)
    return [random_density_matrix((2, 2), rng) for _ in range(count)]


# ============================================================================
# BRUTE-FORCE REFERENCE: min over X-measurements of sum_k p_k H(S|X=k)
# ============================================================================

def _xlog2x(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 1e-15, x, 1.0)
    return np.where(x > 1e-15, x * np.log2(safe), 0.0)


def _grid_values(rho_s: np.ndarray, t_ops: np.ndarray, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Objective on the outer product grid thetas x phis, closed-form 2x2 spectra"""
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    n = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    n_t = np.einsum("abj,jxy->abxy", n, t_ops)
    total = np.zeros(th.shape)
    for sign in (1.0, -1.0):
        branch = 0.5 * (rho_s + sign * n_t)
        a = branch[..., 0, 0].real
        d = branch[..., 1, 1].real
        off = np.abs(branch[..., 0, 1])
        mean = 0.5 * (a + d)
        radius = np.sqrt((0.5 * (a - d)) ** 2 + off ** 2)
        p = a + d
        total += -_xlog2x(mean + radius) - _xlog2x(mean - radius) + _xlog2x(p)
    return total


def brute_force_semiclassical_entropy(rho: DensityMatrix, step_deg: float = 0.1, zoom_rounds: int = 3) -> float:
    """0.1 deg grid over the whole sphere, then nested 21x21 grids ten times finer around the best point"""
    t = np.asarray(rho.mat).reshape(2, 2, 2, 2)
    rho_s = np.einsum("ixjx->ij", t)
    t_ops = np.array([np.einsum("iyjx,xy->ij", t, sigma) for sigma in PAULIS])

    thetas = np.radians(np.arange(int(round(180 / step_deg)) + 1) * step_deg)
    phis = np.radians(np.arange(int(round(360 / step_deg))) * step_deg)
    best, best_theta, best_phi = np.inf, 0.0, 0.0
    for start in range(0, len(thetas), 100):
        chunk = thetas[start:start + 100]
        values = _grid_values(rho_s, t_ops, chunk, phis)
        i, j = np.unravel_index(np.argmin(values), values.shape)
        if values[i, j] < best:
            best, best_theta, best_phi = values[i, j], chunk[i], phis[j]

    step = np.radians(step_deg)
    for _ in range(zoom_rounds):
        step /= 10
        local_thetas = np.clip(best_theta + step * np.arange(-10, 11), 0.0, np.pi)
        local_phis = best_phi + step * np.arange(-10, 11)
        values = _grid_values(rho_s, t_ops, local_thetas, local_phis)
        i, j = np.unravel_index(np.argmin(values), values.shape)
        if values[i, j] < best:
            best, best_theta, best_phi = values[i, j], local_thetas[i], local_phis[j]
    return float(best)


@pytest.fixture
def discord_oracle():
    return brute_force_semiclassical_entropy
