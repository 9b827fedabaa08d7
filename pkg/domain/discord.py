"""Quantum discord by optimization over rank-one projective qubit measurements

The search runs on a coarse (theta, phi) grid, then refines the best grid
point with Nelder-Mead in tangent-plane coordinates around it, which avoids
the coordinate singularity at the poles. Objectives are vectorized over
batches of unit Bloch vectors of shape (G, 3).
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.optimize

from domain.entities import DiscordResult
from domain.enums import Subsystem
from domain.errors import InvalidDimensionsError
from domain.information import conditional_entropy, mutual_information, spectrum_entropy, von_neumann_entropy
from domain.linalg import swap_factors
from domain.operators import axis_projectors
from domain.states import canonical, marginal
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix, MeasurementBasis, OptimizerSettings, OptimizerTrace

logger = logging.getLogger(__name__)

BatchObjective = Callable[[np.ndarray], np.ndarray]

DEFAULT_SETTINGS = OptimizerSettings()


# ==================== MEASUREMENT-MANIFOLD SEARCH ====================
def bloch_grid(settings: OptimizerSettings = DEFAULT_SETTINGS) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened grid, theta-major; the poles appear once, with phi = 0"""
    theta_step = math.radians(settings.theta_step_deg)
    thetas = theta_step * np.arange(int(math.floor(math.pi / theta_step + 1e-9)) + 1)
    if math.pi - thetas[-1] > 1e-12:
        thetas = np.append(thetas, math.pi)
    n_phi = max(1, int(round(360.0 / settings.phi_step_deg)))
    phis = 2 * math.pi * np.arange(n_phi) / n_phi

    theta_points, phi_points = [], []
    for theta in thetas:
        if math.sin(theta) < TOLERANCES.pole:
            theta_points.append(np.array([theta]))
            phi_points.append(np.zeros(1))
        else:
            theta_points.append(np.full(n_phi, theta))
            phi_points.append(phis)
    return np.concatenate(theta_points), np.concatenate(phi_points)


def _unit_vectors(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    return np.stack([np.sin(thetas) * np.cos(phis), np.sin(thetas) * np.sin(phis), np.cos(thetas)], axis=-1)


def _tangent_frame(n0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(n0[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(n0, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n0, e1)


def minimize_over_measurements(
    objective: BatchObjective,
    settings: OptimizerSettings = DEFAULT_SETTINGS,
    tolerances: Tolerances = TOLERANCES,
) -> Tuple[float, MeasurementBasis, OptimizerTrace]:
    """Minimum of ``objective`` over measurement axes, with its canonical basis

    Grid values within ``tolerances.tie`` of the minimum count as equal and
    the first one (smallest theta, then smallest phi) wins; the simplex result
    replaces it only when strictly better.
    """
    thetas, phis = bloch_grid(settings)
    values = np.asarray(objective(_unit_vectors(thetas, phis)), dtype=float)
    best = float(values.min())
    start = int(np.flatnonzero(values <= best + tolerances.tie)[0])
    n0 = _unit_vectors(thetas[start], phis[start])
    e1, e2 = _tangent_frame(n0)

    def to_axis(x: np.ndarray) -> np.ndarray:
        n = n0 + x[0] * e1 + x[1] * e2
        return n / np.linalg.norm(n)

    def scalar(x: np.ndarray) -> float:
        return float(objective(to_axis(x)[np.newaxis, :])[0])

    h = math.radians(settings.theta_step_deg)
    result = scipy.optimize.minimize(
        scalar,
        np.zeros(2),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array([[0.0, 0.0], [h, 0.0], [0.0, h]]),
            "xatol": settings.refine_xtol,
            "fatol": settings.refine_tol,
            "maxiter": settings.max_iterations,
        },
    )
    spread = float(np.ptp(result.final_simplex[1]))
    refined = bool(result.fun < best - tolerances.tie)
    if refined:
        value = float(result.fun)
        n = to_axis(result.x)
    else:
        value = best
        n = n0
    basis = MeasurementBasis.from_angles(math.acos(max(-1.0, min(1.0, n[2]))), math.atan2(n[1], n[0]))
    trace = OptimizerTrace(
        grid_points=len(values),
        iterations=int(result.nit),
        evaluations=int(result.nfev),
        final_spread=spread,
        refined=refined,
    )
    logger.debug(
        "measurement search: grid min %.12g at %d/%d, simplex %.12g after %d iterations (spread %.1e)",
        best, start, len(values), result.fun, result.nit, spread,
    )
    return value, basis, trace


# ==================== SEMICLASSICAL CONDITIONAL ENTROPY ====================
def branch_entropy_objective(
    rho: DensityMatrix, measured: Subsystem = Subsystem.X, tolerances: Tolerances = TOLERANCES
) -> BatchObjective:
    """n -> sum_k p_k H(rho_k) for the measurement (I ± n.sigma)/2 on ``measured``

    p_k H(rho_k) is evaluated as S(sigma_k) + p_k log2 p_k with sigma_k the
    unnormalized conditional state of the unmeasured party; null branches
    contribute 0.
    """
    rho = canonical(rho)
    if rho.factor_dim(measured) != 2:
        raise InvalidDimensionsError(f"measured subsystem {measured.value} must be a qubit")
    mat = rho.mat if measured is Subsystem.X else swap_factors(rho.mat, rho.dims)
    d = rho.factor_dim(measured.other)
    t = mat.reshape(d, 2, d, 2)
    floor = tolerances.entropy_floor
    zero_p = tolerances.zero_probability

    def objective(n: np.ndarray) -> np.ndarray:
        proj = axis_projectors(n)
        sigma = np.einsum("aybx,gkxy->gkab", t, proj)
        p = np.real(np.einsum("gkaa->gk", sigma))
        eigenvalues = np.linalg.eigvalsh(sigma)
        safe_p = np.where(p > zero_p, p, 1.0)
        branch = np.where(p > zero_p, spectrum_entropy(eigenvalues, floor) + p * np.log2(safe_p), 0.0)
        return branch.sum(axis=-1)

    return objective


def _semiclassical(
    rho: DensityMatrix, measured: Subsystem, settings: Optional[OptimizerSettings], tolerances: Tolerances
) -> Tuple[float, MeasurementBasis, OptimizerTrace]:
    objective = branch_entropy_objective(rho, measured, tolerances)
    return minimize_over_measurements(objective, settings or DEFAULT_SETTINGS, tolerances)


def semiclassical_conditional_entropy(
    rho: DensityMatrix,
    measured: Subsystem = Subsystem.X,
    settings: Optional[OptimizerSettings] = None,
    tolerances: Tolerances = TOLERANCES,
) -> Tuple[float, MeasurementBasis]:
    """H(S|X^C) = min over projective measurements on X of sum_k p_k H(S|X=k)"""
    value, basis, _ = _semiclassical(rho, measured, settings, tolerances)
    return value, basis


def discord(
    rho: DensityMatrix,
    measured: Subsystem = Subsystem.X,
    settings: Optional[OptimizerSettings] = None,
    tolerances: Tolerances = TOLERANCES,
) -> DiscordResult:
    """delta(S|X) = H(S|X^C) - H(S|X) for measured=X, delta(X|S) for measured=S"""
    rho = canonical(rho)
    h_classical, basis, trace = _semiclassical(rho, measured, settings, tolerances)
    h_cond = conditional_entropy(rho, conditioning=measured, tolerances=tolerances)
    h_unmeasured = von_neumann_entropy(marginal(rho, measured.other), tolerances)
    return DiscordResult(
        measured=measured,
        semiclassical_cond_entropy=h_classical,
        conditional_entropy=h_cond,
        discord=h_classical - h_cond,
        classical_correlations=h_unmeasured - h_classical,
        mutual_information=mutual_information(rho, tolerances),
        argmin_basis=basis,
        optimizer_trace=trace,
    )
