"""Work bookkeeping for a memory X that models a system S

All Hamiltonians are fully degenerate, so the extractable work is set by
entropies alone. Energies are in units where k_B T = 1/beta.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from domain.discord import DEFAULT_SETTINGS, discord, minimize_over_measurements
from domain.entities import LN2, WorkLedger
from domain.enums import Subsystem
from domain.errors import ConsistencyError, InvalidDimensionsError, ParameterDomainError
from domain.information import conditional_entropy, mutual_information, spectrum_entropy
from domain.operators import axis_projectors
from domain.states import canonical
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix, MeasurementBasis, OptimizerSettings

logger = logging.getLogger(__name__)


def _check_beta(beta: float) -> None:
    if not beta > 0:
        raise ParameterDomainError(f"beta must be positive, got {beta}")


def _check_same_dims(before: DensityMatrix, after: DensityMatrix) -> Tuple[DensityMatrix, DensityMatrix]:
    before, after = canonical(before), canonical(after)
    if before.dims != after.dims:
        raise InvalidDimensionsError(f"states have different dimensions: {before.dims} vs {after.dims}")
    return before, after


def extractable_work(
    rho: DensityMatrix, beta: float = 1.0, n_qubits: int = 1, tolerances: Tolerances = TOLERANCES
) -> float:
    """W_ext[S|X] = [N - H(S|X)] ln 2 / beta

    Exceeds N ln 2 / beta when S and X are entangled (negative H(S|X)).
    """
    _check_beta(beta)
    rho = canonical(rho)
    if 2 ** n_qubits < rho.factor_dim(Subsystem.S):
        raise ParameterDomainError(f"{n_qubits} qubits cannot hold a system of dimension {rho.factor_dim(Subsystem.S)}")
    return (n_qubits - conditional_entropy(rho, Subsystem.X, tolerances)) * LN2 / beta


def lost_work(
    before: DensityMatrix, after: DensityMatrix, beta: float = 1.0, tolerances: Tolerances = TOLERANCES
) -> float:
    """[H(S|X') - H(S|X)] ln 2 / beta, cross-checked against [I(S:X) - I(S:X')] ln 2 / beta"""
    _check_beta(beta)
    before, after = _check_same_dims(before, after)
    by_entropy = conditional_entropy(after, Subsystem.X, tolerances) - conditional_entropy(before, Subsystem.X, tolerances)
    by_information = mutual_information(before, tolerances) - mutual_information(after, tolerances)
    discrepancy = abs(by_entropy - by_information)
    if discrepancy > tolerances.cross_check:
        raise ConsistencyError("lost work disagrees with the mutual-information drop", discrepancy)
    return by_entropy * LN2 / beta


def lost_work_decomposition(
    before: DensityMatrix,
    after: DensityMatrix,
    beta: float = 1.0,
    side: Subsystem = Subsystem.X,
    settings: Optional[OptimizerSettings] = None,
    n_qubits: int = 1,
    tolerances: Tolerances = TOLERANCES,
) -> WorkLedger:
    """Split the lost work into the drop of classical correlations and the drop of discord

    ``side`` names the measured subsystem; the two sides give different
    splits of the same total.
    """
    w_lost = lost_work(before, after, beta, tolerances)
    discord_before = discord(before, side, settings, tolerances)
    discord_after = discord(after, side, settings, tolerances)
    w_classical = (discord_before.classical_correlations - discord_after.classical_correlations) * LN2 / beta
    w_quantum = (discord_before.discord - discord_after.discord) * LN2 / beta

    discrepancy = abs(w_classical + w_quantum - w_lost) * beta / LN2
    if discrepancy > tolerances.cross_check:
        raise ConsistencyError("classical and quantum lost work do not add up to the total", discrepancy)
    return WorkLedger(
        beta=beta,
        n_qubits=n_qubits,
        side=side,
        w_ext_before=extractable_work(before, beta, n_qubits, tolerances),
        w_ext_after=extractable_work(after, beta, n_qubits, tolerances),
        w_lost=w_lost,
        w_lost_classical=w_classical,
        w_lost_quantum=w_quantum,
        discord_before=discord_before,
        discord_after=discord_after,
    )


def decohered_conditional_entropy_objective(rho: DensityMatrix, tolerances: Tolerances = TOLERANCES):
    """n -> H(S|X') for X' the state after decohering X along n

    Evaluated on the decohered joint state: H(rho') - H(rho'_X).
    """
    rho = canonical(rho)
    if rho.factor_dim(Subsystem.X) != 2:
        raise InvalidDimensionsError("measured subsystem X must be a qubit")
    d_s = rho.factor_dim(Subsystem.S)
    rho_x = rho.mat.reshape(d_s, 2, d_s, 2).trace(axis1=0, axis2=2)
    eye_s = np.eye(d_s)
    floor = tolerances.entropy_floor

    def objective(n: np.ndarray) -> np.ndarray:
        proj = axis_projectors(n)
        lifted = np.einsum("ab,gkxy->gkaxby", eye_s, proj).reshape(proj.shape[0], 2, 2 * d_s, 2 * d_s)
        joint = np.einsum("gkij,jl,gklm->gim", lifted, rho.mat, lifted)
        local = np.einsum("gkij,jl,gklm->gim", proj, rho_x, proj)
        return spectrum_entropy(np.linalg.eigvalsh(joint), floor) - spectrum_entropy(np.linalg.eigvalsh(local), floor)

    return objective


def min_decoherence_lost_work(
    rho: DensityMatrix,
    beta: float = 1.0,
    settings: Optional[OptimizerSettings] = None,
    tolerances: Tolerances = TOLERANCES,
) -> Tuple[float, MeasurementBasis]:
    """Smallest lost work over decoherence channels on X, with the minimizing basis

    Equals delta(S|X) ln 2 / beta; computed from joint-state entropies,
    independently of the discord module's branch entropies.
    """
    _check_beta(beta)
    rho = canonical(rho)
    h_cond = conditional_entropy(rho, Subsystem.X, tolerances)
    objective = decohered_conditional_entropy_objective(rho, tolerances)
    value, basis, _ = minimize_over_measurements(objective, settings or DEFAULT_SETTINGS, tolerances)
    return (value - h_cond) * LN2 / beta, basis
