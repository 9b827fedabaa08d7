"""Entropic functionals, in bits"""
import numpy as np

from domain.entities import InfoReport
from domain.enums import Subsystem
from domain.errors import StateValidationError
from domain.linalg import hermitian_eig
from domain.states import canonical, marginal
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix


def spectrum_entropy(eigenvalues: np.ndarray, floor: float = TOLERANCES.entropy_floor) -> np.ndarray:
    """-sum(l log2 l) over the last axis; eigenvalues below ``floor`` count as 0

    Works on unnormalized spectra too, which the batched measurement code relies on.
    """
    lam = np.where(eigenvalues > floor, eigenvalues, 1.0)
    terms = np.where(eigenvalues > floor, eigenvalues * np.log2(lam), 0.0)
    return -np.sum(terms, axis=-1)


def von_neumann_entropy(rho: DensityMatrix, tolerances: Tolerances = TOLERANCES) -> float:
    eigenvalues = hermitian_eig(rho.mat, tolerances.hermiticity).eigenvalues
    if eigenvalues[0] < -tolerances.positivity_clamp:
        raise StateValidationError(rho.check(tolerances), "entropy argument")
    return float(spectrum_entropy(eigenvalues, tolerances.entropy_floor))


def conditional_entropy(
    rho: DensityMatrix, conditioning: Subsystem = Subsystem.X, tolerances: Tolerances = TOLERANCES
) -> float:
    """H(S|X) = H(rho_SX) - H(rho_X); pass ``conditioning=S`` for H(X|S)"""
    rho = canonical(rho)
    return von_neumann_entropy(rho, tolerances) - von_neumann_entropy(marginal(rho, conditioning), tolerances)


def mutual_information(rho: DensityMatrix, tolerances: Tolerances = TOLERANCES) -> float:
    """I(S:X) = H(rho_S) - H(S|X)"""
    rho = canonical(rho)
    return von_neumann_entropy(marginal(rho, Subsystem.S), tolerances) - conditional_entropy(
        rho, Subsystem.X, tolerances
    )


def info_report(rho: DensityMatrix, tolerances: Tolerances = TOLERANCES) -> InfoReport:
    rho = canonical(rho)
    h_joint = von_neumann_entropy(rho, tolerances)
    h_s = von_neumann_entropy(marginal(rho, Subsystem.S), tolerances)
    h_x = von_neumann_entropy(marginal(rho, Subsystem.X), tolerances)
    h_cond = h_joint - h_x
    return InfoReport(
        h_joint=h_joint,
        h_marginal_S=h_s,
        h_marginal_X=h_x,
        h_cond_S_given_X=h_cond,
        mutual_info=h_s - h_cond,
    )
