"""Cascaded master equation for the system S driving the memory X

    d rho / dt = -i[H, rho] + D[C] rho
    H = i kappa sigma_x^X (sigma_-^S - sigma_+^S)
    C = sqrt(2 kappa) (sigma_x^X + sigma_-^S)

with D[O] rho = O rho O^dag - {O^dag O, rho}/2. Operators are written in the
canonical S⊗X order and act on column-stacked density matrices.

The generator conserves <sigma_x^X>, so its zero eigenspace is two-dimensional
and the relaxation limit depends on that expectation in the initial state.
"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg

from domain import operators as ops
from domain.entities import Liouvillian
from domain.errors import ConsistencyError, IntegratorError, ParameterDomainError, SteadyStateAmbiguityError
from domain.linalg import ComplexMatrix, dagger, hermiticity_defect, kron, left_multiplier, matrix_exp, right_multiplier, unvec, vec
from domain.states import canonical, maximally_mixed
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix

logger = logging.getLogger(__name__)

DIMS = (2, 2)


def _check_kappa(kappa: float) -> None:
    if not kappa > 0:
        raise ParameterDomainError(f"kappa must be positive, got {kappa}")


# ==================== OPERATORS ====================
def cascaded_hamiltonian(kappa: float = 1.0) -> ComplexMatrix:
    _check_kappa(kappa)
    return 1j * kappa * kron(ops.sigma_minus() - ops.sigma_plus(), ops.pauli_x())


def cascaded_collapse(kappa: float = 1.0) -> ComplexMatrix:
    _check_kappa(kappa)
    return np.sqrt(2 * kappa) * (kron(ops.identity(), ops.pauli_x()) + kron(ops.sigma_minus(), ops.identity()))


# ==================== SUPEROPERATORS ====================
def commutator_superoperator(h: ComplexMatrix) -> ComplexMatrix:
    """rho -> -i[H, rho]"""
    return -1j * (left_multiplier(h) - right_multiplier(h))


def dissipator_superoperator(c: ComplexMatrix) -> ComplexMatrix:
    """rho -> C rho C^dag - {C^dag C, rho}/2"""
    cdc = dagger(c) @ c
    return np.kron(c.conj(), c) - 0.5 * left_multiplier(cdc) - 0.5 * right_multiplier(cdc)


def apply_generator(rho: ComplexMatrix, h: ComplexMatrix, c: ComplexMatrix) -> ComplexMatrix:
    """Right-hand side of the master equation in matrix form"""
    cdc = dagger(c) @ c
    return -1j * (h @ rho - rho @ h) + c @ rho @ dagger(c) - 0.5 * (cdc @ rho + rho @ cdc)


def build_liouvillian(kappa: float = 1.0, tolerances: Tolerances = TOLERANCES) -> Liouvillian:
    h = cascaded_hamiltonian(kappa)
    c = cascaded_collapse(kappa)
    generator = Liouvillian(
        mat=commutator_superoperator(h) + dissipator_superoperator(c),
        kappa=kappa,
        dims=DIMS,
    )
    defect = generator.trace_defect()
    if defect > tolerances.trace:
        raise ConsistencyError("generator does not preserve the trace", defect)
    return generator


def liouvillian_spectrum(generator: Liouvillian) -> np.ndarray:
    """Eigenvalues, slowest-decaying first"""
    eigenvalues = np.linalg.eigvals(generator.mat)
    return eigenvalues[np.argsort(-eigenvalues.real, kind="stable")]


# ==================== PROPAGATION ====================
def propagator(generator: Liouvillian, duration: float) -> ComplexMatrix:
    """exp(L t) as a superoperator"""
    if duration < 0:
        raise ParameterDomainError(f"duration must be non-negative, got {duration}")
    return matrix_exp(generator.mat * duration)


def evolve(rho: DensityMatrix, superoperator: ComplexMatrix, tolerances: Tolerances = TOLERANCES) -> DensityMatrix:
    """Apply a precomputed propagator and validate the result"""
    rho = canonical(rho)
    out = unvec(superoperator @ vec(rho.mat), rho.dim)
    defect = hermiticity_defect(out)
    trace_error = abs(float(np.real(np.trace(out))) - 1.0)
    hermitian = 0.5 * (out + dagger(out))
    min_eig = float(np.linalg.eigvalsh(hermitian)[0])
    if defect > tolerances.hermiticity or trace_error > tolerances.trace or min_eig < -tolerances.positivity_clamp:
        raise IntegratorError(
            "propagated state is not a density matrix",
            {"hermiticity": defect, "trace": trace_error, "min_eigenvalue": min_eig},
        )
    return DensityMatrix.create(hermitian, dims=rho.dims, tolerances=tolerances, context="propagated state")


def propagate(
    rho: DensityMatrix, generator: Liouvillian, duration: float, tolerances: Tolerances = TOLERANCES
) -> DensityMatrix:
    """rho(t + duration) = unvec(exp(L duration) vec(rho))"""
    if duration == 0:
        return canonical(rho)
    return evolve(rho, propagator(generator, duration), tolerances)


# ==================== FIXED POINTS ====================
def fixed_point(
    generator: ComplexMatrix,
    reference: DensityMatrix,
    tolerances: Tolerances = TOLERANCES,
    label: str = "steady state",
) -> DensityMatrix:
    """Projection of ``reference`` onto ker(generator) along its left kernel

    For a generator of a semigroup this is the long-time limit of
    ``reference``; for (M - 1) with M a one-period map it is the periodic
    limit.
    """
    right = scipy.linalg.null_space(generator, rcond=tolerances.null_space)
    left = scipy.linalg.null_space(generator.conj().T, rcond=tolerances.null_space)
    logger.debug("%s: right kernel dim %d, left kernel dim %d", label, right.shape[1], left.shape[1])
    if right.shape[1] == 0 or right.shape[1] != left.shape[1]:
        raise SteadyStateAmbiguityError(
            f"{label}: kernel dimensions {right.shape[1]} (right) and {left.shape[1]} (left) do not define a projection"
        )
    overlap = left.conj().T @ right
    if np.linalg.cond(overlap) > 1.0 / tolerances.null_space:
        raise SteadyStateAmbiguityError(f"{label}: kernel projection is ill-conditioned")
    x = right @ np.linalg.solve(overlap, left.conj().T @ vec(canonical(reference).mat))

    d = reference.dim
    m = unvec(x, d)
    m = 0.5 * (m + dagger(m))
    m = m / np.real(np.trace(m))
    residual = float(np.linalg.norm(generator @ vec(m)))
    if residual > tolerances.steady_state_residual:
        raise IntegratorError(f"{label} is not stationary", {"residual": residual})
    return DensityMatrix.create(m, dims=canonical(reference).dims, tolerances=tolerances, context=label)


def steady_state(
    generator: Liouvillian, reference: Optional[DensityMatrix] = None, tolerances: Tolerances = TOLERANCES
) -> DensityMatrix:
    """Relaxation limit of ``reference`` (default: the maximally mixed state)

    With the default reference this is the state with <sigma_x^X> = 0:
    diagonal (5/18, 5/18, 2/9, 2/9) and every anti-diagonal entry -1/9
    in S⊗X order.
    """
    reference = reference if reference is not None else maximally_mixed(generator.dims)
    return fixed_point(generator.mat, reference, tolerances)
