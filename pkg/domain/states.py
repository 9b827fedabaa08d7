"""States and projective qubit measurements

Bipartite computations run in the canonical S⊗X order. Functions that take
a bipartite state bring it to canonical order first, so states tagged X⊗S
are accepted everywhere.
"""
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.stats import unitary_group

from domain import operators as ops
from domain.enums import Ordering, Subsystem
from domain.errors import InvalidDimensionsError, ParameterDomainError
from domain.linalg import ComplexMatrix, kron, partial_trace, swap_factors
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import ConditionedBranch, DensityMatrix, MeasurementBasis, ValidationReport

logger = logging.getLogger(__name__)

_INDEX = {Subsystem.S: 0, Subsystem.X: 1}


def validate(rho: DensityMatrix, tolerances: Tolerances = TOLERANCES) -> ValidationReport:
    """Check hermiticity, unit trace and positivity; reports, never raises"""
    return rho.check(tolerances)


# ==================== ORDERING ====================
def reorder(rho: DensityMatrix, ordering: Ordering) -> DensityMatrix:
    if rho.ordering is ordering or not rho.is_bipartite:
        return rho
    d1, d2 = rho.dims
    return DensityMatrix(mat=swap_factors(rho.mat, (d1, d2)), dims=(d2, d1), ordering=ordering)


def canonical(rho: DensityMatrix) -> DensityMatrix:
    if not rho.is_bipartite:
        raise InvalidDimensionsError(f"expected a bipartite state, got dims {rho.dims}")
    return reorder(rho, Ordering.SX)


def published_layout(rho: DensityMatrix) -> ComplexMatrix:
    """Two-qubit matrix with rows/columns in the order the relaxation steady state is usually printed

    That order is X⊗S with both qubits listed from |1> down to |0>, i.e. the
    basis |11>, |10>, |01>, |00> of X⊗S. Under it the steady state reads
    rho11 = rho33 = 2/9 and rho22 = rho44 = 5/18, and the damping update moves
    population from index 1 to 3 and from 2 to 4.
    """
    xs = reorder(canonical(rho), Ordering.XS)
    if xs.dims != (2, 2):
        raise InvalidDimensionsError("published layout is defined for two qubits only")
    order = [3, 2, 1, 0]
    return xs.mat[np.ix_(order, order)]


# ==================== NAMED STATES ====================
def initial_state() -> DensityMatrix:
    """|0><0|_S ⊗ (|+><+| + |-><-|)/2 = |0><0|_S ⊗ I/2"""
    rho_x = (ops.projector(ops.ket_plus()) + ops.projector(ops.ket_minus())) / 2
    return DensityMatrix(mat=kron(ops.projector(ops.ket(0)), rho_x), dims=(2, 2))


def maximally_mixed(dims: Tuple[int, ...] = (2, 2)) -> DensityMatrix:
    d = int(np.prod(dims))
    return DensityMatrix(mat=np.eye(d) / d, dims=tuple(dims))


def product_state(rho_s: ComplexMatrix, rho_x: ComplexMatrix) -> DensityMatrix:
    rho_s = np.asarray(rho_s)
    rho_x = np.asarray(rho_x)
    return DensityMatrix.create(kron(rho_s, rho_x), dims=(rho_s.shape[0], rho_x.shape[0]))


def bell_state() -> DensityMatrix:
    """|Phi+> = (|00> + |11>)/sqrt(2)"""
    psi = (np.kron(ops.ket(0), ops.ket(0)) + np.kron(ops.ket(1), ops.ket(1))) / np.sqrt(2)
    return DensityMatrix(mat=ops.projector(psi), dims=(2, 2))


def classical_copy_state() -> DensityMatrix:
    """(|00><00| + |11><11|)/2"""
    return DensityMatrix(mat=np.diag([0.5, 0, 0, 0.5]), dims=(2, 2))


def random_density_matrix(dims: Tuple[int, ...], rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Hilbert-Schmidt (rank = dim) or induced random state from a Ginibre matrix"""
    d = int(np.prod(dims))
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return DensityMatrix.create(m / np.trace(m).real, dims=dims)


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_local_unitary(dims: Tuple[int, int], rng: np.random.Generator) -> ComplexMatrix:
    return kron(random_unitary(dims[0], rng), random_unitary(dims[1], rng))


# ==================== MARGINALS ====================
def marginal(rho: DensityMatrix, subsystem: Subsystem) -> DensityMatrix:
    rho = canonical(rho)
    reduced = partial_trace(rho.mat, rho.dims, keep=_INDEX[subsystem])
    return DensityMatrix(mat=reduced, dims=(reduced.shape[0],))


def is_x_state(rho: DensityMatrix, tol: float = TOLERANCES.x_state) -> bool:
    """Only diagonal and anti-diagonal entries are non-zero (two qubits, canonical order)"""
    rho = canonical(rho)
    if rho.dims != (2, 2):
        return False
    mask = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))
    return bool(np.max(np.abs(rho.mat[~mask])) <= tol)


# ==================== MEASUREMENTS ====================
def projectors(basis: MeasurementBasis) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """(P+, P-) = ((I + n.sigma)/2, (I - n.sigma)/2)"""
    return basis.projectors()


def lift(op: ComplexMatrix, subsystem: Subsystem, dims: Tuple[int, int]) -> ComplexMatrix:
    """Embed a local operator into the canonical S⊗X space"""
    d_s, d_x = dims
    if subsystem is Subsystem.X:
        if op.shape[0] != d_x:
            raise InvalidDimensionsError(f"operator of dimension {op.shape[0]} does not act on X (dim {d_x})")
        return kron(np.eye(d_s), op)
    if op.shape[0] != d_s:
        raise InvalidDimensionsError(f"operator of dimension {op.shape[0]} does not act on S (dim {d_s})")
    return kron(op, np.eye(d_x))


def conditioned_state(
    rho: DensityMatrix,
    basis: MeasurementBasis,
    measured: Subsystem = Subsystem.X,
    outcome: int = 0,
    tolerances: Tolerances = TOLERANCES,
) -> ConditionedBranch:
    """p_k and rho_k = (I ⊗ P_k) rho (I ⊗ P_k) / p_k for outcome k in {0 (+n), 1 (-n)}"""
    if outcome not in (0, 1):
        raise ParameterDomainError(f"outcome must be 0 or 1, got {outcome}")
    rho = canonical(rho)
    if rho.factor_dim(measured) != 2:
        raise InvalidDimensionsError(f"measured subsystem {measured.value} must be a qubit")
    p_k = lift(projectors(basis)[outcome], measured, rho.dims)
    unnormalized = p_k @ rho.mat @ p_k
    probability = float(np.real(np.trace(unnormalized)))
    if probability <= tolerances.zero_probability:
        logger.debug("outcome %d has probability %.3e; returning null branch", outcome, probability)
        return ConditionedBranch(probability=max(probability, 0.0))
    return ConditionedBranch(
        probability=probability,
        state=DensityMatrix(mat=unnormalized / probability, dims=rho.dims),
    )
