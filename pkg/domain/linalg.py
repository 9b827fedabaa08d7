"""Dense complex matrix primitives

A ``ComplexMatrix`` is a square complex128 ``numpy.ndarray``. Everything here
is a pure function of its arguments; inputs are never modified.

Vectorization follows the column-stacking convention throughout:
``vec(A X B) = (B^T ⊗ A) vec(X)``.
"""
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg
from pydantic import BaseModel, ConfigDict

from domain.errors import InvalidDimensionsError, NotHermitianError
from domain.tolerances import TOLERANCES

ComplexMatrix = npt.NDArray[np.complex128]


class HermitianEigenResult(BaseModel):
    """Ascending eigenvalues and the matching orthonormal eigenvectors (columns)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(data) -> ComplexMatrix:
    """Coerce to a square complex matrix"""
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidDimensionsError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.swapaxes(m, -1, -2))


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Sequence[ComplexMatrix]) -> ComplexMatrix:
    out = np.eye(1, dtype=np.complex128)
    for f in factors:
        out = np.kron(out, f)
    return out


def partial_trace(m: ComplexMatrix, dims: Tuple[int, int], keep: int) -> ComplexMatrix:
    """Trace out one factor of a bipartite operator; ``keep`` is 0 or 1"""
    m = as_matrix(m)
    d1, d2 = dims
    if d1 * d2 != m.shape[0]:
        raise InvalidDimensionsError(f"dims {tuple(dims)} do not match matrix dimension {m.shape[0]}")
    if keep not in (0, 1):
        raise InvalidDimensionsError(f"keep must be 0 or 1, got {keep}")
    t = m.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def swap_factors(m: ComplexMatrix, dims: Tuple[int, int]) -> ComplexMatrix:
    """Reorder a bipartite operator from A⊗B to B⊗A"""
    d1, d2 = dims
    t = as_matrix(m).reshape(d1, d2, d1, d2)
    return t.transpose(1, 0, 3, 2).reshape(d1 * d2, d1 * d2)


def hermiticity_defect(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def hermitian_eig(m: ComplexMatrix, tol: float = TOLERANCES.hermiticity) -> HermitianEigenResult:
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(defect, tol)
    values, vectors = np.linalg.eigh(0.5 * (m + dagger(m)))
    return HermitianEigenResult(eigenvalues=values, eigenvectors=vectors)


def matrix_exp(m: ComplexMatrix) -> ComplexMatrix:
    """exp(m) by Padé scaling-and-squaring"""
    return scipy.linalg.expm(as_matrix(m))


def vec(m: ComplexMatrix) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> ComplexMatrix:
    return np.asarray(v).reshape(dim, dim, order="F")


def left_multiplier(a: ComplexMatrix) -> ComplexMatrix:
    """Superoperator of X -> A X"""
    return np.kron(np.eye(a.shape[0]), a)


def right_multiplier(b: ComplexMatrix) -> ComplexMatrix:
    """Superoperator of X -> X B"""
    return np.kron(b.T, np.eye(b.shape[0]))
