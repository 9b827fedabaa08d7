"""Named qubit operators

|0> is the ground state: sigma_minus = |0><1| lowers |1> to |0>. Functions
return fresh arrays so callers may modify them.
"""
import numpy as np

from domain.linalg import ComplexMatrix


def identity(dim: int = 2) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def pauli_x() -> ComplexMatrix:
    return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def pauli_z() -> ComplexMatrix:
    return np.array([[1, 0], [0, -1]], dtype=np.complex128)


def sigma_minus() -> ComplexMatrix:
    return np.array([[0, 1], [0, 0]], dtype=np.complex128)


def sigma_plus() -> ComplexMatrix:
    return np.array([[0, 0], [1, 0]], dtype=np.complex128)


def ket(index: int, dim: int = 2) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def ket_plus() -> np.ndarray:
    return np.array([1, 1], dtype=np.complex128) / np.sqrt(2)


def ket_minus() -> np.ndarray:
    return np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


def projector(v: np.ndarray) -> ComplexMatrix:
    v = np.asarray(v, dtype=np.complex128)
    return np.outer(v, v.conj())


def bloch_projectors(theta, phi) -> np.ndarray:
    """Projector pairs (I ± n.sigma)/2 for arrays of Bloch angles

    Returns shape ``theta.shape + (2, 2, 2)``; axis -3 is the outcome,
    0 for +n and 1 for -n.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    return axis_projectors(n)


def axis_projectors(n) -> np.ndarray:
    """Same as ``bloch_projectors`` for unit vectors n of shape (..., 3)"""
    n = np.asarray(n, dtype=float)
    n_sigma = np.empty(n.shape[:-1] + (2, 2), dtype=np.complex128)
    n_sigma[..., 0, 0] = n[..., 2]
    n_sigma[..., 0, 1] = n[..., 0] - 1j * n[..., 1]
    n_sigma[..., 1, 0] = n[..., 0] + 1j * n[..., 1]
    n_sigma[..., 1, 1] = -n[..., 2]
    eye = np.eye(2, dtype=np.complex128)
    return np.stack([(eye + n_sigma) / 2, (eye - n_sigma) / 2], axis=-3)
