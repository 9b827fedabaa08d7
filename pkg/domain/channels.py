"""Kraus channels: the damping update, local lifting, decoherence"""
import logging
from typing import Tuple

import numpy as np

from domain.enums import Subsystem
from domain.errors import InvalidDimensionsError, ParameterDomainError
from domain.linalg import dagger
from domain.states import canonical, lift
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix, KrausChannel, MeasurementBasis

logger = logging.getLogger(__name__)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel.create([np.eye(dim)], label="identity")


def update_channel(p: float = 0.7) -> KrausChannel:
    """K0 = |0><0| + sqrt(1-p)|1><1|, K1 = sqrt(p)|0><1|"""
    if not 0.0 <= p <= 1.0:
        raise ParameterDomainError(f"damping probability must lie in [0, 1], got {p}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=np.complex128)
    k1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel.create([k0, k1], label=f"update(p={p:g})")


def random_channel(dim: int, n_operators: int, rng: np.random.Generator) -> KrausChannel:
    """Random CPTP map from a random isometry V: C^d -> C^(n d)"""
    g = rng.normal(size=(n_operators * dim, dim)) + 1j * rng.normal(size=(n_operators * dim, dim))
    v, _ = np.linalg.qr(g)
    operators = [v[j * dim:(j + 1) * dim, :] for j in range(n_operators)]
    return KrausChannel.create(operators, label=f"random(d={dim}, n={n_operators})")


def apply(channel: KrausChannel, rho: DensityMatrix, tolerances: Tolerances = TOLERANCES) -> DensityMatrix:
    """rho -> sum_j K_j rho K_j^dag, validated"""
    if channel.dim != rho.dim:
        raise InvalidDimensionsError(f"channel acts on dimension {channel.dim}, state has dimension {rho.dim}")
    out = sum(k @ rho.mat @ dagger(k) for k in channel.operators)
    return DensityMatrix.create(out, dims=rho.dims, ordering=rho.ordering, tolerances=tolerances, context=channel.label)


def lift_local(channel: KrausChannel, dims: Tuple[int, int], subsystem: Subsystem = Subsystem.X) -> KrausChannel:
    """I_S ⊗ K_j for every Kraus operator (canonical S⊗X dims)"""
    lifted = [lift(k, subsystem, tuple(dims)) for k in channel.operators]
    return KrausChannel(operators=lifted, label=f"I_{subsystem.other.value}⊗{channel.label}")


def apply_local(channel: KrausChannel, rho: DensityMatrix, subsystem: Subsystem = Subsystem.X) -> DensityMatrix:
    rho = canonical(rho)
    return apply(lift_local(channel, rho.dims, subsystem), rho)


def decohere(rho: DensityMatrix, basis: MeasurementBasis, measured: Subsystem = Subsystem.X) -> DensityMatrix:
    """rho -> sum_k (I ⊗ P_k) rho (I ⊗ P_k)"""
    rho = canonical(rho)
    if rho.factor_dim(measured) != 2:
        raise InvalidDimensionsError(f"measured subsystem {measured.value} must be a qubit")
    lifted = [lift(p, measured, rho.dims) for p in basis.projectors()]
    out = sum(p @ rho.mat @ p for p in lifted)
    return DensityMatrix(mat=out, dims=rho.dims)
