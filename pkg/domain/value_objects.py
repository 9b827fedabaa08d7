"""Domain Value Objects"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from domain.enums import Ordering, Subsystem
from domain.errors import InvalidChannelError, InvalidDimensionsError, StateValidationError
from domain.linalg import ComplexMatrix, as_matrix, dagger, hermiticity_defect
from domain.operators import bloch_projectors
from domain.tolerances import TOLERANCES, Tolerances


def _frozen_copy(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128, copy=True)
    m.setflags(write=False)
    return m


class Violation(BaseModel):
    """A violated state invariant and how far off it is"""
    model_config = ConfigDict(frozen=True)

    invariant: str
    magnitude: float


class ValidationReport(BaseModel):
    """Outcome of checking a density matrix; never raised, only returned"""
    model_config = ConfigDict(frozen=True)

    ok: bool
    violations: List[Violation] = []
    hermiticity_defect: float
    trace: float
    min_eigenvalue: float

    def violated(self, invariant: str) -> bool:
        return any(v.invariant == invariant for v in self.violations)


class DensityMatrix(BaseModel):
    """Quantum state with explicit subsystem dimensions and tensor-order tag

    ``dims`` lists factor dimensions in the order named by ``ordering``.
    Construct through ``create`` (validated, clamped) or ``from_matrix``
    (structural checks only, used for deliberately invalid inputs).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mat: np.ndarray
    dims: Tuple[int, ...] = (2, 2)
    ordering: Ordering = Ordering.SX

    @field_validator("mat", mode="before")
    @classmethod
    def _freeze_matrix(cls, v):
        return _frozen_copy(as_matrix(v))

    # ==================== FACTORY METHODS ====================
    @staticmethod
    def from_matrix(mat, dims: Optional[Sequence[int]] = None, ordering: Ordering = Ordering.SX) -> "DensityMatrix":
        m = as_matrix(mat)
        if dims is None:
            dims = (2, 2) if m.shape[0] == 4 else (m.shape[0],)
        dims = tuple(int(d) for d in dims)
        DensityMatrix._validate_dims(m, dims)
        return DensityMatrix(mat=m, dims=dims, ordering=ordering)

    @staticmethod
    def create(
        mat,
        dims: Optional[Sequence[int]] = None,
        ordering: Ordering = Ordering.SX,
        tolerances: Tolerances = TOLERANCES,
        context: str = "state",
    ) -> "DensityMatrix":
        """Validated state; eigenvalues in [-clamp, 0) are clamped to 0 and the trace renormalized"""
        rho = DensityMatrix.from_matrix(mat, dims, ordering)
        report = rho.check(tolerances)
        if not report.ok:
            raise StateValidationError(report, context)
        if report.min_eigenvalue < 0.0:
            return rho._clamped()
        return rho

    # ==================== QUERY METHODS ====================
    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    def factor_dim(self, subsystem: Subsystem) -> int:
        if not self.is_bipartite:
            raise InvalidDimensionsError(f"state with dims {self.dims} is not bipartite")
        return self.dims[self.ordering.factors.index(subsystem)]

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def check(self, tolerances: Tolerances = TOLERANCES) -> ValidationReport:
        violations = []
        if not np.all(np.isfinite(self.mat)):
            violations.append(Violation(invariant="finite", magnitude=math.inf))
            return ValidationReport(
                ok=False, violations=violations, hermiticity_defect=math.inf, trace=math.nan, min_eigenvalue=math.nan
            )
        defect = hermiticity_defect(self.mat)
        if defect > tolerances.hermiticity:
            violations.append(Violation(invariant="hermitian", magnitude=defect))
        trace = self.trace()
        if abs(trace - 1.0) > tolerances.trace:
            violations.append(Violation(invariant="unit-trace", magnitude=abs(trace - 1.0)))
        min_eig = float(np.linalg.eigvalsh(0.5 * (self.mat + dagger(self.mat)))[0])
        if min_eig < -tolerances.positivity_clamp:
            violations.append(Violation(invariant="positive-semidefinite", magnitude=-min_eig))
        return ValidationReport(
            ok=not violations,
            violations=violations,
            hermiticity_defect=defect,
            trace=trace,
            min_eigenvalue=min_eig,
        )

    # ==================== PRIVATE METHODS ====================
    @staticmethod
    def _validate_dims(m: ComplexMatrix, dims: Tuple[int, ...]) -> None:
        if not dims or any(d < 1 for d in dims):
            raise InvalidDimensionsError(f"subsystem dimensions must be positive, got {dims}")
        if len(dims) > 2:
            raise InvalidDimensionsError(f"at most two subsystems are supported, got {dims}")
        if math.prod(dims) != m.shape[0]:
            raise InvalidDimensionsError(f"dims {dims} do not multiply to matrix dimension {m.shape[0]}")

    def _clamped(self) -> "DensityMatrix":
        values, vectors = np.linalg.eigh(0.5 * (self.mat + dagger(self.mat)))
        values = np.clip(values, 0.0, None)
        values = values / values.sum()
        mat = (vectors * values) @ vectors.conj().T
        return DensityMatrix(mat=mat, dims=self.dims, ordering=self.ordering)


class MeasurementBasis(BaseModel):
    """Rank-one projective qubit measurement along the Bloch axis (theta, phi)"""
    model_config = ConfigDict(frozen=True)

    theta: float = Field(ge=0.0, le=math.pi)
    phi: float = Field(ge=0.0, lt=2 * math.pi)

    @staticmethod
    def from_angles(theta: float, phi: float, pole_tol: float = TOLERANCES.pole) -> "MeasurementBasis":
        """Canonical representative of the measurement

        The axes n and -n give the same projector pair, so the representative
        is taken on the upper hemisphere (smallest theta), with phi in [0, pi)
        on the equator and phi = 0 at the pole.
        """
        n = np.array([
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        ])
        if n[2] < 0:
            n = -n
        canonical_theta = math.acos(min(1.0, max(-1.0, float(n[2]))))
        if math.sin(canonical_theta) < pole_tol:
            return MeasurementBasis(theta=0.0, phi=0.0)
        canonical_phi = math.atan2(n[1], n[0]) % (2 * math.pi)
        if abs(n[2]) < TOLERANCES.tie and canonical_phi >= math.pi:
            canonical_phi -= math.pi
        if canonical_phi >= 2 * math.pi:
            canonical_phi = 0.0
        return MeasurementBasis(theta=canonical_theta, phi=canonical_phi)

    @staticmethod
    def computational() -> "MeasurementBasis":
        return MeasurementBasis(theta=0.0, phi=0.0)

    def projectors(self) -> Tuple[ComplexMatrix, ComplexMatrix]:
        pair = bloch_projectors(self.theta, self.phi)
        return pair[0], pair[1]

    def is_computational(self, tolerance_deg: float = 1.0) -> bool:
        return min(self.theta, math.pi - self.theta) < math.radians(tolerance_deg)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)


class KrausChannel(BaseModel):
    """CPTP map in Kraus form"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    operators: Tuple[np.ndarray, ...]
    label: str = "channel"

    @field_validator("operators", mode="before")
    @classmethod
    def _freeze_operators(cls, v):
        return tuple(_frozen_copy(as_matrix(k)) for k in v)

    @staticmethod
    def create(operators: Sequence, label: str = "channel", tolerances: Tolerances = TOLERANCES) -> "KrausChannel":
        ops = [as_matrix(k) for k in operators]
        KrausChannel._validate_operators(ops, tolerances)
        return KrausChannel(operators=ops, label=label)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def completeness_defect(self) -> float:
        total = sum(dagger(k) @ k for k in self.operators)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    @staticmethod
    def _validate_operators(ops: List[ComplexMatrix], tolerances: Tolerances) -> None:
        if not ops:
            raise InvalidChannelError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(k.shape != (dim, dim) for k in ops):
            raise InvalidChannelError("Kraus operators must share one square shape")
        total = sum(dagger(k) @ k for k in ops)
        defect = float(np.max(np.abs(total - np.eye(dim))))
        if defect > tolerances.channel_completeness:
            raise InvalidChannelError(f"Kraus operators are not complete: max |sum K^dag K - I| = {defect:.3e}")


class ConditionedBranch(BaseModel):
    """One measurement outcome: its probability and the post-measurement joint state

    ``state`` is None for outcomes below the zero-probability threshold.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    probability: float
    state: Optional[DensityMatrix] = None

    @property
    def is_null(self) -> bool:
        return self.state is None


class OptimizerSettings(BaseModel):
    """Grid-then-simplex search over the Bloch sphere"""
    model_config = ConfigDict(frozen=True)

    theta_step_deg: float = Field(2.0, gt=0, le=90)
    phi_step_deg: float = Field(4.0, gt=0, le=180)
    refine_tol: float = Field(1e-11, gt=0)
    refine_xtol: float = Field(1e-9, gt=0)
    max_iterations: int = Field(2000, ge=1)


class OptimizerTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid_points: int
    iterations: int
    evaluations: int
    final_spread: float
    refined: bool
