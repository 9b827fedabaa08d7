"""Domain Entities - results, configuration and the protocol-run aggregate"""
import math
from datetime import datetime, timezone
from typing import List, Optional
from uuid import UUID, uuid4

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, model_validator

from domain.enums import Ordering, RunStatus, Subsystem
from domain.errors import ConsistencyError, ParameterDomainError
from domain.tolerances import TOLERANCES, Tolerances
from domain.value_objects import DensityMatrix, MeasurementBasis, OptimizerSettings, OptimizerTrace

LN2 = math.log(2.0)


def _now() -> datetime:
    return datetime.now(timezone.utc)


class InfoReport(BaseModel):
    """Entropies and mutual information of a bipartite state, in bits"""
    model_config = ConfigDict(frozen=True)

    h_joint: float
    h_marginal_S: float
    h_marginal_X: float
    h_cond_S_given_X: float
    mutual_info: float


class DiscordResult(BaseModel):
    """Correlations split by a projective measurement on ``measured``

    measured=X gives H(S|X^C), delta(S|X), I^C(S|X); measured=S gives the
    mirrored quantities delta(X|S), I^C(X|S).
    """
    model_config = ConfigDict(frozen=True)

    measured: Subsystem
    semiclassical_cond_entropy: float
    conditional_entropy: float
    discord: float
    classical_correlations: float
    mutual_information: float
    argmin_basis: MeasurementBasis
    optimizer_trace: OptimizerTrace


class WorkLedger(BaseModel):
    """Work bookkeeping for one local map on X, in energy units of 1/beta

    Closure: w_lost = w_lost_classical + w_lost_quantum.
    """
    model_config = ConfigDict(frozen=True)

    beta: float = Field(gt=0)
    n_qubits: int = Field(ge=1)
    side: Subsystem
    w_ext_before: float
    w_ext_after: float
    w_lost: float
    w_lost_classical: float
    w_lost_quantum: float
    discord_before: DiscordResult
    discord_after: DiscordResult

    def in_bits(self, energy: float) -> float:
        """beta W / ln 2"""
        return self.beta * energy / LN2

    @property
    def w_lost_bits(self) -> float:
        return self.in_bits(self.w_lost)

    @property
    def w_lost_classical_bits(self) -> float:
        return self.in_bits(self.w_lost_classical)

    @property
    def w_lost_quantum_bits(self) -> float:
        return self.in_bits(self.w_lost_quantum)


class Liouvillian(BaseModel):
    """Generator acting on column-stacked density matrices"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mat: np.ndarray
    kappa: float = Field(gt=0)
    dims: tuple = (2, 2)

    @property
    def system_dim(self) -> int:
        return int(math.prod(self.dims))

    def trace_defect(self) -> float:
        """max |vec(I)^dag L|: zero for a trace-preserving generator"""
        trace_row = np.eye(self.system_dim).reshape(-1, order="F")
        return float(np.max(np.abs(trace_row @ self.mat)))

    def conserved_quantities(self, rcond: float = 1e-9) -> List[np.ndarray]:
        """Orthonormal Hermitian basis of the observables A with d<A>/dt = 0; the identity lies in their span"""
        d = self.system_dim
        left = scipy.linalg.null_space(self.mat.conj().T, rcond=rcond)
        candidates = []
        for w in left.T:
            a = w.reshape(d, d, order="F")
            for h in ((a + a.conj().T) / 2, (a - a.conj().T) / 2j):
                candidates.append(np.concatenate([h.real.reshape(-1), h.imag.reshape(-1)]))
        if not candidates:
            return []
        # real coordinates keep every combination Hermitian
        u, s, _ = np.linalg.svd(np.array(candidates).T, full_matrices=False)
        basis = u[:, s > rcond * max(s[0], 1.0)]
        return [(v[: d * d] + 1j * v[d * d:]).reshape(d, d) for v in basis.T]


class StateAnalysis(BaseModel):
    """Everything ``analyze`` reports for one state"""
    model_config = ConfigDict(frozen=True)

    beta: float
    info: InfoReport
    discord_x: DiscordResult
    discord_s: DiscordResult
    min_decoherence_work: float
    min_decoherence_basis: MeasurementBasis

    @property
    def min_decoherence_bits(self) -> float:
        return self.beta * self.min_decoherence_work / LN2


class ProtocolConfig(BaseModel):
    """Parameters of the update/relaxation experiment"""
    model_config = ConfigDict(frozen=True)

    p: float = Field(0.7, ge=0.0, le=1.0)
    kappa: float = Field(1.0, gt=0.0)
    step_duration: float = Field(1.0, ge=0.0)
    n_steps: int = Field(10, ge=1)
    beta: float = Field(1.0, gt=0.0)
    n_qubits: int = Field(1, ge=1)
    optimizer: OptimizerSettings = OptimizerSettings()
    tolerances: Tolerances = TOLERANCES
    ordering: Ordering = Ordering.SX
    update_probabilities: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_update_probabilities(self) -> "ProtocolConfig":
        if self.update_probabilities is not None:
            if len(self.update_probabilities) != self.n_steps:
                raise ValueError("update_probabilities needs exactly one entry per step")
            if any(not 0.0 <= q <= 1.0 for q in self.update_probabilities):
                raise ValueError("update_probabilities must lie in [0, 1]")
        return self

    @staticmethod
    def from_kdt(kdt: float = 1.0, kappa: float = 1.0, **overrides) -> "ProtocolConfig":
        if kappa <= 0:
            raise ParameterDomainError(f"kappa must be positive, got {kappa}")
        if kdt < 0:
            raise ParameterDomainError(f"kappa * dt must be non-negative, got {kdt}")
        return ProtocolConfig(kappa=kappa, step_duration=kdt / kappa, **overrides)

    @property
    def kdt(self) -> float:
        return self.kappa * self.step_duration

    def probability_at(self, step: int) -> float:
        if self.update_probabilities is not None:
            return self.update_probabilities[step]
        return self.p


class ProtocolRecord(BaseModel):
    """One time step; field order is the CSV column order

    Informations and discords in bits, work columns as beta W / ln 2,
    angles in radians.
    """
    model_config = ConfigDict(frozen=True)

    step: int
    kt: float
    I_SX: float
    I_SXp: float
    IC_SX: float
    IC_SXp: float
    delta_SX: float
    delta_SXp: float
    delta_XS: float
    delta_XSp: float
    W_lost: float
    W_C: float
    W_Q: float
    theta_min_pre: float
    phi_min_pre: float
    theta_min_post: float
    phi_min_post: float

    def check_closure(self, tol: float = TOLERANCES.cross_check) -> None:
        eq2 = abs(self.W_lost - (self.I_SX - self.I_SXp))
        if eq2 > tol:
            raise ConsistencyError(f"step {self.step}: lost work differs from the mutual-information drop", eq2)
        eq4 = abs(self.W_C + self.W_Q - self.W_lost)
        if eq4 > tol:
            raise ConsistencyError(f"step {self.step}: classical + quantum parts do not add up", eq4)

    def max_difference(self, other: "ProtocolRecord") -> float:
        skip = {"step", "kt"}
        mine = self.model_dump(exclude=skip)
        theirs = other.model_dump(exclude=skip)
        return max(abs(mine[k] - theirs[k]) for k in mine)


class ProtocolRun(BaseModel):
    """Protocol Run Aggregate Root Entity"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    # Identity
    run_id: UUID = Field(default_factory=uuid4)

    config: ProtocolConfig
    status: RunStatus = RunStatus.PENDING
    records: List[ProtocolRecord] = []
    final_state: Optional[DensityMatrix] = None

    # Failure details
    failed_step: Optional[int] = None
    failure_reason: Optional[str] = None

    # Metadata
    created_at: datetime = Field(default_factory=_now)
    finished_at: Optional[datetime] = None

    # ==================== FACTORY METHOD ====================
    @staticmethod
    def create(config: ProtocolConfig) -> "ProtocolRun":
        return ProtocolRun(config=config)

    # ==================== STATE TRANSITION METHODS ====================
    def start(self) -> None:
        if self.status != RunStatus.PENDING:
            raise ValueError(f"Cannot start run with status {self.status.value}")
        self.status = RunStatus.RUNNING

    def append_record(self, record: ProtocolRecord) -> None:
        if self.status != RunStatus.RUNNING:
            raise ValueError(f"Cannot record steps for run with status {self.status.value}")
        if record.step != len(self.records):
            raise ValueError(f"Expected step {len(self.records)}, got {record.step}")
        self.records.append(record)

    def complete(self, final_state: DensityMatrix) -> None:
        if self.status != RunStatus.RUNNING:
            raise ValueError(f"Cannot complete run with status {self.status.value}")
        self.final_state = final_state
        self.status = RunStatus.COMPLETED
        self.finished_at = _now()

    def fail(self, step: int, reason: str) -> None:
        self.status = RunStatus.FAILED
        self.failed_step = step
        self.failure_reason = reason
        self.finished_at = _now()

    # ==================== QUERY METHODS ====================
    def is_converged(self, tol: float = 1e-6) -> bool:
        if len(self.records) < 2:
            return False
        return self.records[-1].max_difference(self.records[-2]) < tol
