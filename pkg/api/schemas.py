"""API Schemas - Request and Response DTOs"""
from datetime import datetime
from typing import List, Optional
from uuid import UUID

from pydantic import BaseModel, Field

from domain.entities import ProtocolRecord
from domain.enums import RunStatus, Subsystem
from domain.value_objects import OptimizerSettings
from infrastructure.serialization import ChannelPayload, StatePayload


# ============================================================================
# STATE SCHEMAS
# ============================================================================

class CreateStateRequest(StatePayload):
    """State document plus an optional storage key"""
    key: Optional[str] = Field(None, min_length=1, max_length=64)


class ViolationResponse(BaseModel):
    invariant: str
    magnitude: float


class ValidationResponse(BaseModel):
    ok: bool
    violations: List[ViolationResponse] = []
    hermiticity_defect: float
    trace: float
    min_eigenvalue: float


class StateCreatedResponse(BaseModel):
    key: str
    validation: ValidationResponse


class BasisResponse(BaseModel):
    """Measurement axis; angles in radians and degrees"""
    theta: float
    phi: float
    theta_deg: float
    phi_deg: float
    computational: bool


class DiscordResponse(BaseModel):
    measured: Subsystem
    semiclassical_cond_entropy: float
    conditional_entropy: float
    discord: float
    classical_correlations: float
    mutual_information: float
    argmin_basis: BasisResponse


class InfoResponse(BaseModel):
    h_joint: float
    h_marginal_S: float
    h_marginal_X: float
    h_cond_S_given_X: float
    mutual_info: float


class AnalysisResponse(BaseModel):
    """Entropies and discords in bits; work in units of 1/beta"""
    beta: float
    info: InfoResponse
    discord_x: DiscordResponse
    discord_s: DiscordResponse
    min_decoherence_work: float
    min_decoherence_bits: float
    min_decoherence_basis: BasisResponse


# ============================================================================
# LEDGER SCHEMAS
# ============================================================================

class LedgerRequest(BaseModel):
    """Channel applied to X, with the measurement side for the split"""
    channel: ChannelPayload
    beta: float = Field(1.0, gt=0)
    side: Subsystem = Subsystem.X


class LedgerResponse(BaseModel):
    beta: float
    side: Subsystem
    w_ext_before: float
    w_ext_after: float
    w_lost: float
    w_lost_classical: float
    w_lost_quantum: float
    w_lost_bits: float
    w_lost_classical_bits: float
    w_lost_quantum_bits: float
    discord_before: DiscordResponse
    discord_after: DiscordResponse


# ============================================================================
# SIMULATION SCHEMAS
# ============================================================================

class CreateSimulationRequest(BaseModel):
    """Protocol parameters; kdt is kappa times the relaxation time per step"""
    p: float = Field(0.7, ge=0.0, le=1.0)
    kappa: float = Field(1.0, gt=0.0)
    kdt: float = Field(1.0, ge=0.0)
    n_steps: int = Field(10, ge=1, le=200)
    beta: float = Field(1.0, gt=0.0)
    ordering: str = Field("SX", description="SX or XS; tensor order of the returned final state")
    update_probabilities: Optional[List[float]] = None
    optimizer: Optional[OptimizerSettings] = None


class SimulationResponse(BaseModel):
    run_id: UUID
    status: RunStatus
    p: float
    kappa: float
    kdt: float
    n_steps: int
    beta: float
    records: List[ProtocolRecord]
    converged: bool = False
    final_state: Optional[StatePayload] = None
    failed_step: Optional[int] = None
    failure_reason: Optional[str] = None
    created_at: datetime
    finished_at: Optional[datetime] = None
