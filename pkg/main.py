from contextlib import asynccontextmanager
from typing import List
from uuid import UUID

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from api.dependencies import get_analysis_service, get_settings, get_simulation_service, get_steady_state_service
from api.schemas import (
    # States
    CreateStateRequest, StateCreatedResponse, ValidationResponse, AnalysisResponse,
    BasisResponse, DiscordResponse, InfoResponse,
    # Ledger
    LedgerRequest, LedgerResponse,
    # Simulations
    CreateSimulationRequest, SimulationResponse,
)
from application.services import AnalysisService, SimulationService, SteadyStateService
from domain.entities import ProtocolConfig
from domain.enums import Ordering, Subsystem
from domain.errors import InputError, NumericalError
from infrastructure.config import configure_logging
from infrastructure.serialization import (
    ChannelPayload, StatePayload, channel_from_payload, channel_to_payload, parse_ordering, state_from_payload, state_to_payload,
)


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging(get_settings().log_level)
    yield


app = FastAPI(
    title="Quantum Predictive Process API",
    description="Memory, predictive power, discord and lost work of a qubit memory tracking a driven qubit",
    version="1.0.0",
    lifespan=lifespan,
)


@app.exception_handler(InputError)
async def input_error_handler(request: Request, exc: InputError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(NumericalError)
async def numerical_error_handler(request: Request, exc: NumericalError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


# ============================================================================
# HEALTH & ENUM REFERENCE ENDPOINTS
# ============================================================================

@app.get("/api/health", tags=["Health"])
def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "message": "API is running"}


@app.get("/api/enums/ordering", tags=["Enum Reference"])
def get_orderings():
    return {
        "values": {item.name: item.value for item in Ordering},
        "description": "Tensor order of a two-party state; the first factor is the slow index"
    }


@app.get("/api/enums/subsystem", tags=["Enum Reference"])
def get_subsystems():
    return {
        "values": [item.name for item in Subsystem],
        "description": "S is the driven system, X the memory that models it"
    }


# ============================================================================
# STATE ENDPOINTS
# ============================================================================

@app.post("/api/states", response_model=StateCreatedResponse, status_code=201, tags=["States"])
def create_state(
    request: CreateStateRequest,
    service: AnalysisService = Depends(get_analysis_service)
):
    """Store a state; invalid matrices are stored too and reported"""
    state = state_from_payload(request, validate=False)
    key, report = service.register_state(state, request.key)
    return StateCreatedResponse(key=key, validation=ValidationResponse(**report.model_dump()))


@app.get("/api/states", response_model=List[str], tags=["States"])
def list_states(service: AnalysisService = Depends(get_analysis_service)):
    return service.list_states()


@app.get("/api/states/{key}", response_model=StatePayload, tags=["States"])
def get_state(key: str, service: AnalysisService = Depends(get_analysis_service)):
    state = service.get_state(key)
    if state is None:
        raise HTTPException(status_code=404, detail="State not found")
    return state_to_payload(state)


@app.delete("/api/states/{key}", status_code=204, tags=["States"])
def delete_state(key: str, service: AnalysisService = Depends(get_analysis_service)):
    if not service.delete_state(key):
        raise HTTPException(status_code=404, detail="State not found")
    return Response(status_code=204)


@app.get("/api/states/{key}/validation", response_model=ValidationResponse, tags=["States"])
def validate_state(key: str, service: AnalysisService = Depends(get_analysis_service)):
    report = service.validate_state(key)
    if report is None:
        raise HTTPException(status_code=404, detail="State not found")
    return ValidationResponse(**report.model_dump())


@app.get("/api/states/{key}/analysis", response_model=AnalysisResponse, tags=["States"])
def analyze_state(
    key: str,
    beta: float = Query(1.0, gt=0),
    service: AnalysisService = Depends(get_analysis_service)
):
    """Entropies, discord on both sides and the minimal decoherence loss"""
    analysis = service.analyze_state(key, beta)
    if analysis is None:
        raise HTTPException(status_code=404, detail="State not found")
    return AnalysisResponse(
        beta=analysis.beta,
        info=InfoResponse(**analysis.info.model_dump()),
        discord_x=_discord_to_response(analysis.discord_x),
        discord_s=_discord_to_response(analysis.discord_s),
        min_decoherence_work=analysis.min_decoherence_work,
        min_decoherence_bits=analysis.min_decoherence_bits,
        min_decoherence_basis=_basis_to_response(analysis.min_decoherence_basis),
    )


@app.post("/api/states/{key}/ledger", response_model=LedgerResponse, tags=["States"])
def state_ledger(
    key: str,
    request: LedgerRequest,
    service: AnalysisService = Depends(get_analysis_service)
):
    """Work ledger of applying a channel to the memory X"""
    channel = channel_from_payload(request.channel)
    ledger = service.ledger_for_state(key, channel, request.beta, request.side)
    if ledger is None:
        raise HTTPException(status_code=404, detail="State not found")
    return LedgerResponse(
        beta=ledger.beta,
        side=ledger.side,
        w_ext_before=ledger.w_ext_before,
        w_ext_after=ledger.w_ext_after,
        w_lost=ledger.w_lost,
        w_lost_classical=ledger.w_lost_classical,
        w_lost_quantum=ledger.w_lost_quantum,
        w_lost_bits=ledger.w_lost_bits,
        w_lost_classical_bits=ledger.w_lost_classical_bits,
        w_lost_quantum_bits=ledger.w_lost_quantum_bits,
        discord_before=_discord_to_response(ledger.discord_before),
        discord_after=_discord_to_response(ledger.discord_after),
    )


# ============================================================================
# CHANNEL ENDPOINTS
# ============================================================================

@app.get("/api/channels", response_model=List[str], tags=["Channels"])
def list_channels(service: AnalysisService = Depends(get_analysis_service)):
    """Labels of channels submitted with ledger requests"""
    return service.list_channels()


@app.get("/api/channels/{label}", response_model=ChannelPayload, tags=["Channels"])
def get_channel(label: str, service: AnalysisService = Depends(get_analysis_service)):
    channel = service.get_channel(label)
    if channel is None:
        raise HTTPException(status_code=404, detail="Channel not found")
    return channel_to_payload(channel)


# ============================================================================
# SIMULATION ENDPOINTS
# ============================================================================

@app.post("/api/simulations", response_model=SimulationResponse, status_code=201, tags=["Simulations"])
def create_simulation(
    request: CreateSimulationRequest,
    service: SimulationService = Depends(get_simulation_service)
):
    """Run the update/relaxation protocol; failed runs are returned with their failing step"""
    try:
        config = ProtocolConfig.from_kdt(
            kdt=request.kdt,
            kappa=request.kappa,
            p=request.p,
            n_steps=request.n_steps,
            beta=request.beta,
            ordering=parse_ordering(request.ordering),
            update_probabilities=request.update_probabilities,
            optimizer=request.optimizer or get_settings().optimizer(),
        )
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return _run_to_response(service.run(config))


@app.get("/api/simulations", response_model=List[SimulationResponse], tags=["Simulations"])
def list_simulations(service: SimulationService = Depends(get_simulation_service)):
    return [_run_to_response(r) for r in service.get_all_runs()]


@app.get("/api/simulations/{run_id}", response_model=SimulationResponse, tags=["Simulations"])
def get_simulation(run_id: UUID, service: SimulationService = Depends(get_simulation_service)):
    run = service.get_run(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="Simulation not found")
    return _run_to_response(run)


@app.get("/api/simulations/{run_id}/csv", response_class=PlainTextResponse, tags=["Simulations"])
def get_simulation_csv(run_id: UUID, service: SimulationService = Depends(get_simulation_service)):
    run = service.get_run(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="Simulation not found")
    if not run.records:
        raise HTTPException(status_code=409, detail="Simulation has no records")
    return PlainTextResponse(service.export_csv(run_id), media_type="text/csv")


# ============================================================================
# STEADY STATE ENDPOINT
# ============================================================================

@app.get("/api/steady-state", response_model=StatePayload, tags=["Dynamics"])
def get_steady_state(
    kappa: float = Query(1.0, gt=0),
    ordering: str = Query("SX"),
    service: SteadyStateService = Depends(get_steady_state_service)
):
    """Relaxation limit of the maximally mixed state"""
    try:
        order = parse_ordering(ordering)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"Unknown ordering {ordering}")
    return state_to_payload(service.steady_state(kappa, order))


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def _basis_to_response(basis) -> BasisResponse:
    return BasisResponse(
        theta=basis.theta,
        phi=basis.phi,
        theta_deg=basis.theta_deg,
        phi_deg=basis.phi_deg,
        computational=basis.is_computational(),
    )


def _discord_to_response(result) -> DiscordResponse:
    return DiscordResponse(
        measured=result.measured,
        semiclassical_cond_entropy=result.semiclassical_cond_entropy,
        conditional_entropy=result.conditional_entropy,
        discord=result.discord,
        classical_correlations=result.classical_correlations,
        mutual_information=result.mutual_information,
        argmin_basis=_basis_to_response(result.argmin_basis),
    )


def _run_to_response(run) -> SimulationResponse:
    """Convert ProtocolRun entity to SimulationResponse"""
    return SimulationResponse(
        run_id=run.run_id,
        status=run.status,
        p=run.config.p,
        kappa=run.config.kappa,
        kdt=run.config.kdt,
        n_steps=run.config.n_steps,
        beta=run.config.beta,
        records=run.records,
        converged=run.is_converged(),
        final_state=state_to_payload(run.final_state) if run.final_state is not None else None,
        failed_step=run.failed_step,
        failure_reason=run.failure_reason,
        created_at=run.created_at,
        finished_at=run.finished_at,
    )


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
