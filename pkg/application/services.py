"""Application Services - use cases over states, channels and protocol runs"""
import logging
from typing import List, Optional, Tuple
from uuid import UUID, uuid4

from domain.channels import apply_local
from domain.discord import discord
from domain.dynamics import build_liouvillian, steady_state
from domain.entities import ProtocolConfig, ProtocolRun, StateAnalysis, WorkLedger
from domain.enums import Ordering, Subsystem
from domain.information import info_report
from domain.protocol import execute, periodic_steady_state
from domain.repositories import ChannelRepository, SimulationRepository, StateRepository
from domain.states import reorder, validate
from domain.thermo import lost_work_decomposition, min_decoherence_lost_work
from domain.value_objects import DensityMatrix, KrausChannel, OptimizerSettings, ValidationReport
from infrastructure.csv_export import emit_csv

logger = logging.getLogger(__name__)


class AnalysisService:
    """Correlation and work analysis of stored or supplied states"""

    def __init__(
        self,
        state_repo: StateRepository,
        channel_repo: Optional[ChannelRepository] = None,
        settings: Optional[OptimizerSettings] = None,
    ):
        self.state_repo = state_repo
        self.channel_repo = channel_repo
        self.settings = settings or OptimizerSettings()

    # ==================== STORAGE ====================
    def register_state(self, state: DensityMatrix, key: Optional[str] = None) -> Tuple[str, ValidationReport]:
        """Stores the state as given; invalid states are kept so they can be inspected"""
        key = key or uuid4().hex
        self.state_repo.save(key, state)
        report = validate(state)
        logger.info("stored state %s (valid=%s)", key, report.ok)
        return key, report

    def get_state(self, key: str) -> Optional[DensityMatrix]:
        return self.state_repo.find_by_key(key)

    def list_states(self) -> List[str]:
        return self.state_repo.list_keys()

    def delete_state(self, key: str) -> bool:
        deleted = self.state_repo.delete(key)
        if deleted:
            logger.info("deleted state %s", key)
        return deleted

    def get_channel(self, label: str) -> Optional[KrausChannel]:
        if self.channel_repo is None:
            return None
        return self.channel_repo.find_by_key(label)

    def list_channels(self) -> List[str]:
        """Labels of the channels used in ledgers so far"""
        if self.channel_repo is None:
            return []
        return self.channel_repo.list_keys()

    def validate_state(self, key: str) -> Optional[ValidationReport]:
        state = self.state_repo.find_by_key(key)
        if state is None:
            return None
        return validate(state)

    # ==================== ANALYSIS ====================
    def analyze(self, state: DensityMatrix, beta: float = 1.0) -> StateAnalysis:
        state = DensityMatrix.create(state.mat, state.dims, state.ordering, context="analyzed state")
        work, basis = min_decoherence_lost_work(state, beta, self.settings)
        return StateAnalysis(
            beta=beta,
            info=info_report(state),
            discord_x=discord(state, Subsystem.X, self.settings),
            discord_s=discord(state, Subsystem.S, self.settings),
            min_decoherence_work=work,
            min_decoherence_basis=basis,
        )

    def analyze_state(self, key: str, beta: float = 1.0) -> Optional[StateAnalysis]:
        state = self.state_repo.find_by_key(key)
        if state is None:
            return None
        return self.analyze(state, beta)

    def ledger(
        self, state: DensityMatrix, channel: KrausChannel, beta: float = 1.0, side: Subsystem = Subsystem.X
    ) -> WorkLedger:
        """Work ledger of applying ``channel`` to X"""
        before = DensityMatrix.create(state.mat, state.dims, state.ordering, context="state before channel")
        after = apply_local(channel, before, Subsystem.X)
        return lost_work_decomposition(before, after, beta, side, self.settings)

    def ledger_for_state(
        self, key: str, channel: KrausChannel, beta: float = 1.0, side: Subsystem = Subsystem.X
    ) -> Optional[WorkLedger]:
        state = self.state_repo.find_by_key(key)
        if state is None:
            return None
        if self.channel_repo is not None:
            self.channel_repo.save(channel.label, channel)
        return self.ledger(state, channel, beta, side)


class SimulationService:
    """Runs and stores update/relaxation experiments"""

    def __init__(self, repository: SimulationRepository):
        self.repository = repository

    def run(self, config: ProtocolConfig) -> ProtocolRun:
        run = self.repository.save(ProtocolRun.create(config))
        logger.info("running protocol %s: p=%g kappa*dt=%g steps=%d", run.run_id, config.p, config.kdt, config.n_steps)
        execute(run)
        return self.repository.update(run)

    def get_run(self, run_id: UUID) -> Optional[ProtocolRun]:
        return self.repository.find_by_id(run_id)

    def get_all_runs(self) -> List[ProtocolRun]:
        return self.repository.find_all()

    def export_csv(self, run_id: UUID) -> Optional[str]:
        run = self.repository.find_by_id(run_id)
        if run is None:
            return None
        return emit_csv(run.records)


class SteadyStateService:

    def steady_state(self, kappa: float = 1.0, ordering: Ordering = Ordering.SX) -> DensityMatrix:
        return reorder(steady_state(build_liouvillian(kappa)), ordering)

    def periodic_steady_state(self, config: ProtocolConfig) -> DensityMatrix:
        return reorder(periodic_steady_state(config), config.ordering)
