"""API Dependencies - repositories and service providers"""
from functools import lru_cache

from application.services import AnalysisService, SimulationService, SteadyStateService
from infrastructure.config import AppSettings
from infrastructure.repositories.in_memory_repositories import (
    InMemoryChannelRepository,
    InMemorySimulationRepository,
    InMemoryStateRepository,
)

state_repo = InMemoryStateRepository()
channel_repo = InMemoryChannelRepository()
simulation_repo = InMemorySimulationRepository()


@lru_cache
def get_settings() -> AppSettings:
    return AppSettings.from_env()


def get_analysis_service() -> AnalysisService:
    return AnalysisService(state_repo, channel_repo, get_settings().optimizer())


def get_simulation_service() -> SimulationService:
    return SimulationService(simulation_repo)


def get_steady_state_service() -> SteadyStateService:
    return SteadyStateService()
