"""In-Memory Repository Implementations"""
from typing import Dict, List, Optional
from uuid import UUID

from domain.entities import ProtocolRun
from domain.repositories import ChannelRepository, SimulationRepository, StateRepository
from domain.value_objects import DensityMatrix, KrausChannel


class InMemoryStateRepository(StateRepository):

    def __init__(self):
        self._storage: Dict[str, DensityMatrix] = {}

    def save(self, key: str, state: DensityMatrix) -> DensityMatrix:
        self._storage[key] = state
        return state

    def find_by_key(self, key: str) -> Optional[DensityMatrix]:
        return self._storage.get(key)

    def list_keys(self) -> List[str]:
        return sorted(self._storage)

    def delete(self, key: str) -> bool:
        return self._storage.pop(key, None) is not None


class InMemoryChannelRepository(ChannelRepository):

    def __init__(self):
        self._storage: Dict[str, KrausChannel] = {}

    def save(self, key: str, channel: KrausChannel) -> KrausChannel:
        self._storage[key] = channel
        return channel

    def find_by_key(self, key: str) -> Optional[KrausChannel]:
        return self._storage.get(key)

    def list_keys(self) -> List[str]:
        return sorted(self._storage)


class InMemorySimulationRepository(SimulationRepository):
    """In-memory implementation of SimulationRepository"""

    def __init__(self):
        self._storage: Dict[UUID, ProtocolRun] = {}

    def save(self, run: ProtocolRun) -> ProtocolRun:
        self._storage[run.run_id] = run
        return run

    def find_by_id(self, run_id: UUID) -> Optional[ProtocolRun]:
        return self._storage.get(run_id)

    def find_all(self) -> List[ProtocolRun]:
        return sorted(self._storage.values(), key=lambda r: r.created_at)

    def update(self, run: ProtocolRun) -> ProtocolRun:
        if run.run_id in self._storage:
            self._storage[run.run_id] = run
            return run
        raise ValueError("Simulation run not found")
