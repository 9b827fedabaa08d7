"""Domain Repository Interfaces"""
from abc import ABC, abstractmethod
from typing import List, Optional
from uuid import UUID

from domain.entities import ProtocolRun
from domain.value_objects import DensityMatrix, KrausChannel


class StateRepository(ABC):
    """Named density matrices"""

    @abstractmethod
    def save(self, key: str, state: DensityMatrix) -> DensityMatrix:
        pass

    @abstractmethod
    def find_by_key(self, key: str) -> Optional[DensityMatrix]:
        pass

    @abstractmethod
    def list_keys(self) -> List[str]:
        pass

    @abstractmethod
    def delete(self, key: str) -> bool:
        pass


class ChannelRepository(ABC):
    """Named Kraus channels"""

    @abstractmethod
    def save(self, key: str, channel: KrausChannel) -> KrausChannel:
        pass

    @abstractmethod
    def find_by_key(self, key: str) -> Optional[KrausChannel]:
        pass

    @abstractmethod
    def list_keys(self) -> List[str]:
        pass


class SimulationRepository(ABC):
    """Repository interface for the ProtocolRun aggregate"""

    @abstractmethod
    def save(self, run: ProtocolRun) -> ProtocolRun:
        pass

    @abstractmethod
    def find_by_id(self, run_id: UUID) -> Optional[ProtocolRun]:
        pass

    @abstractmethod
    def find_all(self) -> List[ProtocolRun]:
        pass

    @abstractmethod
    def update(self, run: ProtocolRun) -> ProtocolRun:
        pass
