"""Domain Enums"""
from enum import Enum


class Subsystem(str, Enum):
    S = "S"
    X = "X"

    @property
    def other(self) -> "Subsystem":
        return Subsystem.X if self is Subsystem.S else Subsystem.S


class Ordering(str, Enum):
    """Tensor order of a bipartite state; the first factor is the slow index"""
    SX = "S⊗X"
    XS = "X⊗S"

    @property
    def factors(self) -> tuple:
        return (Subsystem.S, Subsystem.X) if self is Ordering.SX else (Subsystem.X, Subsystem.S)


class RunStatus(str, Enum):
    PENDING = "PENDING"
    RUNNING = "RUNNING"
    COMPLETED = "COMPLETED"
    FAILED = "FAILED"
