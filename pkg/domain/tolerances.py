"""Numerical tolerances, in one place"""
from pydantic import BaseModel, ConfigDict, Field


class Tolerances(BaseModel):
    """Every threshold the numerics compare against"""
    model_config = ConfigDict(frozen=True)

    hermiticity: float = Field(1e-10, gt=0)
    trace: float = Field(1e-10, gt=0)
    positivity_clamp: float = Field(1e-9, gt=0)
    entropy_floor: float = Field(1e-12, gt=0)
    zero_probability: float = Field(1e-12, gt=0)
    channel_completeness: float = Field(1e-10, gt=0)
    cross_check: float = Field(1e-8, gt=0)
    marginal_invariance: float = Field(1e-10, gt=0)
    x_state: float = Field(1e-10, gt=0)
    pole: float = Field(1e-9, gt=0)
    null_space: float = Field(1e-9, gt=0)
    steady_state_residual: float = Field(1e-9, gt=0)
    tie: float = Field(1e-12, gt=0)


TOLERANCES = Tolerances()
