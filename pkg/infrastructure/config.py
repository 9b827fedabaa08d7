"""Runtime configuration and logging setup"""
import logging
import os
import sys
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from domain.value_objects import OptimizerSettings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
ENV_PREFIX = "QPP_"


class AppSettings(BaseModel):
    """Settings read from QPP_* environment variables; CLI flags override them"""
    model_config = ConfigDict(frozen=True)

    log_level: str = "WARNING"
    theta_step_deg: float = Field(2.0, gt=0, le=90)
    phi_step_deg: float = Field(4.0, gt=0, le=180)
    refine_tol: float = Field(1e-11, gt=0)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        v = v.upper()
        if not isinstance(logging.getLevelName(v), int):
            raise ValueError(f"unknown log level {v}")
        return v

    @staticmethod
    def from_env(environ: Optional[Mapping[str, str]] = None) -> "AppSettings":
        environ = os.environ if environ is None else environ
        values = {}
        for field in AppSettings.model_fields:
            raw = environ.get(ENV_PREFIX + field.upper())
            if raw is not None:
                values[field] = raw
        return AppSettings(**values)

    def optimizer(self) -> OptimizerSettings:
        return OptimizerSettings(
            theta_step_deg=self.theta_step_deg,
            phi_step_deg=self.phi_step_deg,
            refine_tol=self.refine_tol,
        )


def configure_logging(level: str = "WARNING") -> None:
    """One stderr handler on the root logger; stdout stays reserved for data"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level.upper())
