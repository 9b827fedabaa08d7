"""Domain Errors

Input errors are the caller's fault (bad parameters, malformed files);
numerical errors mean a computation produced something that violates an
invariant. The CLI and the HTTP layer map the two families to distinct
exit codes / status codes.
"""
from typing import Any, Optional


class QuantumPredictionError(Exception):
    """Base class for every error raised by this package"""


# ==================== INPUT ERRORS ====================
class InputError(QuantumPredictionError, ValueError):
    pass


class InvalidDimensionsError(InputError):
    pass


class ParameterDomainError(InputError):
    pass


class InvalidChannelError(InputError):
    pass


class FileFormatError(InputError):
    pass


# ==================== NUMERICAL ERRORS ====================
class NumericalError(QuantumPredictionError, ArithmeticError):
    pass


class NotHermitianError(NumericalError):
    def __init__(self, asymmetry: float, tolerance: float):
        super().__init__(f"matrix is not Hermitian: max |M - M^dag| = {asymmetry:.3e} > {tolerance:.1e}")
        self.asymmetry = asymmetry


class StateValidationError(NumericalError):
    def __init__(self, report: Any, context: str = "state"):
        violations = "; ".join(f"{v.invariant} ({v.magnitude:.3e})" for v in report.violations)
        super().__init__(f"{context} failed validation: {violations}")
        self.report = report


class IntegratorError(NumericalError):
    def __init__(self, message: str, residuals: Optional[dict] = None):
        detail = ""
        if residuals:
            detail = " [" + ", ".join(f"{k}={v:.3e}" for k, v in residuals.items()) + "]"
        super().__init__(message + detail)
        self.residuals = residuals or {}


class ConsistencyError(NumericalError):
    def __init__(self, message: str, discrepancy: float):
        super().__init__(f"{message}: discrepancy {discrepancy:.3e}")
        self.discrepancy = discrepancy


class SteadyStateAmbiguityError(NumericalError):
    pass


class ProtocolStepError(NumericalError):
    def __init__(self, step: int, cause: Exception):
        super().__init__(f"protocol failed at step {step}: {cause}")
        self.step = step
        self.cause = cause
