"""
Unified exception definitions for hardydiv.

All custom exceptions inherit from HardyDivError for easy catching.
"""

from typing import Any, Optional, Sequence


class HardyDivError(Exception):
    """Base exception for all hardydiv errors."""

    def __init__(
        self,
        message: str,
        *,
        code: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.code = code or "HARDYDIV_ERROR"
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Convert to dict for logging/serialization."""
        return {
            "error": self.code,
            "message": self.message,
            "details": self.details,
        }


class ConfigurationError(HardyDivError):
    """Configuration-related errors."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="CONFIG_ERROR", **kwargs)


class DomainError(HardyDivError):
    """A parameter lies outside the domain of the operation."""

    def __init__(self, message: str, *, parameter: Optional[str] = None, **kwargs):
        details = kwargs.pop("details", {})
        if parameter is not None:
            details["parameter"] = parameter
        super().__init__(message, code="DOMAIN_ERROR", details=details, **kwargs)
        self.parameter = parameter


class InadmissibleParameterError(DomainError):
    """Weight parameters for which the geometric ratio r is not below 1."""

    def __init__(self, message: str, *, ratio: float, **kwargs):
        details = kwargs.pop("details", {})
        details["ratio"] = ratio
        super().__init__(message, details=details, **kwargs)
        self.code = "INADMISSIBLE_PARAMETER"
        self.ratio = ratio


class DataError(HardyDivError):
    """Invalid input data (non-positive weights, negative terms, malformed tables)."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="DATA_ERROR", **kwargs)


class PreconditionError(HardyDivError):
    """Input violates a precondition, e.g. a nonzero mean."""

    def __init__(self, message: str, *, integral: Optional[float] = None, **kwargs):
        details = kwargs.pop("details", {})
        if integral is not None:
            details["integral"] = integral
        super().__init__(message, code="PRECONDITION_FAILED", details=details, **kwargs)
        self.integral = integral


class TailMassError(HardyDivError):
    """Grid function carries mass outside the truncated partition."""

    def __init__(self, message: str, *, mass: float, **kwargs):
        details = kwargs.pop("details", {})
        details["mass"] = mass
        super().__init__(message, code="TAIL_MASS", details=details, **kwargs)
        self.mass = mass


class DegenerateInputError(HardyDivError):
    """Input makes a measured ratio undefined (zero denominator)."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="DEGENERATE_INPUT", **kwargs)


class ShapeError(HardyDivError):
    """Fields or functions live on mismatching grids."""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, code="SHAPE_MISMATCH", **kwargs)


class ConvergenceError(HardyDivError):
    """Iterative solver stagnated or hit its iteration cap."""

    def __init__(
        self,
        message: str,
        *,
        residuals: Sequence[float] = (),
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        history = [float(r) for r in residuals]
        details["iterations"] = len(history)
        details["last_residual"] = history[-1] if history else None
        super().__init__(message, code="CONVERGENCE_FAILED", details=details, **kwargs)
        self.residuals = history


class InvariantViolationError(HardyDivError):
    """Internal accounting invariant broken."""

    def __init__(self, message: str, *, invariant: str, **kwargs):
        details = kwargs.pop("details", {})
        details["invariant"] = invariant
        super().__init__(message, code="INVARIANT_VIOLATION", details=details, **kwargs)
        self.invariant = invariant
