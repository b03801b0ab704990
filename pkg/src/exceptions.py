"""Error hierarchy; every error knows the CLI exit code it maps to."""

from typing import Optional, Sequence


class BilliardError(Exception):
    """Base class for all computational errors."""

    exit_code = 2

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class DomainError(BilliardError, ValueError):
    """An argument lies outside the domain of the operation."""


class AccuracyError(DomainError):
    """The caustic is too close to degenerating for reliable quadrature."""


class BracketError(DomainError):
    """A root-finding bracket shows no sign change."""

    def __init__(self, message: str, lo: float, hi: float, g_lo: float, g_hi: float):
        super().__init__(message)
        self.lo, self.hi = lo, hi
        self.g_lo, self.g_hi = g_lo, g_hi


class InfeasibleError(BilliardError):
    """The prescribed spectral data is not realised by any admissible ellipse."""


class EvaluationError(BilliardError):
    """A kernel produced a non-finite value."""

    exit_code = 3


class ConvergenceError(BilliardError):
    """An iterative method stopped before meeting its tolerance."""

    exit_code = 3

    def __init__(self, message: str, last_values: Optional[Sequence[float]] = None,
                 residual: Optional[float] = None):
        super().__init__(message)
        self.last_values = tuple(last_values) if last_values is not None else None
        self.residual = residual

    def to_dict(self) -> dict:
        data = super().to_dict()
        if self.last_values is not None:
            data["last_values"] = list(self.last_values)
        if self.residual is not None:
            data["residual"] = self.residual
        return data


class UsageError(BilliardError):
    """Malformed command line."""

    exit_code = 1
