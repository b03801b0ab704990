"""Elliptic caustic data models."""

from dataclasses import dataclass

from ..exceptions import DomainError


@dataclass(frozen=True)
class CausticData:
    """One confocal caustic x^2/(a^2-lambda) + y^2/(b^2-lambda) = 1."""

    lambda_: float
    J: float
    k2: float
    rho: float


@dataclass(frozen=True)
class FamilyPoint:
    """An ellipse of a smooth family together with the tau-derivatives of its axes."""

    a: float
    b: float
    da: float
    db: float

    def __post_init__(self):
        if not self.a >= self.b > 0:
            raise DomainError(f"family point needs a >= b > 0, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class BetaDerivative:
    """First variation of beta along a family, with the positive-kernel integral."""

    dbeta: float
    raw_integral: float
    constant: float


@dataclass(frozen=True)
class InvariantCurveDiagnostics:
    """Reflection-angle statistics of the invariant curve with rotation number rho."""

    rho: float
    lambda_: float
    delta_mean: float
    criticality_M: float
    criticality_defect: float
    beta: float
    beta_constant_angle: float
