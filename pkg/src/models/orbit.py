"""Periodic orbit data models."""

from dataclasses import dataclass
from math import gcd
from typing import Tuple

from .. import config
from ..exceptions import DomainError


def check_rotation_pair(p: int, q: int) -> None:
    """Validate a winding/bounce pair p/q in (0, 1/2] in lowest terms."""
    if q < 2 or p < 1:
        raise DomainError(f"need p >= 1 and q >= 2, got {p}/{q}")
    if gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not in lowest terms")
    if 2 * p > q:
        raise DomainError(f"rotation number {p}/{q} exceeds 1/2")


@dataclass(frozen=True)
class OrbitConfig:
    """Settings of the perimeter-maximising coordinate ascent."""

    max_iters: int = config.ORBIT_MAX_ITERS
    grad_tol: float = config.ORBIT_GRAD_TOL
    n_restarts: int = config.ORBIT_RESTARTS
    seed: int = config.ORBIT_SEED

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise DomainError(f"grad_tol must be positive, got {self.grad_tol}")
        if self.max_iters < 1 or self.n_restarts < 0:
            raise DomainError("max_iters must be >= 1 and n_restarts >= 0")


@dataclass(frozen=True)
class PeriodicOrbit:
    """A (p, q) billiard polygon given by the normal angles of its vertices."""

    p: int
    q: int
    angles: Tuple[float, ...]
    perimeter: float
    residual: float
    gradient: float
    converged: bool
    sweeps: int
    history: Tuple[float, ...] = ()

    @property
    def beta(self) -> float:
        return -self.perimeter / self.q


@dataclass(frozen=True)
class PonceletSpread:
    """Closure statistics of caustic-tangent polygons from several starting points."""

    lambda_: float
    perimeter: float
    spread: float
    closure_residual: float
