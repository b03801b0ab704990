"""Tolerance data model."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError

MIN_REL = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class Tolerance:
    """Convergence thresholds shared by quadrature and root finding."""

    rel: float = 1e-12
    abs: float = 1e-14
    max_refinements: int = 20

    def __post_init__(self):
        if not self.rel >= MIN_REL:
            raise DomainError(f"relative tolerance {self.rel} is below 16 machine epsilons")
        if not self.abs >= 0:
            raise DomainError(f"absolute tolerance must be non-negative, got {self.abs}")
        if not 1 <= self.max_refinements <= 30:
            raise DomainError(f"max_refinements must lie in [1, 30], got {self.max_refinements}")

    def bound(self, scale: float) -> float:
        """Allowed error for a quantity of magnitude `scale`."""
        return self.abs + self.rel * abs(scale)
