"""Ellipse family and rigidity result data models."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from .. import config
from ..exceptions import DomainError
from .domain import Ellipse

ISO_BETA = "iso_beta"
CONST_PERIMETER = "const_perimeter"


@dataclass(frozen=True)
class FamilySpec:
    """A one-parameter ellipse family sampled on an eccentricity grid."""

    kind: str
    grid: Tuple[float, ...]
    rho0: Optional[float] = None
    c: Optional[float] = None
    perimeter: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(e) for e in self.grid))
        if self.kind == ISO_BETA:
            if self.rho0 is None or not 0 < self.rho0 <= 0.5:
                raise DomainError(f"iso_beta family needs rho0 in (0, 1/2], got {self.rho0}")
            if self.c is None or not self.c < 0:
                raise DomainError(f"iso_beta family needs a negative beta value, got {self.c}")
        elif self.kind == CONST_PERIMETER:
            if self.perimeter is None or not self.perimeter > 0:
                raise DomainError(f"const_perimeter family needs p > 0, got {self.perimeter}")
        else:
            raise DomainError(f"unknown family kind '{self.kind}'")
        if not self.grid:
            raise DomainError("eccentricity grid is empty")
        if self.grid[0] < 0 or self.grid[-1] > config.E_MAX:
            raise DomainError(f"eccentricities must lie in [0, {config.E_MAX}]")
        if np.any(np.diff(self.grid) <= 0):
            raise DomainError("eccentricity grid must be strictly increasing")

    @classmethod
    def iso_beta(cls, rho0: float, c: float, grid) -> "FamilySpec":
        return cls(ISO_BETA, tuple(grid), rho0=rho0, c=c)

    @classmethod
    def const_perimeter(cls, perimeter: float, grid) -> "FamilySpec":
        return cls(CONST_PERIMETER, tuple(grid), perimeter=perimeter)


@dataclass(frozen=True)
class ScanRow:
    """One family member and its beta value at the probe rotation number."""

    e: float
    a: float
    b: float
    beta_at_probe: float
    margin: float  # difference from the previous row, nan on the first row


@dataclass(frozen=True)
class MonotonicityVerdict:
    strict: bool
    direction: str  # "decreasing", "increasing" or "none"
    min_abs_margin: float


@dataclass(frozen=True)
class ScanResult:
    rows: List[ScanRow]
    verdict: MonotonicityVerdict

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the CSV column names."""
        return pd.DataFrame(
            [(r.e, r.a, r.b, r.beta_at_probe, r.margin) for r in self.rows],
            columns=config.CSV_COLUMNS,
        )


@dataclass(frozen=True)
class RecoveryResult:
    """An ellipse reconstructed from spectral data, with the data misfit."""

    ellipse: Ellipse
    residuals: Tuple[float, ...]

    @property
    def e(self) -> float:
        return self.ellipse.eccentricity


@dataclass(frozen=True)
class DiskBoundReport:
    """Gap between beta and the rescaled disk value."""

    slack: float
    perimeter: float
    disk_bound: float
    beta: float
    method: str
