"""Convex domain data models."""

from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from ..exceptions import DomainError


@dataclass(frozen=True)
class Ellipse:
    """Centered ellipse x^2/a^2 + y^2/b^2 = 1 with a >= b > 0."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise DomainError(f"ellipse semi-axes must be finite, got ({self.a}, {self.b})")
        if not self.a >= self.b > 0:
            raise DomainError(f"ellipse needs a >= b > 0, got ({self.a}, {self.b})")

    @classmethod
    def from_axes(cls, a: float, b: float) -> "Ellipse":
        """Build the ellipse with the larger axis first."""
        return cls(max(a, b), min(a, b))

    @classmethod
    def from_eccentricity(cls, a: float, e: float) -> "Ellipse":
        if not 0 <= e < 1:
            raise DomainError(f"eccentricity must lie in [0, 1), got {e}")
        return cls(a, a * np.sqrt(1.0 - e * e))

    @property
    def eccentricity(self) -> float:
        return float(np.sqrt(max(0.0, 1.0 - (self.b / self.a) ** 2)))

    @property
    def is_disk(self) -> bool:
        return self.a == self.b

    def scaled(self, s: float) -> "Ellipse":
        return Ellipse(s * self.a, s * self.b)

    def support(self, psi):
        """Support function and its first two derivatives at normal angle psi."""
        psi = np.asarray(psi, dtype=float)
        a2, b2 = self.a * self.a, self.b * self.b
        h = np.sqrt(a2 * np.cos(psi) ** 2 + b2 * np.sin(psi) ** 2)
        dh = (b2 - a2) * np.sin(2 * psi) / (2 * h)
        d2h = ((b2 - a2) * np.cos(2 * psi) - dh * dh) / h
        return h, dh, d2h


@dataclass(frozen=True)
class Harmonic:
    """One Fourier mode c cos(k psi) + s sin(k psi) of a support function."""

    k: int
    cos: float = 0.0
    sin: float = 0.0

    def __post_init__(self):
        if self.k == 1:
            raise DomainError("k=1 harmonics are translations and are not allowed")
        if self.k < 2:
            raise DomainError(f"harmonic order must be >= 2, got {self.k}")


@dataclass(frozen=True)
class SupportDomain:
    """Domain whose support function is a0 + sum of harmonics (k >= 2)."""

    a0: float
    harmonics: Tuple[Harmonic, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.a0 > 0:
            raise DomainError(f"mean support value must be positive, got {self.a0}")
        object.__setattr__(self, "harmonics", tuple(self.harmonics))

    @property
    def is_disk(self) -> bool:
        return all(hm.cos == 0 and hm.sin == 0 for hm in self.harmonics)

    def certified_curvature_bound(self) -> float:
        """Lower bound a0 - sum (k^2-1)(|c_k|+|s_k|) for the radius of curvature."""
        return self.a0 - sum((hm.k ** 2 - 1) * (abs(hm.cos) + abs(hm.sin))
                             for hm in self.harmonics)

    def support(self, psi):
        psi = np.asarray(psi, dtype=float)
        h = np.full_like(psi, self.a0)
        dh = np.zeros_like(psi)
        d2h = np.zeros_like(psi)
        for hm in self.harmonics:
            c, s = np.cos(hm.k * psi), np.sin(hm.k * psi)
            h = h + hm.cos * c + hm.sin * s
            dh = dh + hm.k * (hm.sin * c - hm.cos * s)
            d2h = d2h - hm.k ** 2 * (hm.cos * c + hm.sin * s)
        return h, dh, d2h


DomainRef = Union[Ellipse, SupportDomain]


@dataclass(frozen=True)
class ConvexityReport:
    """Outcome of the strict convexity check."""

    ok: bool
    min_radius: float
    location: float
    certified_bound: float
