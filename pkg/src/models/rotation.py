"""Rotation number classification data models."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .. import config


@dataclass(frozen=True)
class GutkinRoot:
    """A solution x in (0, pi/2) of tan(n x) = n tan(x).

    residual is |sin(nx) cos(x) - n sin(x) cos(nx)| at x. The tan form of the
    equation amplifies a last-bit error in x by n sec^2(nx), which is large
    near the poles, so it is not a usable accuracy measure.
    """

    n: int
    x: float
    residual: float


@dataclass(frozen=True)
class GutkinVerdict:
    n_max: int
    free: bool
    angle: float
    nearest: Optional[GutkinRoot] = None
    distance: float = float("inf")


@dataclass(frozen=True)
class Witness:
    m: int
    n: int
    ratio: float


@dataclass(frozen=True)
class DiophantineVerdict:
    """Outcome of |n rho - m| >= nu |m| n^-sigma for all n <= checked_up_to."""

    nu: float
    sigma: float
    checked_up_to: int
    passed: bool
    witness: Optional[Witness]
    worst_witness: Optional[Witness]


@dataclass(frozen=True)
class ClassifyParams:
    nu: float = config.DIOPHANTINE_NU
    sigma: float = config.DIOPHANTINE_SIGMA
    N: int = config.DIOPHANTINE_N
    n_max: int = config.GUTKIN_N_MAX
    q_max: int = config.RATIONAL_Q_MAX
    angle_convention: bool = config.GUTKIN_ANGLE_CONVENTION


@dataclass(frozen=True)
class RotationClass:
    value: float
    rational: Optional[Tuple[int, int]]
    continued_fraction: Tuple[int, ...]
    gutkin: GutkinVerdict
    diophantine: DiophantineVerdict
    params: ClassifyParams = field(default_factory=ClassifyParams)
