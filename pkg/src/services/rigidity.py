"""Recovering ellipses from beta values and checking the monotonicity behind it."""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from .. import config
from ..exceptions import BracketError, DomainError, InfeasibleError
from ..models.caustic import FamilyPoint
from ..models.domain import DomainRef, Ellipse
from ..models.family import (
    ISO_BETA,
    DiskBoundReport,
    FamilySpec,
    MonotonicityVerdict,
    RecoveryResult,
    ScanResult,
    ScanRow,
)
from ..models.orbit import OrbitConfig
from ..models.tolerance import Tolerance
from ..utils.numerics import (
    TWO_PI,
    complete_elliptic_E,
    complete_elliptic_K,
    find_root,
    integrate_periodic,
)
from ..utils.rational import as_pair
from .elliptic import EllipticBilliard, beta_derivative
from .geometry import perimeter
from .variational import OrbitMaximizer

logger = logging.getLogger(__name__)

# relative misfit below which spectral data is taken to come from a disk
DISK_MATCH = 1e-10
# upper eccentricity pulled back by this factor while a probe is out of reach
RETREAT_FACTOR = 0.98
RETREAT_STEPS = 40

CAUSTIC = "caustic"
VARIATIONAL = "variational"


def disk_beta(rho: float, radius: float = 1.0) -> float:
    """beta of the disk of the given radius: -2 R sin(pi rho)."""
    return -2.0 * radius * float(np.sin(np.pi * rho))


def _check_rho(rho: float, name: str = "rho") -> None:
    if not 0.0 < rho <= 0.5:
        raise DomainError(f"{name} must lie in (0, 1/2], got {rho!r}")


class RigiditySolver:
    """Ellipse families of fixed beta or fixed perimeter, and inverse problems on them."""

    def __init__(self, tol: Optional[Tolerance] = None, e_max: float = config.E_MAX):
        if not 0 < e_max <= config.E_MAX:
            raise DomainError(f"e_max must lie in (0, {config.E_MAX}], got {e_max}")
        self.tol = tol or config.DEFAULT_TOLERANCE
        self.e_max = e_max

    def beta(self, ellipse: Ellipse, rho: float) -> float:
        return EllipticBilliard(ellipse, self.tol).beta_caustic(rho)

    # Families

    def isobeta_member(self, rho0: float, c: float, e: float) -> Ellipse:
        """The ellipse of eccentricity e with beta(rho0) = c (beta is 1-homogeneous)."""
        _check_rho(rho0, "rho0")
        if not c < 0:
            raise DomainError(f"beta value must be negative, got {c!r}")
        reference = Ellipse.from_eccentricity(1.0, e)
        return reference.scaled(c / self.beta(reference, rho0))

    def perimeter_member(self, p: float, e: float) -> Ellipse:
        """The ellipse of eccentricity e and perimeter p."""
        if not p > 0:
            raise DomainError(f"perimeter must be positive, got {p!r}")
        return Ellipse.from_eccentricity(p / (4.0 * complete_elliptic_E(e * e)), e)

    def member(self, spec: FamilySpec, e: float) -> Ellipse:
        if spec.kind == ISO_BETA:
            return self.isobeta_member(spec.rho0, spec.c, e)
        return self.perimeter_member(spec.perimeter, e)

    def scan_family(self, spec: FamilySpec, probe: float) -> ScanResult:
        """beta at the probe along the family, with a strict-monotonicity verdict."""
        _check_rho(probe, "probe")
        if spec.kind == ISO_BETA and probe == spec.rho0:
            raise DomainError("probe equals rho0: beta is constant along an iso-beta family")

        rows: List[ScanRow] = []
        previous = None
        for e in spec.grid:
            ellipse = self.member(spec, e)
            value = self.beta(ellipse, probe)
            margin = float("nan") if previous is None else value - previous
            rows.append(ScanRow(e=e, a=ellipse.a, b=ellipse.b, beta_at_probe=value, margin=margin))
            previous = value

        margins = np.array([row.margin for row in rows[1:]])
        if margins.size and np.all(margins < 0):
            direction = "decreasing"
        elif margins.size and np.all(margins > 0):
            direction = "increasing"
        else:
            direction = "none"
        verdict = MonotonicityVerdict(
            strict=direction != "none",
            direction=direction,
            min_abs_margin=float(np.min(np.abs(margins))) if margins.size else float("nan"),
        )
        logger.info(f"{spec.kind} scan at probe {probe!r}: {direction}, "
                    f"min |margin| {verdict.min_abs_margin:.3e}")
        return ScanResult(rows=rows, verdict=verdict)

    # Inverse problems

    def _solve_eccentricity(self, g, scale: float) -> float:
        """Root of a strictly monotone g on [0, e_max]; e = 0 when g(0) vanishes."""
        g0 = g(0.0)
        if abs(g0) <= DISK_MATCH * scale:
            return 0.0
        hi = self.e_max
        for _ in range(RETREAT_STEPS):
            try:
                g_hi = g(hi)
                break
            except BracketError:
                # rho beyond the caustic guard at this eccentricity
                logger.debug(f"rotation number out of reach at e={hi!r}; retreating")
                hi *= RETREAT_FACTOR
        else:
            raise InfeasibleError("no eccentricity below e_max reaches the rotation numbers")
        if np.sign(g0) == np.sign(g_hi):
            raise InfeasibleError(
                f"no ellipse with eccentricity <= {hi!r} matches the data "
                f"(misfit {g0:.6g} at e=0, {g_hi:.6g} at e={hi!r})"
            )
        return find_root(g, 0.0, hi, self.tol)

    def recover_two_values(self, rho0: float, c0: float, rho1: float, c1: float) -> RecoveryResult:
        """The unique ellipse (up to isometry) with beta(rho0) = c0 and beta(rho1) = c1."""
        _check_rho(rho0, "rho0")
        _check_rho(rho1, "rho1")
        if rho0 == rho1:
            raise DomainError("the two rotation numbers must be distinct")
        if not (c0 < 0 and c1 < 0):
            raise DomainError(f"beta values must be negative, got {c0!r} and {c1!r}")

        e = self._solve_eccentricity(
            lambda e: self.beta(self.isobeta_member(rho0, c0, e), rho1) - c1, abs(c1))
        ellipse = self.isobeta_member(rho0, c0, e)
        residuals = (self.beta(ellipse, rho0) - c0, self.beta(ellipse, rho1) - c1)
        logger.info(f"recovered {ellipse} (e={e!r}) from beta({rho0!r}), beta({rho1!r})")
        return RecoveryResult(ellipse=ellipse, residuals=residuals)

    def recover_value_perimeter(self, rho: float, c: float, p: float) -> RecoveryResult:
        """The unique ellipse with perimeter p and beta(rho) = c."""
        _check_rho(rho)
        if not c < 0:
            raise DomainError(f"beta value must be negative, got {c!r}")
        if not p > 0:
            raise DomainError(f"perimeter must be positive, got {p!r}")
        bound = disk_beta(rho, p / TWO_PI)
        if c > bound + DISK_MATCH * abs(bound):
            raise InfeasibleError(
                f"beta={c!r} exceeds the disk bound {bound!r} for perimeter {p!r}"
            )

        e = self._solve_eccentricity(
            lambda e: self.beta(self.perimeter_member(p, e), rho) - c, abs(c))
        ellipse = self.perimeter_member(p, e)
        residuals = (self.beta(ellipse, rho) - c, perimeter(ellipse, self.tol) - p)
        logger.info(f"recovered {ellipse} (e={e!r}) from beta({rho!r}) and perimeter {p!r}")
        return RecoveryResult(ellipse=ellipse, residuals=residuals)

    # Disk comparison

    def bbs_slack(self, domain: DomainRef, rho: Union[float, Fraction],
                  method: str = CAUSTIC, cfg: Optional[OrbitConfig] = None) -> DiskBoundReport:
        """(|boundary| / 2 pi) beta_disk(rho) - beta(rho), non-negative for convex domains."""
        _check_rho(float(rho))
        length = perimeter(domain, self.tol)
        bound = disk_beta(float(rho), length / TWO_PI)
        if method == CAUSTIC:
            if not isinstance(domain, Ellipse):
                raise DomainError("the caustic method needs an ellipse")
            value = self.beta(domain, float(rho))
        elif method == VARIATIONAL:
            pair = as_pair(rho)
            if pair is None:
                raise DomainError(f"the variational method needs a rational rho with "
                                  f"denominator <= {config.ORBIT_MAX_Q}, got {rho!r}")
            value = OrbitMaximizer(domain, cfg).beta_rational(*pair)
        else:
            raise DomainError(f"unknown method '{method}'")
        return DiskBoundReport(
            slack=bound - value, perimeter=length, disk_bound=bound, beta=value, method=method,
        )

    def perimeter_family_slope(self, p: float, e: float, rho: float) -> float:
        """d beta(rho) / d e along the constant-perimeter family, from the first variation."""
        _check_rho(rho)
        if not 0 <= e < 1:
            raise DomainError(f"eccentricity must lie in [0, 1), got {e!r}")
        m = e * e
        E = complete_elliptic_E(m)
        # dE/dm = (E - K) / 2m, which tends to -pi/8 at m = 0
        dE_dm = (E - complete_elliptic_K(m)) / (2.0 * m) if m > 0 else -np.pi / 8.0
        a = p / (4.0 * E)
        da = -p / (4.0 * E * E) * dE_dm * 2.0 * e
        root = np.sqrt(1.0 - m)
        db = da * root - a * e / root
        if rho == 0.5:
            return -2.0 * da
        return beta_derivative(FamilyPoint(a, a * root, da, db), rho, self.tol).dbeta


def kernel_marginals(e: float, k2: float, tol: Optional[Tolerance] = None) -> Tuple[float, float]:
    """u = integral of sin^2 f and v = integral of cos^2 f over a full turn,
    f = 1 / sqrt((1 - e^2 sin^2)(1 + k^2 sin^2))."""
    def kernel(psi):
        s2 = np.sin(psi) ** 2
        return 1.0 / np.sqrt((1.0 - e * e * s2) * (1.0 + k2 * s2))

    u = integrate_periodic(lambda psi: np.sin(psi) ** 2 * kernel(psi), TWO_PI, tol)
    v = integrate_periodic(lambda psi: np.cos(psi) ** 2 * kernel(psi), TWO_PI, tol)
    return u, v


def kernel_sign(e: float, k0sq: float, k1sq: float, tol: Optional[Tolerance] = None) -> float:
    """Double integral over [0, pi/2]^2 of
    (sin^2 y - sin^2 x)(f1(y)/f0(y) - f1(x)/f0(x)) f0(x) f0(y).

    It separates into 2 (A0 B1 - A1 B0) with A_j = integral of f_j and
    B_j = integral of sin^2 f_j over [0, pi/2].
    """
    if not 0 <= e < 1:
        raise DomainError(f"eccentricity must lie in [0, 1), got {e!r}")
    if k0sq < 0 or k1sq < 0:
        raise DomainError("kernel parameters must be non-negative")

    def quarter(k2):
        u, v = kernel_marginals(e, k2, tol)
        # integrands are even and pi-periodic: [0, pi/2] carries a quarter of the turn
        return (u + v) / 4.0, u / 4.0

    A0, B0 = quarter(k0sq)
    A1, B1 = quarter(k1sq)
    return 2.0 * (A0 * B1 - A1 * B0)
