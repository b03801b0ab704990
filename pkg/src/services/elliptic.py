"""Exact billiard machinery of ellipses via confocal caustics.

Every chord of a caustic-tangent orbit is described in the tangency-angle
variable psi: the bounce point is the boundary point with outward normal psi
and delta(psi) is the angle between the chord and the tangent there, with
sin(delta) = J h(psi). Consecutive bounces satisfy psi1 - psi0 = delta0 + delta1.
The invariant measure w(psi) dpsi = dpsi / (sin(delta) cos(delta)) turns the
map into a rigid rotation Theta -> Theta + rho.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from .. import config
from ..exceptions import AccuracyError, BracketError, DomainError
from ..models.caustic import (
    BetaDerivative,
    CausticData,
    FamilyPoint,
    InvariantCurveDiagnostics,
)
from ..models.domain import Ellipse
from ..models.tolerance import Tolerance
from ..utils.numerics import (
    TWO_PI,
    PeriodicAntiderivative,
    find_root,
    integrate_periodic,
)
from .geometry import ellipse_perimeter

logger = logging.getLogger(__name__)


def caustic_warnings(rho: float) -> List[str]:
    """Accuracy warnings attached to beta values near the half turn."""
    if 0.5 - config.HALF_TURN_WARNING < rho < 0.5:
        return [f"rho={rho!r} is within {config.HALF_TURN_WARNING:g} of 1/2; "
                "the caustic is close to the focal segment"]
    return []


class EllipticBilliard:
    """Caustics, rotation numbers and beta values of one ellipse."""

    def __init__(self, ellipse: Ellipse, tol: Optional[Tolerance] = None):
        self.ellipse = ellipse
        self.tol = tol or config.DEFAULT_TOLERANCE
        self._measure_cache: Optional[Tuple[float, PeriodicAntiderivative]] = None
        self._lambdas: Dict[float, float] = {}

    # Caustic parameters

    def _check_lambda(self, lam: float) -> None:
        b2 = self.ellipse.b ** 2
        if not 0.0 < lam < b2:
            raise DomainError(f"caustic parameter must lie in (0, b^2={b2!r}), got {lam!r}")

    def joachimsthal(self, lam: float) -> float:
        return float(np.sqrt(lam) / (self.ellipse.a * self.ellipse.b))

    def k2(self, lam: float) -> float:
        a2, b2 = self.ellipse.a ** 2, self.ellipse.b ** 2
        return lam * (a2 - b2) / (a2 * (b2 - lam))

    def caustic_data(self, lam: float) -> CausticData:
        self._check_lambda(lam)
        return CausticData(
            lambda_=lam,
            J=self.joachimsthal(lam),
            k2=self.k2(lam),
            rho=self.rotation_number(lam),
        )

    # Reflection angle

    def _sin_cos_delta(self, lam: float, psi):
        h = self.ellipse.support(psi)[0]
        sin_d = self.joachimsthal(lam) * h
        # factorised form keeps cos(delta) accurate when sin(delta) is close to 1
        cos_d = np.sqrt((1.0 - lam / self.ellipse.b ** 2) * (1.0 + self.k2(lam) * np.sin(psi) ** 2))
        return sin_d, cos_d

    def delta_angle(self, lam: float, psi):
        """Angle between the caustic-tangent chord and the boundary at psi."""
        self._check_lambda(lam)
        sin_d, cos_d = self._sin_cos_delta(lam, psi)
        return np.arctan2(sin_d, cos_d)

    def advance(self, lam: float, psi0: float) -> float:
        """Next bounce: the psi1 in (psi0, psi0 + pi) with psi1 - psi0 = delta0 + delta1."""
        self._check_lambda(lam)
        delta0 = float(self.delta_angle(lam, psi0))
        return find_root(
            lambda psi1: psi1 - psi0 - delta0 - float(self.delta_angle(lam, psi1)),
            psi0, psi0 + np.pi, self.tol,
        )

    # Invariant measure and rotation number

    def _weight(self, lam: float):
        def w(psi):
            sin_d, cos_d = self._sin_cos_delta(lam, psi)
            return 1.0 / (sin_d * cos_d)
        return w

    def _measure(self, lam: float) -> PeriodicAntiderivative:
        # one entry: root searches visit each lambda once, beta reuses the last
        if self._measure_cache is None or self._measure_cache[0] != lam:
            self._measure_cache = (lam, PeriodicAntiderivative(self._weight(lam), TWO_PI, self.tol))
        return self._measure_cache[1]

    def total_measure(self, lam: float) -> float:
        """W = integral of dpsi / (sin(delta) cos(delta)) over a full turn."""
        return self._measure(lam).total

    def action_angle(self, lam: float, psi: float) -> float:
        """Theta(psi): invariant measure of [0, psi] normalised to one turn."""
        measure = self._measure(lam)
        return measure(psi) / measure.total

    def rotation_number(self, lam: float, psi0: float = 0.0) -> float:
        self._check_lambda(lam)
        if lam > (1.0 - config.CAUSTIC_GUARD) * self.ellipse.b ** 2:
            raise AccuracyError(
                f"caustic parameter {lam!r} is within {config.CAUSTIC_GUARD:g} of b^2; "
                "the caustic has degenerated"
            )
        psi1 = self.advance(lam, psi0)
        return self.action_angle(lam, psi1) - self.action_angle(lam, psi0)

    def lambda_for_rotation(self, rho: float) -> float:
        """Invert the strictly increasing map lambda -> rho(lambda)."""
        if rho == 0:
            return 0.0
        if not 0.0 < rho < 0.5:
            raise DomainError(f"rotation number must lie in (0, 1/2), got {rho!r}")
        rho = float(rho)
        if rho in self._lambdas:
            return self._lambdas[rho]

        b2 = self.ellipse.b ** 2
        g = lambda lam: self.rotation_number(lam) - rho
        lo = config.LAMBDA_FLOOR * b2
        # widen the upper end only as far as rho requires: quadrature cost grows near b^2
        for gap in config.LAMBDA_CEILINGS:
            hi = (1.0 - gap) * b2
            if g(hi) >= 0:
                break
        else:
            raise BracketError(
                f"rotation number {rho!r} is too close to 1/2 for the caustic guard",
                lo, hi, g(lo), g(hi),
            )

        lam = find_root(g, lo, hi, self.tol)
        self._lambdas[rho] = lam
        logger.info(f"caustic for rho={rho!r} on {self.ellipse}: lambda={lam!r}")
        return lam

    # Beta function

    def beta_caustic(self, rho: float) -> float:
        """Mather's beta at rho from the invariant curve's action parametrisation."""
        if rho == 0:
            return 0.0
        if rho == 0.5:
            return -2.0 * self.ellipse.a
        if not 0.0 < rho < 0.5:
            raise DomainError(f"rotation number must lie in (0, 1/2], got {rho!r}")
        rho = float(rho)
        for message in caustic_warnings(rho):
            logger.warning(message)

        lam = self.lambda_for_rotation(rho)
        total = self.total_measure(lam)

        def weighted_support(psi):
            h = self.ellipse.support(psi)[0]
            return h / self._sin_cos_delta(lam, psi)[1]

        return -2.0 * integrate_periodic(weighted_support, TWO_PI, self.tol) / total

    def curve_diagnostics(self, rho: float) -> InvariantCurveDiagnostics:
        """Jensen identity and criticality profile sin(delta) Theta'(psi) of the curve."""
        if not 0.0 < rho < 0.5:
            raise DomainError(f"rotation number must lie in (0, 1/2), got {rho!r}")
        lam = self.lambda_for_rotation(rho)
        w = self._weight(lam)
        total = self.total_measure(lam)

        delta_mean = integrate_periodic(
            lambda psi: self.delta_angle(lam, psi) * w(psi), TWO_PI, self.tol) / total
        mean_sin = integrate_periodic(
            lambda psi: self._sin_cos_delta(lam, psi)[0] * w(psi), TWO_PI, self.tol) / total

        # sin(delta) Theta' = 1 / (W cos(delta)); extremes sit at psi = 0 and pi/2
        psi = np.arange(config.CONVEXITY_GRID) * (TWO_PI / config.CONVEXITY_GRID)
        profile = 1.0 / (total * self._sin_cos_delta(lam, psi)[1])

        return InvariantCurveDiagnostics(
            rho=rho,
            lambda_=lam,
            delta_mean=delta_mean,
            criticality_M=mean_sin / TWO_PI,
            criticality_defect=float(profile.max() - profile.min()),
            beta=self.beta_caustic(rho),
            beta_constant_angle=-ellipse_perimeter(self.ellipse) / np.pi * mean_sin,
        )


def beta_caustic(ellipse: Ellipse, rho: float, tol: Optional[Tolerance] = None) -> float:
    return EllipticBilliard(ellipse, tol).beta_caustic(rho)


def beta_derivative(point: FamilyPoint, rho: float,
                    tol: Optional[Tolerance] = None) -> BetaDerivative:
    """First variation of beta along a family of ellipses (a(tau), b(tau)).

    d beta / d tau = -2 * integral of d_tau h(psi(Theta)) sin(delta(Theta)) dTheta,
    rewritten in psi as C * integral of
    (a a' cos^2 + b b' sin^2) / sqrt((1 - e^2 sin^2)(1 + k^2 sin^2)) with
    C = -2 b / (W a sqrt(b^2 - lambda)) < 0.
    """
    if not 0.0 < rho < 0.5:
        raise DomainError(f"rotation number must lie in (0, 1/2), got {rho!r}")
    ellipse = Ellipse(point.a, point.b)
    billiard = EllipticBilliard(ellipse, tol)
    lam = billiard.lambda_for_rotation(rho)
    k2 = billiard.k2(lam)
    e2 = ellipse.eccentricity ** 2
    a, b = point.a, point.b

    def kernel(psi):
        s2 = np.sin(psi) ** 2
        numerator = a * point.da * np.cos(psi) ** 2 + b * point.db * s2
        return numerator / np.sqrt((1.0 - e2 * s2) * (1.0 + k2 * s2))

    raw = integrate_periodic(kernel, TWO_PI, billiard.tol)
    total = billiard.total_measure(lam)
    constant = -2.0 * b / (total * a * np.sqrt(b * b - lam))
    return BetaDerivative(dbeta=constant * raw, raw_integral=raw, constant=float(constant))
