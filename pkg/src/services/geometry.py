"""Support-function geometry of centered strictly convex domains."""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from .. import config
from ..models.domain import ConvexityReport, DomainRef, Ellipse, SupportDomain
from ..models.tolerance import Tolerance
from ..utils.numerics import TWO_PI, complete_elliptic_E, integrate_periodic

logger = logging.getLogger(__name__)


def support_eval(domain: DomainRef, psi) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(h, h', h'') at normal angle psi; exact derivatives for both domain kinds."""
    return domain.support(psi)


def boundary_point(domain: DomainRef, psi) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary point whose outward normal makes angle psi with the x-axis."""
    h, dh, _ = domain.support(psi)
    c, s = np.cos(psi), np.sin(psi)
    return h * c - dh * s, h * s + dh * c


def radius_of_curvature(domain: DomainRef, psi) -> np.ndarray:
    h, _, d2h = domain.support(psi)
    return h + d2h


def perimeter(domain: DomainRef, tol: Optional[Tolerance] = None) -> float:
    """Perimeter as the integral of the support function over a full turn."""
    return integrate_periodic(lambda psi: domain.support(psi)[0], TWO_PI, tol)


def ellipse_perimeter(ellipse: Ellipse) -> float:
    """Closed form 4 a E(e^2), independent of the quadrature path."""
    return 4.0 * ellipse.a * complete_elliptic_E(ellipse.eccentricity ** 2)


def certified_radius_bound(domain: DomainRef) -> float:
    """A lower bound on the radius of curvature without sampling."""
    if isinstance(domain, SupportDomain):
        return float(domain.certified_curvature_bound())
    return domain.b ** 2 / domain.a


def validate_convex(domain: DomainRef, grid: int = config.CONVEXITY_GRID) -> ConvexityReport:
    """Sample the radius of curvature, refine its minimum, report strict convexity."""
    certified = certified_radius_bound(domain)

    psi = np.arange(grid) * (TWO_PI / grid)
    radius = radius_of_curvature(domain, psi)
    i = int(np.argmin(radius))
    step = TWO_PI / grid
    refined = optimize.minimize_scalar(
        lambda x: float(radius_of_curvature(domain, x)),
        bounds=(psi[i] - step, psi[i] + step), method="bounded",
        options={"xatol": 1e-12},
    )
    location, min_radius = psi[i], float(radius[i])
    if refined.success and refined.fun < min_radius:
        location, min_radius = float(refined.x) % TWO_PI, float(refined.fun)

    report = ConvexityReport(
        ok=min_radius > 0,
        min_radius=min_radius,
        location=float(location),
        certified_bound=float(certified),
    )
    if not report.ok:
        logger.warning(f"radius of curvature {min_radius:.6g} at psi={location:.6g}: not strictly convex")
    return report
