"""Maximal-perimeter periodic orbits of general strictly convex domains."""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from ..exceptions import BracketError, ConvergenceError, DomainError
from ..models.domain import DomainRef, Ellipse
from ..models.orbit import OrbitConfig, PeriodicOrbit, PonceletSpread, check_rotation_pair
from ..models.tolerance import Tolerance
from ..utils.numerics import TWO_PI, find_root
from .elliptic import EllipticBilliard
from .geometry import boundary_point, radius_of_curvature

logger = logging.getLogger(__name__)

# stationarity of a single vertex is solved far below the sweep tolerance
VERTEX_TOLERANCE = Tolerance(rel=1e-14, abs=1e-15, max_refinements=1)
# chord sums that differ by less than this are equal up to rounding
ROUNDING = 4 * np.finfo(float).eps
# sweeps between quasi-Newton polishes; coordinate ascent alone crawls along near-flat modes
POLISH_EVERY = 10


class OrbitMaximizer:
    """Cyclic coordinate ascent on the perimeter of inscribed (p, q) polygons.

    Vertices are boundary points indexed by their normal angles
    psi_0 < psi_1 < ... < psi_{q-1} with psi_q = psi_0 + 2 pi p.
    """

    def __init__(self, domain: DomainRef, cfg: Optional[OrbitConfig] = None):
        self.domain = domain
        self.cfg = cfg or OrbitConfig()

    def _point(self, psi) -> Tuple[float, float]:
        return boundary_point(self.domain, psi)

    def perimeter_of(self, angles: np.ndarray) -> float:
        x, y = self._point(angles)
        return float(np.hypot(np.roll(x, -1) - x, np.roll(y, -1) - y).sum())

    def gradient(self, angles: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """dF/dpsi_i = rho_i (u_in - u_out) . t_i, and the reflection mismatch itself."""
        x, y = self._point(angles)
        in_x, in_y = x - np.roll(x, 1), y - np.roll(y, 1)
        out_x, out_y = np.roll(x, -1) - x, np.roll(y, -1) - y
        n_in, n_out = np.hypot(in_x, in_y), np.hypot(out_x, out_y)
        tx, ty = -np.sin(angles), np.cos(angles)
        mismatch = (in_x / n_in - out_x / n_out) * tx + (in_y / n_in - out_y / n_out) * ty
        return radius_of_curvature(self.domain, angles) * mismatch, mismatch

    def _legs(self, psi: float, prev_pt, next_pt) -> float:
        px, py = self._point(psi)
        return float(np.hypot(px - prev_pt[0], py - prev_pt[1])
                     + np.hypot(next_pt[0] - px, next_pt[1] - py))

    def _slope(self, psi: float, prev_pt, next_pt) -> float:
        px, py = self._point(psi)
        in_x, in_y = px - prev_pt[0], py - prev_pt[1]
        out_x, out_y = next_pt[0] - px, next_pt[1] - py
        n_in, n_out = np.hypot(in_x, in_y), np.hypot(out_x, out_y)
        mismatch = -(in_x / n_in - out_x / n_out) * np.sin(psi) + (in_y / n_in - out_y / n_out) * np.cos(psi)
        return float(radius_of_curvature(self.domain, psi) * mismatch)

    def _update_vertex(self, angles: np.ndarray, i: int, p: int) -> None:
        """Move vertex i to the maximiser of its two adjacent chords, never decreasing F."""
        q = len(angles)
        prev = angles[i - 1] if i > 0 else angles[-1] - TWO_PI * p
        nxt = angles[i + 1] if i < q - 1 else angles[0] + TWO_PI * p
        prev_pt, next_pt = self._point(prev), self._point(nxt)
        margin = 1e-9 * (nxt - prev)
        lo, hi = prev + margin, nxt - margin

        current = self._legs(angles[i], prev_pt, next_pt)
        floor = current * (1.0 - ROUNDING)
        candidates = []
        try:
            candidates.append(find_root(lambda s: self._slope(s, prev_pt, next_pt),
                                        lo, hi, VERTEX_TOLERANCE))
        except BracketError:
            pass
        if not candidates or self._legs(candidates[0], prev_pt, next_pt) < floor:
            # golden-section with parabolic steps when stationarity is not bracketed
            found = optimize.minimize_scalar(
                lambda s: -self._legs(s, prev_pt, next_pt),
                bounds=(lo, hi), method="bounded", options={"xatol": 1e-12},
            )
            candidates.append(float(found.x))

        for candidate in candidates:
            if self._legs(candidate, prev_pt, next_pt) >= floor:
                angles[i] = candidate
                return

    def _polish(self, angles: np.ndarray, p: int) -> Optional[np.ndarray]:
        """BFGS on the whole polygon; None unless it keeps the vertex order and gains length."""
        current = self.perimeter_of(angles)

        def objective(x):
            return -self.perimeter_of(x), -self.gradient(x)[0]

        found = optimize.minimize(objective, angles, jac=True, method="BFGS",
                                  options={"gtol": self.cfg.grad_tol * current, "maxiter": 200})
        x = found.x
        ordered = np.all(np.diff(x) > 0) and x[-1] - x[0] < TWO_PI * p
        if ordered and self.perimeter_of(x) >= current * (1.0 - ROUNDING):
            return x
        return None

    def _ascend(self, angles: np.ndarray, p: int) -> PeriodicOrbit:
        q = len(angles)
        history: List[float] = [self.perimeter_of(angles)]
        grad, mismatch = self.gradient(angles)
        sweeps = 0
        while np.max(np.abs(grad)) > self.cfg.grad_tol * history[-1] and sweeps < self.cfg.max_iters:
            for i in range(q):
                self._update_vertex(angles, i, p)
            sweeps += 1
            if sweeps % POLISH_EVERY == 0:
                polished = self._polish(angles, p)
                if polished is not None:
                    angles[:] = polished
            history.append(self.perimeter_of(angles))
            grad, mismatch = self.gradient(angles)

        gradient = float(np.max(np.abs(grad)))
        return PeriodicOrbit(
            p=p, q=q,
            angles=tuple(float(a) for a in angles),
            perimeter=history[-1],
            residual=float(np.max(np.abs(mismatch))),
            gradient=gradient,
            converged=gradient <= self.cfg.grad_tol * history[-1],
            sweeps=sweeps,
            history=tuple(history),
        )

    def maximize_orbit(self, p: int, q: int) -> PeriodicOrbit:
        """Best maximal-perimeter (p, q) orbit over the regular start and random phase shifts."""
        check_rotation_pair(p, q)
        rng = np.random.default_rng(self.cfg.seed)
        phases = np.concatenate([[0.0], rng.uniform(0.0, TWO_PI / q, self.cfg.n_restarts)])
        regular = TWO_PI * p * np.arange(q) / q

        best: Optional[PeriodicOrbit] = None
        for phase in phases:
            orbit = self._ascend(regular + phase, p)
            # converged orbits first, then the longest
            if best is None or (orbit.converged, orbit.perimeter) > (best.converged, best.perimeter):
                best = orbit

        if best.converged:
            logger.info(f"({p},{q}) orbit: perimeter {best.perimeter!r} after {best.sweeps} sweeps")
        else:
            logger.warning(f"({p},{q}) orbit did not converge: gradient {best.gradient:.3e}, "
                           f"residual {best.residual:.3e}")
        return best

    def beta_rational(self, p: int, q: int) -> float:
        """beta(p/q) = -L_{p/q} / q from a converged orbit."""
        orbit = self.maximize_orbit(p, q)
        if not orbit.converged:
            raise ConvergenceError(
                f"({p},{q}) orbit did not converge after {orbit.sweeps} sweeps",
                residual=orbit.residual,
            )
        return orbit.beta


def maximize_orbit(domain: DomainRef, p: int, q: int,
                   cfg: Optional[OrbitConfig] = None) -> PeriodicOrbit:
    return OrbitMaximizer(domain, cfg).maximize_orbit(p, q)


def beta_rational(domain: DomainRef, p: int, q: int,
                  cfg: Optional[OrbitConfig] = None) -> float:
    return OrbitMaximizer(domain, cfg).beta_rational(p, q)


def poncelet_spread(ellipse: Ellipse, p: int, q: int, n_starts: int = 16,
                    tol: Optional[Tolerance] = None) -> PonceletSpread:
    """Close caustic-tangent polygons from n_starts base angles and compare them."""
    check_rotation_pair(p, q)
    if 2 * p == q:
        raise DomainError("the half turn has no caustic; use p/q < 1/2")
    billiard = EllipticBilliard(ellipse, tol)
    lam = billiard.lambda_for_rotation(p / q)

    perimeters, residuals = [], []
    for start in np.arange(n_starts) * (TWO_PI / n_starts):
        angles = [float(start)]
        for _ in range(q):
            angles.append(billiard.advance(lam, angles[-1]))
        residuals.append(abs(angles[-1] - start - TWO_PI * p))
        x, y = boundary_point(ellipse, np.array(angles))
        perimeters.append(float(np.hypot(np.diff(x), np.diff(y)).sum()))

    return PonceletSpread(
        lambda_=lam,
        perimeter=float(np.mean(perimeters)),
        spread=float(np.max(perimeters) - np.min(perimeters)),
        closure_residual=float(np.max(residuals)),
    )
