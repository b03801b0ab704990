"""Numerical kernels: periodic quadrature, bracketed roots, elliptic integrals."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .. import config
from ..exceptions import BracketError, ConvergenceError, DomainError, EvaluationError
from ..models.tolerance import Tolerance

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureResult:
    """Converged trapezoid value with the samples it was computed from."""

    value: float
    error: float
    nodes: int
    samples: np.ndarray


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("integrand returned non-finite values")
    return values


def periodic_quadrature(f: Callable, period: float = TWO_PI,
                        tol: Optional[Tolerance] = None) -> QuadratureResult:
    """Trapezoid rule on equispaced nodes, doubling until two levels agree.

    `f` must accept a numpy array of abscissae. Only the new (odd) nodes are
    evaluated at each refinement.
    """
    tol = tol or config.DEFAULT_TOLERANCE
    n = config.QUADRATURE_START_NODES
    samples = _sample(f, np.arange(n) * (period / n))
    value = period * samples.mean()

    for level in range(tol.max_refinements):
        odd = _sample(f, (np.arange(n) + 0.5) * (period / n))
        merged = np.empty(2 * n)
        merged[0::2], merged[1::2] = samples, odd
        new_value = 0.5 * value + 0.5 * period * odd.mean()
        error = abs(new_value - value)
        samples, n = merged, 2 * n
        logger.debug(f"trapezoid level {level}: N={n}, value={new_value!r}, change={error:.3e}")
        if error <= tol.bound(new_value):
            return QuadratureResult(new_value, error, n, samples)
        value = new_value

    raise ConvergenceError(
        f"periodic quadrature did not converge with {n} nodes",
        last_values=(value, new_value),
    )


def integrate_periodic(f: Callable, period: float = TWO_PI,
                       tol: Optional[Tolerance] = None) -> float:
    """Integral of a smooth `period`-periodic function over one period."""
    return periodic_quadrature(f, period, tol).value


class PeriodicAntiderivative:
    """F(x) = integral of f from 0 to x for smooth periodic f.

    The Fourier coefficients of the converged trapezoid samples are integrated
    termwise, so F inherits the spectral accuracy of the quadrature and is
    valid on the whole real line (the mean contributes a linear term).
    """

    def __init__(self, f: Callable, period: float = TWO_PI, tol: Optional[Tolerance] = None):
        result = periodic_quadrature(f, period, tol)
        self.period = period
        self.total = result.value
        self.nodes = result.nodes

        coeffs = np.fft.rfft(result.samples) / result.nodes
        weights = np.full(coeffs.shape, 2.0)
        if result.nodes % 2 == 0:
            weights[-1] = 1.0  # Nyquist mode appears once
        self._mean = coeffs[0].real
        self._k = np.arange(1, coeffs.size)
        self._omega = TWO_PI / period
        self._c = weights[1:] * coeffs[1:] / (1j * self._k * self._omega)

    def __call__(self, x: float) -> float:
        phase = np.exp(1j * self._k * self._omega * x) - 1.0
        return float(self._mean * x + np.real(np.dot(self._c, phase)))


def find_root(g: Callable[[float], float], lo: float, hi: float,
              tol: Optional[Tolerance] = None) -> float:
    """Root of a monotone continuous g on [lo, hi] by Brent's method."""
    tol = tol or config.DEFAULT_TOLERANCE

    def checked(x: float) -> float:
        value = float(g(x))
        if not np.isfinite(value):
            raise EvaluationError(f"non-finite function value {value} at x={x!r}")
        return value

    g_lo, g_hi = checked(lo), checked(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if np.sign(g_lo) == np.sign(g_hi):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: g(lo)={g_lo!r}, g(hi)={g_hi!r}",
            lo, hi, g_lo, g_hi,
        )

    logger.debug(f"brentq on [{lo!r}, {hi!r}]")
    root, info = optimize.brentq(
        checked, lo, hi,
        xtol=max(tol.abs, np.finfo(float).tiny),
        rtol=max(tol.rel, 4 * np.finfo(float).eps),
        maxiter=200, full_output=True, disp=False,
    )
    if not info.converged:
        raise ConvergenceError(f"root finder stopped: {info.flag}", last_values=(lo, hi, root))
    return float(root)


def _agm_sequence(m: float):
    """Run the AGM from (1, sqrt(1-m)); return (agm, sum of 2^(n-1) c_n^2)."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"elliptic parameter must lie in [0, 1), got {m}")
    a, b = 1.0, np.sqrt(1.0 - m)
    weighted = 0.5 * m
    power = 0.5
    for _ in range(64):
        c = 0.5 * (a - b)
        if abs(c) <= 4 * np.finfo(float).eps * a:
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        power *= 2.0
        weighted += power * c * c
    return a, weighted


def complete_elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind K(m) = pi / (2 AGM)."""
    agm, _ = _agm_sequence(m)
    return float(np.pi / (2.0 * agm))


def complete_elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind E(m), via the AGM."""
    agm, weighted = _agm_sequence(m)
    return float(np.pi / (2.0 * agm) * (1.0 - weighted))
