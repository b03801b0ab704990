"""Rotation number classification: Gutkin angles, Diophantine condition, rationality."""

import logging
from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .. import config
from ..exceptions import DomainError
from ..models.rotation import (
    ClassifyParams,
    DiophantineVerdict,
    GutkinRoot,
    GutkinVerdict,
    RotationClass,
    Witness,
)
from ..models.tolerance import Tolerance
from ..utils.numerics import find_root
from ..utils.rational import Number, continued_fraction, detect_rational

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = Tolerance(rel=1e-14, abs=1e-16, max_refinements=1)


def _gutkin_function(n: int):
    # sin(nx) cos(x) - n sin(x) cos(nx) vanishes exactly where tan(nx) = n tan(x)
    # away from the poles, and is smooth across them
    return lambda x: np.sin(n * x) * np.cos(x) - n * np.sin(x) * np.cos(n * x)


@lru_cache(maxsize=None)
def _gutkin_roots(n: int, grid_per_n: int) -> Tuple[GutkinRoot, ...]:
    g = _gutkin_function(n)
    # consecutive poles of tan(nx) split (0, pi/2) into scan intervals
    edges = np.concatenate([[0.0], (2 * np.arange(n) + 1) * np.pi / (2 * n)])
    edges = np.append(edges[edges < np.pi / 2], np.pi / 2)
    per_interval = max(2, grid_per_n * n // (len(edges) - 1))

    roots: List[GutkinRoot] = []
    for left, right in zip(edges[:-1], edges[1:]):
        x = np.linspace(left, right, per_interval + 2)[1:-1]
        values = g(x)
        for i in np.flatnonzero(np.sign(values[:-1]) != np.sign(values[1:])):
            root = find_root(g, float(x[i]), float(x[i + 1]), ROOT_TOLERANCE)
            roots.append(GutkinRoot(n=n, x=root, residual=float(abs(g(root)))))
    logger.debug(f"tan({n}x) = {n} tan(x): {len(roots)} roots in (0, pi/2)")
    return tuple(roots)


def gutkin_roots(n: int, grid_per_n: int = config.GUTKIN_GRID_PER_N) -> List[GutkinRoot]:
    """All x in (0, pi/2) with tan(n x) = n tan(x)."""
    if abs(n) < 2:
        raise DomainError(f"|n| must be at least 2, got {n}")
    # tan(-n x) = -n tan(x) has the same solutions
    return list(_gutkin_roots(abs(int(n)), grid_per_n))


def gutkin_verdict(angle: float, n_max: int = config.GUTKIN_N_MAX) -> GutkinVerdict:
    nearest: Optional[GutkinRoot] = None
    distance = float("inf")
    for n in range(2, n_max + 1):
        for root in gutkin_roots(n):
            if abs(root.x - angle) < distance:
                nearest, distance = root, abs(root.x - angle)
    return GutkinVerdict(
        n_max=n_max,
        free=distance > config.GUTKIN_MATCH_TOL,
        angle=angle,
        nearest=nearest,
        distance=distance,
    )


def diophantine_check(rho: Number, nu: float = config.DIOPHANTINE_NU,
                      sigma: float = config.DIOPHANTINE_SIGMA,
                      N: int = config.DIOPHANTINE_N) -> DiophantineVerdict:
    """Check |n rho - m| >= nu |m| n^-sigma for 1 <= n <= N.

    Below floor(n rho) the left side grows and the right side shrinks as m
    decreases; above ceil(n rho) the left side grows with slope 1 and the
    right side with slope nu n^-sigma < 1. So floor - 1, floor, ceil and
    ceil + 1 are the only candidates, and for nu small only the middle two
    ever fail.
    """
    if not 0 < nu < 1:
        raise DomainError(f"nu must lie in (0, 1), got {nu}")
    if not sigma > 2.5:
        raise DomainError(f"sigma must exceed 5/2, got {sigma}")
    if N < 2:
        raise DomainError(f"N must be at least 2, got {N}")

    n = np.arange(1, N + 1, dtype=float)
    scaled = n * float(rho)
    floor, ceil = np.floor(scaled), np.ceil(scaled)
    m = np.stack([floor - 1, floor, ceil, ceil + 1])
    gap = np.abs(scaled - m)
    if isinstance(rho, Fraction) and rho.denominator <= N:
        # n rho is an integer exactly at n = q
        gap[:, rho.denominator - 1] = np.where(m[:, rho.denominator - 1] == rho.numerator,
                                               0.0, gap[:, rho.denominator - 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(m >= 1, gap * n ** sigma / (nu * np.abs(m)), np.inf)

    def witness(index: Tuple[int, int]) -> Witness:
        row, col = index
        return Witness(m=int(m[row, col]), n=col + 1, ratio=float(ratio[row, col]))

    worst = witness(np.unravel_index(np.argmin(ratio), ratio.shape))
    failing = np.flatnonzero((ratio < 1.0).any(axis=0))
    first = None
    if failing.size:
        col = failing[0]
        first = witness((int(np.argmin(ratio[:, col])), col))

    return DiophantineVerdict(
        nu=nu, sigma=sigma, checked_up_to=N,
        passed=first is None, witness=first,
        worst_witness=worst if np.isfinite(worst.ratio) else None,
    )


def classify_rotation(rho: Number, params: Optional[ClassifyParams] = None) -> RotationClass:
    params = params or ClassifyParams()
    if not 0 < rho <= 0.5:
        raise DomainError(f"rotation number must lie in (0, 1/2], got {rho!r}")

    rational = detect_rational(rho, params.q_max)
    angle = np.pi * float(rho) if params.angle_convention else float(rho)
    gutkin = gutkin_verdict(angle, params.n_max)
    diophantine = diophantine_check(rho, params.nu, params.sigma, params.N)
    if rational is not None:
        p, q = rational
        exact = Witness(m=p, n=q, ratio=0.0)
        diophantine = replace(diophantine, passed=False, witness=exact, worst_witness=exact)

    logger.info(f"rho={float(rho)!r}: rational={rational}, gutkin free={gutkin.free}, "
                f"diophantine passed={diophantine.passed} up to {params.N}")
    return RotationClass(
        value=float(rho),
        rational=rational,
        continued_fraction=tuple(continued_fraction(rho)),
        gutkin=gutkin,
        diophantine=diophantine,
        params=params,
    )
