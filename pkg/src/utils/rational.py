"""Rotation number parsing and rational approximation utilities."""

from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .. import config
from ..exceptions import DomainError

Number = Union[float, Fraction]


def parse_rotation(text: str) -> Number:
    """Parse a rotation number written as 'p/q' (exact) or as a decimal."""
    if not text or not isinstance(text, str):
        raise DomainError(f"empty rotation number: {text!r}")

    text = text.strip()
    if "/" in text:
        numerator, _, denominator = text.partition("/")
        try:
            return Fraction(int(numerator), int(denominator))
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"malformed rotation number '{text}'")
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"malformed rotation number '{text}'")


def as_pair(rho: Number, q_max: int = config.ORBIT_MAX_Q) -> Optional[Tuple[int, int]]:
    """(p, q) when rho is exactly rational with q <= q_max, else None."""
    ratio = Fraction(rho).limit_denominator(q_max)
    if ratio == Fraction(rho) or float(ratio) == float(rho):
        return ratio.numerator, ratio.denominator
    return None


def detect_rational(x: Number, q_max: int = config.RATIONAL_Q_MAX,
                    tol: float = config.RATIONAL_TOL) -> Optional[Tuple[int, int]]:
    """Best approximation with denominator <= q_max, if it is within tol of x."""
    ratio = Fraction(x).limit_denominator(q_max)
    if abs(float(ratio) - float(x)) <= tol:
        return ratio.numerator, ratio.denominator
    return None


def continued_fraction(x: Number, depth: int = 16, tol: float = config.RATIONAL_TOL) -> List[int]:
    """Leading partial quotients of x, stopping once the convergent is within tol."""
    target = Fraction(x)
    terms: List[int] = []
    residue = target
    for _ in range(depth):
        term = residue.numerator // residue.denominator
        terms.append(int(term))
        residue -= term
        if residue == 0 or abs(convergent(terms) - target) <= tol:
            break
        residue = 1 / residue
    return terms


def convergent(terms: List[int]) -> Fraction:
    """Value of a finite simple continued fraction."""
    value = Fraction(terms[-1])
    for term in reversed(terms[:-1]):
        value = term + 1 / value
    return value
