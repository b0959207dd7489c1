"""Truncated power series with rigorous tail bounds.

``f(r) = cosh r sin(sqrt2 r) - sqrt2 sinh r cos(sqrt2 r)`` vanishes to third
order at ``r = 0`` and ``sinh 2r - 2r`` to third order as well, so both are
handled through ``f/r^3`` and ``(sinh 2r - 2r)/r^3`` as series in ``u = r^2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Tuple

from app.core.errors import DomainError
from app.services.constants import SQRT2
from app.services.interval import Interval

DEFAULT_TERMS = 24
SERIES_RADIUS = 0.5


@lru_cache(maxsize=None)
def mean_value_coefficients(n: int) -> Fraction:
    """Coefficient ``d_n`` of ``r^n`` in ``f(r)/sqrt2``; ``d_3 = 1``."""
    if n % 2 == 0:
        return Fraction(0)
    total = Fraction(0)
    # cosh r * sin(sqrt2 r): r^(2k) * r^(2j+1)
    for k in range(0, n // 2 + 1):
        j2 = n - 1 - 2 * k
        if j2 < 0:
            break
        j = j2 // 2
        total += Fraction((-1) ** j * 2**j, factorial(2 * k) * factorial(2 * j + 1))
    # sqrt2 sinh r * cos(sqrt2 r): r^(2k+1) * r^(2j)
    for k in range(0, n // 2 + 1):
        j2 = n - 1 - 2 * k
        if j2 < 0:
            break
        j = j2 // 2
        total -= Fraction((-1) ** j * 2**j, factorial(2 * k + 1) * factorial(2 * j))
    return total


@lru_cache(maxsize=None)
def sinh_excess_coefficients(i: int) -> Fraction:
    """Coefficient of ``u^i`` in ``(sinh 2r - 2r)/r^3``."""
    return Fraction(2 ** (2 * i + 3), factorial(2 * i + 3))


def _horner(coefficients: Tuple[Interval, ...], u: Interval) -> Interval:
    acc = coefficients[-1]
    for coefficient in reversed(coefficients[:-1]):
        acc = acc * u + coefficient
    return acc


@lru_cache(maxsize=None)
def _f_coefficients(terms: int) -> Tuple[Interval, ...]:
    return tuple(Interval.from_fraction(mean_value_coefficients(3 + 2 * i)) for i in range(terms))


@lru_cache(maxsize=None)
def _sinh_coefficients(terms: int) -> Tuple[Interval, ...]:
    return tuple(Interval.from_fraction(sinh_excess_coefficients(i)) for i in range(terms))


def _check_radius(r: Interval) -> None:
    if r.lo < 0 or r.hi > SERIES_RADIUS:
        raise DomainError("series", r, f"series enclosures need 0 <= r <= {SERIES_RADIUS}")


def f_over_r3(r: Interval, terms: int = DEFAULT_TERMS) -> Interval:
    """Enclosure of ``f(r) / (sqrt2 r^3)``, equal to 1 at ``r = 0``."""
    _check_radius(r)
    u = r.pow_int(2)
    poly = _horner(_f_coefficients(terms), u)
    # |sqrt2 d_n| <= (1+sqrt2)^(n+1)/n!; first omitted degree is n = 2*terms + 3
    n = 2 * terms + 3
    a = SQRT2 + 1
    radius = Interval(r.hi)
    first = a.pow_int(n + 1) * radius.pow_int(n - 3) / (Interval.coerce(factorial(n)) * SQRT2)
    ratio = a * radius / (n + 1)
    if ratio.hi >= 1:
        raise DomainError("f_over_r3", r, "series tail does not contract")
    tail = (first / (1 - ratio)).hi
    return poly + Interval(-tail, tail)


def sinh_excess_over_r3(r: Interval, terms: int = DEFAULT_TERMS) -> Interval:
    """Enclosure of ``(sinh 2r - 2r) / r^3``, equal to 4/3 at ``r = 0``."""
    _check_radius(r)
    u = r.pow_int(2)
    poly = _horner(_sinh_coefficients(terms), u)
    radius_sq = Interval(r.hi).pow_int(2)
    first = Interval.from_fraction(sinh_excess_coefficients(terms)) * radius_sq.pow_int(terms)
    ratio = radius_sq * 4 / ((2 * terms + 4) * (2 * terms + 5))
    tail = (first / (1 - ratio)).hi
    return poly + Interval(0.0, tail)


def puiseux_ratio(r: Interval, c: Interval, terms: int = DEFAULT_TERMS) -> Interval:
    """``Phi(r)/r^6`` where ``Phi(r) = 2 f(r)^2 C^2 - 3 r^3 (sinh 2r - 2r)``."""
    p = f_over_r3(r, terms)
    s = sinh_excess_over_r3(r, terms)
    return c.pow_int(2) * p.pow_int(2) * 4 - s * 3
