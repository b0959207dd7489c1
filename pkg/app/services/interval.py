"""Directed-rounding interval arithmetic and the branch-and-bound prover.

Endpoints are IEEE doubles nudged outward with :func:`math.nextafter`
whenever a floating point operation may have rounded, so the exact real
result set is always a subset of the returned interval.  Sums are only
nudged when the TwoSum error term says they were inexact; products and
quotients with a zero operand are exact.  libm results are padded by two
ulps.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from app.core.config import settings
from app.core.errors import (
    DivisionByZeroInterval,
    DomainError,
    InvalidInterval,
    NoStraddle,
    NotMonotone,
)

logger = logging.getLogger(__name__)

_INF = math.inf
_LIBM_ULPS = 2
TRIG_LIMIT = 2.0**10


def _down(value: float, steps: int = 1) -> float:
    for _ in range(steps):
        value = math.nextafter(value, -_INF)
    return value


def _up(value: float, steps: int = 1) -> float:
    for _ in range(steps):
        value = math.nextafter(value, _INF)
    return value


# Inputs at which a libm function is exact, so no padding is applied.
_EXACT: dict[str, dict[float, float]] = {
    "exp": {0.0: 1.0},
    "log": {1.0: 0.0},
    "sqrt": {0.0: 0.0, 1.0: 1.0},
    "sin": {0.0: 0.0},
    "cos": {0.0: 1.0},
    "sinh": {0.0: 0.0},
    "cosh": {0.0: 1.0},
    "tanh": {0.0: 0.0},
    "arcsinh": {0.0: 0.0},
    "arccosh": {1.0: 0.0},
    "arctanh": {0.0: 0.0},
    "arccos": {1.0: 0.0},
    "arctan": {0.0: 0.0},
}

_LIBM: dict[str, Callable[[float], float]] = {
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "arcsinh": math.asinh,
    "arccosh": math.acosh,
    "arctanh": math.atanh,
    "arccos": math.acos,
    "arctan": math.atan,
}


def _eval(name: str, x: float) -> float:
    try:
        return _LIBM[name](x)
    except OverflowError:
        return _INF


def _point_lo(name: str, x: float) -> float:
    exact = _EXACT[name].get(x)
    if exact is not None:
        return exact
    value = _eval(name, x)
    steps = 1 if name == "sqrt" else _LIBM_ULPS
    return value if math.isinf(value) else _down(value, steps)


def _point_hi(name: str, x: float) -> float:
    exact = _EXACT[name].get(x)
    if exact is not None:
        return exact
    value = _eval(name, x)
    steps = 1 if name == "sqrt" else _LIBM_ULPS
    return value if math.isinf(value) else _up(value, steps)


class Interval:
    """Closed real interval ``[lo, hi]``; immutable and hashable."""

    __slots__ = ("lo", "hi")

    lo: float
    hi: float

    def __init__(self, lo: float, hi: Optional[float] = None) -> None:
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidInterval(f"NaN endpoint in [{lo}, {hi}]")
        if lo > hi:
            raise InvalidInterval(f"lower endpoint {lo} exceeds upper endpoint {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Interval is immutable")

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidInterval(f"NaN endpoint in [{lo}, {hi}]")
        obj = object.__new__(cls)
        object.__setattr__(obj, "lo", lo)
        object.__setattr__(obj, "hi", hi)
        return obj

    # construction -------------------------------------------------------

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Interval":
        nearest = float(value)
        exact = Fraction(nearest)
        if exact == value:
            return cls._raw(nearest, nearest)
        if exact < value:
            return cls._raw(nearest, _up(nearest))
        return cls._raw(_down(nearest), nearest)

    @classmethod
    def from_str(cls, text: str) -> "Interval":
        """Outward-rounded enclosure of an exact decimal string."""
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInterval(f"not a decimal number: {text!r}") from exc
        return cls.from_fraction(value)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``"x"`` or ``"lo..hi"`` decimal input, rounding outward."""
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo = cls.from_str(lo_text)
            hi = cls.from_str(hi_text)
            if lo.lo > hi.hi:
                raise InvalidInterval(f"empty range {text!r}")
            return cls._raw(lo.lo, hi.hi)
        return cls.from_str(text)

    @classmethod
    def coerce(cls, value: "Interval | float | int | Fraction | str") -> "Interval":
        if isinstance(value, Interval):
            return value
        if isinstance(value, Fraction):
            return cls.from_fraction(value)
        if isinstance(value, str):
            return cls.from_str(value)
        if isinstance(value, (int, float)):
            if isinstance(value, int) and abs(value) > 2**53:
                return cls.from_fraction(Fraction(value))
            return cls._raw(float(value), float(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Interval")

    # inspection ---------------------------------------------------------

    @property
    def width(self) -> float:
        return _up(self.hi - self.lo) if self.hi > self.lo else 0.0

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            return 0.0 if self.lo < 0 < self.hi else (self.lo if math.isinf(self.hi) else self.hi)
        return self.lo + (self.hi - self.lo) / 2

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, other: "Interval | float") -> bool:
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    __contains__ = contains

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_list(self) -> list[float]:
        return [self.lo, self.hi]

    def format(self, digits: int = 12) -> str:
        """Render with ``digits`` significant digits, rounding outward."""
        return f"[{_decimal_text(self.lo, digits, ROUND_FLOOR)}, {_decimal_text(self.hi, digits, ROUND_CEILING)}]"

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self) -> str:
        return f"[{self.lo:.17g}, {self.hi:.17g}]"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    # arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __add__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return Interval._raw(_sum_lo(self.lo, o.lo), _sum_hi(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return Interval._raw(_sum_lo(self.lo, -o.hi), _sum_hi(self.hi, -o.lo))

    def __rsub__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return _hull_rounded([(a, b, _mul(a, b)) for a, b in pairs])

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByZeroInterval(f"division by an interval containing zero: {o}")
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        return _hull_rounded([(a, 1.0, a / b) for a, b in pairs])

    def __rtruediv__(self, other: object) -> "Interval":
        try:
            o = Interval.coerce(other)  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented
        return o / self

    def __abs__(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval._raw(0.0, max(-self.lo, self.hi))

    def __pow__(self, exponent: object) -> "Interval":
        if isinstance(exponent, int):
            return self.pow_int(exponent)
        try:
            return self.pow_real(Interval.coerce(exponent))  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented

    def pow_int(self, n: int) -> "Interval":
        if n == 0:
            return Interval._raw(1.0, 1.0)
        if n < 0:
            return 1 / self.pow_int(-n)
        if n == 1:
            return self
        if n % 2 == 0:
            lo_abs = 0.0 if self.lo <= 0.0 <= self.hi else min(abs(self.lo), abs(self.hi))
            hi_abs = self.mag
            lo = 0.0 if lo_abs == 0.0 else max(0.0, _down(_ipow(lo_abs, n), _LIBM_ULPS))
            return Interval._raw(lo, _up(_ipow(hi_abs, n), _LIBM_ULPS))
        lo = _ipow(self.lo, n)
        hi = _ipow(self.hi, n)
        lo = lo if self.lo == 0.0 else _down(lo, _LIBM_ULPS)
        hi = hi if self.hi == 0.0 else _up(hi, _LIBM_ULPS)
        return Interval._raw(lo, hi)

    def pow_real(self, exponent: "Interval") -> "Interval":
        """``x ** y`` for ``x >= 0``; extremes are attained at corners."""
        if self.lo < 0:
            raise DomainError("pow", self, "base must be nonnegative")
        if self.lo == 0.0 and exponent.lo <= 0.0:
            raise DomainError("pow", self, "zero base needs a positive exponent")
        corners_lo = []
        corners_hi = []
        for base in (self.lo, self.hi):
            for power in (exponent.lo, exponent.hi):
                if base == 0.0:
                    corners_lo.append(0.0)
                    corners_hi.append(0.0)
                    continue
                value = _real_pow(base, power)
                exact = base == 1.0 or power == 0.0
                corners_lo.append(value if exact else _down(value, _LIBM_ULPS))
                corners_hi.append(value if exact else _up(value, _LIBM_ULPS))
        return Interval._raw(max(0.0, min(corners_lo)), max(corners_hi))

    # elementary functions -----------------------------------------------

    def _increasing(self, name: str) -> "Interval":
        return Interval._raw(_point_lo(name, self.lo), _point_hi(name, self.hi))

    def exp(self) -> "Interval":
        result = self._increasing("exp")
        return Interval._raw(max(0.0, result.lo), result.hi)

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise DomainError("log", self, "requires lo > 0")
        return self._increasing("log")

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise DomainError("sqrt", self, "requires lo >= 0")
        result = self._increasing("sqrt")
        return Interval._raw(max(0.0, result.lo), result.hi)

    def sinh(self) -> "Interval":
        return self._increasing("sinh")

    def cosh(self) -> "Interval":
        if self.lo >= 0:
            lo, hi = self.lo, self.hi
        elif self.hi <= 0:
            lo, hi = -self.hi, -self.lo
        else:
            return Interval._raw(1.0, _point_hi("cosh", self.mag))
        return Interval._raw(max(1.0, _point_lo("cosh", lo)), _point_hi("cosh", hi))

    def tanh(self) -> "Interval":
        result = self._increasing("tanh")
        return Interval._raw(max(-1.0, result.lo), min(1.0, result.hi))

    def arcsinh(self) -> "Interval":
        return self._increasing("arcsinh")

    def arccosh(self) -> "Interval":
        if self.lo < 1:
            raise DomainError("arccosh", self, "requires lo >= 1")
        result = self._increasing("arccosh")
        return Interval._raw(max(0.0, result.lo), result.hi)

    def arctanh(self) -> "Interval":
        if self.lo <= -1 or self.hi >= 1:
            raise DomainError("arctanh", self, "requires an interval inside (-1, 1)")
        return self._increasing("arctanh")

    def arctan(self) -> "Interval":
        return self._increasing("arctan")

    def arccos(self) -> "Interval":
        if self.lo < -1 or self.hi > 1:
            raise DomainError("arccos", self, "requires an interval inside [-1, 1]")
        return Interval._raw(max(0.0, _point_lo("arccos", self.hi)), _point_hi("arccos", self.lo))

    def sin(self) -> "Interval":
        return self._periodic("sin", PI_HALF)

    def cos(self) -> "Interval":
        return self._periodic("cos", ZERO)

    def _periodic(self, name: str, peak: "Interval") -> "Interval":
        if self.mag > TRIG_LIMIT:
            raise DomainError(name, self, f"argument reduction limited to |x| <= {TRIG_LIMIT:g}")
        if self.hi - self.lo >= 6.3:
            return Interval._raw(-1.0, 1.0)
        # maxima at peak + 2k*pi, minima at peak + pi + 2k*pi
        has_max = _hits_lattice(self, peak)
        has_min = _hits_lattice(self, peak + PI)
        ends_lo = min(_point_lo(name, self.lo), _point_lo(name, self.hi))
        ends_hi = max(_point_hi(name, self.lo), _point_hi(name, self.hi))
        lo = -1.0 if has_min else max(-1.0, ends_lo)
        hi = 1.0 if has_max else min(1.0, ends_hi)
        return Interval._raw(lo, hi)


def _mul(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _two_sum(a: float, b: float) -> tuple[float, float]:
    """``s = fl(a + b)`` and the exact error ``a + b - s``; ``s`` must be finite."""
    s = a + b
    b_virtual = s - a
    a_virtual = s - b_virtual
    return s, (a - a_virtual) + (b - b_virtual)


def _sum_lo(a: float, b: float) -> float:
    if math.isinf(a + b):
        return _down(a + b)
    s, err = _two_sum(a, b)
    return _down(s) if err < 0 else s


def _sum_hi(a: float, b: float) -> float:
    if math.isinf(a + b):
        return _up(a + b)
    s, err = _two_sum(a, b)
    return _up(s) if err > 0 else s


def _hull_rounded(terms: list[tuple[float, float, float]]) -> "Interval":
    # (a, b, result): a zero factor gives an exact zero, anything else is padded
    lows = []
    highs = []
    for a, b, value in terms:
        if a == 0.0 or b == 0.0:
            lows.append(0.0)
            highs.append(0.0)
        else:
            lows.append(_down(value))
            highs.append(_up(value))
    return Interval._raw(min(lows), max(highs))


def _ipow(base: float, n: int) -> float:
    try:
        return math.pow(base, n)
    except OverflowError:
        return math.copysign(_INF, base) if n % 2 else _INF


def _real_pow(base: float, power: float) -> float:
    try:
        return math.pow(base, power)
    except OverflowError:
        return _INF


def _decimal_text(value: float, digits: int, rounding: str) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    rounded = Context(prec=digits, rounding=rounding).create_decimal(Decimal(value))
    return f"{rounded:g}" if rounded != 0 else "0"


def _hits_lattice(x: Interval, offset: Interval) -> bool:
    """Whether ``x`` may contain a point ``offset + 2*k*pi`` for integer ``k``."""
    scaled = (x - offset) / TWO_PI
    return math.floor(scaled.hi) >= math.ceil(scaled.lo)


ZERO = Interval(0.0)
ONE = Interval(1.0)
PI = Interval(math.pi, math.nextafter(math.pi, _INF))
PI_HALF = PI / 2
TWO_PI = PI * 2


# elementary functions as free functions ---------------------------------

ELEMENTARY = (
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "sinh",
    "cosh",
    "tanh",
    "arcsinh",
    "arccosh",
    "arctanh",
    "arccos",
    "arctan",
)


def elem(x: "Interval | float", name: str) -> Interval:
    if name not in ELEMENTARY:
        raise DomainError(name, x, "not an elementary function")
    return getattr(Interval.coerce(x), name)()


def arith(a: "Interval | float", b: "Interval | float | int", op: str) -> Interval:
    left = Interval.coerce(a)
    if op == "neg":
        return -left
    if op == "pow_int":
        if not isinstance(b, int):
            raise InvalidInterval("pow_int needs an integer exponent")
        return left.pow_int(b)
    right = Interval.coerce(b)
    if op == "add":
        return left + right
    if op == "sub":
        return left - right
    if op == "mul":
        return left * right
    if op == "div":
        return left / right
    raise InvalidInterval(f"unknown arithmetic operation {op!r}")


def imax(*values: Interval) -> Interval:
    return Interval._raw(max(v.lo for v in values), max(v.hi for v in values))


def imin(*values: Interval) -> Interval:
    return Interval._raw(min(v.lo for v in values), min(v.hi for v in values))


def monotone(fn: Callable[[Interval], Interval], x: Interval, increasing: bool = True) -> Interval:
    """Enclose ``fn`` over ``x`` from its values at the two endpoints.

    Only valid when ``fn`` is monotone on ``x``; removes the dependency
    blow-up of evaluating a long expression on a wide argument.
    """
    if x.is_degenerate():
        return fn(x)
    at_lo = fn(Interval._raw(x.lo, x.lo))
    at_hi = fn(Interval._raw(x.hi, x.hi))
    if increasing:
        return Interval._raw(at_lo.lo, at_hi.hi)
    return Interval._raw(at_hi.lo, at_lo.hi)


# boxes and the prover ----------------------------------------------------


class Box(tuple):
    """Ordered tuple of intervals, one per free variable."""

    def __new__(cls, dims: Iterable[Interval]) -> "Box":
        items = tuple(Interval.coerce(d) for d in dims)
        if not items:
            raise InvalidInterval("a box needs at least one coordinate")
        return super().__new__(cls, items)

    @classmethod
    def of(cls, *bounds: Sequence[float]) -> "Box":
        return cls(Interval(lo, hi) for lo, hi in bounds)

    def key(self) -> tuple[tuple[float, float], ...]:
        return tuple((d.lo, d.hi) for d in self)

    def bisect(self, reference: Sequence[float]) -> Optional[tuple["Box", "Box"]]:
        """Halve the coordinate of largest width relative to ``reference``."""
        best = -1
        best_ratio = 0.0
        for index, (dim, scale) in enumerate(zip(self, reference)):
            if scale <= 0 or dim.hi <= dim.lo:
                continue
            ratio = (dim.hi - dim.lo) / scale
            if ratio > best_ratio:
                best, best_ratio = index, ratio
        if best < 0:
            return None
        dim = self[best]
        middle = dim.mid
        if not dim.lo < middle < dim.hi:
            return None
        left = list(self)
        right = list(self)
        left[best] = Interval._raw(dim.lo, middle)
        right[best] = Interval._raw(middle, dim.hi)
        return Box(left), Box(right)

    def to_list(self) -> list[list[float]]:
        return [d.to_list() for d in self]


class ProofStatus(str, Enum):
    VERIFIED = "Verified"
    COUNTEREXAMPLE = "Counterexample"
    DEPTH_EXCEEDED = "DepthExceeded"


@dataclass(frozen=True)
class ProofResult:
    status: ProofStatus
    boxes_examined: int
    max_depth_used: int
    box: Optional[Box] = None
    min_lower: float = _INF

    @property
    def verified(self) -> bool:
        return self.status is ProofStatus.VERIFIED


Expression = Callable[[Box], Interval]


def prove_nonneg(
    f: Expression,
    domain: Box | Sequence[Interval],
    margin: float = 0.0,
    max_depth: Optional[int] = None,
    workers: Optional[int] = None,
    strict: bool = False,
    max_boxes: Optional[int] = None,
) -> ProofResult:
    """Certify ``f >= -margin`` on ``domain`` by adaptive bisection.

    Boxes are processed level by level; each level is evaluated in order,
    so the outcome does not depend on ``workers``.  When several boxes
    refute the claim the lexicographically smallest one is reported.
    """
    if margin < 0:
        raise InvalidInterval("margin must be nonnegative")
    domain = domain if isinstance(domain, Box) else Box(domain)
    max_depth = settings.prove_max_depth if max_depth is None else max_depth
    workers = settings.workers if workers is None else workers
    max_boxes = settings.prove_max_boxes if max_boxes is None else max_boxes
    reference = [d.hi - d.lo for d in domain]

    frontier: list[Box] = [domain]
    examined = 0
    depth = 0
    min_lower = _INF
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while True:
            values = list(executor.map(f, frontier)) if executor else [f(box) for box in frontier]
            examined += len(frontier)
            refuting: list[Box] = []
            undecided: list[Box] = []
            for box, value in zip(frontier, values):
                if value.hi < -margin:
                    refuting.append(box)
                elif value.lo > -margin or (not strict and value.lo >= -margin):
                    min_lower = min(min_lower, value.lo)
                else:
                    undecided.append(box)
            logger.debug("depth %d: %d boxes, %d undecided", depth, len(frontier), len(undecided))
            if refuting:
                return _finish(ProofStatus.COUNTEREXAMPLE, examined, depth, min(refuting, key=Box.key), min_lower)
            if not undecided:
                return _finish(ProofStatus.VERIFIED, examined, depth, None, min_lower)
            if depth >= max_depth or examined + 2 * len(undecided) > max_boxes:
                return _finish(ProofStatus.DEPTH_EXCEEDED, examined, depth, min(undecided, key=Box.key), min_lower)
            children: list[Box] = []
            stuck: list[Box] = []
            for box in undecided:
                halves = box.bisect(reference)
                if halves is None:
                    stuck.append(box)
                else:
                    children.extend(halves)
            if stuck:
                return _finish(ProofStatus.DEPTH_EXCEEDED, examined, depth, min(stuck, key=Box.key), min_lower)
            frontier = children
            depth += 1
    finally:
        if executor:
            executor.shutdown(wait=True)


def _finish(
    status: ProofStatus, examined: int, depth: int, box: Optional[Box], min_lower: float
) -> ProofResult:
    logger.info("prove_nonneg %s after %d boxes (depth %d)", status.value, examined, depth)
    return ProofResult(status=status, boxes_examined=examined, max_depth_used=depth, box=box, min_lower=min_lower)


def _tighten(side: Callable[[float], int], sure: float, unsure: float, sign: int, tol: float) -> float:
    """Move ``sure`` (where the sign is known) toward ``unsure`` by bisection."""
    while abs(unsure - sure) > tol:
        mid = sure + (unsure - sure) / 2
        if mid in (sure, unsure):
            break
        if side(mid) == sign:
            sure = mid
        else:
            unsure = mid
    return sure


def bracket_root_monotone(
    f: Callable[[Interval], Interval],
    domain: Interval,
    target: float,
    tol: Optional[float] = None,
    increasing: Optional[bool] = None,
    derivative: Optional[Callable[[Interval], Interval]] = None,
) -> Interval:
    """Verified bisection for the unique root of ``f(x) = target`` in ``domain``.

    Both ends of the result are certified: ``f`` is certainly below
    ``target`` at one and certainly above (or equal) at the other.  Where
    the enclosure of ``f`` cannot separate ``target`` the bracket is the
    narrowest one bisection can certify, which may be wider than ``tol``.
    """
    tol = settings.root_tolerance if tol is None else tol
    a, b = domain.lo, domain.hi
    fa = f(Interval._raw(a, a))
    fb = f(Interval._raw(b, b))
    if derivative is not None:
        slope = derivative(domain)
        if slope.lo > 0:
            direction = True
        elif slope.hi < 0:
            direction = False
        else:
            raise NotMonotone(f"derivative enclosure {slope} contains zero on {domain}")
        if increasing is not None and increasing != direction:
            raise NotMonotone(f"derivative sign contradicts the declared direction on {domain}")
        increasing = direction
    elif increasing is None:
        if fa.hi < fb.lo:
            increasing = True
        elif fa.lo > fb.hi:
            increasing = False
        else:
            raise NotMonotone(f"endpoint values {fa} and {fb} do not order on {domain}")
    elif (increasing and fa.lo > fb.hi) or (not increasing and fa.hi < fb.lo):
        raise NotMonotone(f"endpoint values {fa} and {fb} contradict the declared direction")

    low_end, high_end = (fa, fb) if increasing else (fb, fa)
    if not (low_end.lo <= target <= high_end.hi):
        raise NoStraddle(f"target {target!r} outside [{low_end.lo!r}, {high_end.hi!r}] on {domain}")
    if not (low_end.hi <= target <= high_end.lo):
        # the root could sit just outside the domain
        raise NoStraddle(f"target {target!r} is not separated from {low_end} and {high_end} on {domain}")

    def side(x: float) -> int:
        fx = f(Interval._raw(x, x))
        if (fx.hi < target) if increasing else (fx.lo > target):
            return -1
        if (fx.lo > target) if increasing else (fx.hi < target):
            return 1
        return 0

    while b - a > tol:
        m = a + (b - a) / 2
        if not a < m < b:
            break
        where = side(m)
        if where < 0:
            a = m
        elif where > 0:
            b = m
        else:
            a = _tighten(side, a, m, -1, tol)
            b = _tighten(side, b, m, 1, tol)
            break
    if b - a > tol:
        logger.debug("root of f = %r bracketed to width %.3g, above tol %.3g", target, b - a, tol)
    return Interval._raw(a, b)
