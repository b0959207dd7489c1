"""Closed-form tube-packing, length and thickness functions on intervals.

Every public function takes and returns :class:`Interval` values; point
queries use degenerate intervals.  Functions that are monotone on their
domain are evaluated at the endpoints of wide arguments, which keeps the
enclosures tight enough for the verification tasks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

from mpmath import mp, mpf

from app.core.errors import (
    DomainError,
    KTooLarge,
    MissingParam,
    OrderingError,
    UnknownFunction,
    UsageError,
)
from app.services import series
from app.services.constants import (
    AREA_COEFF,
    AREA_SLACK,
    COSMETIC_FLOOR,
    E_FIFTH,
    F_NUM,
    F_SLOPE,
    FOUR_PI_SQ,
    G_COEFF,
    G_THICK_LOG3,
    G_THICK_SMALL,
    HAZE_COEFF,
    INJ_COEFF,
    LIN_OFFSET,
    LIN_SLOPE,
    LOG3,
    MAGID_Z_MIN,
    SHIFT_LOG3,
    SHIFT_SMALL,
    SMALL_EPS_MAX,
    SQRT2,
    SQRT3,
    SYS_SHIFT,
    SYS_UPPER_SHIFT,
    THIN_COEFF,
    TOPOLOGY_DELTA_MAX,
    TOPOLOGY_SLOPE,
    TWO_PI,
)
from app.services.interval import (
    ONE,
    PI,
    Interval,
    bracket_root_monotone,
    imax,
    imin,
    monotone,
)

logger = logging.getLogger(__name__)

# critical point of haze: z_c = sqrt(sqrt5 - 2)
ZC = (Interval(5.0).sqrt() - 2).sqrt()
INV_SQRT3 = 1 / SQRT3
SQRT2_OVER_4 = SQRT2 / 4
S_CORNER = SQRT2_OVER_4 / SQRT2_OVER_4.arcsinh()
# S switches branch at sinh r = 1/sqrt2
R_SPLICE = (1 / SQRT2).arcsinh()
I_Z_MAX = 1 - 1e-12
MEYERHOFF_M = range(1, 9)
SQRT2_MINUS_1 = SQRT2 - 1


@dataclass(frozen=True)
class ComplexLength:
    """Complex length ``length + i twist`` of a closed geodesic."""

    length: Interval
    twist: Interval

    def __post_init__(self) -> None:
        if self.length.lo <= 0:
            raise DomainError("ComplexLength", self.length, "length must be positive")

    @classmethod
    def of(cls, length: float | str | Interval, twist: float | str | Interval = 0.0) -> "ComplexLength":
        return cls(Interval.coerce(length), Interval.coerce(twist))


@dataclass(frozen=True)
class TubeSpec:
    """Model solid torus data: cone angle, core length, twist and radius."""

    cone_angle: Interval
    core_length: Interval
    twist: Interval
    radius: Interval

    def __post_init__(self) -> None:
        if self.cone_angle.lo <= 0 or self.cone_angle.hi > TWO_PI.hi:
            raise DomainError("TubeSpec", self.cone_angle, "cone angle must lie in (0, 2pi]")
        if self.core_length.lo <= 0:
            raise DomainError("TubeSpec", self.core_length, "core length must be positive")
        if self.radius.lo < 0:
            raise DomainError("TubeSpec", self.radius, "radius must be nonnegative")

    @property
    def z(self) -> Interval:
        return self.radius.tanh()

    @property
    def visual_area(self) -> Interval:
        return self.cone_angle * self.core_length

    @property
    def boundary_area(self) -> Interval:
        return self.visual_area * (self.radius * 2).sinh() / 2


def _require_positive(name: str, x: Interval) -> None:
    if x.lo <= 0:
        raise DomainError(name, x, "requires a positive argument")


def _require_unit(name: str, z: Interval) -> None:
    if z.lo <= 0 or z.hi > 1:
        raise DomainError(name, z, "requires 0 < z <= 1")


# haze and h ---------------------------------------------------------------


def _haze_formula(z: Interval) -> Interval:
    return HAZE_COEFF * z * ((1 - z) * (1 + z)) / (1 + z.pow_int(2))


HAZE_MAX = _haze_formula(ZC)


def haze(z: Interval) -> Interval:
    """``3.3957 z (1 - z^2) / (1 + z^2)``; increasing up to ``z_c``, then decreasing."""
    if z.is_degenerate() or z.lo < 0 or z.hi > 1:
        return _haze_formula(z)
    if z.hi <= ZC.lo:
        return monotone(_haze_formula, z, increasing=True)
    if z.lo >= ZC.hi:
        return monotone(_haze_formula, z, increasing=False)
    ends = (_haze_formula(Interval(z.lo)), _haze_formula(Interval(z.hi)))
    return Interval(min(e.lo for e in ends), HAZE_MAX.hi)


def h(r: Interval) -> Interval:
    """Tube-packing function ``3.3957 tanh r / cosh 2r``."""
    return haze(r.tanh())


_BRANCH = Interval(ZC.hi, 1.0)


@lru_cache(maxsize=8192)
def _haze_root(target: float) -> Interval:
    top = _haze_formula(Interval(ZC.hi)).lo
    if target >= top:
        # root lies between z_c and the root for haze(ZC.hi)
        near_peak = bracket_root_monotone(_haze_formula, _BRANCH, top, increasing=False)
        return Interval(ZC.lo, near_peak.hi)
    return bracket_root_monotone(_haze_formula, _BRANCH, target, increasing=False)


def haze_inv(y: Interval) -> Interval:
    """Inverse of haze on its decreasing branch ``[z_c, 1)``.

    Each endpoint of ``y`` is bracketed by verified bisection; ``y = 0``
    maps to ``z = 1``.
    """
    if y.lo < 0 or y.hi <= 0:
        raise DomainError("haze_inv", y, "requires 0 < y")
    if y.hi > HAZE_MAX.hi:
        raise DomainError("haze_inv", y, f"exceeds the maximum of haze ({HAZE_MAX.hi:.9g})")
    upper_root = _haze_root(y.hi)
    far = 1.0 if y.lo == 0 else min(1.0, _haze_root(y.lo).hi)
    return Interval(upper_root.lo, far)


def h_inv(y: Interval) -> Interval:
    return haze_inv(y).arctanh()


def _cardano_root(y: mpf) -> mpf:
    x = y / mpf("3.3957")
    p = -1 - x**2 / 3
    q = 2 * x**3 / 27 + 4 * x / 3
    argument = (3 * q / (2 * p)) * mp.sqrt(-3 / p)
    argument = max(mpf(-1), min(mpf(1), argument))
    theta = mp.acos(argument)
    return 2 * mp.sqrt(x**2 + 3) / 3 * mp.cos(theta / 3) - x / 3


def haze_inv_closed_form(y: Interval | float | str) -> Interval:
    """Trigonometric Cardano root of ``haze(z) = y`` at 60 digits, rounded outward."""
    y = Interval.coerce(y)
    if y.lo <= 0 or y.hi > HAZE_MAX.hi:
        raise DomainError("haze_inv_closed_form", y, "requires 0 < y <= h_max")
    with mp.workdps(60):
        # decreasing branch: the larger y gives the smaller root
        low = _cardano_root(mpf(y.hi))
        high = _cardano_root(mpf(y.lo))
        lo, hi = float(low), float(high)
    return Interval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))


# S, ellipse axes and maximal tubes --------------------------------------


def _s_branch(r: Interval) -> Interval:
    x = r.sinh() / (r * 2).cosh()
    return x / x.arcsinh()


def S(r: Interval) -> Interval:
    """Area correction factor: constant up to ``sinh r = 1/sqrt2``, then ``x / arcsinh x``."""
    if r.lo < 0:
        raise DomainError("S", r, "requires r >= 0")
    if r.hi <= R_SPLICE.lo:
        return S_CORNER
    if r.lo >= R_SPLICE.hi:
        return monotone(_s_branch, r, increasing=False)
    tail = _s_branch(Interval(r.hi))
    return Interval(min(tail.lo, S_CORNER.lo), S_CORNER.hi)


def _s_branch_z(z: Interval) -> Interval:
    x = z * ((1 - z) * (1 + z)).sqrt() / (1 + z.pow_int(2))
    return x / x.arcsinh()


def S_z(z: Interval) -> Interval:
    """``S(arctanh z)`` computed directly in ``z``."""
    if z.lo < 0 or z.hi > 1:
        raise DomainError("S", z, "requires 0 <= z <= 1")
    if z.hi <= INV_SQRT3.lo:
        return S_CORNER
    if z.hi >= 1:
        # x -> 0 and S -> 1 at the cusp
        if z.lo <= INV_SQRT3.hi:
            upper = S_CORNER
        elif z.lo >= 1:
            upper = ONE
        else:
            upper = _s_branch_z(Interval(z.lo))
        return Interval(1.0, upper.hi)
    if z.lo >= INV_SQRT3.hi:
        return monotone(_s_branch_z, z, increasing=False)
    tail = _s_branch_z(Interval(z.hi))
    return Interval(min(tail.lo, S_CORNER.lo), S_CORNER.hi)


def ellipse_axes(Ri: Interval, Rj: Interval) -> Tuple[Interval, Interval]:
    """Semi-axes of the ellipse cut out on the boundary of tube ``i`` by tube ``j``."""
    _require_positive("ellipse_axes", Rj)
    if Ri.hi < Rj.lo:
        raise OrderingError(f"ellipse_axes needs Rj <= Ri, got Ri={Ri} and Rj={Rj}")
    total = Ri + Rj
    a = Ri.cosh() * Rj.sinh() / (S(Rj) * total.cosh())
    b = Ri.sinh() * Rj.sinh() / total.sinh()
    return a, b


def max_tube_area_lb(R: Interval) -> Interval:
    """Lower bound ``sqrt3 sinh^2 R / (S(R) cosh 2R)`` on the boundary area of a maximal tube."""
    _require_positive("max_tube_area_lb", R)
    return SQRT3 * R.sinh().pow_int(2) / (S(R) * (R * 2).cosh())


def max_tube_area_simple(R: Interval) -> Interval:
    _require_positive("max_tube_area_simple", R)
    return AREA_COEFF * R.sinh().pow_int(2) / (R * 2).cosh()


def _sinc(u: Interval) -> Interval:
    """``sin u / u`` for ``0 <= u <= pi``, where it is decreasing."""
    if u.lo < 0 or u.hi > PI.lo:
        raise DomainError("sinc", u, "requires 0 <= u <= pi")

    def point(v: float) -> Interval:
        if v == 0.0:
            return ONE
        x = Interval(v)
        return x.sin() / x

    at_hi = point(u.hi)
    if u.lo == 0.0:
        series_floor = 1 - Interval(u.hi).pow_int(2) / 6
        return Interval(max(at_hi.lo, series_floor.lo), 1.0)
    return Interval(at_hi.lo, min(1.0, point(u.lo).hi))


def _sinhc(u: Interval) -> Interval:
    """``sinh u / u`` for ``u >= 0``, increasing."""

    def point(v: float) -> Interval:
        if v == 0.0:
            return ONE
        x = Interval(v)
        return x.sinh() / x

    if u.lo < 0:
        raise DomainError("sinhc", u, "requires u >= 0")
    return Interval(max(1.0, point(u.lo).lo), point(u.hi).hi)


def _injrad(z: Interval, sech: Interval, s: Interval) -> Interval:
    # 1.361 sqrt(1 - cos A) sinh R / S with A = sech R, rewritten as a sinc
    return INJ_COEFF * SQRT2 / 2 * _sinc(sech / 2) * z / s


def _injrad_point_r(R: Interval) -> Interval:
    return _injrad(R.tanh(), 1 / R.cosh(), S(R))


def max_tube_injrad_lb(R: Interval) -> Interval:
    """Injectivity radius lower bound on the boundary of a maximal tube of radius ``R``."""
    _require_positive("max_tube_injrad_lb", R)
    return monotone(_injrad_point_r, R, increasing=True)


def _injrad_point_z(z: Interval) -> Interval:
    return _injrad(z, ((1 - z) * (1 + z)).sqrt(), S_z(z))


def max_tube_injrad_lb_z(z: Interval) -> Interval:
    """The same bound written in ``Z = tanh R``, valid on ``0 <= Z < 1``."""
    if z.lo < 0 or z.hi >= 1:
        raise DomainError("max_tube_injrad_lb_z", z, "requires 0 <= z < 1")
    return monotone(_injrad_point_z, z, increasing=True)


def injrad_linear(R: Interval) -> Interval:
    return LIN_SLOPE * R.tanh() - LIN_OFFSET


# I, G, q and F -----------------------------------------------------------


def _I_formula(z: Interval) -> Interval:
    one_minus = (1 - z) * (1 + z)
    exponent = one_minus / (1 + z.pow_int(2))
    return FOUR_PI_SQ * 2 * exponent.exp() / (HAZE_COEFF * one_minus)


def I(z: Interval) -> Interval:
    """Upward-deformation threshold ``(2pi)^2/(3.3957(1-z)) exp(int_z^1 ...)``.

    The integrand has the antiderivative ``log(1+w) - 2/(1+w^2)``, which
    turns the whole expression into ``8 pi^2 e^{(1-z^2)/(1+z^2)} / (3.3957 (1-z^2))``.
    """
    if z.lo <= 0:
        raise DomainError("I", z, "requires z > 0")
    if z.hi > I_Z_MAX:
        raise DomainError("I", z, "blows up as z -> 1; requires z <= 1 - 1e-12")
    if z.is_degenerate():
        return _I_formula(z)
    if z.hi <= ZC.lo:
        return monotone(_I_formula, z, increasing=False)
    if z.lo >= ZC.hi:
        return monotone(_I_formula, z, increasing=True)
    ends = (_I_formula(Interval(z.lo)), _I_formula(Interval(z.hi)))
    return Interval(_I_formula(ZC).lo, max(e.hi for e in ends))


def _integrand(w: Interval) -> Interval:
    return 1 / (1 + w) + 4 * w / (1 + w.pow_int(2)).pow_int(2)


def _integrand_fourth(w: Interval) -> Interval:
    odd = 6 * w.pow_int(5) - 20 * w.pow_int(3) + 6 * w
    return 24 / (1 + w).pow_int(5) + 240 * odd / (1 + w.pow_int(2)).pow_int(6)


def I_quadrature(z: Interval, panels: int = 200) -> Interval:
    """Independent enclosure of ``I`` by composite Simpson with an interval remainder."""
    if z.lo <= 0 or z.hi > I_Z_MAX:
        raise DomainError("I_quadrature", z, "requires 0 < z <= 1 - 1e-12")
    nodes = 2 * panels
    length = 1 - z
    step = length / nodes
    total = _integrand(z) + _integrand(Interval(1.0))
    for index in range(1, nodes):
        weight = 4 if index % 2 else 2
        total = total + weight * _integrand(z + step * index)
    simpson = step / 3 * total
    remainder = -length * step.pow_int(4) / 180 * _integrand_fourth(Interval(z.lo, 1.0))
    integral = simpson + remainder
    return FOUR_PI_SQ * integral.exp() / (HAZE_COEFF * length)


def _G_formula(z: Interval) -> Interval:
    return (1 + z.pow_int(2)) / (G_COEFF * z.pow_int(3))


def G(z: Interval) -> Interval:
    _require_unit("G", z)
    return monotone(_G_formula, z, increasing=False)


def _Gtilde_formula(z: Interval) -> Interval:
    return (1 + z.pow_int(2)).pow_int(2) / (G_COEFF * z.pow_int(3) * (3 - z.pow_int(2)))


def Gtilde(z: Interval) -> Interval:
    _require_unit("Gtilde", z)
    return monotone(_Gtilde_formula, z, increasing=False)


def _growth_formula(z: Interval) -> Interval:
    z2 = z.pow_int(2)
    return (3 * z2 - 1) / (z2 * (3 - z2))


def length_growth_rate(z: Interval) -> Interval:
    """``(3Z^2 - 1)/(Z^2 (3 - Z^2))``, increasing; nonnegative once ``Z >= 1/sqrt3``."""
    _require_unit("length_growth_rate", z)
    return monotone(_growth_formula, z, increasing=True)


def q(z: Interval) -> Interval:
    """Visual-area growth exponent, ``length_growth_rate + 1``."""
    return length_growth_rate(z) + 1


def _P_formula(z: Interval) -> Interval:
    return (1 + z.pow_int(2)) / (z.pow_int(3) * (3 - z.pow_int(2)))


def _length_factor(ell: Interval) -> Interval:
    return ell / (F_NUM - F_SLOPE * ell)


def F(z: Interval, ell: Interval) -> Interval:
    """Complex length drift rate; decreasing in ``z``, increasing in ``ell``."""
    _require_unit("F", z)
    if ell.lo < 0:
        raise DomainError("F", ell, "requires ell >= 0")
    if (F_NUM - F_SLOPE * Interval(ell.hi)).lo <= 0:
        raise DomainError("F", ell, "denominator 10.667 - 20.977 ell is not positive")
    return monotone(_P_formula, z, increasing=False) * monotone(_length_factor, ell, increasing=True)


def drift_per_length(z: Interval, ell: Interval) -> Interval:
    """``F(z, ell) / ell``, finite at ``ell = 0``."""
    _require_unit("drift_per_length", z)
    if ell.lo < 0 or (F_NUM - F_SLOPE * Interval(ell.hi)).lo <= 0:
        raise DomainError("drift_per_length", ell, "requires 0 <= ell with a positive denominator")
    return monotone(_P_formula, z, increasing=False) / (F_NUM - F_SLOPE * ell)


# thick parts --------------------------------------------------------------


def _thick_constants(variant: str) -> Tuple[Interval, Interval, Interval]:
    if variant in ("small_eps", "small"):
        return G_THICK_SMALL, SHIFT_SMALL, SMALL_EPS_MAX
    if variant == "log3":
        return G_THICK_LOG3, SHIFT_LOG3, LOG3
    raise DomainError("g_thick", Interval(0.0), f"unknown regime {variant!r}; expected small_eps or log3")


def g_thick(eps: Interval, J: Interval, variant: str = "log3") -> Interval:
    """Length threshold ``eps^5 log J / (K J^5 cosh^5(J eps/2 + c))`` of the thick-part theorem."""
    coeff, shift, eps_max = _thick_constants(variant)
    if eps.lo < 0 or eps.hi > eps_max.hi:
        raise DomainError("g_thick", eps, f"requires 0 <= eps <= {eps_max.hi:.6g}")
    if J.lo < 1 or J.hi > E_FIFTH.hi:
        raise DomainError("g_thick", J, "requires 1 <= J <= e^(1/5)")
    denominator = coeff * J.pow_int(5) * (J * eps / 2 + shift).cosh().pow_int(5)
    return eps.pow_int(5) * J.log() / denominator


def thick_delta(eps: Interval, J: Interval, variant: str = "log3") -> Interval:
    """Thin-part scale ``(eps/J)^2 / (7.256 cosh^2(J eps/2 + c))`` guaranteed after deformation."""
    _, shift, eps_max = _thick_constants(variant)
    _require_positive("thick_delta", eps)
    if eps.hi > eps_max.hi:
        raise DomainError("thick_delta", eps, f"requires eps <= {eps_max.hi:.6g}")
    return (eps / J).pow_int(2) / (THIN_COEFF * (J * eps / 2 + shift).cosh().pow_int(2))


def tube_distance_bounds(delta: Interval, eps: Interval, regime: str = "log3") -> Tuple[Interval, Interval]:
    """Lower and upper bounds on the distance between the delta-thin and eps-thick parts."""
    _, shift, eps_max = _thick_constants(regime)
    _require_positive("tube_distance_bounds", delta)
    if eps.hi > eps_max.hi:
        raise DomainError("tube_distance_bounds", eps, f"requires eps <= {eps_max.hi:.6g}")
    if not delta.hi < eps.lo:
        raise DomainError("tube_distance_bounds", delta, "requires delta < eps")

    easy = lower_bound_easy(delta, eps)
    argument = eps / (THIN_COEFF * delta).sqrt()
    if argument.lo >= 1:
        lower = imax(easy, argument.arccosh() - shift)
    elif argument.hi < 1:
        # undefined arccosh branch never realizes the maximum
        lower = easy
    else:
        partial = Interval(1.0, argument.hi).arccosh() - shift
        lower = Interval(easy.lo, max(easy.hi, partial.hi))

    ratio = (eps / 2).sinh() / (delta / 2).sinh()
    upper = Interval(max(1.0, ratio.lo), max(1.0, ratio.hi)).arccosh()
    return lower, upper


def lower_bound_easy(delta: Interval, eps: Interval) -> Interval:
    return (eps - delta) / 2


def epsilon_area(eps: Interval) -> Interval:
    """Area ``sqrt3/2 eps^2`` of a boundary torus of the eps-thin tube."""
    return SQRT3 / 2 * eps.pow_int(2)


def singular_tube_radius_lb(eps: Interval, visual_area: Interval) -> Interval:
    _require_positive("singular_tube_radius_lb", eps)
    _require_positive("singular_tube_radius_lb", visual_area)
    return (SQRT3 * eps.pow_int(2) / visual_area).arcsinh() / 2


def margulis_topology_threshold(delta: Interval) -> Interval:
    """Length below which a link lies inside the delta-thin part."""
    _require_positive("margulis_topology_threshold", delta)
    if delta.hi >= TOPOLOGY_DELTA_MAX.lo:
        raise DomainError("margulis_topology_threshold", delta, "requires delta < 0.9623")
    linear = TOPOLOGY_SLOPE * delta
    tube = haze((delta + LIN_OFFSET) / LIN_SLOPE) / TWO_PI
    return imin(linear, tube)


# systole and Meyerhoff ----------------------------------------------------


def ell_max(L: Interval) -> Interval:
    if L.lo < COSMETIC_FLOOR.lo:
        raise DomainError("ell_max", L, "requires L >= 10.1")
    return TWO_PI / (L.pow_int(2) - SYS_SHIFT)


def _sysmin_formula(L: Interval) -> Interval:
    ell = TWO_PI / (L.pow_int(2) - SYS_SHIFT)
    z = haze_inv(2 * TWO_PI * ell + TWO_PI * AREA_SLACK)
    return ell * (FOUR_PI_SQ * F(z, ell)).exp()


def sysmin(L: Interval) -> Interval:
    """Systole threshold of a filling with normalized length ``L``; strictly decreasing."""
    if L.lo < COSMETIC_FLOOR.lo:
        raise DomainError("sysmin", L, "requires L >= 10.1")
    return monotone(_sysmin_formula, L, increasing=False)


def sysmin_sandwich(L: Interval) -> Tuple[Interval, Interval]:
    """The bounds ``2pi/L^2`` and ``2pi/(L^2 - 58)`` that sysmin lies strictly between."""
    square = L.pow_int(2)
    return TWO_PI / square, TWO_PI / (square - SYS_UPPER_SHIFT)


def cosmetic_cutoff(sys: Interval) -> Interval:
    """Normalized length ``max{10.1, sqrt(2pi/sys + 58)}`` beyond which cosmetic pairs are excluded."""
    _require_positive("cosmetic_cutoff", sys)
    return imax(COSMETIC_FLOOR, (TWO_PI / sys + SYS_UPPER_SHIFT).sqrt())


def meyerhoff_k(ell: Interval, tau: Interval) -> Interval:
    return imin(*((m * ell).cosh() - (m * tau).cos() for m in MEYERHOFF_M))


def _meyerhoff_radius(k: float) -> Interval:
    x = Interval(k)
    sinh_sq = (1 - 2 * x).sqrt() / (2 * x) - Interval(0.5)
    return Interval(max(0.0, sinh_sq.lo), max(0.0, sinh_sq.hi)).sqrt().arcsinh()


def meyerhoff_tube(ell: Interval, tau: Interval) -> Interval:
    """Embedded tube radius about a short geodesic with complex length ``ell + i tau``."""
    _require_positive("meyerhoff_tube", ell)
    k = meyerhoff_k(ell, tau)
    cap = SQRT2_MINUS_1
    if k.lo >= cap.hi:
        raise KTooLarge(f"k = {k} is not below sqrt2 - 1")
    if k.hi <= 0:
        raise DomainError("meyerhoff_tube", k, "k must be positive")
    k_hi = min(k.hi, cap.lo)
    # radius decreases in k; k reaching sqrt2 - 1 means radius 0
    lower = 0.0 if k.hi >= cap.lo else _meyerhoff_radius(k_hi).lo
    upper = math.inf if k.lo <= 0 else _meyerhoff_radius(k.lo).hi
    return Interval(lower, upper)


# complex lengths ----------------------------------------------------------


def dhyp(first: ComplexLength, second: ComplexLength) -> Interval:
    """Hyperbolic distance between ``i L1`` and ``i L2`` in the upper half plane."""
    chord = ((first.twist - second.twist).pow_int(2) + (first.length - second.length).pow_int(2)).sqrt()
    scale = 2 * (first.length * second.length).sqrt()
    return 2 * (chord / scale).arcsinh()


def kenprop_bounds(K: Interval, len_ref: Interval) -> Tuple[Interval, Interval]:
    """Length ratio ``[e^-K, e^K]`` and twist drift ``sinh(K) len_ref`` for a distance bound ``K``."""
    if K.lo < 0:
        raise DomainError("kenprop_bounds", K, "requires K >= 0")
    top = Interval(K.hi)
    ratio = Interval((-top).exp().lo, top.exp().hi)
    return ratio, K.sinh() * len_ref


# mean value multiplier ------------------------------------------------------


def _f_direct(r: Interval) -> Interval:
    angle = SQRT2 * r
    return r.cosh() * angle.sin() - SQRT2 * r.sinh() * angle.cos()


def mean_value_multiplier(r: Interval) -> Interval:
    """``3 sqrt(2pi (sinh 2r - 2r)) / (4 pi f(r))`` on ``0 < r < pi/sqrt2``."""
    limit = PI / SQRT2
    if r.lo <= 0 or r.hi >= limit.lo:
        raise DomainError("mean_value_multiplier", r, "requires 0 < r < pi/sqrt2")
    if r.hi <= series.SERIES_RADIUS:
        scale = r.pow_real(Interval(-1.5))
        p = series.f_over_r3(r)
        s = series.sinh_excess_over_r3(r)
        return 3 * (PI * s).sqrt() / (4 * PI * p) * scale
    f = _f_direct(r)
    if f.lo <= 0:
        raise DomainError("mean_value_multiplier", r, "f(r) enclosure is not positive")
    excess = (2 * r).sinh() - 2 * r
    return 3 * (TWO_PI * excess).sqrt() / (4 * PI * f)


def puiseux_envelope(r: Interval, c: Interval) -> Interval:
    """``(C/2) sqrt(3/pi) r^(-3/2)``."""
    _require_positive("puiseux_envelope", r)
    return c / 2 * (3 / PI).sqrt() * r.pow_real(Interval(-1.5))


# boundary terms -------------------------------------------------------------


def boundary_bound_simple(
    ell: Interval,
    z: Interval,
    area: Optional[Interval] = None,
    z_min: Optional[Interval] = None,
) -> Interval:
    """Bound on the boundary term of a multi-tube with smallest ``z`` and boundary area ``area``.

    ``z_min`` defaults to ``haze_inv(2 pi ell)``, the largest value the
    hypothesis ``ell <= haze(Z_min)/(2pi)`` allows.
    """
    _require_positive("boundary_bound_simple", ell)
    _require_unit("boundary_bound_simple", z)
    z_min = haze_inv(TWO_PI * ell) if z_min is None else z_min
    if z_min.lo < MAGID_Z_MIN.lo:
        raise DomainError("boundary_bound_simple", z_min, "requires Z_min >= 0.6622")
    area = AREA_COEFF * z.pow_int(2) / (1 + z.pow_int(2)) if area is None else area
    _require_positive("boundary_bound_simple", area)
    denominator = TWO_PI - FOUR_PI_SQ * Gtilde(z_min) * ell
    if denominator.lo <= 0:
        raise DomainError("boundary_bound_simple", ell, "ell too large for the boundary bound")
    return (ell / denominator).pow_int(2) / (4 * area * z * (3 - z.pow_int(2)))


def boundary_cap(ell: Interval) -> Interval:
    """``4 pi^2 Gtilde(haze_inv(2 pi ell))``; at most 12.355 once ``ell <= 0.075``."""
    return FOUR_PI_SQ * Gtilde(haze_inv(TWO_PI * Interval(ell.hi)))


def boundary_B(delta: Interval, divisor: Interval, exponent: Interval) -> Interval:
    """``B(delta) = delta^e / K``."""
    if exponent.hi == 0.0:
        return 1 / divisor
    return delta.pow_real(exponent) / divisor


def boundary_coefficient(delta_max: Interval, divisor: Interval, exponent: Interval) -> Interval:
    """Coefficient ``c`` with ``b <= (ell/(c delta))^2`` for ``delta <= delta_max`` and ``ell <= delta^2 B``."""
    b_max = boundary_B(delta_max, divisor, exponent)
    sinh_arg = SQRT3 / (TWO_PI * b_max)
    tube_z = SQRT3 / (3 + FOUR_PI_SQ * b_max.pow_int(2)).sqrt()
    area_factor = SQRT3 / 2 * (delta_max.cosh() - delta_max.sinh() / tube_z)
    z_bd = (sinh_arg.arcsinh() / 2 - delta_max / 2).tanh()
    visual = delta_max.pow_int(2) * b_max
    z_min = haze_inv(TWO_PI * visual)
    drift = TWO_PI - FOUR_PI_SQ * Gtilde(z_min) * visual
    if area_factor.lo <= 0 or drift.lo <= 0:
        raise DomainError("boundary_coefficient", delta_max, "delta_max too large for B")
    return 2 * (area_factor * z_bd * (3 - z_bd.pow_int(2))).sqrt() * drift


# appendix identities ------------------------------------------------------


def z_from_r(r: Interval) -> Interval:
    return r.tanh()


def r_from_z(z: Interval) -> Interval:
    return z.arctanh()


def sinh_from_z(z: Interval) -> Interval:
    return z / ((1 - z) * (1 + z)).sqrt()


def cosh_from_z(z: Interval) -> Interval:
    return 1 / ((1 - z) * (1 + z)).sqrt()


def sinh_diff_factor(s: Interval, z: Interval) -> Interval:
    """``cosh s - sinh s / z``; ``sinh(r - s) >= sinh r`` times this whenever ``tanh r >= z``."""
    _require_positive("sinh_diff_factor", z)
    return s.cosh() - s.sinh() / z


def growth_ratios(r: Interval, s: Interval) -> Tuple[Interval, Interval, Interval]:
    """``(cosh s / cosh r, e^(s-r), sinh s / sinh r)``, strictly increasing for ``0 < r < s``."""
    _require_positive("growth_ratios", r)
    return s.cosh() / r.cosh(), (s - r).exp(), s.sinh() / r.sinh()


def euclidean_injectivity_factors(A: Interval, B: Interval) -> Tuple[Interval, Interval]:
    """``(1 - cos A)/A^2`` and ``(cosh B - 1)/B^2`` as half-angle sinc forms."""
    return _sinc(A / 2).pow_int(2) / 2, _sinhc(B / 2).pow_int(2) / 2


def cusp_distance(euclidean: Interval) -> Interval:
    """Hyperbolic distance between points at Euclidean distance ``d`` on a horosphere."""
    return 2 * (euclidean / 2).arcsinh()


# eval registry --------------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    fn: Callable[..., object]
    params: Tuple[str, ...]
    citation: str
    outputs: Tuple[str, ...] = ("value",)


TEXT_PARAMS = {"variant", "regime"}


def _dhyp_args(len1: Interval, twist1: Interval, len2: Interval, twist2: Interval) -> Interval:
    return dhyp(ComplexLength(len1, twist1), ComplexLength(len2, twist2))


FUNCTION_SPECS: Tuple[FunctionSpec, ...] = (
    FunctionSpec("h", h, ("r",), "def:h-function"),
    FunctionSpec("haze", haze, ("z",), "rem:haze"),
    FunctionSpec("haze_inv", haze_inv, ("y",), "eq:haze-inv"),
    FunctionSpec("haze_inv_closed_form", haze_inv_closed_form, ("y",), "eq:haze-inv"),
    FunctionSpec("h_inv", h_inv, ("y",), "cor:h-inverse"),
    FunctionSpec("S", S, ("r",), "eq:s-define"),
    FunctionSpec("ellipse_axes", ellipse_axes, ("Ri", "Rj"), "prop:ellipse", ("a", "b")),
    FunctionSpec("max_tube_area_lb", max_tube_area_lb, ("R",), "thm:max-tube-area"),
    FunctionSpec("max_tube_injrad_lb", max_tube_injrad_lb, ("R",), "thm:max-tube-injectivity"),
    FunctionSpec("injrad_linear", injrad_linear, ("R",), "eq:max-tube-injectivity-linear"),
    FunctionSpec("I", I, ("z",), "def:i-function"),
    FunctionSpec("I_quadrature", I_quadrature, ("z",), "def:i-function"),
    FunctionSpec("G", G, ("z",), "lem:hkp1079"),
    FunctionSpec("Gtilde", Gtilde, ("z",), "lem:hkp1079"),
    FunctionSpec("q", q, ("z",), "lem:visual-area-sigma"),
    FunctionSpec("length_growth_rate", length_growth_rate, ("z",), "lem:len-monotonicity"),
    FunctionSpec("F", F, ("z", "ell"), "def:f-function"),
    FunctionSpec("g_thick", g_thick, ("eps", "J", "variant"), "eq:thick-stays-thick"),
    FunctionSpec("thick_delta", thick_delta, ("eps", "J", "variant"), "thm:thick-stays-thick"),
    FunctionSpec("sysmin", sysmin, ("L",), "def:systole-l"),
    FunctionSpec("ell_max", ell_max, ("L",), "def:systole-l"),
    FunctionSpec("cosmetic_cutoff", cosmetic_cutoff, ("sys",), "thm:cosmetic-one-cusp"),
    FunctionSpec("meyerhoff_k", meyerhoff_k, ("ell", "tau"), "lem:meyerhoff"),
    FunctionSpec("meyerhoff_tube", meyerhoff_tube, ("ell", "tau"), "lem:meyerhoff"),
    FunctionSpec(
        "tube_distance_bounds",
        tube_distance_bounds,
        ("delta", "eps", "regime"),
        "thm:effective-dist-log3",
        ("lower", "upper"),
    ),
    FunctionSpec("lower_bound_easy", lower_bound_easy, ("delta", "eps"), "lem:lower-bound-easy"),
    FunctionSpec("epsilon_area", epsilon_area, ("eps",), "lem:epsilon-area"),
    FunctionSpec(
        "singular_tube_radius_lb", singular_tube_radius_lb, ("eps", "visual_area"), "lem:singular-tube-rad"
    ),
    FunctionSpec("dhyp", _dhyp_args, ("len1", "twist1", "len2", "twist2"), "def:hyp-distance-length"),
    FunctionSpec("kenprop_bounds", kenprop_bounds, ("K", "len_ref"), "lem:kenprop-h2", ("ratio", "twist")),
    FunctionSpec("mean_value_multiplier", mean_value_multiplier, ("r",), "thm:mean-value"),
    FunctionSpec("puiseux_envelope", puiseux_envelope, ("r", "C"), "lem:puiseux"),
    FunctionSpec("boundary_bound_simple", boundary_bound_simple, ("ell", "z"), "prop:boundary-bound"),
    FunctionSpec("boundary_cap", boundary_cap, ("ell",), "prop:boundary-bound"),
    FunctionSpec(
        "boundary_coefficient", boundary_coefficient, ("delta_max", "K", "e"), "rem:boundary-delta-messy"
    ),
    FunctionSpec(
        "margulis_topology_threshold", margulis_topology_threshold, ("delta",), "lem:delta-tube-embeds"
    ),
    FunctionSpec("z_from_r", z_from_r, ("r",), "lem:tanh-sinh-cosh"),
    FunctionSpec("r_from_z", r_from_z, ("z",), "lem:tanh-sinh-cosh"),
    FunctionSpec("sinh_diff_factor", sinh_diff_factor, ("s", "z"), "lem:sinh-diff"),
    FunctionSpec(
        "growth_ratios", growth_ratios, ("r", "s"), "lem:sinh-cosh-growth", ("cosh_ratio", "exp", "sinh_ratio")
    ),
    FunctionSpec(
        "euclidean_injectivity_factors",
        euclidean_injectivity_factors,
        ("A", "B"),
        "lem:euc-injectivity-general",
        ("lower", "upper"),
    ),
    FunctionSpec("cusp_distance", cusp_distance, ("d",), "lem:euc-injectivity-cusp"),
)

FUNCTIONS: Dict[str, FunctionSpec] = {spec.name: spec for spec in FUNCTION_SPECS}


def evaluate(name: str, args: Sequence[str]) -> Tuple[FunctionSpec, Dict[str, Interval]]:
    """Evaluate a registered function on decimal string arguments."""
    spec = FUNCTIONS.get(name)
    if spec is None:
        raise UnknownFunction(name)
    required = [p for p in spec.params if p not in TEXT_PARAMS]
    usage = f"eval {name} " + " ".join(spec.params)
    if len(args) < len(required):
        raise MissingParam(required[len(args)], usage)
    if len(args) > len(spec.params):
        raise UsageError(f"too many arguments for {name}\nusage: {usage}")
    parsed = [arg if param in TEXT_PARAMS else Interval.parse(arg) for param, arg in zip(spec.params, args)]
    result = spec.fn(*parsed)
    values = result if isinstance(result, tuple) else (result,)
    logger.debug("eval %s%s", name, tuple(args))
    return spec, dict(zip(spec.outputs, values))
