"""Hypothesis gates: check a theorem's numeric hypotheses and report what it certifies.

Each gate compares interval enclosures.  A hypothesis ``lhs <= rhs`` is
Certified when ``lhs.hi <= rhs.lo``, Refuted when ``lhs.lo > rhs.hi`` and
Inconclusive otherwise.  Inputs that enclose the same value as a
threshold (a decimal typed exactly at the boundary) count as Certified,
since the hypotheses are non-strict.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.errors import DomainError, MissingParam, UnknownGate, UsageError
from app.models import GateReport, GateStatus
from app.services import special
from app.services.constants import (
    BILIP_B,
    BILIP_DELTA_MAX,
    BILIP_EXP,
    BILIP_FILL_NUM,
    BILIP_L_NUM,
    BILIP_L_SHIFT,
    BIS_MEDIUM,
    BIS_MEDIUM_DELTA,
    BIS_TINY,
    BIS_TINY_DELTA,
    BOUNDARY_C_012,
    BOUNDARY_C_106,
    BOUNDARY_C_938,
    CONE_COMPONENT,
    CONE_MARGULIS_LARGE,
    CONE_MARGULIS_MEDIUM,
    CONE_MARGULIS_SMALL,
    CONE_TOTAL,
    COSMETIC_FLOOR,
    E_FIFTH,
    ENDPOINT_COEFF,
    ENDPOINT_EXP,
    ENDPOINT_J_CAP,
    ENDPOINT_RATIO,
    ENDPOINT_SLOPE,
    FOUR_PI_SQ,
    HOLD_ELL,
    HOLD_TOTAL,
    LOG3,
    MAGID_Z_MIN,
    MARGULIS_CAP,
    MARGULIS_SHIFT,
    PUISEUX_C_STANDARD,
    PUISEUX_C_TIGHT,
    SHIFT_LOG3,
    SHORT_ELL,
    SHORT_M_INTERCEPT,
    SHORT_M_SLOPE,
    SMALL_EPS_MAX,
    SYS_FOR_MEDIUM,
    SYS_FOR_SMALL,
    TOTAL_FOR_LARGE,
    TWO_PI,
    UNIQUE_Z,
    UP_L2,
    UP_M,
    UP_M_COEFF,
    UP_SHIFT,
    VOL_FOR_MEDIUM,
    VOL_FOR_SMALL,
    AREA_SLACK,
)
from app.services.interval import ZERO, Interval, imax, imin

logger = logging.getLogger(__name__)

# re-exported so slope enumeration and the gates share one code path
cosmetic_cutoff = special.cosmetic_cutoff

_STATUS_RANK = {GateStatus.CERTIFIED: 0, GateStatus.INCONCLUSIVE: 1, GateStatus.REFUTED: 2}


def _point_like(x: Interval) -> bool:
    return x.hi - x.lo <= 8 * math.ulp(max(abs(x.lo), abs(x.hi), 1e-300))


def compare_le(lhs: Interval, rhs: Interval) -> GateStatus:
    """Tri-state verdict on ``lhs <= rhs``."""
    if lhs.hi <= rhs.lo:
        return GateStatus.CERTIFIED
    if lhs.lo > rhs.hi:
        return GateStatus.REFUTED
    if _point_like(rhs) and rhs.contains(lhs):
        return GateStatus.CERTIFIED
    return GateStatus.INCONCLUSIVE


@dataclass
class LinkLengths:
    """Lengths of the components of a geodesic link."""

    components: Tuple[Interval, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise DomainError("LinkLengths", self.components, "needs at least one component")
        for length in self.components:
            if length.lo <= 0:
                raise DomainError("LinkLengths", length, "component lengths must be positive")

    @classmethod
    def parse(cls, text: str) -> "LinkLengths":
        return cls(tuple(Interval.parse(part) for part in text.split(",") if part.strip()))

    @property
    def total(self) -> Interval:
        acc = self.components[0]
        for length in self.components[1:]:
            acc = acc + length
        return acc


@dataclass
class _Checks:
    gate_id: str
    citation: str
    inputs: Dict[str, object]
    verdicts: List[Tuple[str, GateStatus]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def le(self, name: str, lhs: Interval, rhs: Interval) -> GateStatus:
        verdict = compare_le(lhs, rhs)
        self.verdicts.append((name, verdict))
        return verdict

    def ge(self, name: str, lhs: Interval, rhs: Interval) -> GateStatus:
        return self.le(name, rhs, lhs)

    @property
    def status(self) -> GateStatus:
        worst = GateStatus.CERTIFIED
        for _, verdict in self.verdicts:
            if _STATUS_RANK[verdict] > _STATUS_RANK[worst]:
                worst = verdict
        return worst

    def failed(self) -> Optional[str]:
        status = self.status
        for name, verdict in self.verdicts:
            if verdict is status and status is not GateStatus.CERTIFIED:
                return name
        return None

    def report(self, quantities: Optional[Callable[[], Dict[str, Interval]]] = None) -> GateReport:
        status = self.status
        values: Dict[str, Interval] = {}
        if status is GateStatus.CERTIFIED and quantities is not None:
            values = quantities()
        elif status is not GateStatus.CERTIFIED:
            logger.info("gate %s %s on hypothesis %s", self.gate_id, status.value, self.failed())
        return GateReport(
            gate_id=self.gate_id,
            status=status,
            quantities={name: (value.lo, value.hi) for name, value in values.items()},
            inputs=_echo(self.inputs),
            citation=self.citation,
            failed=self.failed(),
            notes=list(self.notes),
        )


def _echo(inputs: Mapping[str, object]) -> Dict[str, object]:
    echoed: Dict[str, object] = {}
    for name, value in inputs.items():
        if value is None:
            continue
        if isinstance(value, Interval):
            echoed[name] = value.to_list()
        elif isinstance(value, LinkLengths):
            echoed[name] = [c.to_list() for c in value.components]
        else:
            echoed[name] = value
    return echoed


def _in_range(name: str, x: Interval, lo: float, hi: Interval, open_lo: bool = True) -> None:
    below = x.lo <= lo if open_lo else x.lo < lo
    if below or x.hi > hi.hi:
        raise DomainError(name, x, f"outside the range ({lo:g}, {hi.hi:.6g}]")


# cone deformations --------------------------------------------------------


def gate_cone_def_exists(lengths: LinkLengths) -> GateReport:
    checks = _Checks("cone-def", "thm:cone-def-exists", {"lengths": lengths})
    for index, length in enumerate(lengths.components):
        checks.le(f"component_{index}<=0.0996", length, CONE_COMPONENT)
    total = lengths.total
    checks.le("total<=0.15601", total, CONE_TOTAL)

    def quantities() -> Dict[str, Interval]:
        # drilled link: cone angle 2pi around a core of the total length
        z_min = special.haze_inv(TWO_PI * total)
        tube = special.TubeSpec(TWO_PI, total, ZERO, z_min.arctanh())
        return {
            "total": total,
            "visual_area": tube.visual_area,
            "R_min": tube.radius,
            "Z_min": z_min,
            "boundary_area": tube.boundary_area,
            "h_max": special.HAZE_MAX,
        }

    return checks.report(quantities)


def gate_upward(L: Interval, target_Z: Interval) -> GateReport:
    if target_Z.hi < special.INV_SQRT3.lo:
        raise DomainError("gate_upward", target_Z, "target Z must be at least 1/sqrt3")
    checks = _Checks("upward", "thm:upward-cone-def-r-bounds", {"L": L, "Z": target_Z})
    threshold = special.I(target_Z)
    square = L.pow_int(2)
    checks.ge("L^2>=I(Z)", square, threshold)
    return checks.report(
        lambda: {"L2": square, "I": threshold, "R_min": target_Z.arctanh()}
    )


def magid_bounds(Z_min: Interval, L: Optional[Interval] = None, ell: Optional[Interval] = None) -> GateReport:
    """Two-sided bounds relating the normalized filling length and the core length."""
    if Z_min.lo < MAGID_Z_MIN.lo:
        raise DomainError("magid_bounds", Z_min, "requires Z_min >= 0.6622")
    if (L is None) == (ell is None):
        raise UsageError("magid needs exactly one of --L or --ell")
    g_term = FOUR_PI_SQ * special.G(Z_min)
    gt_term = FOUR_PI_SQ * special.Gtilde(Z_min)
    checks = _Checks("magid", "lem:magid-length-general", {"Z_min": Z_min, "L": L, "ell": ell})
    if L is not None:
        square = L.pow_int(2)
        threshold = special.I(Z_min)
        checks.ge("L^2>=I(Z_min)", square, threshold)
        checks.ge("L^2>4pi^2G", square, g_term)
        return checks.report(
            lambda: {
                "ell_lower": TWO_PI / (square + gt_term),
                "ell_upper": TWO_PI / (square - g_term),
                "I": threshold,
                "G_term": g_term,
                "Gtilde_term": gt_term,
            }
        )
    assert ell is not None
    checks.le("ell<=haze(Z_min)/2pi", ell, special.haze(Z_min) / TWO_PI)
    base = TWO_PI / ell
    return checks.report(
        lambda: {
            "L2_lower": base - gt_term,
            "L2_upper": base + g_term,
            "G_term": g_term,
            "Gtilde_term": gt_term,
        }
    )


# bilipschitz --------------------------------------------------------------


def bilip_J(ell: Interval, delta: Interval) -> Interval:
    return (BILIP_EXP * ell / delta.pow_real(Interval(2.5))).exp()


def gate_bilip(delta: Interval, ell: Optional[Interval] = None, L: Optional[Interval] = None) -> GateReport:
    _in_range("gate_bilip", delta, 0.0, BILIP_DELTA_MAX)
    if (L is None) == (ell is None):
        raise UsageError("bilip needs exactly one of --L or --ell")
    checks = _Checks("bilip", "thm:bilip", {"delta": delta, "ell": ell, "L": L})
    if ell is not None:
        checks.le("ell<=delta^2/17.11", ell, delta.pow_int(2) / BILIP_B)
        return checks.report(lambda: {"ell": ell, "J": bilip_J(ell, delta)})
    assert L is not None
    square = L.pow_int(2)
    checks.ge("L^2>=107.6/delta^2+14.41", square, BILIP_L_NUM / delta.pow_int(2) + BILIP_L_SHIFT)

    def quantities() -> Dict[str, Interval]:
        bound = TWO_PI / (square - BILIP_L_SHIFT)
        derived = Interval(0.0, bound.hi)
        return {"ell_bound": bound, "J": bilip_J(derived, delta)}

    return checks.report(quantities)


def gate_bilip_bis(delta: Interval, ell: Interval, J: Interval) -> GateReport:
    _in_range("gate_bilip_bis", delta, 0.0, BIS_MEDIUM_DELTA)
    _in_range("gate_bilip_bis", J, 1.0, E_FIFTH)
    checks = _Checks("bilip-bis", "thm:bilip-bis", {"delta": delta, "ell": ell, "J": J})
    if delta.hi <= BIS_TINY_DELTA.lo:
        divisor, regime = BIS_TINY, "delta<=0.012"
    else:
        # straddling 0.012 takes the smaller threshold
        divisor, regime = BIS_MEDIUM, "0.012<delta<=0.106"
    checks.notes.append(f"regime {regime}")
    threshold = delta.pow_real(Interval(2.5)) * J.log() / divisor
    checks.le(f"ell<=delta^2.5 logJ/{divisor.hi:.4g}", ell, threshold)
    return checks.report(lambda: {"ell_threshold": threshold, "J": J})


def gate_effective_bb(delta: Interval, J: Interval, direction: str = "drill") -> GateReport:
    _in_range("gate_effective_bb", delta, 0.0, BILIP_DELTA_MAX)
    if J.lo <= 1:
        raise DomainError("gate_effective_bb", J, "requires J > 1")
    checks = _Checks("effective-bb", "cor:effective-bb-special", {"delta": delta, "J": J, "direction": direction})
    scaled = delta.pow_real(Interval(2.5)) * J.log()
    if direction == "drill":
        tube = delta.pow_int(2) / BILIP_B
        bilip = scaled / BILIP_EXP
        threshold = imin(tube, bilip)
        checks.notes.append(_binding(tube, bilip, smaller=True))
        return checks.report(lambda: {"ell_threshold": threshold, "tube_branch": tube, "bilip_branch": bilip})
    if direction == "fill":
        tube = BILIP_L_NUM / delta.pow_int(2) + BILIP_L_SHIFT
        bilip = BILIP_FILL_NUM / scaled + BILIP_L_SHIFT
        threshold = imax(tube, bilip)
        checks.notes.append(_binding(tube, bilip, smaller=False))
        return checks.report(lambda: {"L2_threshold": threshold, "tube_branch": tube, "bilip_branch": bilip})
    raise UsageError(f"direction must be drill or fill, got {direction!r}")


def _binding(tube: Interval, bilip: Interval, smaller: bool) -> str:
    if tube.hi < bilip.lo:
        return "binding branch: " + ("tube" if smaller else "bilipschitz")
    if bilip.hi < tube.lo:
        return "binding branch: " + ("bilipschitz" if smaller else "tube")
    return "binding branch: undecided"


def gate_bilip_endpoints(
    eps: Interval,
    ell: Optional[Interval] = None,
    L: Optional[Interval] = None,
    J: Optional[Interval] = None,
) -> GateReport:
    """Bilipschitz control of thick parts; with ``J`` given, report the corollary thresholds."""
    _in_range("gate_bilip_endpoints", eps, 0.0, LOG3)
    if sum(x is not None for x in (ell, L, J)) != 1:
        raise UsageError("bilip-endpoints needs exactly one of --ell, --L or --J")
    checks = _Checks("bilip-endpoints", "thm:bilip-endpoints", {"eps": eps, "ell": ell, "L": L, "J": J})
    threshold = eps.pow_int(5) / (ENDPOINT_COEFF * (ENDPOINT_SLOPE * eps + SHIFT_LOG3).cosh().pow_int(5))
    root = eps.pow_real(Interval(2.5))
    l2_threshold = TWO_PI / threshold + MARGULIS_SHIFT

    def J_of(length: Interval) -> Interval:
        return (ENDPOINT_EXP * length / root).exp()

    common = {"ell_threshold": threshold, "L2_threshold": l2_threshold, "thick_target": eps / ENDPOINT_RATIO}
    checks.notes.append("thick part of M embeds in the eps/1.2-thick part of the filled manifold")
    if J is not None:
        if J.lo <= 1:
            raise DomainError("gate_bilip_endpoints", J, "requires J > 1")
        bilip_ell = root * J.log() / ENDPOINT_EXP
        bilip_l2 = TWO_PI * ENDPOINT_EXP / (root * J.log()) + MARGULIS_SHIFT
        return checks.report(
            lambda: {
                **common,
                "drill_ell_threshold": imin(threshold, bilip_ell),
                "fill_L2_threshold": imax(l2_threshold, bilip_l2),
            }
        )
    if ell is not None:
        checks.le("ell<=eps^5/(6771cosh^5)", ell, threshold)
        return checks.report(lambda: {**common, "J": J_of(ell), "J_at_threshold": J_of(threshold)})
    assert L is not None
    square = L.pow_int(2)
    checks.ge("L^2>=2pi*6771cosh^5/eps^5+11.7", square, l2_threshold)

    def from_L() -> Dict[str, Interval]:
        bound = TWO_PI / (square - MARGULIS_SHIFT)
        return {**common, "ell_bound": bound, "J": J_of(Interval(0.0, bound.hi))}

    return checks.report(from_L)


def endpoint_J_cap_holds(eps: Interval) -> bool:
    """Whether ``J`` stays below 1.0005 when ``ell`` sits at the endpoint threshold."""
    threshold = eps.pow_int(5) / (ENDPOINT_COEFF * (ENDPOINT_SLOPE * eps + SHIFT_LOG3).cosh().pow_int(5))
    J = (ENDPOINT_EXP * threshold / eps.pow_real(Interval(2.5))).exp()
    return J.hi < ENDPOINT_J_CAP.lo


# thick parts --------------------------------------------------------------


def gate_thick_stays_thick(eps: Interval, J: Interval, ell: Optional[Interval] = None) -> GateReport:
    _in_range("gate_thick_stays_thick", eps, 0.0, LOG3)
    _in_range("gate_thick_stays_thick", J, 1.0, E_FIFTH)
    regime = "small_eps" if eps.hi <= SMALL_EPS_MAX.lo else "log3"
    checks = _Checks("thick-stays-thick", "thm:thick-stays-thick", {"eps": eps, "J": J, "ell": ell})
    checks.notes.append(f"regime {regime}")
    checks.notes.append("eps-thick part of M_a stays inside the eps/J-thick part of every M_t")
    threshold = special.g_thick(eps, J, regime)
    if ell is not None:
        checks.le("ell<=g(eps,J)", ell, threshold)

    def quantities() -> Dict[str, Interval]:
        delta = special.thick_delta(eps, J, regime)
        values = {"ell_threshold": threshold, "delta": delta, "thick_ratio": eps / J}
        if delta.hi < eps.lo:
            lower, upper = special.tube_distance_bounds(delta, eps, regime)
            values["distance_lower"] = lower
            values["distance_upper"] = upper
        return values

    return checks.report(quantities)


# short geodesics ------------------------------------------------------------


def gate_short_geodesic(
    direction: str,
    m: Interval,
    ell: Optional[Interval] = None,
    L: Optional[Interval] = None,
    L2: Optional[Interval] = None,
) -> GateReport:
    """Short geodesics stay short along the cone deformation, drilling or filling."""
    inputs = {"direction": direction, "ell": ell, "m": m, "L": L, "L2": L2}
    if direction == "drill":
        if ell is None:
            raise MissingParam("ell", "gate short-geodesic --direction drill --ell X --m Y")
        checks = _Checks("short-geodesic", "thm:short-stays-short", inputs)
        checks.le("ell<=0.0735", ell, SHORT_ELL)
        checks.le("m<=0.0996-0.352ell", m, SHORT_M_INTERCEPT - SHORT_M_SLOPE * ell)

        def drill() -> Dict[str, Interval]:
            z_min = special.haze_inv(TWO_PI * (ell + m + AREA_SLACK))
            return _length_control(z_min, ell, m)

        return checks.report(drill)
    if direction == "fill":
        if L2 is None:
            if L is None:
                raise MissingParam("L2", "gate short-geodesic --direction fill --L2 X --m Y")
            L2 = L.pow_int(2)
        square = L2
        checks = _Checks("short-geodesic", "thm:short-stays-short-upward", inputs)
        checks.ge("L^2>=128", square, UP_L2)
        checks.le("m<=0.056", m, UP_M)

        def fill() -> Dict[str, Interval]:
            shifted = square - UP_SHIFT
            effective = TWO_PI / shifted
            z_min = special.haze_inv(FOUR_PI_SQ / shifted + TWO_PI * UP_M_COEFF * m)
            return {**_length_control(z_min, effective, m), "ell_effective": effective}

        return checks.report(fill)
    raise UsageError(f"direction must be drill or fill, got {direction!r}")


def _length_control(z_min: Interval, ell: Interval, m: Interval) -> Dict[str, Interval]:
    K = FOUR_PI_SQ * special.F(z_min, ell)
    ratio, twist = special.kenprop_bounds(K, m)
    return {"Z_min": z_min, "R_min": z_min.arctanh(), "K": K, "length_ratio": ratio, "twist": twist}


def gate_hold_short_geodesics(ell: Interval, m: Interval) -> GateReport:
    checks = _Checks("hold-short-geodesics", "thm:hold-short-geodesics", {"ell": ell, "m": m})
    checks.le("ell<=0.735", ell, HOLD_ELL)
    if ell.hi > SHORT_ELL.lo and ell.lo <= HOLD_ELL.hi:
        logger.warning("hold-short-geodesics: ell=%s exceeds 0.0735 but is within the stated 0.735", ell)
        checks.notes.append("ell exceeds 0.0735; the stated bound 0.735 is applied as printed")
    total = ell + 2 * m
    checks.le("ell+2m<=0.14", total, HOLD_TOTAL)

    def quantities() -> Dict[str, Interval]:
        z_hat = special.haze_inv(TWO_PI * (total + AREA_SLACK))
        return {
            "Z_hat_min": z_hat,
            "R_hat_min": z_hat.arctanh(),
            "dhyp_bound": FOUR_PI_SQ * special.F(z_hat, ell),
        }

    return checks.report(quantities)


# boundary term and pointwise norm ------------------------------------------


@dataclass(frozen=True)
class BoundaryPreset:
    delta_max: Interval
    divisor: Interval
    exponent: Interval
    coefficient: Interval


BOUNDARY_PRESETS: Dict[str, BoundaryPreset] = {
    "standard": BoundaryPreset(BILIP_DELTA_MAX, BILIP_B, Interval(0.0), BOUNDARY_C_938),
    "medium": BoundaryPreset(BIS_MEDIUM_DELTA, Interval.from_str("17.49"), Interval(0.5), BOUNDARY_C_106),
    "tiny": BoundaryPreset(BIS_TINY_DELTA, Interval.from_str("16.62"), Interval(0.5), BOUNDARY_C_012),
}


def boundary_term_bound(
    delta: Interval,
    ell: Interval,
    delta_max: Interval,
    divisor: Interval,
    exponent: Interval,
) -> GateReport:
    """Coefficient ``c`` with ``b <= (ell/(c delta))^2``, for ``B(delta) = delta^e / K``."""
    if delta_max.hi > BILIP_DELTA_MAX.hi:
        raise DomainError("boundary_term_bound", delta_max, "requires delta_max <= 0.938")
    _in_range("boundary_term_bound", delta, 0.0, delta_max)
    if exponent.lo < 0:
        raise DomainError("boundary_term_bound", exponent, "B must be nondecreasing")
    if special.boundary_B(delta_max, divisor, exponent).hi > (1 / BILIP_B).hi:
        raise DomainError("boundary_term_bound", divisor, "requires B <= 1/17.11")
    checks = _Checks(
        "boundary-term",
        "thm:boundary-delta",
        {"delta": delta, "ell": ell, "delta_max": delta_max, "K": divisor, "e": exponent},
    )
    checks.le("ell<=delta^2 B(delta)", ell, delta.pow_int(2) * special.boundary_B(delta, divisor, exponent))

    def quantities() -> Dict[str, Interval]:
        c = special.boundary_coefficient(delta_max, divisor, exponent)
        return {"c": c, "b_bound": (ell / (c * delta)).pow_int(2)}

    return checks.report(quantities)


@dataclass(frozen=True)
class PointwiseRegime:
    puiseux: Interval
    preset: str


POINTWISE_REGIMES: Dict[str, PointwiseRegime] = {
    "standard": PointwiseRegime(PUISEUX_C_STANDARD, "standard"),
    "tight012": PointwiseRegime(PUISEUX_C_TIGHT, "tiny"),
    "tight106": PointwiseRegime(PUISEUX_C_TIGHT, "medium"),
}


def _pointwise_regime(regime: str) -> PointwiseRegime:
    try:
        return POINTWISE_REGIMES[regime]
    except KeyError:
        raise UsageError(f"regime must be one of {', '.join(POINTWISE_REGIMES)}") from None


def pointwise_coefficient(regime: str = "standard") -> Interval:
    """``C sqrt(6/pi) / c``, the coefficient of ``ell / delta^(5/2)``."""
    spec = _pointwise_regime(regime)
    coefficient = BOUNDARY_PRESETS[spec.preset].coefficient
    return spec.puiseux * (6 / special.PI).sqrt() / coefficient


def pointwise_norm_bound(delta: Interval, ell: Interval, regime: str = "standard") -> Interval:
    """Bound on the harmonic form's pointwise norm on the thick part."""
    spec = _pointwise_regime(regime)
    preset = BOUNDARY_PRESETS[spec.preset]
    _in_range("pointwise_norm_bound", delta, 0.0, preset.delta_max)
    return special.mean_value_multiplier(delta / 2) * ell / (preset.coefficient * delta)


def gate_pointwise_norm(delta: Interval, ell: Interval, regime: str = "standard") -> GateReport:
    spec = _pointwise_regime(regime)
    preset = BOUNDARY_PRESETS[spec.preset]
    checks = _Checks("pointwise-norm", "prop:pointwise-bound", {"delta": delta, "ell": ell, "regime": regime})
    _in_range("pointwise_norm_bound", delta, 0.0, preset.delta_max)
    checks.le(
        "ell<=delta^2 B(delta)",
        ell,
        delta.pow_int(2) * special.boundary_B(delta, preset.divisor, preset.exponent),
    )
    return checks.report(
        lambda: {
            "norm_bound": pointwise_norm_bound(delta, ell, regime),
            "coefficient": pointwise_coefficient(regime),
        }
    )


# Margulis numbers -----------------------------------------------------------


def gate_margulis(
    direction: str,
    eps: Optional[Interval] = None,
    J: Optional[Interval] = None,
    L: Optional[Interval] = None,
    sys: Optional[Interval] = None,
    total: Optional[Interval] = None,
    mu: Optional[Interval] = None,
) -> GateReport:
    """Margulis numbers that survive filling, or the drilling contrapositives."""
    inputs = {"direction": direction, "eps": eps, "J": J, "L": L, "sys": sys, "total": total, "mu": mu}
    if direction == "fill":
        for name, value in (("eps", eps), ("J", J), ("L", L)):
            if value is None:
                raise MissingParam(name, "gate margulis --direction fill --eps E --J J --L L")
        assert eps is not None and J is not None and L is not None
        _in_range("gate_margulis", eps, 0.0, LOG3)
        _in_range("gate_margulis", J, 1.0, E_FIFTH)
        checks = _Checks("margulis", "thm:margulis-filling", inputs)
        threshold = TWO_PI / special.g_thick(eps, J, "log3") + MARGULIS_SHIFT
        checks.ge("L^2>=2pi/g(eps,J)+11.7", L.pow_int(2), threshold)
        return checks.report(lambda: {"L2_threshold": threshold, "margulis": imin(eps / J, MARGULIS_CAP)})
    if direction != "drill":
        raise UsageError(f"direction must be drill or fill, got {direction!r}")
    if mu is not None:
        return _margulis_from_mu(mu, inputs)
    if sys is None and total is None:
        raise MissingParam("sys", "gate margulis --direction drill (--sys S | --total T | --mu M)")
    return _margulis_drill(sys, total, inputs)


def _margulis_drill(sys: Optional[Interval], total: Optional[Interval], inputs: Dict[str, object]) -> GateReport:
    options: List[Tuple[str, GateStatus, Interval]] = []
    if sys is not None:
        options.append(("sys<=2.73e-8", compare_le(sys, SYS_FOR_MEDIUM), CONE_MARGULIS_MEDIUM))
        options.append(("sys<=2.93e-7", compare_le(sys, SYS_FOR_SMALL), CONE_MARGULIS_SMALL))
    if total is not None:
        options.append(("total<=5.56e-5", compare_le(total, TOTAL_FOR_LARGE), CONE_MARGULIS_LARGE))
    citation = "thm:margulis-cone-mfld" if total is None else "thm:margulis-cone-med-const"
    checks = _Checks("margulis", citation, inputs)
    certified = [(name, bound) for name, verdict, bound in options if verdict is GateStatus.CERTIFIED]
    if certified:
        name, best = max(certified, key=lambda item: item[1].lo)
        checks.verdicts.append((name, GateStatus.CERTIFIED))
        checks.notes.append(f"optimal Margulis number of every M_t exceeds {best.lo:g}")
        return checks.report(lambda: {"margulis_lower": best})
    for name, verdict, _ in options:
        checks.verdicts.append((name, verdict))
    if all(verdict is GateStatus.REFUTED for _, verdict, _ in options):
        return checks.report()
    checks.verdicts = [(n, GateStatus.INCONCLUSIVE) for n, v, _ in options if v is GateStatus.INCONCLUSIVE]
    return checks.report()


def _margulis_from_mu(mu: Interval, inputs: Dict[str, object]) -> GateReport:
    checks = _Checks("margulis", "thm:margulis-drilling", inputs)
    tiers = (
        ("mu<=0.2408", CONE_MARGULIS_SMALL, {"vol_upper": VOL_FOR_SMALL, "sys_lower": SYS_FOR_SMALL}, "M is closed"),
        ("mu<=0.29", CONE_MARGULIS_MEDIUM, {"vol_upper": VOL_FOR_MEDIUM, "sys_lower": SYS_FOR_MEDIUM}, "M is closed"),
        (
            "mu<=0.9536",
            CONE_MARGULIS_LARGE,
            {"max_cusps": Interval(2.0), "shortest_total_lower": TOTAL_FOR_LARGE},
            "M has finite volume and at most two cusps",
        ),
    )
    verdicts = [(name, compare_le(mu, bound), values, note) for name, bound, values, note in tiers]
    for name, verdict, values, note in verdicts:
        if verdict is GateStatus.CERTIFIED:
            checks.verdicts.append((name, verdict))
            checks.notes.append(note)
            return checks.report(lambda values=values: dict(values))
    checks.verdicts = [(name, verdict) for name, verdict, _, _ in verdicts if verdict is not GateStatus.CERTIFIED]
    if any(v is GateStatus.INCONCLUSIVE for _, v in checks.verdicts):
        checks.verdicts = [(n, v) for n, v in checks.verdicts if v is GateStatus.INCONCLUSIVE]
    return checks.report()


def gate_margulis_topology(delta: Interval, ell: Interval) -> GateReport:
    checks = _Checks("margulis-topology", "thm:margulis-topology", {"delta": delta, "ell": ell})
    threshold = special.margulis_topology_threshold(delta)
    checks.le("ell<=threshold(delta)", ell, threshold)
    return checks.report(lambda: {"ell_threshold": threshold, "margulis": delta})


# cosmetic surgery -------------------------------------------------------------


def gate_unique_shortest(L: Interval, sys: Interval) -> GateReport:
    if L.lo < COSMETIC_FLOOR.lo:
        raise DomainError("gate_unique_shortest", L, "requires L >= 10.1")
    checks = _Checks("unique-shortest", "thm:unique-shortest", {"L": L, "sys": sys})
    threshold = special.sysmin(L)
    checks.ge("sys>=sysmin(L)", sys, threshold)
    return checks.report(
        lambda: {
            "sysmin": threshold,
            "ell_max": special.ell_max(L),
            "tube_radius_lb": UNIQUE_Z.arctanh(),
            "cosmetic_cutoff": cosmetic_cutoff(sys),
        }
    )


# registry ---------------------------------------------------------------------


@dataclass(frozen=True)
class GateEntry:
    gate_id: str
    usage: str
    run: Callable[["_Params"], GateReport]
    citation: str


class _Params:
    """String parameters from the CLI or API, parsed on demand."""

    def __init__(self, gate_id: str, usage: str, raw: Mapping[str, str]) -> None:
        self.gate_id = gate_id
        self.usage = usage
        self.raw = {key.lstrip("-").replace("-", "_"): value for key, value in raw.items()}

    def interval(self, name: str) -> Interval:
        if name not in self.raw:
            raise MissingParam(name, self.usage)
        return Interval.parse(self.raw[name])

    def optional(self, name: str) -> Optional[Interval]:
        return Interval.parse(self.raw[name]) if name in self.raw else None

    def text(self, name: str, default: Optional[str] = None) -> str:
        value = self.raw.get(name, default)
        if value is None:
            raise MissingParam(name, self.usage)
        return value


def _boundary_from_params(p: _Params) -> GateReport:
    preset_name = p.raw.get("preset")
    if preset_name is not None:
        if preset_name not in BOUNDARY_PRESETS:
            raise UsageError(f"preset must be one of {', '.join(BOUNDARY_PRESETS)}")
        preset = BOUNDARY_PRESETS[preset_name]
        return boundary_term_bound(
            p.interval("delta"), p.interval("ell"), preset.delta_max, preset.divisor, preset.exponent
        )
    return boundary_term_bound(
        p.interval("delta"),
        p.interval("ell"),
        p.interval("delta_max"),
        p.interval("K"),
        p.optional("e") or Interval(0.0),
    )


def _entry(gate_id: str, usage: str, citation: str, run: Callable[[_Params], GateReport]) -> GateEntry:
    return GateEntry(gate_id=gate_id, usage=f"gate {gate_id} {usage}", run=run, citation=citation)


GATES: Dict[str, GateEntry] = {
    entry.gate_id: entry
    for entry in (
        _entry(
            "cone-def",
            "--lengths L1,L2,...",
            "thm:cone-def-exists",
            lambda p: gate_cone_def_exists(LinkLengths.parse(p.text("lengths"))),
        ),
        _entry("upward", "--L L --Z Z", "thm:upward-cone-def-r-bounds", lambda p: gate_upward(p.interval("L"), p.interval("Z"))),
        _entry(
            "magid",
            "--Z-min Z (--L L | --ell ELL)",
            "lem:magid-length-general",
            lambda p: magid_bounds(p.interval("Z_min"), L=p.optional("L"), ell=p.optional("ell")),
        ),
        _entry(
            "bilip",
            "--delta D (--ell ELL | --L L)",
            "thm:bilip",
            lambda p: gate_bilip(p.interval("delta"), ell=p.optional("ell"), L=p.optional("L")),
        ),
        _entry(
            "bilip-bis",
            "--delta D --ell ELL --J J",
            "thm:bilip-bis",
            lambda p: gate_bilip_bis(p.interval("delta"), p.interval("ell"), p.interval("J")),
        ),
        _entry(
            "effective-bb",
            "--delta D --J J [--direction drill|fill]",
            "cor:effective-bb-special",
            lambda p: gate_effective_bb(p.interval("delta"), p.interval("J"), p.text("direction", "drill")),
        ),
        _entry(
            "thick-stays-thick",
            "--eps E --J J [--ell ELL]",
            "thm:thick-stays-thick",
            lambda p: gate_thick_stays_thick(p.interval("eps"), p.interval("J"), p.optional("ell")),
        ),
        _entry(
            "bilip-endpoints",
            "--eps E (--ell ELL | --L L | --J J)",
            "thm:bilip-endpoints",
            lambda p: gate_bilip_endpoints(p.interval("eps"), p.optional("ell"), p.optional("L"), p.optional("J")),
        ),
        _entry(
            "short-geodesic",
            "--direction drill|fill --m M (--ell ELL | --L2 L2 | --L L)",
            "thm:short-stays-short",
            lambda p: gate_short_geodesic(
                p.text("direction"), p.interval("m"), ell=p.optional("ell"), L=p.optional("L"), L2=p.optional("L2")
            ),
        ),
        _entry(
            "hold-short-geodesics",
            "--ell ELL --m M",
            "thm:hold-short-geodesics",
            lambda p: gate_hold_short_geodesics(p.interval("ell"), p.interval("m")),
        ),
        _entry(
            "boundary-term",
            "--delta D --ell ELL (--preset standard|medium|tiny | --delta-max DM --K K [--e E])",
            "thm:boundary-delta",
            _boundary_from_params,
        ),
        _entry(
            "pointwise-norm",
            "--delta D --ell ELL [--regime standard|tight012|tight106]",
            "prop:pointwise-bound",
            lambda p: gate_pointwise_norm(p.interval("delta"), p.interval("ell"), p.text("regime", "standard")),
        ),
        _entry(
            "margulis",
            "--direction fill --eps E --J J --L L | --direction drill (--sys S | --total T | --mu M)",
            "thm:margulis-filling",
            lambda p: gate_margulis(
                p.text("direction"),
                eps=p.optional("eps"),
                J=p.optional("J"),
                L=p.optional("L"),
                sys=p.optional("sys"),
                total=p.optional("total"),
                mu=p.optional("mu"),
            ),
        ),
        _entry(
            "margulis-topology",
            "--delta D --ell ELL",
            "thm:margulis-topology",
            lambda p: gate_margulis_topology(p.interval("delta"), p.interval("ell")),
        ),
        _entry(
            "unique-shortest",
            "--L L --sys S",
            "thm:unique-shortest",
            lambda p: gate_unique_shortest(p.interval("L"), p.interval("sys")),
        ),
    )
}


def run_gate(gate_id: str, params: Mapping[str, str]) -> GateReport:
    entry = GATES.get(gate_id)
    if entry is None:
        raise UnknownGate(gate_id)
    report = entry.run(_Params(gate_id, entry.usage, params))
    logger.debug("gate %s -> %s", gate_id, report.status.value)
    return report


def gate_ids() -> Sequence[str]:
    return tuple(GATES)
