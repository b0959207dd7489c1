"""Registry of computer-checked inequalities, each rerunnable as a branch-and-bound proof.

Every task is a list of parts; a part asks ``prove_nonneg`` to certify an
interval expression over a box.  ``tighten=True`` swaps in a strictly
stronger claim that must not verify.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from app.core.errors import UnknownTask
from app.core.ledger import code_hash, is_fresh, ledger_session
from app.models import LedgerEntry
from app.services import series, special
from app.services.constants import (
    AREA_SLACK,
    DELTA_CUT_HI,
    DELTA_CUT_LO,
    E_FIFTH,
    FOUR_PI_SQ,
    G_THICK_MAX,
    HOLD_TOTAL,
    LIN_CHECK_Z,
    LIN_OFFSET,
    LIN_SLOPE,
    LOG3,
    MEYERHOFF_K,
    CONE_COMPONENT,
    PUISEUX_C_STANDARD,
    PUISEUX_C_TIGHT,
    PUISEUX_R_STANDARD,
    PUISEUX_R_TIGHT,
    SHIFT_LOG3,
    SHORT_ELL,
    SHORT_M_INTERCEPT,
    SHORT_M_SLOPE,
    SYS_SHIFT,
    SYS_UPPER_SHIFT,
    TOPOLOGY_SLOPE,
    TWO_PI,
)
from app.services.interval import (
    ONE,
    PI,
    Box,
    Expression,
    Interval,
    ProofResult,
    ProofStatus,
    imax,
    monotone,
    prove_nonneg,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProofPart:
    name: str
    expression: Expression
    domain: Box
    strict: bool = False


@dataclass(frozen=True)
class VerifyTask:
    task_id: str
    citation: str
    description: str
    parts: Callable[[bool], List[ProofPart]]
    tighten_note: str


def _decimal(text: str) -> Interval:
    return Interval.from_str(text)


def _point_box(value: Interval) -> Box:
    return Box([value])


# injectivity radius ---------------------------------------------------------


def _injec_parts(tighten: bool) -> List[ProofPart]:
    shift = _decimal("0.001") if tighten else Interval(0.0)
    # 1.1227 - 0.1604 is exactly the limit value 0.9623
    at_one = Interval.from_fraction(Fraction("1.1227") - Fraction("0.1604"))

    def dominates(box: Box) -> Interval:
        z = box[0]
        return special.max_tube_injrad_lb_z(z) - (LIN_SLOPE * z - LIN_OFFSET) - shift

    def endpoint(box: Box) -> Interval:
        # the bound is increasing in Z and the line stays below its value at Z = 1
        return special.max_tube_injrad_lb_z(box[0]) - at_one - shift

    return [
        ProofPart("interior", dominates, Box([Interval(0.0, LIN_CHECK_Z.lo)])),
        ProofPart("endpoint", endpoint, _point_box(LIN_CHECK_Z)),
    ]


# Meyerhoff -----------------------------------------------------------------


def _meyerhoff_parts(tighten: bool) -> List[ProofPart]:
    bound = MEYERHOFF_K - _decimal("0.001") if tighten else MEYERHOFF_K
    # cosh terms do not depend on tau
    cosh_terms = [(m * CONE_COMPONENT).cosh() for m in special.MEYERHOFF_M]

    def some_m_works(box: Box) -> Interval:
        tau = box[0]
        return imax(*(bound - c + (m * tau).cos() for m, c in zip(special.MEYERHOFF_M, cosh_terms)))

    return [ProofPart("tau", some_m_works, Box([Interval(0.0, PI.hi)]))]


# visual area of the link plus a short geodesic ------------------------------


def _expm1_ratio(x: Interval) -> Interval:
    """``(e^x - 1)/x`` for ``x >= 0``, increasing."""

    def point(v: float) -> Interval:
        if v <= 1e-3:
            y = Interval(v)
            base = 1 + y / 2
            return Interval(base.lo, (base + y.pow_int(2) / 6 * y.exp()).hi)
        y = Interval(v)
        return (y.exp() - 1) / y

    if x.lo < 0:
        x = Interval(0.0, max(0.0, x.hi))
    low = point(x.lo)
    high = point(x.hi)
    return Interval(low.lo, high.hi)


def _area_gap_over_ell(
    ell: Interval, t: Interval, m: Interval, coeff: Interval, z_min: Interval
) -> Interval:
    """``(f(4pi^2) - f(t)) / ell`` for ``f(t) = 2pi ell (sqrt t/2pi)^q + coeff m e^((4pi^2 - t) F)``."""
    z0 = special.haze_inv(TWO_PI * ell)
    exponent = special.q(z0) / 2
    ratio = t / FOUR_PI_SQ
    sigma = TWO_PI * (1 - ratio.pow_real(exponent))
    remaining = FOUR_PI_SQ - t
    remaining = Interval(max(0.0, remaining.lo), max(0.0, remaining.hi))
    rate = special.drift_per_length(z_min, ell)
    x = remaining * rate * ell
    return sigma - coeff * m * remaining * rate * _expm1_ratio(x)


def _area_parts(tighten: bool) -> List[ProofPart]:
    slack = TWO_PI * (AREA_SLACK - 2 * AREA_SLACK if tighten else AREA_SLACK)

    def capped(box: Box) -> Interval:
        ell, t = box
        m = SHORT_M_INTERCEPT - SHORT_M_SLOPE * ell
        total = SHORT_M_INTERCEPT + (1 - SHORT_M_SLOPE) * ell
        z_min = special.haze_inv(TWO_PI * (total + AREA_SLACK))
        return ell * _area_gap_over_ell(ell, t, m, TWO_PI, z_min) + slack

    domain = Box([Interval(0.0, SHORT_ELL.hi), Interval(0.0, FOUR_PI_SQ.hi)])
    return [ProofPart("ell-t", capped, domain, strict=True)]


def _hold_parts(tighten: bool) -> List[ProofPart]:
    slack = TWO_PI * (AREA_SLACK - 2 * AREA_SLACK if tighten else AREA_SLACK)
    # m is maximal, so ell + 2m = 0.14 throughout
    z_hat = special.haze_inv(TWO_PI * (HOLD_TOTAL + AREA_SLACK))
    four_pi = 2 * TWO_PI

    def held(box: Box) -> Interval:
        ell, t = box
        m = (HOLD_TOTAL - ell) / 2
        return ell * _area_gap_over_ell(ell, t, m, four_pi, z_hat) + slack

    domain = Box([Interval(0.0, HOLD_TOTAL.hi), Interval(0.0, FOUR_PI_SQ.hi)])
    return [ProofPart("ell-t", held, domain, strict=True)]


# Puiseux ---------------------------------------------------------------------


def _puiseux_parts(c: Interval, radius: Interval, shift: str) -> Callable[[bool], List[ProofPart]]:
    def parts(tighten: bool) -> List[ProofPart]:
        floor = _decimal(shift) if tighten else Interval(0.0)

        def scaled(box: Box) -> Interval:
            # Phi(r)/r^6 has the sign of Phi for r > 0
            return series.puiseux_ratio(box[0], c) - floor

        return [ProofPart("r", scaled, Box([Interval(0.0, radius.hi)]))]

    return parts


# systole threshold -------------------------------------------------------------


def _supper_lhs(L: Interval) -> Interval:
    ell = special.ell_max(L)
    z = special.haze_inv(2 * TWO_PI * ell + TWO_PI * AREA_SLACK)
    return FOUR_PI_SQ * special.drift_per_length(z, ell)


def _supper_rhs(L: Interval) -> Interval:
    square = L.pow_int(2)
    upper = square - SYS_SHIFT
    return (upper / (square - SYS_UPPER_SHIFT)).log() * upper / TWO_PI


def _sysmin_parts(tighten: bool) -> List[ProofPart]:
    shift = _decimal("0.05") if tighten else Interval(0.0)

    def upper(box: Box) -> Interval:
        L = box[0]
        # both sides decrease in L
        rhs = monotone(_supper_rhs, L, increasing=False)
        lhs = monotone(_supper_lhs, L, increasing=False)
        return rhs - lhs - shift

    return [ProofPart("L", upper, Box([Interval(10.1, 11.0)]), strict=True)]


# thick-part threshold g(eps, J) ------------------------------------------------


def _gj_max_parts(tighten: bool) -> List[ProofPart]:
    cap = G_THICK_MAX - _decimal("0.00000002") if tighten else G_THICK_MAX

    def below_cap(box: Box) -> Interval:
        return cap - special.g_thick(LOG3, box[0], "log3")

    return [ProofPart("J", below_cap, Box([Interval(1.0, E_FIFTH.hi)]), strict=True)]


def _gj_dj_parts(tighten: bool) -> List[ProofPart]:
    floor = ONE if tighten else Interval(0.0)
    two_fifths = _decimal("0.4")

    def bracket(box: Box) -> Interval:
        eps, J = box
        x = J * eps / 2 + SHIFT_LOG3
        log_j = J.log()
        return (two_fifths - 2 * log_j) * x.cosh() - eps * J * log_j * x.sinh() - floor

    domain = Box([Interval(0.0, LOG3.hi), Interval(1.0, LOG3.lo)])
    return [ProofPart("eps-J", bracket, domain, strict=True)]


# delta cut --------------------------------------------------------------------


def _topology_gap(delta: Interval) -> Interval:
    return TOPOLOGY_SLOPE * delta - special.haze((delta + LIN_OFFSET) / LIN_SLOPE) / TWO_PI


def _delta_cut_parts(tighten: bool) -> List[ProofPart]:
    shift = _decimal("0.000001") if tighten else Interval(0.0)
    below = DELTA_CUT_LO + shift
    above = DELTA_CUT_HI + shift
    return [
        ProofPart("below", lambda box: -_topology_gap(box[0]), _point_box(below), strict=True),
        ProofPart("above", lambda box: _topology_gap(box[0]), _point_box(above), strict=True),
    ]


TASKS: Dict[str, VerifyTask] = {
    task.task_id: task
    for task in (
        VerifyTask(
            "injec_linear_dominates",
            "thm:max-tube-injectivity",
            "injectivity radius bound dominates 1.1227 Z - 0.1604 on [0, 1)",
            _injec_parts,
            "demand a gap of 0.001",
        ),
        VerifyTask(
            "meyerhoff_m8",
            "lem:meyerhoff",
            "some m in 1..8 has cosh(0.0996 m) - cos(m tau) <= 0.34932 for every tau in [0, pi]",
            _meyerhoff_parts,
            "lower the bound to 0.34832",
        ),
        VerifyTask(
            "area_bound_capped",
            "lem:area-bound-capped",
            "g(ell, t) > -2pi 1e-5 with m = 0.0996 - 0.352 ell",
            _area_parts,
            "demand g > +2pi 1e-5",
        ),
        VerifyTask(
            "hold_geodesics_fhat",
            "eq:hold-geodesics-fhat",
            "the 4 pi m variant with ell + 2m = 0.14 stays below 2pi(ell + 2m + 1e-5)",
            _hold_parts,
            "demand a gap of +2pi 1e-5",
        ),
        VerifyTask(
            "puiseux_938",
            "lem:puiseux",
            "Phi(r) >= 0 on [0, 0.469] with C = 1.046",
            _puiseux_parts(PUISEUX_C_STANDARD, PUISEUX_R_STANDARD, "0.001"),
            "demand Phi/r^6 >= 0.001",
        ),
        VerifyTask(
            "puiseux_106",
            "lem:puiseux",
            "Phi(r) >= 0 on [0, 0.053] with C = 1.001",
            _puiseux_parts(PUISEUX_C_TIGHT, PUISEUX_R_TIGHT, "0.01"),
            "demand Phi/r^6 >= 0.01",
        ),
        VerifyTask(
            "sysmin_supper",
            "lem:s-function-props",
            "upper sandwich inequality for sysmin on L in [10.1, 11]",
            _sysmin_parts,
            "demand a gap of 0.05",
        ),
        VerifyTask(
            "gj_max",
            "lem:gj-behavior",
            "g(log 3, J) < 5.610e-5 for J in [1, e^(1/5)]",
            _gj_max_parts,
            "demand g < 5.608e-5",
        ),
        VerifyTask(
            "gj_dJ_positive",
            "lem:gj-behavior",
            "the bracketed factor of dg/dJ is positive for J <= log 3",
            _gj_dj_parts,
            "demand the factor exceeds 1",
        ),
        VerifyTask(
            "delta_cut_bracket",
            "lem:delta-tube-embeds",
            "0.261 delta crosses haze((delta + 0.1604)/1.1227)/2pi inside [0.556369, 0.556370]",
            _delta_cut_parts,
            "shift the bracket up by 1e-6",
        ),
    )
}


def get_task(task_id: str) -> VerifyTask:
    task = TASKS.get(task_id)
    if task is None:
        raise UnknownTask(task_id)
    return task


def run_task(
    task_id: str,
    tighten: bool = False,
    workers: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> ProofResult:
    """Run every part of a task; the first part that fails decides the result."""
    task = get_task(task_id)
    examined = 0
    depth = 0
    lowest = float("inf")
    for part in task.parts(tighten):
        result = prove_nonneg(
            part.expression,
            part.domain,
            max_depth=max_depth,
            workers=workers,
            strict=part.strict,
        )
        examined += result.boxes_examined
        depth = max(depth, result.max_depth_used)
        lowest = min(lowest, result.min_lower)
        if not result.verified:
            logger.info("task %s part %s: %s", task_id, part.name, result.status.value)
            return ProofResult(result.status, examined, depth, result.box, lowest)
    return ProofResult(ProofStatus.VERIFIED, examined, depth, None, lowest)


def record_task(
    task_id: str,
    tighten: bool = False,
    workers: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> LedgerEntry:
    task = get_task(task_id)
    logger.info("task %s started%s", task_id, " (tightened)" if tighten else "")
    started = time.perf_counter()
    result = run_task(task_id, tighten=tighten, workers=workers, max_depth=max_depth)
    seconds = time.perf_counter() - started
    logger.info("task %s %s in %.2fs (%d boxes)", task_id, result.status.value, seconds, result.boxes_examined)
    return LedgerEntry(
        task_id=task_id,
        status=result.status.value,
        boxes=result.boxes_examined,
        seconds=round(seconds, 4),
        code_hash=code_hash(),
        max_depth=result.max_depth_used,
        citation=task.citation,
        tightened=tighten,
    )


def run_all(
    task_ids: Optional[Sequence[str]] = None,
    tighten: bool = False,
    workers: Optional[int] = None,
    max_depth: Optional[int] = None,
    force: bool = False,
    ledger_path=None,
) -> List[LedgerEntry]:
    """Run tasks in registry order, reusing fresh ledger entries unless ``force``."""
    selected = list(task_ids) if task_ids else list(TASKS)
    for task_id in selected:
        get_task(task_id)
    entries: List[LedgerEntry] = []
    with ledger_session(ledger_path) as ledger:
        for task_id in selected:
            cached = ledger.get(task_id)
            if not force and not tighten and is_fresh(cached) and not cached.tightened:
                logger.info("task %s reused from ledger", task_id)
                entries.append(cached)
                continue
            entry = record_task(task_id, tighten=tighten, workers=workers, max_depth=max_depth)
            if not tighten:
                ledger[task_id] = entry
            entries.append(entry)
    return entries
