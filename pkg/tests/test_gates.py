from __future__ import annotations

import logging
import math

import pytest

from app.core.errors import DomainError, MissingParam, UnknownGate, UsageError
from app.models import GateReport, GateStatus
from app.services import gates, special
from app.services.constants import LOG3, POINTWISE_STANDARD, POINTWISE_TIGHT
from app.services.interval import Interval
from tests.conftest import runs

CERTIFIED = GateStatus.CERTIFIED
REFUTED = GateStatus.REFUTED
INCONCLUSIVE = GateStatus.INCONCLUSIVE


def iv(text: str) -> Interval:
    return Interval.parse(text)


# tri-state comparison ------------------------------------------------------------


def test_compare_le_verdicts():
    assert gates.compare_le(Interval(1.0, 2.0), Interval(2.0, 3.0)) is CERTIFIED
    assert gates.compare_le(Interval(3.5, 4.0), Interval(2.0, 3.0)) is REFUTED
    assert gates.compare_le(Interval(1.0, 2.5), Interval(2.0, 3.0)) is INCONCLUSIVE


def test_compare_le_accepts_value_typed_at_threshold():
    threshold = iv("0.0996")
    assert gates.compare_le(iv("0.0996"), threshold) is CERTIFIED
    assert gates.compare_le(Interval(0.09, 0.1), threshold) is INCONCLUSIVE


def test_link_lengths():
    lengths = gates.LinkLengths.parse("0.05, 0.06")
    assert len(lengths.components) == 2
    assert lengths.total.contains(0.11)
    with pytest.raises(DomainError):
        gates.LinkLengths.parse("0,0.1")


# cone deformations -------------------------------------------------------------


def test_cone_def_certifies_short_link():
    report = gates.gate_cone_def_exists(gates.LinkLengths.parse("0.05,0.06"))
    assert report.status is CERTIFIED
    assert report.citation == "thm:cone-def-exists"
    assert report.quantity("Z_min").lo > special.ZC.hi
    assert report.quantity("visual_area").mid == pytest.approx(2 * math.pi * 0.11, rel=1e-12)
    assert report.quantity("boundary_area").lo > report.quantity("visual_area").hi / 2


def test_cone_def_refutations_name_the_hypothesis():
    component = gates.gate_cone_def_exists(gates.LinkLengths.parse("0.1,0.01"))
    assert component.status is REFUTED
    assert component.failed == "component_0<=0.0996"
    assert component.quantities == {}
    total = gates.gate_cone_def_exists(gates.LinkLengths.parse("0.09,0.09"))
    assert total.failed == "total<=0.15601"


def test_upward():
    assert gates.gate_upward(iv("10.1"), iv("0.8568")).status is CERTIFIED
    assert gates.gate_upward(iv("10"), iv("0.8568")).status is REFUTED
    with pytest.raises(DomainError):
        gates.gate_upward(iv("10"), iv("0.3"))


def test_upward_is_monotone(rng):
    for _ in range(runs(30, 300)):
        z = rng.uniform(0.6, 0.95)
        threshold = special.I(Interval(z)).hi
        L = math.sqrt(threshold) * (1 + rng.uniform(1e-6, 0.1))
        assert gates.gate_upward(Interval(L), Interval(z)).status is CERTIFIED
        assert gates.gate_upward(Interval(L * 1.5), Interval(z)).status is CERTIFIED
        assert gates.gate_upward(Interval(L), Interval(0.6, z)).status is CERTIFIED


def test_magid_from_L():
    report = gates.magid_bounds(iv("0.6624"), L=iv("7.823"))
    assert report.status is CERTIFIED
    assert report.quantity("ell_lower").hi < report.quantity("ell_upper").lo
    assert 16.16 < report.quantity("Gtilde_term").lo


def test_magid_from_ell():
    report = gates.magid_bounds(iv("0.6624"), ell=iv("0.1"))
    assert report.status is CERTIFIED
    lower, upper = report.quantity("L2_lower"), report.quantity("L2_upper")
    assert lower.hi < (2 * math.pi / 0.1) < upper.lo
    assert gates.magid_bounds(iv("0.6624"), ell=iv("0.2")).status is REFUTED


def test_magid_errors():
    with pytest.raises(DomainError):
        gates.magid_bounds(iv("0.6"), L=iv("8"))
    with pytest.raises(UsageError):
        gates.magid_bounds(iv("0.7"), L=iv("8"), ell=iv("0.1"))
    with pytest.raises(UsageError):
        gates.magid_bounds(iv("0.7"))


# bilipschitz ---------------------------------------------------------------------


def test_bilip_from_ell():
    report = gates.gate_bilip(iv("0.5"), ell=iv("0.01"))
    assert report.status is CERTIFIED
    assert 1.50 < report.quantity("J").lo and report.quantity("J").hi < 1.51
    assert gates.gate_bilip(iv("0.5"), ell=iv("0.02")).status is REFUTED
    with pytest.raises(DomainError):
        gates.gate_bilip(iv("1.0"), ell=iv("0.01"))
    with pytest.raises(UsageError):
        gates.gate_bilip(iv("0.5"))


def test_bilip_L_mode_implies_ell_mode(rng):
    for _ in range(runs(50, 1_000)):
        delta = rng.uniform(0.05, 0.93)
        L = math.sqrt(107.6 / delta**2 + 14.41) * (1 + rng.uniform(1e-3, 0.2))
        from_L = gates.gate_bilip(Interval(delta), L=Interval(L))
        assert from_L.status is CERTIFIED
        bound = from_L.quantity("ell_bound")
        assert gates.gate_bilip(Interval(delta), ell=Interval(0.0, bound.hi)).status is CERTIFIED


def test_bilip_bis_regimes():
    tiny = gates.gate_bilip_bis(iv("0.01"), iv("2e-7"), iv("1.1"))
    assert tiny.status is CERTIFIED
    assert tiny.notes == ["regime delta<=0.012"]
    medium = gates.gate_bilip_bis(iv("0.05"), iv("1e-5"), iv("1.1"))
    assert medium.status is CERTIFIED
    assert medium.notes == ["regime 0.012<delta<=0.106"]
    assert gates.gate_bilip_bis(iv("0.01"), iv("1e-6"), iv("1.1")).status is REFUTED
    with pytest.raises(DomainError):
        gates.gate_bilip_bis(iv("0.2"), iv("1e-6"), iv("1.1"))


def test_effective_bb_drill_and_fill():
    drill = gates.gate_effective_bb(iv("0.5"), iv("1.1"), "drill")
    assert drill.status is CERTIFIED
    assert drill.quantity("ell_threshold") == drill.quantity("bilip_branch")
    assert "binding branch: bilipschitz" in drill.notes
    fill = gates.gate_effective_bb(iv("0.5"), iv("1.1"), "fill")
    assert fill.quantity("L2_threshold") == fill.quantity("bilip_branch")
    with pytest.raises(UsageError):
        gates.gate_effective_bb(iv("0.5"), iv("1.1"), "sideways")
    with pytest.raises(DomainError):
        gates.gate_effective_bb(iv("0.5"), iv("1"))


def test_effective_bb_monotone_in_J(rng):
    for _ in range(runs(30, 500)):
        delta = Interval(rng.uniform(0.05, 0.9))
        small, large = sorted(rng.uniform(1.01, 1.22) for _ in range(2))
        first = gates.gate_effective_bb(delta, Interval(small), "drill").quantity("ell_threshold")
        second = gates.gate_effective_bb(delta, Interval(large), "drill").quantity("ell_threshold")
        assert first.lo <= second.hi
        first_fill = gates.gate_effective_bb(delta, Interval(small), "fill").quantity("L2_threshold")
        second_fill = gates.gate_effective_bb(delta, Interval(large), "fill").quantity("L2_threshold")
        assert second_fill.lo <= first_fill.hi


def test_bilip_endpoints():
    report = gates.gate_bilip_endpoints(LOG3, ell=iv("1e-5"))
    assert report.status is CERTIFIED
    assert report.quantity("L2_threshold").lo > 116000
    assert report.quantity("J_at_threshold").hi < 1.0005
    assert gates.endpoint_J_cap_holds(LOG3)
    from_L = gates.gate_bilip_endpoints(LOG3, L=iv("400"))
    assert from_L.status is CERTIFIED
    assert "ell_bound" in from_L.quantities
    corollary = gates.gate_bilip_endpoints(LOG3, J=iv("1.1"))
    assert set(corollary.quantities) >= {"drill_ell_threshold", "fill_L2_threshold"}
    with pytest.raises(UsageError):
        gates.gate_bilip_endpoints(LOG3, ell=iv("1e-5"), L=iv("400"))


# thick parts ---------------------------------------------------------------------


def test_thick_stays_thick_small_eps():
    report = gates.gate_thick_stays_thick(iv("0.292"), iv("1.00689"), iv("2e-8"))
    assert report.status is CERTIFIED
    assert "regime small_eps" in report.notes
    assert report.quantity("ell_threshold").lo >= 2.73e-8
    assert report.quantity("distance_lower").lo <= report.quantity("distance_upper").hi


def test_thick_stays_thick_log3_refutes_long_link():
    report = gates.gate_thick_stays_thick(LOG3, iv("1.152"), iv("1e-4"))
    assert report.status is REFUTED
    assert "regime log3" in report.notes


# short geodesics -----------------------------------------------------------------


def test_short_geodesic_drill_at_the_corner():
    report = gates.gate_short_geodesic("drill", iv("0.0735"), ell=iv("0.0735"))
    assert report.status is CERTIFIED
    assert report.quantity("length_ratio").hi <= 1.9793
    assert report.quantity("twist").hi <= 0.05417


def test_short_geodesic_drill_boundary_value_is_certified():
    report = gates.gate_short_geodesic("drill", iv("0.082"), ell=iv("0.05"))
    assert report.status is CERTIFIED


def test_short_geodesic_fill():
    report = gates.gate_short_geodesic("fill", iv("0.056"), L2=iv("128"))
    assert report.status is CERTIFIED
    assert report.quantity("Z_min").lo >= 0.624
    assert report.quantity("length_ratio").hi <= 1.657
    assert report.quantity("twist").hi <= 0.0295
    assert gates.gate_short_geodesic("fill", iv("0.056"), L2=iv("100")).status is REFUTED


def test_short_geodesic_errors():
    with pytest.raises(MissingParam):
        gates.gate_short_geodesic("drill", iv("0.01"))
    with pytest.raises(MissingParam):
        gates.gate_short_geodesic("fill", iv("0.01"))
    with pytest.raises(UsageError):
        gates.gate_short_geodesic("sideways", iv("0.01"), ell=iv("0.01"))


def test_hold_short_geodesics(caplog):
    report = gates.gate_hold_short_geodesics(iv("0.07"), iv("0.03"))
    assert report.status is CERTIFIED
    assert report.quantity("R_hat_min").lo > 0.794
    with caplog.at_level(logging.WARNING, logger="app.services.gates"):
        refuted = gates.gate_hold_short_geodesics(iv("0.1"), iv("0.025"))
    assert refuted.status is REFUTED
    assert refuted.failed == "ell+2m<=0.14"
    assert any("exceeds 0.0735" in record.getMessage() for record in caplog.records)
    assert any("0.735" in note for note in refuted.notes)


# boundary term and pointwise norm --------------------------------------------------


@pytest.mark.parametrize(
    ("preset", "delta", "ell", "floor"),
    [("standard", "0.5", "0.01", 7.935), ("medium", "0.1", "1e-4", 15.6), ("tiny", "0.01", "5e-7", 16.4)],
)
def test_boundary_presets(preset, delta, ell, floor):
    report = gates.run_gate("boundary-term", {"delta": delta, "ell": ell, "preset": preset})
    assert report.status is CERTIFIED
    assert report.quantity("c").lo >= floor


def test_boundary_custom_matches_standard_preset():
    custom = gates.run_gate("boundary-term", {"delta": "0.5", "ell": "0.01", "delta-max": "0.938", "K": "17.11"})
    preset = gates.run_gate("boundary-term", {"delta": "0.5", "ell": "0.01", "preset": "standard"})
    assert custom.quantity("c") == preset.quantity("c")
    with pytest.raises(UsageError):
        gates.run_gate("boundary-term", {"delta": "0.5", "ell": "0.01", "preset": "huge"})


def test_pointwise_coefficients():
    assert gates.pointwise_coefficient("standard").hi <= POINTWISE_STANDARD.hi
    assert gates.pointwise_coefficient("tight012").hi <= POINTWISE_TIGHT.hi
    with pytest.raises(UsageError):
        gates.pointwise_coefficient("loose")


def test_pointwise_norm_below_preset_coefficient():
    delta, ell = iv("0.5"), iv("0.01")
    report = gates.gate_pointwise_norm(delta, ell)
    assert report.status is CERTIFIED
    envelope = report.quantity("coefficient") * ell / delta.pow_real(Interval(2.5))
    assert report.quantity("norm_bound").hi <= envelope.hi


# Margulis numbers -------------------------------------------------------------------


def test_margulis_fill():
    report = gates.gate_margulis("fill", eps=LOG3, J=iv("1.152"), L=iv("1000"))
    assert report.status is CERTIFIED
    margulis = report.quantity("margulis")
    assert margulis.contains(LOG3 / iv("1.152"))
    assert margulis.hi < 0.962
    with pytest.raises(MissingParam):
        gates.gate_margulis("fill", eps=LOG3, J=iv("1.152"))


def test_margulis_drill_tiers():
    assert gates.gate_margulis("drill", sys=iv("1e-8")).quantity("margulis_lower").contains(0.29)
    assert gates.gate_margulis("drill", total=iv("5e-5")).quantity("margulis_lower").contains(0.9536)
    assert gates.gate_margulis("drill", sys=iv("1e-6")).status is REFUTED
    with pytest.raises(MissingParam):
        gates.gate_margulis("drill")


def test_margulis_from_mu():
    medium = gates.gate_margulis("drill", mu=iv("0.25"))
    assert medium.status is CERTIFIED
    assert medium.quantity("vol_upper").contains(52.78)
    small = gates.gate_margulis("drill", mu=iv("0.1"))
    assert small.quantity("vol_upper").contains(36.12)
    assert gates.gate_margulis("drill", mu=iv("1.0")).status is REFUTED


def test_margulis_topology():
    assert gates.gate_margulis_topology(iv("0.3"), iv("0.01")).status is CERTIFIED
    assert gates.gate_margulis_topology(iv("0.3"), iv("0.1")).status is REFUTED


# cosmetic surgery ---------------------------------------------------------------------


def test_unique_shortest():
    assert gates.gate_unique_shortest(iv("10.1"), iv("0.0615")).status is REFUTED
    report = gates.gate_unique_shortest(iv("10.1"), iv("1"))
    assert report.status is CERTIFIED
    assert report.quantity("cosmetic_cutoff").contains(10.1)
    with pytest.raises(DomainError):
        gates.gate_unique_shortest(iv("10"), iv("1"))


# registry -------------------------------------------------------------------------------


def test_registry_lists_every_gate():
    assert set(gates.gate_ids()) == {
        "cone-def",
        "upward",
        "magid",
        "bilip",
        "bilip-bis",
        "effective-bb",
        "thick-stays-thick",
        "bilip-endpoints",
        "short-geodesic",
        "hold-short-geodesics",
        "boundary-term",
        "pointwise-norm",
        "margulis",
        "margulis-topology",
        "unique-shortest",
    }


def test_run_gate_normalizes_parameter_names():
    report = gates.run_gate("magid", {"--Z-min": "0.6624", "--L": "7.823"})
    assert report.status is CERTIFIED
    assert report.inputs["Z_min"] == iv("0.6624").to_list()


def test_run_gate_errors():
    with pytest.raises(UnknownGate):
        gates.run_gate("nope", {})
    with pytest.raises(MissingParam) as excinfo:
        gates.run_gate("bilip", {"ell": "0.01"})
    assert "--delta" in str(excinfo.value)
    assert "gate bilip" in str(excinfo.value)


# serialization ---------------------------------------------------------------------------

GATE_PARAMS = {
    "cone-def": {"lengths": "0.05,0.06"},
    "upward": {"L": "10.1", "Z": "0.8568"},
    "magid": {"Z-min": "0.6624", "L": "7.823"},
    "bilip": {"delta": "0.5", "ell": "0.02"},
    "bilip-bis": {"delta": "0.01", "ell": "2e-7", "J": "1.1"},
    "effective-bb": {"delta": "0.5", "J": "1.1", "direction": "fill"},
    "thick-stays-thick": {"eps": "0.292", "J": "1.00689", "ell": "2e-8"},
    "bilip-endpoints": {"eps": "1.0986", "ell": "1e-5"},
    "short-geodesic": {"direction": "drill", "m": "0.0735", "ell": "0.0735"},
    "hold-short-geodesics": {"ell": "0.07", "m": "0.03"},
    "boundary-term": {"delta": "0.5", "ell": "0.01", "preset": "standard"},
    "pointwise-norm": {"delta": "0.5", "ell": "0.01"},
    "margulis": {"direction": "drill", "sys": "1e-8"},
    "margulis-topology": {"delta": "0.3", "ell": "0.01"},
    "unique-shortest": {"L": "10.1", "sys": "1"},
}


def test_every_gate_has_sample_parameters():
    assert set(GATE_PARAMS) == set(gates.gate_ids())


@pytest.mark.parametrize("gate_id", sorted(GATE_PARAMS))
def test_gate_report_json_round_trip(gate_id):
    report = gates.run_gate(gate_id, GATE_PARAMS[gate_id])
    assert GateReport.model_validate_json(report.model_dump_json()) == report
    assert GateReport.model_validate(report.model_dump(mode="json")) == report


def test_infinite_quantities_round_trip():
    report = GateReport(
        gate_id="bilip", status=CERTIFIED, quantities={"ell": (0.0, math.inf)}, citation="thm:bilip"
    )
    restored = GateReport.model_validate_json(report.model_dump_json())
    assert restored.quantities["ell"] == (0.0, math.inf)


_RANK = {CERTIFIED: 0, GateStatus.INCONCLUSIVE: 1, REFUTED: 2}


def test_verdicts_never_improve_with_longer_geodesics(rng):
    for _ in range(runs(30, 100)):
        delta = Interval(rng.uniform(0.05, 0.9))
        m = Interval(rng.uniform(1e-3, 0.05))
        short, long = (Interval(x) for x in sorted(rng.uniform(1e-4, 0.1) for _ in range(2)))
        pairs = [
            (gates.gate_bilip(delta, ell=short), gates.gate_bilip(delta, ell=long)),
            (gates.gate_margulis_topology(delta, short), gates.gate_margulis_topology(delta, long)),
            (gates.gate_hold_short_geodesics(short, m), gates.gate_hold_short_geodesics(long, m)),
        ]
        for shorter, longer in pairs:
            assert _RANK[shorter.status] <= _RANK[longer.status], (shorter, longer)
