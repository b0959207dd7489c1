from __future__ import annotations

import math

import pytest

from app.core.errors import CuspFileError, DegenerateLattice, DomainError, VolumeOrderError
from app.models import CuspFile
from app.services import slopes
from app.services.interval import Interval
from app.services.slopes import CuspShape, Slope
from tests.conftest import SQUARE_FIXTURE, runs, write_cusp_file

SQUARE = CuspShape.of((1, 0), (0, 1))


def _primitive_within(norm_sq: int) -> set[Slope]:
    bound = math.isqrt(norm_sq)
    found = set()
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if (p, q) != (0, 0) and p * p + q * q <= norm_sq and math.gcd(p, q) == 1:
                found.add(Slope.canonical(p, q))
    return found


# slopes and lengths -----------------------------------------------------------------


def test_slope_validation_and_canonical_form():
    assert Slope.canonical(-2, 3) == Slope(2, -3)
    assert Slope.canonical(0, -1) == Slope(0, 1)
    assert str(Slope(3, -1)) == "3/-1"
    with pytest.raises(DomainError):
        Slope(0, 0)
    with pytest.raises(DomainError):
        Slope(2, 4)


def test_normalized_length_is_scale_invariant():
    cusp = CuspShape.of(("0.8", "0.1"), ("0.3", "2.2"))
    slope = Slope(2, 3)
    assert slopes.normalized_length(cusp, slope).overlaps(slopes.normalized_length(cusp.scaled("3"), slope))
    assert slopes.euclidean_length(SQUARE, Slope(3, 4)).contains(5.0)


def test_degenerate_lattice():
    flat = CuspShape.of((1, 0), (2, 0))
    with pytest.raises(DegenerateLattice):
        flat.area
    with pytest.raises(DegenerateLattice):
        slopes.cusp_data(CuspFile(cusps=[]))


def test_combine_lengths():
    two = Interval(2.0)
    assert slopes.combine_lengths([two, two]).mid == pytest.approx(math.sqrt(2), rel=1e-14)
    assert slopes.combine_lengths([two]).contains(2.0)
    total = slopes.total_normalized_length([Slope(1, 0), None], [SQUARE, SQUARE])
    assert total.contains(1.0)
    with pytest.raises(DomainError):
        slopes.combine_lengths([])
    with pytest.raises(DomainError):
        slopes.total_normalized_length([Slope(1, 0)], [SQUARE, SQUARE])


# enumeration -------------------------------------------------------------------------


def test_square_lattice_short_slopes_in_order():
    found = slopes.enumerate_short_slopes(SQUARE, Interval.parse("2.5"))
    assert [s.to_list() for s in found.candidates] == [
        [0, 1],
        [1, -2],
        [1, -1],
        [1, 0],
        [1, 1],
        [1, 2],
        [2, -1],
        [2, 1],
    ]
    assert found.boundary == []


def test_square_lattice_below_cosmetic_floor():
    found = slopes.enumerate_short_slopes(SQUARE, Interval.parse("10.1"))
    assert set(found.candidates) == _primitive_within(102)
    assert len(found) <= 104
    assert slopes.agol_cap_holds(SQUARE)


def test_slope_exactly_at_cutoff_is_reported_as_boundary():
    found = slopes.enumerate_short_slopes(SQUARE, Interval.parse("5"))
    assert Slope(3, 4) in found.boundary
    assert Slope(3, 4) in found.candidates


def test_enumeration_is_complete_on_random_lattices(rng):
    for _ in range(runs(20, 200)):
        meridian = (rng.uniform(0.5, 2.0), rng.uniform(-0.2, 0.2))
        longitude = (rng.uniform(-1.0, 1.0), rng.uniform(0.8, 3.0))
        cusp = CuspShape.of(meridian, longitude)
        cutoff = rng.uniform(1.5, 6.0)
        found = set(slopes.enumerate_short_slopes(cusp, Interval(cutoff)).candidates)
        area = abs(meridian[0] * longitude[1] - meridian[1] * longitude[0])
        expected = set()
        for p in range(-60, 61):
            for q in range(-60, 61):
                if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                    continue
                x = p * meridian[0] + q * longitude[0]
                y = p * meridian[1] + q * longitude[1]
                length = math.hypot(x, y) / math.sqrt(area)
                if length < cutoff - 1e-9:
                    expected.add(Slope.canonical(p, q))
        assert expected <= found
        for slope in found:
            assert slopes.normalized_length(cusp, slope).lo < cutoff


def test_agol_cap_on_random_lattices(rng):
    for _ in range(runs(50, 1_000)):
        scale = rng.uniform(0.1, 10.0)
        meridian = (scale, 0.0)
        longitude = (scale * rng.uniform(-0.5, 0.5), scale * rng.uniform(0.3, 12.0))
        assert slopes.agol_cap_holds(CuspShape.of(meridian, longitude)), (meridian, longitude)


def test_invalid_cutoff():
    with pytest.raises(DomainError):
        slopes.enumerate_short_slopes(SQUARE, Interval(0.0))


# cosmetic candidates --------------------------------------------------------------------


def test_s2_cutoff():
    cutoff = slopes.s2_cutoff(Interval(2.0), Interval(1.0))
    assert 10.328 < cutoff.lo and cutoff.hi < 10.330
    assert slopes.s2_cutoff(Interval(2.0), Interval(0.0)).contains(2 * math.pi)


def test_s2_cutoff_errors():
    with pytest.raises(DomainError):
        slopes.s2_cutoff(Interval(0.0), Interval(1.0))
    with pytest.raises(VolumeOrderError):
        slopes.s2_cutoff(Interval(2.0), Interval(3.0))
    with pytest.raises(VolumeOrderError):
        slopes.s2_cutoff(Interval(2.0, 2.5), Interval(1.5, 2.2))


def test_cosmetic_candidates_on_square_fixture():
    candidates = slopes.cosmetic_candidates(
        SQUARE, Interval.parse("0.2"), Interval.parse("2"), Interval.parse("1")
    )
    s1 = _primitive_within(102)
    s2 = _primitive_within(106)
    assert set(candidates.s1.candidates) == s1
    assert set(candidates.s2.candidates) == s2
    assert len(candidates.pairs) == len(s1) * len(s2) - len(s1)
    assert all(pair.first != pair.second for pair in candidates.pairs)

    knot = candidates.knot_filtered()
    expected = {(a, slopes.niwu_partner(a)) for a in s1 if slopes.niwu_partner(a) in s2}
    assert {(pair.first, pair.second) for pair in knot} == expected


def test_s1_and_s2_sets_match_candidate_search():
    sys, vol, V = Interval.parse("0.2"), Interval.parse("2"), Interval.parse("1")
    candidates = slopes.cosmetic_candidates(SQUARE, sys, vol, V)
    assert slopes.s1_set(SQUARE, sys).candidates == candidates.s1.candidates
    assert slopes.s2_set(SQUARE, vol, V).candidates == candidates.s2.candidates
    assert len(slopes.s1_set(SQUARE, sys)) == len(_primitive_within(102))


def test_niwu_partner():
    assert slopes.niwu_partner(Slope(1, 5)) == Slope(1, -5)
    assert slopes.niwu_partner(Slope(2, 1)) == Slope(2, -1)
    assert slopes.niwu_partner(Slope(3, 1)) is None
    assert slopes.niwu_partner(Slope(5, 7)) == Slope(5, -7)
    assert slopes.niwu_partner(Slope(0, 1)) is None
    assert slopes.niwu_partner(Slope(1, 0)) is None
    assert slopes.niwu_pairs([Slope(1, 5), Slope(3, 1)]) == [(Slope(1, 5), Slope(1, -5))]
    assert slopes.niwu_pairs([Slope(1, 0), Slope(1, 1)]) == [(Slope(1, 1), Slope(1, -1))]


def test_cosmetic_payload_shape():
    candidates = slopes.cosmetic_candidates(
        SQUARE, Interval.parse("0.2"), Interval.parse("2"), Interval.parse("1")
    )
    plain = slopes.cosmetic_payload(candidates, knot=False)
    assert "knot_pairs" not in plain
    assert len(plain["s1"]) == len(candidates.s1)
    assert len(plain["pairs"]) == len(candidates.pairs)
    knot = slopes.cosmetic_payload(candidates, knot=True)
    assert len(knot["knot_pairs"]) == len(candidates.knot_filtered())
    assert [1, 0] not in [pair["first"] for pair in knot["knot_pairs"]]


# cusp files -----------------------------------------------------------------------------


def test_parse_cusp_file(square_cusp_file):
    data = slopes.parse_cusp_file(square_cusp_file)
    assert len(data.cusps) == 1
    assert data.sys is not None and data.sys.contains(Interval.parse("0.2"))
    assert data.cusps[0].area.contains(1.0)


def test_cusp_file_json_error_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "cusps": [\n    {"meridian": [1, 0],, "longitude": [0, 1]}\n  ]\n}\n', encoding="utf-8")
    with pytest.raises(CuspFileError) as excinfo:
        slopes.parse_cusp_file(path)
    assert excinfo.value.line == 3
    assert str(excinfo.value).startswith(f"{path}:3:")


def test_cusp_file_validation_error_points_at_field(tmp_path):
    payload = dict(SQUARE_FIXTURE, cusps=[{"meridian": "abc", "longitude": [0, 1]}])
    path = write_cusp_file(tmp_path, payload)
    with pytest.raises(CuspFileError) as excinfo:
        slopes.parse_cusp_file(path)
    assert excinfo.value.line == 4
    assert "meridian" in str(excinfo.value)


def test_missing_cusp_file(tmp_path):
    with pytest.raises(CuspFileError) as excinfo:
        slopes.parse_cusp_file(tmp_path / "absent.json")
    assert excinfo.value.line is None
