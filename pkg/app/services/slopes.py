"""Slopes on cusp tori: normalized lengths, short-slope enumeration and cosmetic candidates."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from app.core.errors import CuspFileError, DegenerateLattice, DomainError, VolumeOrderError
from app.models import CuspFile, Number
from app.services.constants import AGOL_CAP, COSMETIC_FLOOR, TWO_PI
from app.services.interval import Interval
from app.services.special import cosmetic_cutoff

logger = logging.getLogger(__name__)

Complex = Tuple[Interval, Interval]


def _number(value: Number) -> Interval:
    # floats go through repr so "0.1" in JSON means the decimal 0.1
    return Interval.parse(value if isinstance(value, str) else repr(value))


@dataclass(frozen=True)
class CuspShape:
    """Cusp torus lattice spanned by the meridian and longitude translations."""

    meridian: Complex
    longitude: Complex

    @classmethod
    def of(cls, meridian: Sequence[Number], longitude: Sequence[Number]) -> "CuspShape":
        mu_re, mu_im = meridian
        lam_re, lam_im = longitude
        return cls((_number(mu_re), _number(mu_im)), (_number(lam_re), _number(lam_im)))

    @property
    def area(self) -> Interval:
        (a, b), (c, d) = self.meridian, self.longitude
        value = abs(a * d - b * c)
        if value.lo <= 0:
            raise DegenerateLattice(f"cusp area enclosure {value} contains zero")
        return value

    def translation(self, p: int, q: int) -> Complex:
        (a, b), (c, d) = self.meridian, self.longitude
        return (p * a + q * c, p * b + q * d)

    def scaled(self, factor: Union[Interval, str]) -> "CuspShape":
        c = Interval.coerce(factor)
        (a, b), (x, y) = self.meridian, self.longitude
        return CuspShape((c * a, c * b), (c * x, c * y))


@dataclass(frozen=True, order=True)
class Slope:
    """Primitive slope ``p mu + q lambda``, stored in canonical form."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p == 0 and self.q == 0:
            raise DomainError("Slope", (0, 0), "the zero vector is not a slope")
        if math.gcd(self.p, self.q) != 1:
            raise DomainError("Slope", (self.p, self.q), "p and q must be coprime")

    @classmethod
    def canonical(cls, p: int, q: int) -> "Slope":
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        return cls(p, q)

    def canon(self) -> "Slope":
        return Slope.canonical(self.p, self.q)

    def sort_key(self) -> Tuple[int, int, int]:
        return (abs(self.p), self.p, self.q)

    def to_list(self) -> List[int]:
        return [self.p, self.q]

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def euclidean_length(cusp: CuspShape, slope: Slope) -> Interval:
    x, y = cusp.translation(slope.p, slope.q)
    return (x.pow_int(2) + y.pow_int(2)).sqrt()


def normalized_length(cusp: CuspShape, slope: Slope) -> Interval:
    """``|p mu + q lambda| / sqrt(area)``; independent of the cusp's scale."""
    return euclidean_length(cusp, slope) / cusp.area.sqrt()


def combine_lengths(lengths: Iterable[Interval]) -> Interval:
    """Total normalized length ``L`` with ``1/L^2 = sum 1/L_j^2``."""
    values = list(lengths)
    if not values:
        raise DomainError("combine_lengths", values, "at least one cusp must be filled")
    inverse = sum((1 / v.pow_int(2) for v in values[1:]), 1 / values[0].pow_int(2))
    return 1 / inverse.sqrt()


def total_normalized_length(slopes: Sequence[Optional[Slope]], cusps: Sequence[CuspShape]) -> Interval:
    """Total normalized length of a slope tuple; ``None`` marks an unfilled cusp."""
    if len(slopes) != len(cusps):
        raise DomainError("total_normalized_length", len(slopes), f"expected {len(cusps)} slopes")
    return combine_lengths(
        normalized_length(cusp, slope) for slope, cusp in zip(slopes, cusps) if slope is not None
    )


@dataclass
class SlopeSet:
    """Slopes certified shorter than ``cutoff``, plus those whose length straddles it."""

    cutoff: Interval
    inside: List[Slope] = field(default_factory=list)
    boundary: List[Slope] = field(default_factory=list)

    @property
    def candidates(self) -> List[Slope]:
        return sorted(self.inside + self.boundary, key=Slope.sort_key)

    def __len__(self) -> int:
        return len(self.inside) + len(self.boundary)


def _search_box(cusp: CuspShape, radius: Interval) -> Iterable[Tuple[int, int]]:
    """Every ``(p, q)`` with ``|p mu + q lambda| < radius``, with slack."""
    (a, b), (c, d) = cusp.meridian, cusp.longitude
    mu_sq = a.pow_int(2) + b.pow_int(2)
    mu_abs = mu_sq.sqrt()
    area = cusp.area
    # |Im(conj(mu) v)| = |q| area, so |v| >= |q| area / |mu|
    q_max = int(math.floor((radius * mu_abs / area).hi)) + 1
    # Re(conj(mu) v) = p |mu|^2 + q Re(conj(mu) lambda)
    cross = a * c + b * d
    half = radius * mu_abs / mu_sq
    for q in range(-q_max, q_max + 1):
        center = -q * cross / mu_sq
        p_lo = int(math.floor(center.lo - half.hi)) - 1
        p_hi = int(math.ceil(center.hi + half.hi)) + 1
        for p in range(p_lo, p_hi + 1):
            yield p, q


def _enumerate(cusp: CuspShape, cutoff: Interval, normalized: bool) -> SlopeSet:
    if cutoff.lo <= 0:
        raise DomainError("enumerate_short_slopes", cutoff, "cutoff must be positive")
    scale = cusp.area.sqrt()
    radius = cutoff * scale if normalized else cutoff
    found = SlopeSet(cutoff=cutoff)
    seen = set()
    for p, q in _search_box(cusp, radius):
        if (p == 0 and q == 0) or math.gcd(p, q) != 1:
            continue
        slope = Slope.canonical(p, q)
        if slope in seen:
            continue
        seen.add(slope)
        length = euclidean_length(cusp, slope)
        if normalized:
            length = length / scale
        if length.hi < cutoff.lo:
            found.inside.append(slope)
        elif length.lo < cutoff.hi:
            found.boundary.append(slope)
    found.inside.sort(key=Slope.sort_key)
    found.boundary.sort(key=Slope.sort_key)
    logger.debug("cutoff %s: %d slopes inside, %d on the boundary", cutoff, len(found.inside), len(found.boundary))
    return found


def enumerate_short_slopes(cusp: CuspShape, cutoff: Interval) -> SlopeSet:
    """All slopes of normalized length below ``cutoff``, in ``(|p|, p, q)`` order."""
    return _enumerate(cusp, cutoff, normalized=True)


def enumerate_euclidean(cusp: CuspShape, cutoff: Interval) -> SlopeSet:
    """All slopes of Euclidean length below ``cutoff`` on the given lattice."""
    return _enumerate(cusp, cutoff, normalized=False)


def agol_cap_holds(cusp: CuspShape) -> bool:
    """At most 104 slopes have normalized length below 10.1."""
    return len(enumerate_short_slopes(cusp, COSMETIC_FLOOR)) <= AGOL_CAP


def s1_set(cusp: CuspShape, sys: Interval) -> SlopeSet:
    return enumerate_short_slopes(cusp, cosmetic_cutoff(sys))


def s2_cutoff(vol: Interval, V: Interval) -> Interval:
    """Euclidean length ``2pi (1 - (V/vol)^(2/3))^(-1/2)`` on the maximal cusp."""
    if vol.lo <= 0 or V.lo < 0:
        raise DomainError("s2_cutoff", (vol, V), "volumes must be positive")
    if V.lo >= vol.hi:
        raise VolumeOrderError(f"V={V} is not below vol={vol}")
    if V.hi >= vol.lo:
        raise VolumeOrderError(f"cannot certify V={V} < vol={vol}")
    ratio = (V / vol).pow_real(Interval(2.0) / 3) if V.hi > 0 else Interval(0.0)
    return TWO_PI / (1 - ratio).sqrt()


def s2_set(cusp: CuspShape, vol: Interval, V: Interval) -> SlopeSet:
    return enumerate_euclidean(cusp, s2_cutoff(vol, V))


def niwu_partner(slope: Slope) -> Optional[Slope]:
    """``(p, -q)`` when ``p`` divides ``q^2 + 1``, else ``None``.

    ``1/0`` is its own reflection and has no partner.
    """
    if slope.p < 1 or slope.q == 0 or (slope.q * slope.q + 1) % slope.p:
        return None
    return Slope.canonical(slope.p, -slope.q)


def niwu_pairs(slopes: Sequence[Slope]) -> List[Tuple[Slope, Slope]]:
    pairs = []
    for slope in sorted({s.canon() for s in slopes}, key=Slope.sort_key):
        partner = niwu_partner(slope)
        if partner is not None:
            pairs.append((slope, partner))
    return pairs


@dataclass(frozen=True)
class CandidatePair:
    first: Slope
    second: Slope
    first_length: Interval
    second_length: Interval

    def to_dict(self) -> dict:
        return {
            "first": self.first.to_list(),
            "second": self.second.to_list(),
            "first_length": self.first_length.to_list(),
            "second_length": self.second_length.to_list(),
        }


@dataclass
class CosmeticCandidates:
    s1: SlopeSet
    s2: SlopeSet
    pairs: List[CandidatePair]

    def knot_filtered(self) -> List[CandidatePair]:
        """Pairs of the form ``{(p, q), (p, -q)}`` with ``p | q^2 + 1``."""
        return [pair for pair in self.pairs if niwu_partner(pair.first) == pair.second]


def cosmetic_candidates(cusp: CuspShape, sys: Interval, vol: Interval, V: Interval) -> CosmeticCandidates:
    """The finite search ``S1 x S2`` minus the diagonal; straddling slopes are included."""
    first = s1_set(cusp, sys)
    second = s2_set(cusp, vol, V)
    lengths = {slope: normalized_length(cusp, slope) for slope in set(first.candidates) | set(second.candidates)}
    pairs = [
        CandidatePair(a, b, lengths[a], lengths[b])
        for a in first.candidates
        for b in second.candidates
        if a != b
    ]
    logger.info("cosmetic candidates: |S1|=%d |S2|=%d pairs=%d", len(first), len(second), len(pairs))
    return CosmeticCandidates(first, second, pairs)


def cosmetic_payload(candidates: CosmeticCandidates, knot: bool) -> dict:
    """JSON shape shared by ``cosmetic --json`` and ``POST /api/cosmetic``."""
    payload = {
        "s1_cutoff": candidates.s1.cutoff.to_list(),
        "s2_cutoff": candidates.s2.cutoff.to_list(),
        "s1": [s.to_list() for s in candidates.s1.candidates],
        "s2": [s.to_list() for s in candidates.s2.candidates],
        "s1_boundary": [s.to_list() for s in candidates.s1.boundary],
        "s2_boundary": [s.to_list() for s in candidates.s2.boundary],
        "pairs": [pair.to_dict() for pair in candidates.pairs],
    }
    if knot:
        payload["knot_pairs"] = [pair.to_dict() for pair in candidates.knot_filtered()]
    return payload


@dataclass
class CuspData:
    cusps: List[CuspShape]
    sys: Optional[Interval]
    vol: Optional[Interval]
    V: Optional[Interval]


def cusp_data(model: CuspFile) -> CuspData:
    if not model.cusps:
        raise DegenerateLattice("no cusps given")
    return CuspData(
        cusps=[CuspShape.of(c.meridian, c.longitude) for c in model.cusps],
        sys=None if model.sys is None else _number(model.sys),
        vol=None if model.vol is None else _number(model.vol),
        V=None if model.V is None else _number(model.V),
    )


def parse_cusp_file(path: Union[str, Path]) -> CuspData:
    """Read a cusp JSON file; malformed input raises ``CuspFileError`` with the line."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CuspFileError(str(path), exc.strerror or str(exc)) from exc
    try:
        # floats stay decimal strings until outward rounding
        raw = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise CuspFileError(str(path), exc.msg, exc.lineno) from exc
    try:
        model = CuspFile.model_validate(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise CuspFileError(str(path), f"{location}: {error['msg']}", _line_of(text, error["loc"])) from exc
    return cusp_data(model)


def _line_of(text: str, loc: Sequence[object]) -> Optional[int]:
    keys = [part for part in loc if isinstance(part, str)]
    if not keys:
        return None
    needle = f'"{keys[-1]}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None
