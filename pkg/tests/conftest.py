from __future__ import annotations

import json
import os
import random
from pathlib import Path

import pytest
from mpmath import mp, mpf

from app.core.config import settings
from app.services.interval import Interval

SEED = 20240611

FULL_RUNS = os.environ.get("DRILLFILL_FULL_PROPERTY_RUNS", "").lower() in {"1", "true", "yes"}


def runs(reduced: int, full: int) -> int:
    """Trial count for a property test; the full count needs DRILLFILL_FULL_PROPERTY_RUNS."""
    return full if FULL_RUNS else reduced


def encloses(x: Interval, value) -> bool:
    return mpf(x.lo) <= value <= mpf(x.hi)


@pytest.fixture(autouse=True)
def _mp_precision():
    with mp.workdps(50):
        yield


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


@pytest.fixture
def ledger_path(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    path = tmp_path / "ledger.json"
    monkeypatch.setattr(settings, "ledger_path", path)
    return path


def write_cusp_file(directory: Path, payload: dict, name: str = "cusp.json") -> Path:
    path = directory / name
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


SQUARE_FIXTURE = {
    "cusps": [{"meridian": [1, 0], "longitude": [0, 1]}],
    "sys": 0.2,
    "vol": 2,
    "V": 1,
}


@pytest.fixture
def square_cusp_file(tmp_path: Path) -> Path:
    return write_cusp_file(tmp_path, SQUARE_FIXTURE)
