from __future__ import annotations

import json

from app.core import ledger
from app.models import LedgerEntry
from app.services import verify


def _entry(task_id: str = "delta_cut_bracket", **overrides) -> LedgerEntry:
    values = dict(
        task_id=task_id,
        status="Verified",
        boxes=2,
        seconds=0.01,
        code_hash=ledger.code_hash(),
        citation="lem:delta-tube-embeds",
    )
    values.update(overrides)
    return LedgerEntry(**values)


def test_code_hash_is_stable_hex():
    first = ledger.code_hash()
    assert first == ledger.code_hash()
    assert len(first) == 64
    int(first, 16)


def test_missing_or_empty_ledger_is_empty(ledger_path):
    assert ledger.load_ledger() == {}
    ledger_path.write_text("  \n", encoding="utf-8")
    assert ledger.load_ledger() == {}


def test_save_then_load(ledger_path):
    ledger.save_ledger({"delta_cut_bracket": _entry()})
    loaded = ledger.load_ledger(ledger_path)
    assert loaded == {"delta_cut_bracket": _entry()}
    assert not list(ledger_path.parent.glob(".ledger-*"))


def test_malformed_entries_are_skipped(ledger_path, caplog):
    good = _entry().model_dump()
    ledger_path.write_text(json.dumps([good, {"task_id": "broken"}]), encoding="utf-8")
    with caplog.at_level("WARNING", logger="app.core.ledger"):
        loaded = ledger.load_ledger()
    assert list(loaded) == ["delta_cut_bracket"]
    assert "malformed" in caplog.text


def test_is_fresh():
    assert ledger.is_fresh(_entry())
    assert not ledger.is_fresh(_entry(code_hash="0" * 64))
    assert not ledger.is_fresh(None)


def test_fresh_entry_is_reused(ledger_path):
    cached = _entry(boxes=12345)
    ledger.save_ledger({"delta_cut_bracket": cached})
    (entry,) = verify.run_all(["delta_cut_bracket"])
    assert entry.boxes == 12345


def test_stale_or_forced_entry_is_rerun(ledger_path):
    ledger.save_ledger({"delta_cut_bracket": _entry(boxes=12345, code_hash="stale")})
    (entry,) = verify.run_all(["delta_cut_bracket"])
    assert entry.boxes != 12345
    assert ledger.load_ledger()["delta_cut_bracket"].code_hash == ledger.code_hash()

    (forced,) = verify.run_all(["delta_cut_bracket"], force=True)
    assert forced.status == "Verified"


def test_tightened_runs_are_not_stored(ledger_path):
    (entry,) = verify.run_all(["delta_cut_bracket"], tighten=True)
    assert entry.tightened
    assert entry.status != "Verified"
    assert "delta_cut_bracket" not in ledger.load_ledger()
