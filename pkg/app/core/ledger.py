from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from contextlib import contextmanager
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, Optional, Union

from pydantic import ValidationError

from app.core.config import settings
from app.models import LedgerEntry

logger = logging.getLogger(__name__)

_SERVICES = Path(__file__).resolve().parent.parent / "services"
_HASHED = ("interval.py", "constants.py", "series.py", "special.py", "verify.py")

Ledger = Dict[str, LedgerEntry]


@lru_cache()
def code_hash() -> str:
    """SHA-256 over the numeric service sources; entries with another hash are stale."""
    digest = hashlib.sha256()
    for name in _HASHED:
        digest.update(name.encode())
        digest.update((_SERVICES / name).read_bytes())
    return digest.hexdigest()


def load_ledger(path: Optional[Union[str, Path]] = None) -> Ledger:
    path = Path(path or settings.ledger_path)
    if not path.exists():
        return {}
    text = path.read_text(encoding="utf-8").strip()
    if not text:
        return {}
    entries: Ledger = {}
    for raw in json.loads(text):
        try:
            entry = LedgerEntry.model_validate(raw)
        except ValidationError:
            logger.warning("Skipping malformed ledger entry in %s: %r", path, raw)
            continue
        entries[entry.task_id] = entry
    return entries


def save_ledger(entries: Ledger, path: Optional[Union[str, Path]] = None) -> None:
    path = Path(path or settings.ledger_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [entry.model_dump() for entry in entries.values()]
    fd, temp = tempfile.mkstemp(prefix=".ledger-", suffix=".json", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
        os.replace(temp, path)
    except BaseException:
        os.unlink(temp)
        raise
    logger.debug("Wrote %d ledger entries to %s", len(payload), path)


@contextmanager
def ledger_session(path: Optional[Union[str, Path]] = None) -> Iterator[Ledger]:
    """Yield the ledger as a mutable mapping; written back only on normal exit."""
    entries = load_ledger(path)
    yield entries
    save_ledger(entries, path)


def is_fresh(entry: Optional[LedgerEntry]) -> bool:
    return entry is not None and entry.code_hash == code_hash()
