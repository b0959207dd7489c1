from __future__ import annotations

import pytest

from app.core.errors import UnknownTask
from app.services import verify
from app.services.interval import Box, ProofStatus, prove_nonneg

EXPECTED_TASKS = {
    "injec_linear_dominates",
    "meyerhoff_m8",
    "area_bound_capped",
    "hold_geodesics_fhat",
    "puiseux_938",
    "puiseux_106",
    "sysmin_supper",
    "gj_max",
    "gj_dJ_positive",
    "delta_cut_bracket",
}

# tightened claims that are false, so the prover must not certify them
MUST_FAIL_TIGHTENED = [
    "gj_max",
    "sysmin_supper",
    "puiseux_106",
    "delta_cut_bracket",
    "injec_linear_dominates",
]


def test_registry_lists_every_task():
    assert set(verify.TASKS) == EXPECTED_TASKS
    for task in verify.TASKS.values():
        assert task.citation
        assert task.description
        assert task.parts(False)


def test_unknown_task():
    with pytest.raises(UnknownTask):
        verify.get_task("nope")
    with pytest.raises(UnknownTask):
        verify.run_all(["delta_cut_bracket", "nope"])


def test_delta_cut_bracket_verifies():
    result = verify.run_task("delta_cut_bracket")
    assert result.status is ProofStatus.VERIFIED
    assert result.boxes_examined >= 2


def test_negated_gj_max_has_counterexample():
    (part,) = verify.TASKS["gj_max"].parts(False)
    negated = prove_nonneg(lambda box: -part.expression(box), part.domain, max_depth=30)
    assert negated.status is ProofStatus.COUNTEREXAMPLE
    assert negated.box is not None


def test_record_task_builds_entry():
    entry = verify.record_task("delta_cut_bracket")
    assert entry.status == "Verified"
    assert entry.citation == "lem:delta-tube-embeds"
    assert not entry.tightened
    assert entry.seconds >= 0


@pytest.mark.slow
@pytest.mark.parametrize("task_id", sorted(EXPECTED_TASKS))
def test_task_verifies(task_id):
    result = verify.run_task(task_id)
    assert result.status is ProofStatus.VERIFIED, task_id


@pytest.mark.slow
@pytest.mark.parametrize("task_id", MUST_FAIL_TIGHTENED)
def test_tightened_task_does_not_verify(task_id):
    result = verify.run_task(task_id, tighten=True, max_depth=30)
    assert result.status is not ProofStatus.VERIFIED, task_id
