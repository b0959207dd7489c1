from __future__ import annotations

import logging
from typing import Callable, TypeVar

from fastapi import APIRouter, HTTPException

from app.core.errors import DrillfillError, UnknownFunction
from app.models import CosmeticRequest, EvalRequest, EvalResponse, GateReport, GateRequest, LedgerEntry
from app.services import gates, slopes, special, verify

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api")

T = TypeVar("T")


def _guarded(action: Callable[[], T]) -> T:
    try:
        return action()
    except HTTPException:
        raise
    except UnknownFunction as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    except DrillfillError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except Exception as exc:  # noqa: BLE001
        logger.exception("Unexpected failure in API handler")
        raise HTTPException(status_code=500, detail="internal error") from exc


@router.get("/functions")
def api_functions() -> list[dict]:
    return [
        {"name": spec.name, "params": list(spec.params), "outputs": list(spec.outputs), "citation": spec.citation}
        for spec in special.FUNCTIONS.values()
    ]


@router.post("/eval", response_model=EvalResponse)
def api_eval(request: EvalRequest) -> EvalResponse:
    spec, values = _guarded(lambda: special.evaluate(request.function, request.args))
    return EvalResponse(
        function=spec.name,
        values={name: (value.lo, value.hi) for name, value in values.items()},
        citation=spec.citation,
    )


@router.get("/gates")
def api_gates() -> list[dict]:
    return [{"gate_id": entry.gate_id, "usage": entry.usage, "citation": entry.citation} for entry in gates.GATES.values()]


@router.post("/gates/{gate_id}", response_model=GateReport)
def api_gate(gate_id: str, request: GateRequest) -> GateReport:
    return _guarded(lambda: gates.run_gate(gate_id, request.params))


@router.post("/cosmetic")
def api_cosmetic(request: CosmeticRequest) -> dict:
    def compute() -> dict:
        data = slopes.cusp_data(request)
        if data.sys is None or data.vol is None or data.V is None:
            raise HTTPException(status_code=422, detail="sys, vol and V are required")
        candidates = slopes.cosmetic_candidates(data.cusps[0], data.sys, data.vol, data.V)
        return slopes.cosmetic_payload(candidates, request.knot)

    return _guarded(compute)


@router.get("/tasks")
def api_tasks() -> list[dict]:
    return [
        {"task_id": task.task_id, "citation": task.citation, "description": task.description}
        for task in verify.TASKS.values()
    ]


@router.post("/verify/{task_id}", response_model=LedgerEntry)
def api_verify(task_id: str, tighten: bool = False) -> LedgerEntry:
    if tighten:
        return _guarded(lambda: verify.record_task(task_id, tighten=True))
    return _guarded(lambda: verify.run_all([task_id])[0])
