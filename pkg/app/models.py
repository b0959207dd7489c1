from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.services.interval import Interval

Number = Union[str, float, int]


class GateStatus(str, Enum):
    CERTIFIED = "Certified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


class GateReport(BaseModel):
    """Outcome of checking a theorem's numeric hypotheses on user data."""

    # infinite endpoints survive a JSON round trip
    model_config = ConfigDict(ser_json_inf_nan="constants")

    gate_id: str
    status: GateStatus
    quantities: Dict[str, Tuple[float, float]] = Field(
        default_factory=dict, description="Certified outputs as [lo, hi]; empty unless Certified"
    )
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Inputs as received")
    citation: str
    failed: Optional[str] = Field(default=None, description="First hypothesis that did not certify")
    notes: List[str] = Field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status is GateStatus.CERTIFIED

    def quantity(self, name: str) -> Interval:
        lo, hi = self.quantities[name]
        return Interval(lo, hi)


class LedgerEntry(BaseModel):
    task_id: str
    status: str
    boxes: int
    seconds: float
    code_hash: str
    max_depth: int = 0
    citation: str = ""
    tightened: bool = False


class CliConfig(BaseModel):
    precision_digits: int = Field(default_factory=lambda: settings.display_digits, ge=1, le=17)
    output: str = Field(default_factory=lambda: settings.output_format, pattern="^(human|json)$")
    depth: int = Field(default_factory=lambda: settings.prove_max_depth, ge=1)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)


class CuspModel(BaseModel):
    meridian: Tuple[Number, Number] = Field(..., description="Meridian translation [re, im]")
    longitude: Tuple[Number, Number] = Field(..., description="Longitude translation [re, im]")


class CuspFile(BaseModel):
    cusps: List[CuspModel]
    sys: Optional[Number] = None
    vol: Optional[Number] = None
    V: Optional[Number] = None


class CosmeticRequest(CuspFile):
    knot: bool = False


class EvalRequest(BaseModel):
    function: str
    args: List[str] = Field(default_factory=list)


class EvalResponse(BaseModel):
    function: str
    values: Dict[str, Tuple[float, float]]
    citation: str


class GateRequest(BaseModel):
    params: Dict[str, str] = Field(default_factory=dict)
