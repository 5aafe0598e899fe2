"""Pydantic request/response models for the compilation service."""
from __future__ import annotations

from pydantic import BaseModel, Field


class CircuitPayload(BaseModel):
    circuit: dict


class SynthRequest(BaseModel):
    q: int = Field(ge=1)
    n: int | None = None  # defaults to q
    family: str = "toffoli"  # toffoli | sequential | parallel
    memory: str | None = None  # bit string, "random:SEED", default all-ones
    fanin: str = "measurement"  # measurement | unitary (parallel family only)


class LowerRequest(BaseModel):
    circuit: dict
    variant: str = "canonical_7t"
    shared: str | None = None


class ScheduleRequest(BaseModel):
    circuit: dict
    ghz_expand: bool = False


class ScheduleResponse(BaseModel):
    depth: int
    moments: list[list[int]]
    region_depths: dict | None = None
    wire_count: int


class VerifyRequest(BaseModel):
    circuit: dict
    q: int = Field(ge=1)
    n: int | None = None
    memory: str | None = None  # bit string, "random:SEED", or None for the sweep


class VerifyResponse(BaseModel):
    verdict: str
    max_deviation: float
    witnessing_input: int | None
    memories_checked: int
    equivalent: bool


class ReportRequest(BaseModel):
    families: list[str] = ["bbs", "rom", "bbp"]
    q_lo: int = Field(default=2, ge=1)
    q_hi: int = Field(default=8, ge=1)
    n_policy: str = "n_equals_q"
    measure_cap: int = 8


class ReportResponse(BaseModel):
    csv: str


class RenderResponse(BaseModel):
    text: str


class ExportResponse(BaseModel):
    qasm: str


class HealthResponse(BaseModel):
    status: str
    version: str
