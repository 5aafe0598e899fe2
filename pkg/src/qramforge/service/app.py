"""FastAPI service wrapping the core package.

Every CLI subcommand maps onto one endpoint; the CLI is a thin client that
POSTs these models either in-process or to a remote server.  Domain errors
surface as HTTP 400 with the exception text; schema errors as 422.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..builders import (
    QramInstance,
    build_parallel_clifford_t,
    build_sequential_clifford_t,
    build_toffoli_bucket_brigade,
)
from ..decompositions import CczVariant, lower_toffoli
from ..errors import QramForgeError
from ..ir import Circuit, GateKind
from ..metrics import Family, resolve_n, sweep
from ..scheduler import expand_ghz_fanout, region_depths, schedule_asap
from ..serialize import from_document, render_ascii, to_document, to_qasm
from ..simulator import Level, default_memories, verify_qram
from .models import (
    CircuitPayload,
    ExportResponse,
    HealthResponse,
    LowerRequest,
    RenderResponse,
    ReportRequest,
    ReportResponse,
    ScheduleRequest,
    ScheduleResponse,
    SynthRequest,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(title="qramforge", version=__version__)


def _parse_memory(spec: str | None, q: int) -> tuple[int, ...]:
    cells = 1 << q
    if spec is None:
        return (1,) * cells
    if spec.startswith("random:"):
        rng = np.random.default_rng(int(spec.split(":", 1)[1]))
        return tuple(int(b) for b in rng.integers(0, 2, size=cells))
    if len(spec) != cells or any(c not in "01" for c in spec):
        raise QramForgeError(f"memory must be {cells} bits or random:SEED, got {spec!r}")
    return tuple(int(c) for c in spec)


def _circuit(doc: dict) -> Circuit:
    return from_document(doc)


_FAMILIES = {
    "toffoli": lambda inst, fanin: build_toffoli_bucket_brigade(inst),
    "sequential": lambda inst, fanin: build_sequential_clifford_t(inst),
    "parallel": lambda inst, fanin: build_parallel_clifford_t(inst, fanin),
}


@app.exception_handler(QramForgeError)
async def _domain_error(request, exc: QramForgeError):
    from fastapi.responses import JSONResponse

    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/synth", response_model=CircuitPayload)
def synth(req: SynthRequest) -> CircuitPayload:
    if req.family not in _FAMILIES:
        raise HTTPException(status_code=422, detail=f"unknown family {req.family!r}")
    n = req.n if req.n is not None else req.q
    instance = QramInstance(req.q, n, _parse_memory(req.memory, req.q))
    circuit = _FAMILIES[req.family](instance, req.fanin)
    return CircuitPayload(circuit=to_document(circuit))


@app.post("/v1/lower", response_model=CircuitPayload)
def lower(req: LowerRequest) -> CircuitPayload:
    try:
        variant = CczVariant(req.variant)
    except ValueError:
        raise HTTPException(status_code=422, detail=f"unknown variant {req.variant!r}")
    circuit = _circuit(req.circuit)
    gates = []
    bounds = []
    regions = circuit.regions
    for i, g in enumerate(circuit.gates):
        if regions is not None and i in (regions.query[0], regions.fanin[0]):
            bounds.append(len(gates))
        if g.kind is GateKind.CCX:
            c0, c1 = (c.wire for c in g.controls)
            shared = req.shared if req.shared in (c0, c1, g.targets[0]) else g.targets[0]
            gates.extend(lower_toffoli(variant, (c0, c1), g.targets[0], shared).gates)
        else:
            gates.append(g)
    new_regions = None
    if regions is not None and len(bounds) == 2:
        from ..ir import Regions

        new_regions = Regions((0, bounds[0]), (bounds[0], bounds[1]),
                              (bounds[1], len(gates)))
    return CircuitPayload(circuit=to_document(Circuit(circuit.wires, tuple(gates),
                                                      new_regions)))


@app.post("/v1/schedule", response_model=ScheduleResponse)
def schedule(req: ScheduleRequest) -> ScheduleResponse:
    circuit = _circuit(req.circuit)
    if req.ghz_expand:
        circuit = expand_ghz_fanout(circuit)
    sched = schedule_asap(circuit)
    rdepths = region_depths(circuit).to_json() if circuit.regions is not None else None
    return ScheduleResponse(depth=sched.depth, moments=[list(m) for m in sched.moments],
                            region_depths=rdepths, wire_count=circuit.width)


@app.post("/v1/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    circuit = _circuit(req.circuit)
    n = req.n if req.n is not None else req.q
    instance = QramInstance(req.q, n, (1,) * (1 << req.q))
    if req.memory is None:
        memories = default_memories(req.q)
    else:
        memories = [list(_parse_memory(req.memory, req.q))]
    verdict = verify_qram(circuit, instance, memories)
    return VerifyResponse(verdict=verdict.level.value,
                          max_deviation=verdict.max_deviation,
                          witnessing_input=verdict.witnessing_input,
                          memories_checked=len(memories),
                          equivalent=verdict.level is not Level.INEQUIVALENT)


@app.post("/v1/report", response_model=ReportResponse)
def report(req: ReportRequest) -> ReportResponse:
    try:
        families = [Family(f) for f in req.families]
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    resolve_n(max(req.q_lo, 1), req.n_policy)  # validate the policy early
    csv_text = sweep(families, range(req.q_lo, req.q_hi + 1), req.n_policy,
                     req.measure_cap)
    return ReportResponse(csv=csv_text)


@app.post("/v1/render", response_model=RenderResponse)
def render(req: CircuitPayload) -> RenderResponse:
    return RenderResponse(text=render_ascii(_circuit(req.circuit)))


@app.post("/v1/export", response_model=ExportResponse)
def export(req: CircuitPayload) -> ExportResponse:
    return ExportResponse(qasm=to_qasm(_circuit(req.circuit)))
