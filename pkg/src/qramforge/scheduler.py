"""Moment assignment under the fan-out-CNOT parallelism model.

A gate may join a moment only if its wires are free there, with one exception:
CX-like gates (CX, MCX_FANOUT, conditioned CX) sharing *only* their control
wire co-schedule, modelling the single-control multi-target parallel CNOT.
Single-qubit diagonal gates never share a moment with a CX using that wire as
control (conservative; keeps moments order-independent).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingRegionTags, PatternMismatch
from .ir import (
    Circuit,
    Gate,
    GateKind,
    Polarity,
    Region,
    cccx,
    cx,
)

_CX_LIKE = frozenset({GateKind.CX, GateKind.MCX_FANOUT, GateKind.CLASSICAL_CX})


@dataclass(frozen=True)
class Schedule:
    circuit: Circuit
    moments: tuple[tuple[int, ...], ...]  # gate indices per moment

    @property
    def depth(self) -> int:
        return len(self.moments)

    def moment_of(self, gate_index: int) -> int:
        for m, ids in enumerate(self.moments):
            if gate_index in ids:
                return m
        raise KeyError(gate_index)


def schedule_asap(circuit: Circuit) -> Schedule:
    """Greedy earliest-moment placement scanning gates in order."""
    avail: dict[str, int] = {}          # first free moment per wire
    fanout_join: dict[str, int] = {}    # moment where wire is an open CX control
    record_ready: dict[str, int] = {}   # first moment a measurement record exists
    moments: list[list[int]] = []

    for gi, g in enumerate(circuit.gates):
        is_cx = g.kind in _CX_LIKE
        floor = record_ready.get(g.condition, 0) if g.condition is not None else 0
        if is_cx:
            control = g.controls[0].wire
            t_ready = max((avail.get(w, 0) for w in g.targets), default=0)
            t_ready = max(t_ready, floor)
            join = fanout_join.get(control)
            if join is not None and join >= t_ready:
                moment = join
            else:
                moment = max(t_ready, avail.get(control, 0))
        else:
            moment = max((avail.get(w, 0) for w in g.wires), default=0)
            moment = max(moment, floor)
        while len(moments) <= moment:
            moments.append([])
        moments[moment].append(gi)
        for w in g.targets:
            avail[w] = moment + 1
            fanout_join.pop(w, None)
        for c in g.controls:
            avail[c.wire] = moment + 1
            fanout_join.pop(c.wire, None)
        if is_cx:
            fanout_join[g.controls[0].wire] = moment
        if g.kind is GateKind.MEASURE_X:
            record_ready[g.targets[0]] = moment + 1
    return Schedule(circuit, tuple(tuple(m) for m in moments))


def fuse_fanout_cnots(schedule: Schedule) -> Circuit:
    """Merge same-moment plain CX gates sharing a control into MCX_FANOUT."""
    circuit = schedule.circuit
    out: list[Gate] = []
    for ids in schedule.moments:
        by_control: dict[str, list[int]] = {}
        emitted: set[int] = set()
        for gi in ids:
            g = circuit.gates[gi]
            if g.kind in (GateKind.CX, GateKind.MCX_FANOUT):
                by_control.setdefault(g.controls[0].wire, []).append(gi)
        for gi in ids:
            if gi in emitted:
                continue
            g = circuit.gates[gi]
            if g.kind in (GateKind.CX, GateKind.MCX_FANOUT):
                group = by_control[g.controls[0].wire]
                if len(group) > 1:
                    targets: list[str] = []
                    for gj in group:
                        targets.extend(circuit.gates[gj].targets)
                        emitted.add(gj)
                    out.append(Gate(GateKind.MCX_FANOUT, controls=g.controls,
                                    targets=tuple(targets)))
                    continue
            emitted.add(gi)
            out.append(g)
    return Circuit(circuit.wires, tuple(out))


@dataclass(frozen=True)
class RegionDepths:
    fanout: int
    query: int
    fanin: int
    total: int  # whole circuit scheduled jointly

    def to_json(self) -> dict:
        return {"fanout": self.fanout, "query": self.query, "fanin": self.fanin,
                "total": self.total}


def region_depths(circuit: Circuit) -> RegionDepths:
    """Schedule each tagged region independently; total is scheduled jointly."""
    if circuit.regions is None:
        raise MissingRegionTags("region_depths requires FANOUT/QUERY/FANIN tags")
    depths = {}
    for region in (Region.FANOUT, Region.QUERY, Region.FANIN):
        depths[region] = schedule_asap(circuit.region_slice(region)).depth
    return RegionDepths(fanout=depths[Region.FANOUT], query=depths[Region.QUERY],
                        fanin=depths[Region.FANIN],
                        total=schedule_asap(circuit).depth)


# -- GHZ-tree expansion of fan-out CNOTs --------------------------------------

def expand_ghz_fanout(circuit: Circuit, pool_prefix: str = "ghz") -> Circuit:
    """Replace each MCX_FANOUT by a GHZ copy tree over reusable |0> ancillae.

    A k-target fan-out becomes: CX doubling tree copying the control onto
    k-1 pool ancillae (ceil(log2 k) moments), one transversal CX layer, and
    the mirrored tree uncompute.  The unitary on the original wires is
    unchanged; k = 1 collapses to a plain CX.
    """
    pool_size = max((len(g.targets) - 1 for g in circuit.gates
                     if g.kind is GateKind.MCX_FANOUT), default=0)
    while any(w.startswith(f"{pool_prefix}_") for w in circuit.wires):
        pool_prefix += "x"
    pool = tuple(f"{pool_prefix}_{i}" for i in range(pool_size))
    out: list[Gate] = []
    for g in circuit.gates:
        if g.kind is not GateKind.MCX_FANOUT:
            out.append(g)
            continue
        control = g.controls[0].wire
        k = len(g.targets)
        if k == 1:
            out.append(cx(control, g.targets[0]))
            continue
        tree: list[Gate] = []
        copies = [control]
        next_anc = 0
        while len(copies) < k:
            layer = []
            for src in copies:
                if len(copies) + len(layer) >= k:
                    break
                dst = pool[next_anc]
                next_anc += 1
                layer.append(cx(src, dst))
            tree.extend(layer)
            copies = copies + [gate.targets[0] for gate in layer]
        out.extend(tree)
        out.extend(cx(src, tgt) for src, tgt in zip(copies, g.targets))
        out.extend(reversed(tree))
    return Circuit(circuit.wires + pool, tuple(out))


# -- four-wire parallelisation templates --------------------------------------

def _is_cx(g: Gate, control: str | None = None, target: str | None = None) -> bool:
    return (g.kind is GateKind.CX
            and (control is None or g.controls[0].wire == control)
            and (target is None or g.targets[0] == target))


def apply_parallelisation_template(circuit: Circuit, site: int) -> Circuit:
    """Rewrite a CX-CCX-CX sandwich into two negative-controlled 3-control
    Toffolis, removing the inner CX pair (depth 3 -> 2 at Toffoli level).

    The sandwich computes target ^= c AND (a XOR b): positive mid-control
    rewrites to c.a.(0)b + c.(0)a.b, negative mid-control to
    c.(0)a.(0)b + c.a.b.
    """
    gates = circuit.gates
    if site < 0 or site + 2 >= len(gates):
        raise PatternMismatch(f"no CX-CCX-CX window at gate {site}")
    first, mid, last = gates[site], gates[site + 1], gates[site + 2]
    if not (_is_cx(first) and first == last and mid.kind is GateKind.CCX):
        raise PatternMismatch("site is not a CX-CCX-CX sandwich")
    chain_c = first.controls[0].wire
    chain_t = first.targets[0]
    mixed = [c for c in mid.controls if c.wire == chain_t]
    plain = [c for c in mid.controls if c.wire != chain_t]
    if len(mixed) != 1 or chain_c in {c.wire for c in mid.controls} \
            or chain_c == mid.targets[0] or chain_t == mid.targets[0]:
        raise PatternMismatch("middle Toffoli must control on the inner CX target")
    other = plain[0].wire
    target = mid.targets[0]
    negative_mid = mixed[0].polarity is Polarity.NEGATIVE
    if negative_mid:
        first_neg = (False, True, True)
        second_neg = (False, False, False)
    else:
        first_neg = (False, False, True)
        second_neg = (False, True, False)
    rewritten = (
        cccx(other, chain_c, chain_t, target, negative=first_neg),
        cccx(other, chain_c, chain_t, target, negative=second_neg),
    )
    return Circuit(circuit.wires, gates[:site] + rewritten + gates[site + 3:])
