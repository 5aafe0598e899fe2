"""Core circuit IR: gate kinds, gates, wires, regions.

Circuits are immutable value objects; builders assemble plain gate lists and
construct a Circuit once.  Wire identity is the wire name; the circuit's wire
tuple fixes rendering order and the simulator's bit order (first wire = most
significant bit).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import (
    ArityMismatch,
    InvalidCondition,
    InvalidPolarity,
    InvalidRegions,
    NonUnitaryGate,
    OverlappingControlTarget,
    UnknownWire,
)


class GateKind(Enum):
    X = "X"
    H = "H"
    S = "S"
    S_DAG = "S_DAG"
    T = "T"
    T_DAG = "T_DAG"
    Z = "Z"
    CX = "CX"
    MCX_FANOUT = "MCX_FANOUT"
    CZ = "CZ"
    CCX = "CCX"
    CCZ = "CCZ"
    CCCX = "CCCX"
    MEASURE_X = "MEASURE_X"
    CLASSICAL_CZ = "CLASSICAL_CZ"
    CLASSICAL_CX = "CLASSICAL_CX"


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


# kinds whose controls may be negative (needed for the four-wire templates)
NEGATABLE = frozenset({GateKind.CCX, GateKind.CCZ, GateKind.CCCX})

# (n_controls, n_targets); None means "1 or more"
_ARITY: dict[GateKind, tuple[int, int | None]] = {
    GateKind.X: (0, 1),
    GateKind.H: (0, 1),
    GateKind.S: (0, 1),
    GateKind.S_DAG: (0, 1),
    GateKind.T: (0, 1),
    GateKind.T_DAG: (0, 1),
    GateKind.Z: (0, 1),
    GateKind.CX: (1, 1),
    GateKind.MCX_FANOUT: (1, None),
    GateKind.CZ: (0, 2),
    GateKind.CCX: (2, 1),
    GateKind.CCZ: (2, 1),
    GateKind.CCCX: (3, 1),
    GateKind.MEASURE_X: (0, 1),
    GateKind.CLASSICAL_CZ: (0, 2),
    GateKind.CLASSICAL_CX: (1, 1),
}

CONDITIONED = frozenset({GateKind.CLASSICAL_CZ, GateKind.CLASSICAL_CX})
NON_UNITARY = frozenset({GateKind.MEASURE_X}) | CONDITIONED

_DAGGER = {
    GateKind.T: GateKind.T_DAG,
    GateKind.T_DAG: GateKind.T,
    GateKind.S: GateKind.S_DAG,
    GateKind.S_DAG: GateKind.S,
}

# T-units (multiples of pi/4 phase) carried by each diagonal kind
DIAGONAL_UNITS = {
    GateKind.T: 1,
    GateKind.S: 2,
    GateKind.Z: 4,
    GateKind.S_DAG: 6,
    GateKind.T_DAG: 7,
}


@dataclass(frozen=True)
class Control:
    wire: str
    polarity: Polarity = Polarity.POSITIVE


_SYMMETRIC_CONTROLS = frozenset({GateKind.CCX, GateKind.CCZ, GateKind.CCCX})
_SYMMETRIC_TARGETS = frozenset({GateKind.CZ, GateKind.CLASSICAL_CZ, GateKind.MCX_FANOUT})


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    controls: tuple[Control, ...] = ()
    targets: tuple[str, ...] = ()
    condition: str | None = None  # measurement record key, CLASSICAL_* only

    def __post_init__(self):
        # canonical operand order for symmetric kinds keeps value equality
        # (and the ASCII round trip) independent of construction order
        if self.kind in _SYMMETRIC_CONTROLS and any(
            a.wire > b.wire for a, b in zip(self.controls, self.controls[1:])
        ):
            object.__setattr__(self, "controls",
                               tuple(sorted(self.controls, key=lambda c: c.wire)))
        if self.kind in _SYMMETRIC_TARGETS and any(
            a > b for a, b in zip(self.targets, self.targets[1:])
        ):
            object.__setattr__(self, "targets", tuple(sorted(self.targets)))
        if self.kind is GateKind.MCX_FANOUT and len(self.targets) == 1:
            object.__setattr__(self, "kind", GateKind.CX)

    @property
    def wires(self) -> tuple[str, ...]:
        return tuple(c.wire for c in self.controls) + self.targets

    def validate(self) -> None:
        nc, nt = _ARITY[self.kind]
        if len(self.controls) != nc:
            raise ArityMismatch(f"{self.kind.value}: expected {nc} controls, got {len(self.controls)}")
        if nt is None:
            if len(self.targets) < 1:
                raise ArityMismatch(f"{self.kind.value}: expected at least one target")
        elif len(self.targets) != nt:
            raise ArityMismatch(f"{self.kind.value}: expected {nt} targets, got {len(self.targets)}")
        seen = set()
        for w in self.wires:
            if w in seen:
                raise OverlappingControlTarget(f"wire {w!r} used twice by {self.kind.value}")
            seen.add(w)
        if self.kind not in NEGATABLE:
            for c in self.controls:
                if c.polarity is Polarity.NEGATIVE:
                    raise InvalidPolarity(f"negative control not allowed on {self.kind.value}")
        if (self.condition is not None) != (self.kind in CONDITIONED):
            raise InvalidCondition(f"condition must be present iff kind is classical, got {self.kind.value}")


def _ctrls(*wires: str, negative: tuple[bool, ...] | None = None) -> tuple[Control, ...]:
    neg = negative or (False,) * len(wires)
    return tuple(
        Control(w, Polarity.NEGATIVE if n else Polarity.POSITIVE) for w, n in zip(wires, neg)
    )


# -- gate constructors ------------------------------------------------------

def x(w: str) -> Gate:
    return Gate(GateKind.X, targets=(w,))

def h(w: str) -> Gate:
    return Gate(GateKind.H, targets=(w,))

def s(w: str) -> Gate:
    return Gate(GateKind.S, targets=(w,))

def sdg(w: str) -> Gate:
    return Gate(GateKind.S_DAG, targets=(w,))

def t(w: str) -> Gate:
    return Gate(GateKind.T, targets=(w,))

def tdg(w: str) -> Gate:
    return Gate(GateKind.T_DAG, targets=(w,))

def z(w: str) -> Gate:
    return Gate(GateKind.Z, targets=(w,))

def cx(c: str, tgt: str) -> Gate:
    return Gate(GateKind.CX, controls=_ctrls(c), targets=(tgt,))

def cz(a: str, b: str) -> Gate:
    return Gate(GateKind.CZ, targets=(a, b))

def ccx(c0: str, c1: str, tgt: str, negative: tuple[bool, bool] = (False, False)) -> Gate:
    return Gate(GateKind.CCX, controls=_ctrls(c0, c1, negative=negative), targets=(tgt,))

def ccz(c0: str, c1: str, tgt: str, negative: tuple[bool, bool] = (False, False)) -> Gate:
    return Gate(GateKind.CCZ, controls=_ctrls(c0, c1, negative=negative), targets=(tgt,))

def cccx(c0: str, c1: str, c2: str, tgt: str,
         negative: tuple[bool, bool, bool] = (False, False, False)) -> Gate:
    return Gate(GateKind.CCCX, controls=_ctrls(c0, c1, c2, negative=negative), targets=(tgt,))

def mcx_fanout(c: str, targets: tuple[str, ...]) -> Gate:
    return Gate(GateKind.MCX_FANOUT, controls=_ctrls(c), targets=tuple(targets))

def measure_x(w: str) -> Gate:
    # the record key is the measured wire's name
    return Gate(GateKind.MEASURE_X, targets=(w,))

def classical_cz(a: str, b: str, record: str) -> Gate:
    return Gate(GateKind.CLASSICAL_CZ, targets=(a, b), condition=record)

def classical_cx(c: str, tgt: str, record: str) -> Gate:
    return Gate(GateKind.CLASSICAL_CX, controls=_ctrls(c), targets=(tgt,), condition=record)


class Region(Enum):
    FANOUT = "FANOUT"
    QUERY = "QUERY"
    FANIN = "FANIN"
    NONE = "NONE"


@dataclass(frozen=True)
class Regions:
    """Contiguous gate-index ranges [lo, hi) partitioning the gate list."""
    fanout: tuple[int, int]
    query: tuple[int, int]
    fanin: tuple[int, int]

    def of(self, gate_index: int) -> Region:
        for rng, tag in ((self.fanout, Region.FANOUT), (self.query, Region.QUERY),
                         (self.fanin, Region.FANIN)):
            if rng[0] <= gate_index < rng[1]:
                return tag
        return Region.NONE


@dataclass(frozen=True)
class Circuit:
    wires: tuple[str, ...]
    gates: tuple[Gate, ...] = ()
    regions: Regions | None = None
    _index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.wires)) != len(self.wires):
            raise UnknownWire("duplicate wire names")
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.wires)})
        records: set[str] = set()
        for g in self.gates:
            g.validate()
            for w in g.wires:
                if w not in self._index:
                    raise UnknownWire(f"wire {w!r} not registered in circuit")
            if g.kind is GateKind.MEASURE_X:
                records.add(g.targets[0])
            elif g.kind in CONDITIONED and g.condition not in records:
                raise InvalidCondition(f"condition {g.condition!r} has no earlier MEASURE_X record")
        if self.regions is not None:
            f, q, n = self.regions.fanout, self.regions.query, self.regions.fanin
            if not (0 == f[0] <= f[1] == q[0] <= q[1] == n[0] <= n[1] == len(self.gates)):
                raise InvalidRegions(f"regions {self.regions} do not partition {len(self.gates)} gates")

    @property
    def width(self) -> int:
        return len(self.wires)

    def wire_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownWire(f"wire {name!r} not registered in circuit") from None

    @property
    def measurement_records(self) -> set[str]:
        return {g.targets[0] for g in self.gates if g.kind is GateKind.MEASURE_X}

    def append(self, gate: Gate) -> "Circuit":
        """Return a new circuit with one gate appended; validates the gate."""
        return replace(self, gates=self.gates + (gate,),
                       regions=None if self.regions is None else _extend_regions(self.regions))

    def extend(self, gates) -> "Circuit":
        return Circuit(self.wires, self.gates + tuple(gates))

    def region_slice(self, region: Region) -> "Circuit":
        if self.regions is None:
            from .errors import MissingRegionTags
            raise MissingRegionTags("circuit has no region tags")
        lo, hi = {Region.FANOUT: self.regions.fanout, Region.QUERY: self.regions.query,
                  Region.FANIN: self.regions.fanin}[region]
        return Circuit(self.wires, self.gates[lo:hi])

    def inverse(self) -> "Circuit":
        """Adjoint circuit: reversed gates, daggered diagonal kinds."""
        inv = []
        for g in reversed(self.gates):
            if g.kind in NON_UNITARY:
                raise NonUnitaryGate(f"cannot invert {g.kind.value}")
            inv.append(replace(g, kind=_DAGGER.get(g.kind, g.kind)))
        regions = None
        if self.regions is not None:
            n = len(self.gates)
            flip = lambda rng: (n - rng[1], n - rng[0])
            regions = Regions(fanout=flip(self.regions.fanin), query=flip(self.regions.query),
                              fanin=flip(self.regions.fanout))
        return Circuit(self.wires, tuple(inv), regions)

    def t_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in (GateKind.T, GateKind.T_DAG))


def _extend_regions(regions: Regions) -> Regions:
    f, q, n = regions.fanout, regions.query, regions.fanin
    return Regions(f, q, (n[0], n[1] + 1))


_UNITS_TO_KIND = {1: GateKind.T, 2: GateKind.S, 3: None, 4: GateKind.Z,
                  5: None, 6: GateKind.S_DAG, 7: GateKind.T_DAG}


def gates_for_units(wire: str, units: int) -> list[Gate]:
    """Diagonal gates realizing a pi/4-phase power on a wire (units mod 8)."""
    units %= 8
    if units == 0:
        return []
    kind = _UNITS_TO_KIND[units]
    if kind is not None:
        return [Gate(kind, targets=(wire,))]
    # 3 = S+T, 5 = Z+T
    return [Gate(GateKind.S if units == 3 else GateKind.Z, targets=(wire,)),
            Gate(GateKind.T, targets=(wire,))]


def merge_diagonal_runs(circuit: Circuit) -> Circuit:
    """Combine literally adjacent single-wire diagonal gates mod 8.

    Only runs with no intervening gate on the wire are merged; commuting gates
    are never slid past each other, so T-counts of deliberately separated
    phases are preserved.
    """
    out: list[Gate] = []
    # pending[wire] = (position in out, accumulated units)
    pending: dict[str, int] = {}

    def flush(wire: str):
        units = pending.pop(wire, 0)
        if units % 8:
            out.extend(gates_for_units(wire, units))

    for g in circuit.gates:
        if g.kind in DIAGONAL_UNITS and len(g.targets) == 1 and not g.controls:
            w = g.targets[0]
            pending[w] = pending.get(w, 0) + DIAGONAL_UNITS[g.kind]
            continue
        for w in g.wires:
            if w in pending:
                flush(w)
        out.append(g)
    for w in list(pending):
        flush(w)
    return Circuit(circuit.wires, tuple(out))
