"""CCZ/Toffoli lowering menu and validity checkers.

Variants:

* CANONICAL_7T       -- textbook 7-T decomposition, no structural constraints.
* PARALLEL_SHARED_WIRE -- the parallelism-preserving form: one designated wire
  carries only CNOT controls and diagonal phases, so two Toffolis sharing that
  wire interleave into fan-out CNOT bundles without growing depth.
* LOGICAL_AND_COMPUTE -- 4-T approximate Toffoli onto a fresh |0> ancilla,
  leaving the known (-i)^(c0*c1) phase.
* LOGICAL_AND_UNCOMPUTE -- T-free release of a computed AND ancilla via
  X-basis measurement and a conditioned CZ correction.

The phase polynomial checker evaluates CNOT+diagonal fragments symbolically:
every diagonal gate deposits pi/4 units on the parity (subset of initial wire
labels) its wire currently holds.  A fragment implements CCZ exactly iff the
coefficients are (+1,+1,+1,-1,-1,-1,+1) on (x, y, z, x^y, y^z, x^z, x^y^z)
mod 8 and every wire's parity returns to its own label.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import (
    InvalidSharedWire,
    NonLinearFragment,
    NotSharedControl,
    NotSharedTarget,
)
from .ir import (
    Circuit,
    DIAGONAL_UNITS,
    Gate,
    GateKind,
    classical_cz,
    cx,
    gates_for_units,
    h,
    measure_x,
    mcx_fanout,
    t,
    tdg,
)


class CczVariant(Enum):
    CANONICAL_7T = "canonical_7t"
    PARALLEL_SHARED_WIRE = "parallel_shared_wire"
    LOGICAL_AND_COMPUTE = "logical_and_compute"
    LOGICAL_AND_UNCOMPUTE = "logical_and_uncompute"


T_COUNT = {
    CczVariant.CANONICAL_7T: 7,
    CczVariant.PARALLEL_SHARED_WIRE: 7,
    CczVariant.LOGICAL_AND_COMPUTE: 4,
    CczVariant.LOGICAL_AND_UNCOMPUTE: 0,
}


def _shared_wire_ccz(q0: str, q1: str, q2: str) -> list[Gate]:
    """CCZ with q1 acting only as a CNOT control (7 T gates)."""
    return [
        t(q0), t(q1), t(q2),
        cx(q2, q0), tdg(q0),
        cx(q1, q0), cx(q1, q2),
        t(q0), tdg(q2),
        cx(q1, q2), cx(q2, q0),
        tdg(q0), cx(q1, q0),
    ]


def _canonical_ccz(w0: str, w1: str, w2: str) -> list[Gate]:
    """Standard 7-T CCZ (the textbook Toffoli with the Hadamards stripped)."""
    return [
        cx(w1, w2), tdg(w2), cx(w0, w2), t(w2),
        cx(w1, w2), tdg(w2), cx(w0, w2),
        t(w1), t(w2), cx(w0, w1), t(w0), tdg(w1), cx(w0, w1),
    ]


def _and_core(c0: str, c1: str, tgt: str) -> list[Gate]:
    """Diagonal core of the 4-T logical AND (target conjugated by H outside)."""
    return [t(tgt), cx(c0, tgt), tdg(tgt), cx(c1, tgt),
            t(tgt), cx(c0, tgt), tdg(tgt), cx(c1, tgt)]


def lower_ccz(variant: CczVariant, wires: tuple[str, str, str],
              shared: str | None = None) -> Circuit:
    w0, w1, w2 = wires
    if variant is CczVariant.CANONICAL_7T:
        gates = _canonical_ccz(w0, w1, w2)
    elif variant is CczVariant.PARALLEL_SHARED_WIRE:
        if shared not in wires:
            raise InvalidSharedWire(f"shared wire {shared!r} not in {wires}")
        rest = [w for w in wires if w != shared]
        gates = _shared_wire_ccz(rest[0], shared, rest[1])
    elif variant is CczVariant.LOGICAL_AND_COMPUTE:
        gates = _and_core(w0, w1, w2)
    else:
        raise InvalidSharedWire("LOGICAL_AND_UNCOMPUTE has no unitary CCZ form; "
                                "use lower_and_uncompute")
    return Circuit(wires, tuple(gates))


def lower_toffoli(variant: CczVariant, controls: tuple[str, str], target: str,
                  shared: str | None = None) -> Circuit:
    """Toffoli = H(target) . CCZ . H(target); exact for the 7-T variants."""
    wires = (*controls, target)
    core = lower_ccz(variant, wires, shared)
    return Circuit(wires, (h(target), *core.gates, h(target)))


def lower_and_uncompute(controls: tuple[str, str], target: str) -> Circuit:
    """Release a computed AND ancilla: X-basis measurement plus conditioned CZ."""
    wires = (*controls, target)
    return Circuit(wires, (measure_x(target),
                           classical_cz(controls[0], controls[1], target)))


# -- pairwise parallel lowerings ---------------------------------------------

def _toffoli_parts(gate: Gate, exc=NotSharedControl) -> tuple[str, str, str]:
    if gate.kind is not GateKind.CCX:
        raise exc(f"expected CCX, got {gate.kind.value}")
    return gate.controls[0].wire, gate.controls[1].wire, gate.targets[0]


def lower_shared_control_group(shared: str, pairs: list[tuple[str, str]]) -> list[Gate]:
    """k logical ANDs sharing one control, interleaved: (other control, target)
    pairs; ladder CNOTs from the shared wire merge into fan-out bundles."""
    others = [p[0] for p in pairs]
    targets = tuple(p[1] for p in pairs)
    gates: list[Gate] = []
    gates.extend(h(tg) for tg in targets)
    gates.extend(t(tg) for tg in targets)
    gates.extend(cx(c, tg) for c, tg in zip(others, targets))
    gates.extend(tdg(tg) for tg in targets)
    gates.append(mcx_fanout(shared, targets))
    gates.extend(t(tg) for tg in targets)
    gates.extend(cx(c, tg) for c, tg in zip(others, targets))
    gates.extend(tdg(tg) for tg in targets)
    gates.append(mcx_fanout(shared, targets))
    gates.extend(h(tg) for tg in targets)
    return gates


def pair_lower_shared_control(toffoli_a: Gate, toffoli_b: Gate) -> Circuit:
    """Two Toffolis sharing one control, lowered to interleaved logical ANDs.

    Both targets must be fresh |0> ancillae.  The ladder steps on the shared
    control merge into fan-out CNOT bundles, so the pair schedules as deep as
    a single AND.
    """
    a0, a1, ta = _toffoli_parts(toffoli_a)
    b0, b1, tb = _toffoli_parts(toffoli_b)
    shared = {a0, a1} & {b0, b1}
    if len(shared) != 1 or ta == tb or ta in (b0, b1) or tb in (a0, a1):
        raise NotSharedControl("pair must share exactly one control wire")
    (cs,) = shared
    ca = a0 if a1 == cs else a1
    cb = b0 if b1 == cs else b1
    wires = (ca, cb, cs, ta, tb)
    return Circuit(wires, tuple(lower_shared_control_group(cs, [(ca, ta), (cb, tb)])))


def lower_shared_target_group(target: str, pairs: list[tuple[str, str]]) -> list[Gate]:
    """k Toffolis sharing only their target, lowered with the shared-wire CCZ.

    Per pair (c0, c1): c0 takes the 4-T ladder role, c1 the 2-T role.  The
    target carries one Hadamard pair, the merged T power (T^k mod 8) and four
    fan-out CNOT bundles, so the scheduled depth is constant in k.
    """
    c0s = tuple(p[0] for p in pairs)
    c1s = tuple(p[1] for p in pairs)
    gates: list[Gate] = [h(target)]
    gates.extend(gates_for_units(target, len(pairs)))  # per-CCZ T gates, merged
    gates.extend(t(w) for w in c0s)
    gates.extend(t(w) for w in c1s)
    gates.extend(cx(b, a) for a, b in pairs)
    gates.extend(tdg(w) for w in c0s)
    gates.append(mcx_fanout(target, c0s))
    gates.append(mcx_fanout(target, c1s))
    gates.extend(tdg(w) for w in c1s)
    gates.extend(t(w) for w in c0s)
    gates.append(mcx_fanout(target, c1s))
    gates.extend(cx(b, a) for a, b in pairs)
    gates.extend(tdg(w) for w in c0s)
    gates.append(mcx_fanout(target, c0s))
    gates.append(h(target))
    return gates


def pair_lower_shared_target(toffoli_a: Gate, toffoli_b: Gate) -> Circuit:
    """Two Toffolis sharing the target, lowered with the shared-wire CCZ.

    Per-Toffoli (T, CX, T^-1, CX) ladders run concurrently on the control
    pairs; the shared target carries one Hadamard pair, the merged T power
    (T.T -> S) and the fan-out CNOT bundles.
    """
    a0, a1, ta = _toffoli_parts(toffoli_a, NotSharedTarget)
    b0, b1, tb = _toffoli_parts(toffoli_b, NotSharedTarget)
    if ta != tb or {a0, a1} & {b0, b1}:
        raise NotSharedTarget("pair must share exactly the target wire")
    ts = ta
    wires = (a0, a1, b0, b1, ts)
    return Circuit(wires, tuple(lower_shared_target_group(ts, [(a0, a1), (b0, b1)])))


# -- phase polynomial verification -------------------------------------------

@dataclass(frozen=True)
class PhasePolynomial:
    """pi/4-phase coefficients per nonempty parity subset, mod 8, plus the
    final parity label of each wire (bitmask over initial labels)."""
    coefficients: dict[int, int]
    final_parities: tuple[int, ...]

    def nonzero(self) -> dict[int, int]:
        return {m: c % 8 for m, c in self.coefficients.items() if c % 8}

    def parities_restored(self) -> bool:
        return all(p == (1 << i) for i, p in enumerate(self.final_parities))


# CCZ's required pattern on labels (x=wire0, y=wire1, z=wire2), from
# 4xyz = x + y + z - (x^y) - (y^z) - (x^z) + (x^y^z):
# +x +y +z -(x^y) -(y^z) -(x^z) +(x^y^z)
CCZ_COEFFICIENTS = {0b001: 1, 0b010: 1, 0b100: 1,
                    0b011: 7, 0b110: 7, 0b101: 7, 0b111: 1}

_LINEAR = frozenset(DIAGONAL_UNITS) | {GateKind.CX}


def phase_polynomial_of(circuit: Circuit) -> PhasePolynomial:
    """Track wire parities through a CNOT+diagonal fragment on <= 3 wires."""
    if circuit.width > 3:
        raise NonLinearFragment("phase polynomial supports at most 3 wires")
    parity = [1 << i for i in range(circuit.width)]
    coeff: dict[int, int] = {}
    for g in circuit.gates:
        if g.kind not in _LINEAR:
            raise NonLinearFragment(f"{g.kind.value} is not CNOT+diagonal")
        if g.kind is GateKind.CX:
            c = circuit.wire_index(g.controls[0].wire)
            tgt = circuit.wire_index(g.targets[0])
            parity[tgt] ^= parity[c]
        else:
            w = circuit.wire_index(g.targets[0])
            mask = parity[w]
            coeff[mask] = (coeff.get(mask, 0) + DIAGONAL_UNITS[g.kind]) % 8
    return PhasePolynomial({m: c for m, c in coeff.items() if c}, tuple(parity))


def is_valid_ccz(circuit: Circuit) -> bool:
    """Boolean-identity check: coefficients match CCZ mod 8 and parities return."""
    poly = phase_polynomial_of(circuit)
    return poly.nonzero() == CCZ_COEFFICIENTS and poly.parities_restored()
