"""Dense statevector oracle: gate application, unitaries, measurement branches,
classical-memory folding, and QRAM equivalence verdicts.

Convention: the circuit's first wire is the most significant bit of the basis
index.  States are numpy complex128 tensors of shape (2,)*w; an extra trailing
axis carries batches (used to build full unitaries column-wise).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import LayoutMismatch, NonUnitaryGate, TooManyWires
from .ir import (
    Circuit,
    Control,
    DIAGONAL_UNITS,
    Gate,
    GateKind,
    NON_UNITARY,
    Polarity,
    gates_for_units,
)

ATOL = 1e-9
OMEGA = np.exp(1j * np.pi / 4)  # T-gate phase unit

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def max_sim_wires() -> int:
    return int(os.environ.get("QRAMFORGE_MAX_SIM_WIRES", "22"))


def _check_width(n_wires: int) -> None:
    cap = max_sim_wires()
    if n_wires > cap:
        raise TooManyWires(f"{n_wires} wires exceeds cap {cap} (QRAMFORGE_MAX_SIM_WIRES)")


def zero_state(n_wires: int) -> np.ndarray:
    state = np.zeros((2,) * n_wires, dtype=complex)
    state[(0,) * n_wires] = 1.0
    return state


def basis_state(n_wires: int, bits: dict[int, int]) -> np.ndarray:
    state = np.zeros((2,) * n_wires, dtype=complex)
    state[tuple(bits.get(i, 0) for i in range(n_wires))] = 1.0
    return state


def _axis_slices(state_ndim: int, n_wires: int, assignments: dict[int, int]):
    sl = [slice(None)] * state_ndim
    for axis, value in assignments.items():
        sl[axis] = value
    return tuple(sl)


def apply(state: np.ndarray, gate: Gate, wire_index, n_wires: int) -> np.ndarray:
    """Apply a unitary gate in place semantics; returns the array."""
    if gate.kind in NON_UNITARY:
        raise NonUnitaryGate(f"{gate.kind.value} has no unitary action")
    k = gate.kind
    idx = [wire_index(w) for w in gate.wires]
    ndim = state.ndim
    if k is GateKind.H:
        ax = idx[0]
        state = np.moveaxis(np.tensordot(_H, np.moveaxis(state, ax, 0), axes=(1, 0)), 0, ax)
        return state
    if k in DIAGONAL_UNITS:
        ph = OMEGA ** DIAGONAL_UNITS[k]
        state[_axis_slices(ndim, n_wires, {idx[0]: 1})] *= ph
        return state
    if k is GateKind.X:
        return np.flip(state, axis=idx[0])
    if k is GateKind.CX:
        c, tgt = idx
        sel = _axis_slices(ndim, n_wires, {c: 1})
        state[sel] = np.flip(state[sel], axis=tgt - (1 if tgt > c else 0)).copy()
        return state
    if k is GateKind.MCX_FANOUT:
        c = idx[0]
        sel = _axis_slices(ndim, n_wires, {c: 1})
        sub = state[sel]
        for tgt in idx[1:]:
            sub = np.flip(sub, axis=tgt - (1 if tgt > c else 0))
        state[sel] = sub.copy()
        return state
    if k is GateKind.CZ:
        state[_axis_slices(ndim, n_wires, {idx[0]: 1, idx[1]: 1})] *= -1
        return state
    if k in (GateKind.CCX, GateKind.CCZ, GateKind.CCCX):
        cvals = {wire_index(c.wire): (1 if c.polarity is Polarity.POSITIVE else 0)
                 for c in gate.controls}
        tgt = wire_index(gate.targets[0])
        if k is GateKind.CCZ:
            state[_axis_slices(ndim, n_wires, {**cvals, tgt: 1})] *= -1
            return state
        sel = _axis_slices(ndim, n_wires, cvals)
        shift = sum(1 for ax in cvals if ax < tgt)
        state[sel] = np.flip(state[sel], axis=tgt - shift).copy()
        return state
    raise NonUnitaryGate(f"unsupported kind {k}")  # pragma: no cover


def run_statevector(circuit: Circuit, state: np.ndarray | None = None,
                    records: dict[str, int] | None = None) -> np.ndarray:
    """Run a circuit; conditioned gates consult the supplied records,
    measurements are not allowed (use enumerate_measurement_branches)."""
    _check_width(circuit.width)
    if state is None:
        state = zero_state(circuit.width)
    records = records or {}
    for g in circuit.gates:
        if g.kind is GateKind.MEASURE_X:
            raise NonUnitaryGate("measurement inside run_statevector")
        if g.kind in (GateKind.CLASSICAL_CZ, GateKind.CLASSICAL_CX):
            if records.get(g.condition, 0):
                g = _unconditioned(g)
            else:
                continue
        state = apply(state, g, circuit.wire_index, circuit.width)
    return state


def _unconditioned(g: Gate) -> Gate:
    if g.kind is GateKind.CLASSICAL_CZ:
        return Gate(GateKind.CZ, targets=g.targets)
    return Gate(GateKind.CX, controls=g.controls, targets=g.targets)


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Full 2^w x 2^w matrix; checks unitarity to 1e-9."""
    w = circuit.width
    _check_width(w)
    if w > 14:
        raise TooManyWires(f"unitary_of: {w} wires would need {(2 ** (2 * w)) * 16 / 2**30:.0f} GiB")
    dim = 1 << w
    mat = np.eye(dim, dtype=complex).reshape((2,) * w + (dim,))
    for g in circuit.gates:
        if g.kind in NON_UNITARY:
            raise NonUnitaryGate(f"{g.kind.value} in unitary_of")
        mat = apply(mat, g, circuit.wire_index, w)
    mat = mat.reshape(dim, dim)
    dev = np.abs(mat.conj().T @ mat - np.eye(dim)).max()
    if dev > ATOL:
        raise NonUnitaryGate(f"unitarity check failed, deviation {dev:.3e}")
    return mat


@dataclass
class Branch:
    outcomes: dict[str, int]
    probability: float
    state: np.ndarray


def enumerate_measurement_branches(circuit: Circuit, state: np.ndarray | None = None,
                                   min_probability: float = 1e-12) -> list[Branch]:
    """All measurement-outcome branches with exact probabilities.

    Branches share the simulation prefix (tree recursion), so circuits whose
    measurements sit near the end stay cheap.  Branches below min_probability
    are dropped and reported through a warning.
    """
    _check_width(circuit.width)
    if state is None:
        state = zero_state(circuit.width)
    else:
        state = state.copy()
    results: list[Branch] = []
    dropped: list[tuple[dict[str, int], float]] = []

    def walk(pos: int, state: np.ndarray, prob: float, records: dict[str, int]):
        for i in range(pos, len(circuit.gates)):
            g = circuit.gates[i]
            if g.kind is GateKind.MEASURE_X:
                w = g.targets[0]
                ax = circuit.wire_index(w)
                state = apply(state, Gate(GateKind.H, targets=(w,)), circuit.wire_index,
                              circuit.width)
                for outcome in (0, 1):
                    proj = np.zeros_like(state)
                    sel = _axis_slices(state.ndim, circuit.width, {ax: outcome})
                    proj[sel] = state[sel]
                    p = float(np.vdot(proj, proj).real)
                    if p * prob < min_probability:
                        dropped.append(({**records, w: outcome}, p * prob))
                        continue
                    walk(i + 1, proj / math.sqrt(p), prob * p, {**records, w: outcome})
                return
            if g.kind in (GateKind.CLASSICAL_CZ, GateKind.CLASSICAL_CX):
                if not records.get(g.condition, 0):
                    continue
                g = _unconditioned(g)
            state = apply(state, g, circuit.wire_index, circuit.width)
        results.append(Branch(records, prob, state))

    walk(0, state, 1.0, {})
    if dropped:
        import warnings

        warnings.warn(f"dropped {len(dropped)} measurement branches below "
                      f"{min_probability} total probability "
                      f"{sum(p for _, p in dropped):.3e}", stacklevel=2)
    return results


# -- classical-memory folding -------------------------------------------------

def fold_classical_wires(circuit: Circuit, values: dict[str, int]) -> tuple[Circuit, int]:
    """Remove wires holding classical bits, rewriting gates that touch them.

    Folded wires may be used as controls while their tracked parity is a
    constant, may receive CX/X (parity tracking), and may carry diagonal
    phases as long as the parity involves at most one live wire.  This is
    exactly the shape of the memory wires in the QRAM circuits and lets the
    oracle run with 2^q fewer qubits.  Returns the folded circuit plus the
    accumulated constant phase in pi/4 units mod 8.
    """
    keep = [w for w in circuit.wires if w not in values]
    # parity of each folded wire: (constant bit, frozenset of live wires)
    parity: dict[str, tuple[int, frozenset[str]]] = {
        w: (v & 1, frozenset()) for w, v in values.items()
    }
    out: list[Gate] = []
    phase_units = 0

    def const_of(w: str) -> int | None:
        bit, live = parity[w]
        return bit if not live else None

    for g in circuit.gates:
        touched = [w for w in g.wires if w in parity]
        if not touched:
            out.append(g)
            continue
        k = g.kind
        if k is GateKind.CX and g.controls[0].wire in parity:
            c, tgt = g.controls[0].wire, g.targets[0]
            if tgt in parity:
                bit, live = parity[c]
                tbit, tlive = parity[tgt]
                parity[tgt] = (tbit ^ bit, tlive ^ live)
                continue
            bit, live = parity[c]
            for lw in sorted(live):
                out.append(Gate(GateKind.CX, controls=(Control(lw),), targets=(tgt,)))
            if bit:
                out.append(Gate(GateKind.X, targets=(tgt,)))
            continue
        if k in (GateKind.CX, GateKind.X) and g.targets[0] in parity:
            tgt = g.targets[0]
            bit, live = parity[tgt]
            if k is GateKind.X:
                parity[tgt] = (bit ^ 1, live)
            else:
                parity[tgt] = (bit, live ^ {g.controls[0].wire})
            continue
        if k in DIAGONAL_UNITS and g.targets[0] in parity:
            bit, live = parity[g.targets[0]]
            units = DIAGONAL_UNITS[k]
            if not live:
                phase_units += units * bit
            elif len(live) == 1:
                (lw,) = live
                # phase on (bit xor lw): bit=0 -> same diagonal on lw;
                # bit=1 -> global phase plus conjugate diagonal on lw
                if bit:
                    phase_units += units
                    out.extend(gates_for_units(lw, -units))
                else:
                    out.extend(gates_for_units(lw, units))
            else:
                raise LayoutMismatch(f"cannot fold diagonal on multi-wire parity of {g.targets[0]}")
            continue
        if k in (GateKind.CCX, GateKind.CCZ, GateKind.CCCX):
            new_controls = []
            fire = True
            for c in g.controls:
                if c.wire in parity:
                    bit = const_of(c.wire)
                    if bit is None:
                        raise LayoutMismatch(f"folded control {c.wire} has live parity")
                    want = 1 if c.polarity is Polarity.POSITIVE else 0
                    if bit != want:
                        fire = False
                else:
                    new_controls.append(c)
            if g.targets[0] in parity:
                raise LayoutMismatch(f"folded wire {g.targets[0]} targeted by {k.value}")
            if not fire:
                continue
            nc = len(new_controls)
            if nc == 0:
                out.append(Gate(GateKind.Z if k is GateKind.CCZ else GateKind.X,
                                targets=g.targets))
            elif nc == 1:
                if k is GateKind.CCZ:
                    out.append(Gate(GateKind.CZ, targets=(new_controls[0].wire, g.targets[0])))
                else:
                    out.append(Gate(GateKind.CX, controls=(Control(new_controls[0].wire),),
                                    targets=g.targets))
            else:
                kind = {2: GateKind.CCX if k is not GateKind.CCZ else GateKind.CCZ,
                        3: GateKind.CCCX}[nc] if nc in (2, 3) else k
                out.append(Gate(kind, controls=tuple(new_controls), targets=g.targets))
            continue
        if k is GateKind.MCX_FANOUT:
            if g.controls[0].wire in parity:
                bit = const_of(g.controls[0].wire)
                if bit is None:
                    raise LayoutMismatch("folded fan-out control has live parity")
                live_targets = tuple(w for w in g.targets if w not in parity)
                for w in g.targets:
                    if w in parity and bit:
                        b, lv = parity[w]
                        parity[w] = (b ^ 1, lv)
                if bit and live_targets:
                    out.append(Gate(GateKind.MCX_FANOUT, controls=g.controls,
                                    targets=live_targets)
                               if len(live_targets) > 1 else
                               Gate(GateKind.CX, controls=g.controls, targets=live_targets))
                continue
            live_targets = []
            for w in g.targets:
                if w in parity:
                    bit, live = parity[w]
                    parity[w] = (bit, live ^ {g.controls[0].wire})
                else:
                    live_targets.append(w)
            if live_targets:
                out.append(Gate(GateKind.MCX_FANOUT, controls=g.controls,
                                targets=tuple(live_targets))
                           if len(live_targets) > 1 else
                           Gate(GateKind.CX, controls=g.controls, targets=tuple(live_targets)))
            continue
        raise LayoutMismatch(f"cannot fold {k.value} touching {touched}")
    for w, v in values.items():
        if parity[w] != (v & 1, frozenset()):
            raise LayoutMismatch(f"classical wire {w} not restored to {v & 1}")
    return Circuit(tuple(keep), tuple(out)), (phase_units % 8)


# -- QRAM equivalence verdicts -----------------------------------------------

class Level(Enum):
    EXACT = "EXACT"
    GLOBAL_PHASE_PER_MEMORY = "GLOBAL_PHASE_PER_MEMORY"
    INEQUIVALENT = "INEQUIVALENT"


@dataclass
class EquivalenceVerdict:
    level: Level
    max_deviation: float
    witnessing_input: int | None = None

    def to_json(self) -> dict:
        return {"level": self.level.value, "max_deviation": self.max_deviation,
                "witnessing_input": self.witnessing_input}


def _combine(worst: Level, new: Level) -> Level:
    order = [Level.EXACT, Level.GLOBAL_PHASE_PER_MEMORY, Level.INEQUIVALENT]
    return max(worst, new, key=order.index)


def verify_qram(circuit: Circuit, instance, memories=None,
                tolerance: float = ATOL) -> EquivalenceVerdict:
    """Compare a built QRAM circuit against the reference map, memory by memory.

    For each classical memory configuration the memory wires are folded out,
    every (address, target) basis state is simulated (enumerating measurement
    branches when present), ancilla restoration is checked, and the induced
    map is classified EXACT / GLOBAL_PHASE_PER_MEMORY / INEQUIVALENT.
    """
    from .builders import QramWireLayout, reference_qram_map

    layout = QramWireLayout.for_instance(instance)
    missing = [w for w in layout.all_wires if w not in circuit.wires]
    if missing:
        raise LayoutMismatch(f"circuit lacks layout wires {missing[:4]}")
    extra = [w for w in circuit.wires if w not in layout.all_wires]

    if memories is None:
        memories = default_memories(instance.q)
    q = instance.q
    dim = 1 << (q + 1)
    worst = Level.EXACT
    max_dev = 0.0
    witness = None

    for memory in memories:
        ref = reference_qram_map(replace(instance, memory=tuple(memory)))
        try:
            folded, fold_units = fold_classical_wires(
                circuit, {layout.memory[j]: memory[j] for j in range(1 << q)})
        except LayoutMismatch:
            # memory wires not classically restorable: not a QRAM read
            return EquivalenceVerdict(Level.INEQUIVALENT, 1.0, None)
        fold_phase = OMEGA ** fold_units
        widx = folded.wire_index
        n = folded.width
        addr_axes = [widx(w) for w in layout.address]
        tgt_axis = widx(layout.target)
        anc_axes = [widx(w) for w in folded.wires
                    if w not in (*layout.address, layout.target)]
        has_meas = any(g.kind is GateKind.MEASURE_X for g in folded.gates)

        columns: list[list[np.ndarray]] = []
        for col in range(dim):
            a, t0 = col >> 1, col & 1
            bits = {addr_axes[i]: (a >> (q - 1 - i)) & 1 for i in range(q)}
            bits[tgt_axis] = t0
            init = basis_state(n, bits)
            if has_meas:
                branches = enumerate_measurement_branches(folded, init)
                total_p = sum(b.probability for b in branches)
                if abs(total_p - 1.0) > 1e-9:
                    return EquivalenceVerdict(Level.INEQUIVALENT, abs(total_p - 1.0), col)
                outs = []
                for b in branches:
                    vec, ok = _project_ancillae(b.state, folded, anc_axes, b.outcomes,
                                                addr_axes, tgt_axis, tolerance)
                    if not ok:
                        return EquivalenceVerdict(Level.INEQUIVALENT, 1.0, col)
                    outs.append(vec * fold_phase)
                columns.append(outs)
            else:
                final = run_statevector(folded, init)
                vec, ok = _project_ancillae(final, folded, anc_axes, {}, addr_axes,
                                            tgt_axis, tolerance)
                if not ok:
                    return EquivalenceVerdict(Level.INEQUIVALENT, 1.0, col)
                columns.append([vec * fold_phase])

        # exact comparison, then global-phase-per-memory comparison
        dev_exact = 0.0
        wit = None
        for col in range(dim):
            for vec in columns[col]:
                d = float(np.abs(vec - ref[:, col]).max())
                if d > dev_exact:
                    dev_exact, wit = d, col
        if dev_exact <= tolerance:
            max_dev = max(max_dev, dev_exact)
            continue
        phase = _reference_phase(columns, ref, tolerance)
        dev_phase = 0.0
        wit_p = None
        for col in range(dim):
            for vec in columns[col]:
                d = float(np.abs(vec - phase * ref[:, col]).max())
                if d > dev_phase:
                    dev_phase, wit_p = d, col
        if dev_phase <= tolerance:
            worst = _combine(worst, Level.GLOBAL_PHASE_PER_MEMORY)
            max_dev = max(max_dev, dev_phase)
            witness = witness if witness is not None else wit
        else:
            return EquivalenceVerdict(Level.INEQUIVALENT, dev_phase, wit_p)
    return EquivalenceVerdict(worst, max_dev, witness)


def _project_ancillae(state, folded, anc_axes, outcomes, addr_axes, tgt_axis, tol):
    """Project ancillae onto their expected basis values; returns the reduced
    (address, target) amplitude vector and whether the projection captured
    all amplitude (ancillae restored / collapsed as recorded)."""
    sel = {}
    for ax in anc_axes:
        wname = folded.wires[ax]
        sel[ax] = outcomes.get(wname, 0)
    vec = state[_axis_slices(state.ndim, folded.width, sel)]
    # reorder remaining axes to (address..., target)
    remaining = [ax for ax in range(folded.width) if ax not in sel]
    order = [remaining.index(ax) for ax in (*addr_axes, tgt_axis)]
    vec = np.transpose(vec, order).reshape(-1)
    ok = abs(np.vdot(vec, vec).real - 1.0) <= 1e-7
    return vec, ok


def _reference_phase(columns, ref, tol):
    """Phase estimate from the first vector entry matching the largest
    reference entry (deterministic for permutation-like references)."""
    for col in range(ref.shape[1]):
        j = int(np.argmax(np.abs(ref[:, col])))
        for vec in columns[col]:
            if abs(vec[j]) > tol:
                return vec[j] / ref[j, col]
    return 1.0


def default_memories(q: int, sample: int = 64, seed: int = 20240517):
    """All memory configurations for q <= 2, a seeded sample otherwise."""
    cells = 1 << q
    if q <= 2:
        return [[(m >> j) & 1 for j in range(cells)] for m in range(1 << cells)]
    rng = np.random.default_rng(seed)
    return [list(map(int, rng.integers(0, 2, size=cells))) for _ in range(sample)]
