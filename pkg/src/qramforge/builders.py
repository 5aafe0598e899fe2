"""Bucket brigade QRAM circuit families.

Wire layout (width counts exclude the 2^q memory wires, matching the cost
models): address a_{q-1}..a_0, one-hot pointers b_j (j in binary, address bit
a_{q-1} first), memory cells m_j, and the readout target.

FANOUT computes b_j = [address == j] level by level: level 1 initialises
(b_0, b_1) = (NOT a_0, a_0); level k >= 2 splits each pointer with a Toffoli
b_{j+2^(k-1)} = a_{k-1} AND b_j followed by CX(b_{j+2^(k-1)} -> b_j).  QUERY
reads the first 2^n cells with Toffolis onto the target; FANIN uncomputes.

The figure this follows draws the level-1 initialisation without the pointer
initialiser; an X on b_0 is required for the one-hot semantics and is emitted
here (no gate sequence over CX/CCX from all-|0> pointers can set one).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QramForgeError
from .ir import (
    Circuit,
    Gate,
    GateKind,
    Regions,
    ccx,
    classical_cx,
    cx,
    h,
    measure_x,
    s,
    x,
)


@dataclass(frozen=True)
class QramInstance:
    q: int
    n: int
    memory: tuple[int, ...]

    def __post_init__(self):
        if self.q < 1:
            raise QramForgeError(f"address width q must be >= 1, got {self.q}")
        if not (1 <= self.n <= self.q):
            raise QramForgeError(f"need 1 <= n <= q, got n={self.n}, q={self.q}")
        if len(self.memory) != 1 << self.q:
            raise QramForgeError(
                f"memory must hold {1 << self.q} bits, got {len(self.memory)}")
        if any(b not in (0, 1) for b in self.memory):
            raise QramForgeError("memory bits must be 0 or 1")

    @property
    def cells(self) -> int:
        return 1 << self.q

    @property
    def queries(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class QramWireLayout:
    address: tuple[str, ...]   # a_{q-1} .. a_0
    pointers: tuple[str, ...]  # b_0 .. b_{2^q - 1}
    memory: tuple[str, ...]    # m_0 .. m_{2^q - 1}
    target: str

    @classmethod
    def for_instance(cls, instance: QramInstance) -> "QramWireLayout":
        q = instance.q
        address = tuple(f"a{i}" for i in range(q - 1, -1, -1))
        pointers = tuple(f"b_{j:0{q}b}" for j in range(1 << q))
        memory = tuple(f"m{j:0{q}b}" for j in range(1 << q))
        return cls(address, pointers, memory, "target")

    @property
    def all_wires(self) -> tuple[str, ...]:
        return (*self.address, *self.pointers, *self.memory, self.target)

    @property
    def counted_width(self) -> int:
        """Circuit width metric: memory wires excluded."""
        return len(self.address) + len(self.pointers) + 1


def _address_wire(layout: QramWireLayout, bit: int) -> str:
    # layout.address is a_{q-1}..a_0
    return layout.address[len(layout.address) - 1 - bit]


def _fanout_toffoli_level(layout, k):
    """Level k >= 2: (address bit wire, [(b_low, b_high) pointer pairs])."""
    half = 1 << (k - 1)
    a = _address_wire(layout, k - 1)
    return a, [(layout.pointers[j], layout.pointers[j + half]) for j in range(half)]


def build_toffoli_bucket_brigade(instance: QramInstance) -> Circuit:
    layout = QramWireLayout.for_instance(instance)
    b = layout.pointers
    fanout: list[Gate] = [x(b[0]), cx(_address_wire(layout, 0), b[1]), cx(b[1], b[0])]
    for k in range(2, instance.q + 1):
        a, pairs = _fanout_toffoli_level(layout, k)
        fanout.extend(ccx(a, lo, hi) for lo, hi in pairs)
        fanout.extend(cx(hi, lo) for lo, hi in pairs)
    query = [ccx(b[j], layout.memory[j], layout.target) for j in range(instance.queries)]
    fanin = list(Circuit(layout.all_wires, tuple(fanout)).inverse().gates)
    gates = (*fanout, *query, *fanin)
    nf, nq = len(fanout), len(query)
    regions = Regions((0, nf), (nf, nf + nq), (nf + nq, len(gates)))
    return Circuit(layout.all_wires, gates, regions)


def build_sequential_clifford_t(instance: QramInstance) -> Circuit:
    """Toffoli-level circuit with every CCX replaced by the canonical 7-T
    decomposition; no parallelism-aware choices."""
    from .decompositions import CczVariant, lower_toffoli

    toffoli = build_toffoli_bucket_brigade(instance)
    gates: list[Gate] = []
    bounds = []
    regions = toffoli.regions
    for i, g in enumerate(toffoli.gates):
        if i in (regions.query[0], regions.fanin[0]):
            bounds.append(len(gates))
        if g.kind is GateKind.CCX:
            c0, c1 = (c.wire for c in g.controls)
            gates.extend(lower_toffoli(CczVariant.CANONICAL_7T, (c0, c1),
                                       g.targets[0]).gates)
        else:
            gates.append(g)
    new_regions = Regions((0, bounds[0]), (bounds[0], bounds[1]),
                          (bounds[1], len(gates)))
    return Circuit(toffoli.wires, tuple(gates), new_regions)


def _parallel_fanout(instance: QramInstance, layout: QramWireLayout) -> list[Gate]:
    from .decompositions import lower_shared_control_group

    b = layout.pointers
    gates: list[Gate] = [x(b[0]), cx(_address_wire(layout, 0), b[1]), cx(b[1], b[0])]
    for k in range(2, instance.q + 1):
        a, pairs = _fanout_toffoli_level(layout, k)
        gates.extend(lower_shared_control_group(a, pairs))
        gates.extend(cx(hi, lo) for lo, hi in pairs)
    return gates


def _parallel_query(instance: QramInstance, layout: QramWireLayout) -> list[Gate]:
    """Shared-target lowering: per cell the pointer takes the 4-T ladder, the
    memory wire the 2-T ladder, and the target carries only CNOT controls plus
    the merged T power (2^n T gates combine to S, Z, or nothing)."""
    from .decompositions import lower_shared_target_group

    pairs = [(layout.pointers[j], layout.memory[j]) for j in range(instance.queries)]
    return lower_shared_target_group(layout.target, pairs)


def _measurement_fanin(instance: QramInstance, layout: QramWireLayout) -> list[Gate]:
    """Release each AND ancilla by X-basis measurement
    with conditioned CX corrections bundled on the shared address control.

    A per-level S on the address bit cancels the logical-AND compute phases
    ((-i) per fired AND); without it the circuit differs from the QRAM map by
    an address-dependent phase.
    """
    b = layout.pointers
    gates: list[Gate] = []
    for k in range(instance.q, 1, -1):
        a, pairs = _fanout_toffoli_level(layout, k)
        gates.extend(cx(hi, lo) for lo, hi in pairs)
        gates.extend(measure_x(hi) for _, hi in pairs)
        gates.extend(h(lo) for lo, _ in pairs)
        gates.extend(classical_cx(a, lo, hi) for lo, hi in pairs)
        gates.extend(h(lo) for lo, _ in pairs)
        gates.append(s(a))
    gates.extend([cx(b[1], b[0]), cx(_address_wire(layout, 0), b[1]), x(b[0])])
    return gates


def build_parallel_clifford_t(instance: QramInstance, fanin_mode: str = "measurement") -> Circuit:
    if fanin_mode not in ("measurement", "unitary"):
        raise QramForgeError(f"fanin_mode must be measurement|unitary, got {fanin_mode!r}")
    layout = QramWireLayout.for_instance(instance)
    fanout = _parallel_fanout(instance, layout)
    query = _parallel_query(instance, layout)
    if fanin_mode == "unitary":
        fanin = list(Circuit(layout.all_wires, tuple(fanout)).inverse().gates)
    else:
        fanin = _measurement_fanin(instance, layout)
    gates = (*fanout, *query, *fanin)
    nf, nq = len(fanout), len(query)
    regions = Regions((0, nf), (nf, nf + nq), (nf + nq, len(gates)))
    return Circuit(layout.all_wires, gates, regions)


def reference_qram_map(instance: QramInstance) -> np.ndarray:
    """Permutation on (address, target): |a>|t> -> |a>|t ^ m_a> for queried
    cells a < 2^n, identity elsewhere."""
    dim = 1 << (instance.q + 1)
    mat = np.zeros((dim, dim), dtype=complex)
    for a in range(1 << instance.q):
        flip = instance.memory[a] if a < instance.queries else 0
        for tbit in (0, 1):
            col = (a << 1) | tbit
            row = (a << 1) | (tbit ^ flip)
            mat[row, col] = 1.0
    return mat
