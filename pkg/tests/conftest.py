import numpy as np
import pytest
from hypothesis import strategies as st

from qramforge.ir import (
    Circuit,
    Control,
    Gate,
    GateKind,
    Polarity,
    ccx,
    cx,
    cz,
    h,
    s,
    sdg,
    t,
    tdg,
    x,
    z,
)

WIRES = ("w0", "w1", "w2", "w3")

_ONE_Q = [x, h, s, sdg, t, tdg, z]


@st.composite
def unitary_circuits(draw, wires=WIRES, max_gates=16, allow_mcx=True):
    """Random measurement-free circuits over a small wire set."""
    n = draw(st.integers(0, max_gates))
    gates = []
    for _ in range(n):
        choice = draw(st.integers(0, 5 if allow_mcx else 4))
        if choice == 0:
            gates.append(draw(st.sampled_from(_ONE_Q))(draw(st.sampled_from(wires))))
        elif choice == 1:
            a, b = draw(st.permutations(wires))[:2]
            gates.append(cx(a, b))
        elif choice == 2:
            a, b = draw(st.permutations(wires))[:2]
            gates.append(cz(a, b))
        elif choice == 3:
            a, b, c = draw(st.permutations(wires))[:3]
            neg = (draw(st.booleans()), draw(st.booleans()))
            gates.append(ccx(a, b, c, negative=neg))
        elif choice == 4:
            a, b, c = draw(st.permutations(wires))[:3]
            neg = (draw(st.booleans()), draw(st.booleans()))
            gates.append(Gate(GateKind.CCZ,
                              controls=(Control(a, Polarity.NEGATIVE if neg[0] else Polarity.POSITIVE),
                                        Control(b, Polarity.NEGATIVE if neg[1] else Polarity.POSITIVE)),
                              targets=(c,)))
        else:
            perm = draw(st.permutations(wires))
            k = draw(st.integers(2, len(wires) - 1))
            gates.append(Gate(GateKind.MCX_FANOUT, controls=(Control(perm[0]),),
                              targets=tuple(perm[1:1 + k])))
    return Circuit(tuple(wires), tuple(gates))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
