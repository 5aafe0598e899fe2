"""Circuit document format, ASCII diagram rendering, OpenQASM 2.0 export.

The JSON document is the stable interchange format (ir_version 1).  The ASCII
renderer uses the conventional circuit-diagram notation: one
line per wire, ``@`` for controls, ``X`` for targets, ``(0)`` for negative
controls, ``HM`` for X-basis measurement.  Rendering is one gate per column,
so the gate list round-trips exactly through ``parse_ascii``.
"""
from __future__ import annotations

import json

from .errors import QramForgeError, SchemaViolation
from .ir import (
    Circuit,
    Control,
    Gate,
    GateKind,
    Polarity,
    Regions,
)

IR_VERSION = 1


# -- JSON document ----------------------------------------------------------

def to_document(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        entry: dict = {
            "kind": g.kind.value,
            "controls": [{"wire": c.wire, "polarity": c.polarity.value} for c in g.controls],
            "targets": list(g.targets),
        }
        if g.condition is not None:
            entry["condition"] = g.condition
        gates.append(entry)
    doc = {"ir_version": IR_VERSION, "wires": list(circuit.wires), "gates": gates}
    if circuit.regions is not None:
        doc["regions"] = {
            "fanout": list(circuit.regions.fanout),
            "query": list(circuit.regions.query),
            "fanin": list(circuit.regions.fanin),
        }
    return doc


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise SchemaViolation(path, message)


def from_document(doc: dict) -> Circuit:
    _expect(isinstance(doc, dict), "$", "document must be an object")
    _expect(doc.get("ir_version") == IR_VERSION, "$.ir_version", f"expected {IR_VERSION}")
    wires = doc.get("wires")
    _expect(isinstance(wires, list) and all(isinstance(w, str) for w in wires),
            "$.wires", "must be a list of strings")
    raw_gates = doc.get("gates")
    _expect(isinstance(raw_gates, list), "$.gates", "must be a list")
    gates = []
    for i, entry in enumerate(raw_gates):
        path = f"$.gates[{i}]"
        _expect(isinstance(entry, dict), path, "must be an object")
        kind_name = entry.get("kind")
        try:
            kind = GateKind(kind_name)
        except ValueError:
            raise SchemaViolation(f"{path}.kind", f"unknown gate kind {kind_name!r}") from None
        controls = []
        for j, c in enumerate(entry.get("controls", [])):
            cpath = f"{path}.controls[{j}]"
            _expect(isinstance(c, dict) and isinstance(c.get("wire"), str), cpath,
                    "must be an object with a wire")
            try:
                pol = Polarity(c.get("polarity", "positive"))
            except ValueError:
                raise SchemaViolation(f"{cpath}.polarity", f"unknown polarity {c.get('polarity')!r}") from None
            controls.append(Control(c["wire"], pol))
        targets = entry.get("targets", [])
        _expect(isinstance(targets, list) and all(isinstance(w, str) for w in targets),
                f"{path}.targets", "must be a list of strings")
        condition = entry.get("condition")
        _expect(condition is None or isinstance(condition, str), f"{path}.condition",
                "must be a string when present")
        gates.append(Gate(kind, tuple(controls), tuple(targets), condition))
    regions = None
    if "regions" in doc:
        raw = doc["regions"]
        _expect(isinstance(raw, dict), "$.regions", "must be an object")
        spans = {}
        for key in ("fanout", "query", "fanin"):
            span = raw.get(key)
            _expect(isinstance(span, list) and len(span) == 2
                    and all(isinstance(v, int) for v in span),
                    f"$.regions.{key}", "must be a [lo, hi) pair")
            spans[key] = (span[0], span[1])
        regions = Regions(spans["fanout"], spans["query"], spans["fanin"])
    try:
        return Circuit(tuple(wires), tuple(gates), regions)
    except QramForgeError as exc:
        raise SchemaViolation("$.gates", str(exc)) from exc


def dumps(circuit: Circuit) -> str:
    return json.dumps(to_document(circuit), indent=2) + "\n"


def loads(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"invalid JSON: {exc}") from exc
    return from_document(doc)


# -- ASCII rendering --------------------------------------------------------

_SIMPLE = {
    GateKind.X: "X", GateKind.H: "H", GateKind.S: "S", GateKind.S_DAG: "S^-1",
    GateKind.T: "T", GateKind.T_DAG: "T^-1", GateKind.Z: "Z",
    GateKind.MEASURE_X: "HM",
}
_SYMBOL_TO_KIND = {v: k for k, v in _SIMPLE.items()}


def _column_symbols(circuit: Circuit, gate: Gate) -> dict[int, str]:
    idx = circuit.wire_index
    if gate.kind in _SIMPLE:
        return {idx(gate.targets[0]): _SIMPLE[gate.kind]}
    syms: dict[int, str] = {}
    for c in gate.controls:
        syms[idx(c.wire)] = "@" if c.polarity is Polarity.POSITIVE else "(0)"
    if gate.kind in (GateKind.CZ, GateKind.CLASSICAL_CZ):
        for w in gate.targets:
            syms[idx(w)] = "@"
    elif gate.kind is GateKind.CCZ:
        syms[idx(gate.targets[0])] = "Z"
    else:
        for w in gate.targets:
            syms[idx(w)] = "X"
    return syms


def render_ascii(circuit: Circuit) -> str:
    """One gate per column, deterministic and parseable back into a Circuit."""
    name_w = max((len(w) for w in circuit.wires), default=0)
    prefix = [f"{w}:".ljust(name_w + 2) for w in circuit.wires]
    rows = [list(p) for p in prefix]
    conditions: list[tuple[int, str]] = []
    for col, gate in enumerate(circuit.gates):
        syms = _column_symbols(circuit, gate)
        if gate.condition is not None:
            conditions.append((col, gate.condition))
        width = max((len(s) for s in syms.values()), default=1) + 3
        lo, hi = min(syms), max(syms)
        for i in range(len(circuit.wires)):
            if i in syms:
                cell = syms[i].ljust(width - 3, "-") + "---"
            elif lo < i < hi:
                cell = "|" + "-" * (width - 1)
            else:
                cell = "-" * width
            rows[i].extend(cell)
    text = "\n".join("".join(r) + "---" for r in rows)
    for col, record in conditions:
        text += f"\n# cond {col} {record}"
    return text + "\n"


def parse_ascii(text: str) -> Circuit:
    body = []
    conditions: dict[int, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("# cond "):
            _, _, col, record = line.split(" ", 3)
            conditions[int(col)] = record
        else:
            body.append(line)
    wires, starts, tokens = [], [], []
    for line in body:
        name, _, rest = line.partition(":")
        wires.append(name.strip())
        start = len(name) + 1
        toks = []
        i = 0
        while i < len(rest):
            chunk = rest[i:]
            if chunk[0] in "-| ":
                i += 1
                continue
            for sym in ("T^-1", "S^-1", "(0)", "HM", "@", "X", "H", "T", "S", "Z"):
                if chunk.startswith(sym):
                    toks.append((start + i, sym))
                    i += len(sym)
                    break
            else:
                raise SchemaViolation("$", f"unparseable symbol at {rest[i:i+4]!r}")
        tokens.append(toks)
    columns: dict[int, list[tuple[int, str]]] = {}
    for wi, toks in enumerate(tokens):
        for off, sym in toks:
            columns.setdefault(off, []).append((wi, sym))
    gates = []
    for col_index, off in enumerate(sorted(columns)):
        items = columns[off]
        if len(items) == 1 and items[0][1] in _SYMBOL_TO_KIND:
            wi, sym = items[0]
            gates.append(Gate(_SYMBOL_TO_KIND[sym], targets=(wires[wi],)))
            continue
        controls = tuple(
            Control(wires[wi], Polarity.POSITIVE if sym == "@" else Polarity.NEGATIVE)
            for wi, sym in items if sym in ("@", "(0)")
        )
        targets = tuple(wires[wi] for wi, sym in items if sym == "X")
        zmarks = tuple(wires[wi] for wi, sym in items if sym == "Z")
        n_c, n_t = len(controls), len(targets)
        condition = conditions.get(col_index)
        if zmarks and n_c == 2 and n_t == 0:
            gates.append(Gate(GateKind.CCZ, controls=controls, targets=zmarks))
        elif n_t == 0 and n_c == 2:
            kind = GateKind.CLASSICAL_CZ if condition else GateKind.CZ
            gates.append(Gate(kind, targets=tuple(c.wire for c in controls), condition=condition))
        elif condition is not None and (n_c, n_t) == (1, 1):
            gates.append(Gate(GateKind.CLASSICAL_CX, controls=controls, targets=targets,
                              condition=condition))
        elif (n_c, n_t) == (1, 1):
            gates.append(Gate(GateKind.CX, controls=controls, targets=targets))
        elif n_c == 1 and n_t > 1:
            gates.append(Gate(GateKind.MCX_FANOUT, controls=controls, targets=targets))
        elif (n_c, n_t) == (2, 1):
            gates.append(Gate(GateKind.CCX, controls=controls, targets=targets))
        elif (n_c, n_t) == (3, 1):
            gates.append(Gate(GateKind.CCCX, controls=controls, targets=targets))
        else:
            raise SchemaViolation("$", f"unrecognized column with {n_c} controls, {n_t} targets")
    return Circuit(tuple(wires), tuple(gates))


# -- OpenQASM 2.0 export ----------------------------------------------------

def to_qasm(circuit: Circuit) -> str:
    """OpenQASM 2.0 via qelib1 names; fan-outs expand to sequential cx.

    Each measurement record gets its own 1-bit creg because OPENQASM 2.0
    ``if`` compares a whole register, not single bits.
    """
    idx = circuit.wire_index
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.width}];"]
    records = sorted(circuit.measurement_records)
    creg_of = {rec: i for i, rec in enumerate(records)}
    for rec in records:
        lines.append(f"creg c{creg_of[rec]}[1];")
    for w in circuit.wires:
        lines.append(f"// q[{idx(w)}] = {w}")

    def ref(w: str) -> str:
        return f"q[{idx(w)}]"

    simple = {GateKind.X: "x", GateKind.H: "h", GateKind.S: "s", GateKind.S_DAG: "sdg",
              GateKind.T: "t", GateKind.T_DAG: "tdg", GateKind.Z: "z"}
    for g in circuit.gates:
        neg = [c.wire for c in g.controls if c.polarity is Polarity.NEGATIVE]
        for w in neg:
            lines.append(f"x {ref(w)};")
        cw = [c.wire for c in g.controls]
        if g.kind in simple:
            lines.append(f"{simple[g.kind]} {ref(g.targets[0])};")
        elif g.kind is GateKind.CX:
            lines.append(f"cx {ref(cw[0])},{ref(g.targets[0])};")
        elif g.kind is GateKind.MCX_FANOUT:
            for tgt in g.targets:
                lines.append(f"cx {ref(cw[0])},{ref(tgt)};")
        elif g.kind is GateKind.CZ:
            lines.append(f"cz {ref(g.targets[0])},{ref(g.targets[1])};")
        elif g.kind is GateKind.CCX:
            lines.append(f"ccx {ref(cw[0])},{ref(cw[1])},{ref(g.targets[0])};")
        elif g.kind is GateKind.CCZ:
            tgt = g.targets[0]
            lines.append(f"h {ref(tgt)};")
            lines.append(f"ccx {ref(cw[0])},{ref(cw[1])},{ref(tgt)};")
            lines.append(f"h {ref(tgt)};")
        elif g.kind is GateKind.CCCX:
            lines.append(f"c3x {ref(cw[0])},{ref(cw[1])},{ref(cw[2])},{ref(g.targets[0])};")
        elif g.kind is GateKind.MEASURE_X:
            w = g.targets[0]
            lines.append(f"h {ref(w)};")
            lines.append(f"measure {ref(w)} -> c{creg_of[w]}[0];")
        elif g.kind is GateKind.CLASSICAL_CZ:
            lines.append(f"if(c{creg_of[g.condition]}==1) "
                         f"cz {ref(g.targets[0])},{ref(g.targets[1])};")
        elif g.kind is GateKind.CLASSICAL_CX:
            lines.append(f"if(c{creg_of[g.condition]}==1) "
                         f"cx {ref(cw[0])},{ref(g.targets[0])};")
        for w in reversed(neg):
            lines.append(f"x {ref(w)};")
    return "\n".join(lines) + "\n"
