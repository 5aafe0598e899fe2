"""qramforge: bucket brigade QRAM synthesis, Clifford+T lowering, scheduling
and brute-force verification."""

__version__ = "0.1.0"

from .builders import (
    QramInstance,
    QramWireLayout,
    build_parallel_clifford_t,
    build_sequential_clifford_t,
    build_toffoli_bucket_brigade,
    reference_qram_map,
)
from .decompositions import (
    CczVariant,
    PhasePolynomial,
    lower_and_uncompute,
    lower_ccz,
    lower_toffoli,
    pair_lower_shared_control,
    pair_lower_shared_target,
    phase_polynomial_of,
)
from .ir import Circuit, Control, Gate, GateKind, Polarity, Region, Regions
from .metrics import CostModel, Family, ResourceReport, measure, report_for, sweep
from .scheduler import (
    Schedule,
    apply_parallelisation_template,
    expand_ghz_fanout,
    fuse_fanout_cnots,
    region_depths,
    schedule_asap,
)
from .serialize import from_document, parse_ascii, render_ascii, to_document, to_qasm
from .simulator import (
    EquivalenceVerdict,
    Level,
    enumerate_measurement_branches,
    unitary_of,
    verify_qram,
)

__all__ = [
    "Circuit", "Control", "Gate", "GateKind", "Polarity", "Region", "Regions",
    "QramInstance", "QramWireLayout", "build_toffoli_bucket_brigade",
    "build_sequential_clifford_t", "build_parallel_clifford_t", "reference_qram_map",
    "CczVariant", "PhasePolynomial", "lower_ccz", "lower_toffoli",
    "lower_and_uncompute", "pair_lower_shared_control", "pair_lower_shared_target",
    "phase_polynomial_of", "Schedule", "schedule_asap", "fuse_fanout_cnots",
    "region_depths", "expand_ghz_fanout", "apply_parallelisation_template",
    "CostModel", "Family", "ResourceReport", "measure", "report_for", "sweep",
    "to_document", "from_document", "render_ascii", "parse_ascii", "to_qasm",
    "EquivalenceVerdict", "Level", "enumerate_measurement_branches", "unitary_of",
    "verify_qram",
]
