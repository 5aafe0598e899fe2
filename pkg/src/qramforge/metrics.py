"""Closed-form cost models and measured resource extraction.

Model values are exact integer evaluations.  Measured values come from built
circuits: width excludes memory wires, T-count is taken after the mod-8
diagonal merge pass, depth via the ASAP scheduler.  The QROM depth model's
undetermined constant is reported as the known 10*2^n term with an
``incomplete`` flag rather than a guessed value.
"""
from __future__ import annotations

import io
import csv
from dataclasses import dataclass
from enum import Enum

from .builders import QramInstance, build_parallel_clifford_t, build_sequential_clifford_t
from .errors import QramForgeError, UnknownWireClass
from .ir import Circuit, Region, merge_diagonal_runs
from .scheduler import RegionDepths, region_depths, schedule_asap


class Family(Enum):
    BB_SEQUENTIAL = "bbs"
    QROM = "rom"
    BB_PARALLEL = "bbp"


@dataclass(frozen=True)
class CostModel:
    family: Family

    def width(self, q: int) -> int:
        if self.family is Family.BB_SEQUENTIAL:
            return q + (1 << q) + 5
        if self.family is Family.QROM:
            return q + 1
        return q + (1 << q) + 1

    def tcount(self, q: int, n: int) -> int:
        if self.family is Family.BB_SEQUENTIAL:
            return 21 * (1 << q) - 28
        if self.family is Family.QROM:
            return 4 * (1 << n) - 4
        return 4 * (1 << q) + 6 * (1 << n)

    def depth(self, q: int, n: int) -> int:
        if self.family is Family.BB_SEQUENTIAL:
            return 21 * (1 << q) + 2 * q - 26
        if self.family is Family.QROM:
            return 10 * (1 << n)  # plus an undetermined c*O(2^n) term
        return 10 * q + 10 + 4 * q

    @property
    def depth_incomplete(self) -> bool:
        return self.family is Family.QROM


def classify_wire(name: str) -> str:
    if name == "target":
        return "target"
    if name.startswith("a") and name[1:].isdigit():
        return "address"
    if name.startswith("b_"):
        return "pointer"
    if name.startswith("m") and all(c in "01" for c in name[1:]) and len(name) > 1:
        return "memory"
    if name.startswith("ghz"):
        return "ghz"
    raise UnknownWireClass(f"wire {name!r} has no known class")


@dataclass(frozen=True)
class MeasuredCounts:
    width: int
    tcount: int
    depth: int
    region_depths: RegionDepths | None
    region_tcounts: dict[str, int] | None

    def to_json(self) -> dict:
        return {
            "width": self.width, "tcount": self.tcount, "depth": self.depth,
            "region_depths": self.region_depths.to_json() if self.region_depths else None,
            "region_tcounts": self.region_tcounts,
        }


def measure(circuit: Circuit) -> MeasuredCounts:
    width = sum(1 for w in circuit.wires if classify_wire(w) != "memory")
    depth = schedule_asap(circuit).depth
    tcount = merge_diagonal_runs(circuit).t_count()
    rdepths = None
    rtcounts = None
    if circuit.regions is not None:
        rdepths = region_depths(circuit)
        rtcounts = {
            region.value.lower(): merge_diagonal_runs(circuit.region_slice(region)).t_count()
            for region in (Region.FANOUT, Region.QUERY, Region.FANIN)
        }
    return MeasuredCounts(width, tcount, depth, rdepths, rtcounts)


@dataclass(frozen=True)
class ResourceReport:
    instance: QramInstance
    family: Family
    measured: MeasuredCounts
    model_width: int
    model_tcount: int
    model_depth: int

    @property
    def deltas(self) -> dict[str, int]:
        return {
            "width": self.measured.width - self.model_width,
            "tcount": self.measured.tcount - self.model_tcount,
            "depth": self.measured.depth - self.model_depth,
        }


def report_for(circuit: Circuit, instance: QramInstance, family: Family) -> ResourceReport:
    model = CostModel(family)
    return ResourceReport(instance, family, measure(circuit),
                          model.width(instance.q),
                          model.tcount(instance.q, instance.n),
                          model.depth(instance.q, instance.n))


CSV_COLUMNS = ["family", "q", "n", "width_model", "width_measured", "tcount_model",
               "tcount_measured", "depth_model", "depth_measured", "fanout_depth",
               "query_depth", "fanin_depth", "flags"]

_BUILDERS = {
    Family.BB_SEQUENTIAL: build_sequential_clifford_t,
    Family.BB_PARALLEL: build_parallel_clifford_t,
}


def resolve_n(q: int, n_policy: str) -> int:
    if n_policy == "n_equals_q":
        return q
    if n_policy.startswith("fixed:"):
        return min(int(n_policy.split(":", 1)[1]), q)
    raise QramForgeError(f"unknown n policy {n_policy!r}")


def sweep(families: list[Family], q_range: range, n_policy: str = "n_equals_q",
          measure_cap: int = 8) -> str:
    """One CSV row per (family, q); measured columns filled for built circuits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for family in families:
        model = CostModel(family)
        for q in q_range:
            n = resolve_n(q, n_policy)
            flags = []
            if model.depth_incomplete:
                flags.append("depth_model_incomplete")
            row: dict[str, object] = {
                "family": family.value, "q": q, "n": n,
                "width_model": model.width(q),
                "tcount_model": model.tcount(q, n),
                "depth_model": model.depth(q, n),
            }
            if family in _BUILDERS and q <= measure_cap:
                instance = QramInstance(q, n, (1,) * (1 << q))
                counts = measure(_BUILDERS[family](instance))
                row.update({
                    "width_measured": counts.width,
                    "tcount_measured": counts.tcount,
                    "depth_measured": counts.depth,
                    "fanout_depth": counts.region_depths.fanout,
                    "query_depth": counts.region_depths.query,
                    "fanin_depth": counts.region_depths.fanin,
                })
            else:
                flags.append("model_only")
            row["flags"] = ";".join(flags)
            writer.writerow([row.get(col, "") for col in CSV_COLUMNS])
    return buf.getvalue()
