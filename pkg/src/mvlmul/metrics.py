"""Area estimation, calibrated timing, critical paths and comparisons.

Area is the transistor-diameter-sum proxy: each gate kind carries one
number (nanometers) and a netlist's area is the plain sum over its
instances.  The bundled default library targets a 32 nm CNTFET flow;
the block costs of the digit multiplier and the quaternary adders
already include their internal decoders and muxes, so bare MUX4/DECODER
instances default to zero to avoid double counting.

Timing is a calibrated lookup model, not a prediction.  Per-kind delays
are fitted (least squares) to aggregate worst-path figures at a fixed
2 fF load, so the only claim the model makes is path-composition
consistency: the generated design's worst path re-adds to the aggregate
it was calibrated against.  The digit-product stage (AND / QM1) is kept
out of path sums by default and reported separately, matching how the
reference aggregates are quoted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .core import GateKind, PORTS
from .netlist import Netlist, topo_order

#: gate kinds that form the digit-product stage; excluded from path
#: delay accounting by default (every input-to-output path crosses
#: exactly one of them, and the calibration aggregates leave them out).
FRONTEND_KINDS = frozenset({GateKind.AND, GateKind.QM1})


class LibraryError(KeyError):
    """A library is missing an entry for a gate kind used by a netlist."""


class CalibrationError(ValueError):
    """The calibration system is underdetermined or inconsistent."""


# ---------------------------------------------------------------------------
# cost (area) library
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiameterRow:
    """One nanotube choice: chirality index, diameter, threshold voltage."""

    n: int
    diameter_nm: float
    vth_v: float


# chirality table for the 32 nm CNTFET flow; vth tracks 1/diameter.
# Unused by the behavioral model, kept for completeness.
DIAMETER_TABLE = (
    DiameterRow(8, 0.626, 0.696),
    DiameterRow(10, 0.783, 0.557),
    DiameterRow(13, 1.018, 0.428),
    DiameterRow(19, 1.487, 0.293),
    DiameterRow(29, 2.27, 0.192),
    DiameterRow(37, 2.896, 0.150),
)


@dataclass
class CostLibrary:
    """Per-kind diameter sums (nm) plus the nanotube diameter table."""

    name: str
    sigma_di: dict[GateKind, float]
    diameters: tuple[DiameterRow, ...] = DIAMETER_TABLE

    def __post_init__(self):
        for kind, v in self.sigma_di.items():
            if v < 0:
                raise LibraryError(f"negative area for {kind}: {v}")

    def lookup(self, kind: GateKind) -> float:
        try:
            return self.sigma_di[kind]
        except KeyError:
            raise LibraryError(f"cost library {self.name!r} has no entry "
                               f"for {kind}") from None

    def missing_for(self, net: Netlist) -> list[GateKind]:
        used = {g.kind for g in net.gates}
        return sorted((k for k in used if k not in self.sigma_di),
                      key=lambda k: k.value)

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "sigma_di": {k.value: v for k, v in self.sigma_di.items()},
            "diameters": [{"n": r.n, "diameter_nm": r.diameter_nm,
                           "vth_v": r.vth_v} for r in self.diameters],
        }, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CostLibrary":
        doc = json.loads(text)
        return cls(name=doc.get("name", "custom"),
                   sigma_di={GateKind(k): float(v)
                             for k, v in doc["sigma_di"].items()},
                   diameters=tuple(DiameterRow(r["n"], r["diameter_nm"],
                                               r["vth_v"])
                                   for r in doc.get("diameters", ())) or
                   DIAMETER_TABLE)


def default_cost_library() -> CostLibrary:
    """Diameter-sum costs for the bundled 32 nm CNTFET cells.

    QM1 is a block cost (decoders and muxes included); QFAC2WC reuses
    the QFAC2 figure since no separate number is available.
    """
    return CostLibrary(name="cntfet-32nm-default", sigma_di={
        GateKind.AND: 8.9,
        GateKind.BIN_HA: 18.0,
        GateKind.BIN_FA: 32.0,
        GateKind.QHA: 83.0,
        GateKind.QFAC2: 227.0,
        GateKind.QFAC2WC: 227.0,
        GateKind.QM1: 132.0,
        GateKind.MUX4: 0.0,
        GateKind.DECODER: 0.0,
    })


def area_estimate(net: Netlist, lib: CostLibrary) -> float:
    """Sum of per-gate diameter sums, in nanometers."""
    missing = lib.missing_for(net)
    if missing:
        raise LibraryError(f"cost library {lib.name!r} missing entries for "
                           + ", ".join(k.value for k in missing))
    return sum(lib.lookup(g.kind) for g in net.gates)


# ---------------------------------------------------------------------------
# timing library
# ---------------------------------------------------------------------------

@dataclass
class TimingLibrary:
    """Per (kind, output port) propagation delays in picoseconds."""

    name: str
    delays: dict[tuple[GateKind, str], float]
    load_note: str = ""

    def __post_init__(self):
        for key, v in self.delays.items():
            if v < 0:
                raise LibraryError(f"negative delay for {key}: {v}")

    def delay(self, kind: GateKind, port: str) -> float:
        try:
            return self.delays[(kind, port)]
        except KeyError:
            raise LibraryError(f"timing library {self.name!r} has no entry "
                               f"for {kind}.{port}") from None

    def missing_for(self, net: Netlist) -> list[str]:
        out = []
        for kind in sorted({g.kind for g in net.gates}, key=lambda k: k.value):
            for pname, _ in PORTS[kind].outputs:
                if (kind, pname) not in self.delays:
                    out.append(f"{kind.value}.{pname}")
        return out

    def scaled(self, k: float, name: str | None = None) -> "TimingLibrary":
        if k <= 0:
            raise ValueError("scale factor must be positive")
        return TimingLibrary(name=name or f"{self.name}*{k}",
                             delays={key: v * k
                                     for key, v in self.delays.items()},
                             load_note=self.load_note)

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "load_note": self.load_note,
            "delays": {f"{k.value}.{p}": v
                       for (k, p), v in self.delays.items()},
        }, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TimingLibrary":
        doc = json.loads(text)
        delays = {}
        for key, v in doc["delays"].items():
            kname, _, port = key.partition(".")
            delays[(GateKind(kname), port)] = float(v)
        return cls(name=doc.get("name", "custom"), delays=delays,
                   load_note=doc.get("load_note", ""))


def _uniform_delays(kinds_ps: dict[GateKind, float]) \
        -> dict[tuple[GateKind, str], float]:
    out = {}
    for kind, ps in kinds_ps.items():
        for pname, _ in PORTS[kind].outputs:
            out[(kind, pname)] = ps
    return out


# Calibration anchors: aggregate worst-path delays of the generated
# reference designs at 2 fF load.  The 8x8-bit worst path crosses 15
# adder cells (tree depth 4 plus an 11-cell ripple chain); the 4x4-quit
# path crosses 7 (4 QFAC2 in the tree, then QHA + QFAC2 + QFAC2WC).
BINARY_8X8_PATH_CELLS = 15
QUATERNARY_4X4_PATH_CELLS = 7
_AGG_BIN_0V9_PS = 312.0
_AGG_BIN_0V45_PS = 799.0
_AGG_QUAT_0V9_PS = 646.0
QM1_DELAY_0V9_PS = 118.0


def timing_binary_0v9() -> TimingLibrary:
    d = _AGG_BIN_0V9_PS / BINARY_8X8_PATH_CELLS
    return TimingLibrary(
        name="binary-0.9v",
        delays=_uniform_delays({GateKind.AND: 0.0, GateKind.BIN_HA: d,
                                GateKind.BIN_FA: d, GateKind.MUX4: 0.0,
                                GateKind.DECODER: 0.0}),
        load_note="2fF, calibrated to the 8x8 aggregate worst path")


def timing_binary_0v45() -> TimingLibrary:
    d = _AGG_BIN_0V45_PS / BINARY_8X8_PATH_CELLS
    return TimingLibrary(
        name="binary-0.45v",
        delays=_uniform_delays({GateKind.AND: 0.0, GateKind.BIN_HA: d,
                                GateKind.BIN_FA: d, GateKind.MUX4: 0.0,
                                GateKind.DECODER: 0.0}),
        load_note="2fF, calibrated to the 8x8 aggregate worst path")


def timing_quaternary_0v9() -> TimingLibrary:
    d = _AGG_QUAT_0V9_PS / QUATERNARY_4X4_PATH_CELLS
    return TimingLibrary(
        name="quaternary-0.9v",
        delays=_uniform_delays({GateKind.QM1: QM1_DELAY_0V9_PS,
                                GateKind.QHA: d, GateKind.QFAC2: d,
                                GateKind.QFAC2WC: d, GateKind.MUX4: 0.0,
                                GateKind.DECODER: 0.0}),
        load_note="2fF, calibrated to the 4x4 aggregate worst path")


TIMING_PRESETS = {
    "binary-0.9v": timing_binary_0v9,
    "binary-0.45v": timing_binary_0v45,
    "quaternary-0.9v": timing_quaternary_0v9,
}


def calibrate_timing(constraints, equal_groups=(), name="calibrated",
                     load_note="") -> TimingLibrary:
    """Least-squares fit of per-kind delays to aggregate path delays.

    ``constraints`` is a list of (kind -> traversal count, observed ps)
    pairs.  ``equal_groups`` ties kinds to a shared delay (the usual
    symmetry assumption, e.g. FA and HA propagate alike); without enough
    ties a single aggregate cannot pin several kinds and the fit raises
    :class:`CalibrationError` naming the free variables.
    """
    if not constraints:
        raise CalibrationError("at least one constraint required")
    kinds = sorted({k for counts, _ in constraints for k in counts},
                   key=lambda k: k.value)
    group_of = {}
    groups = [set(g) for g in equal_groups]
    for kind in kinds:
        holder = next((i for i, g in enumerate(groups) if kind in g), None)
        if holder is None:
            groups.append({kind})
            holder = len(groups) - 1
        group_of[kind] = holder
    used = sorted({group_of[k] for k in kinds})
    col = {g: i for i, g in enumerate(used)}

    a = np.zeros((len(constraints), len(used)))
    b = np.zeros(len(constraints))
    for r, (counts, observed) in enumerate(constraints):
        for kind, cnt in counts.items():
            a[r, col[group_of[kind]]] += cnt
        b[r] = observed
    rank = np.linalg.matrix_rank(a)
    if rank < len(used):
        # identify unconstrained columns through the null space
        _, s, vt = np.linalg.svd(a)
        null = vt[rank:]
        free = {kinds[i] for i in range(len(kinds))
                if any(abs(null[:, col[group_of[kinds[i]]]]) > 1e-9)}
        raise CalibrationError(
            "underdetermined calibration; free variables: "
            + ", ".join(sorted(k.value for k in free)))
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    per_kind = {k: float(sol[col[group_of[k]]]) for k in kinds}
    if any(v < 0 for v in per_kind.values()):
        raise CalibrationError(f"fit produced negative delays: {per_kind}")
    return TimingLibrary(name=name, delays=_uniform_delays(per_kind),
                         load_note=load_note)


# ---------------------------------------------------------------------------
# critical path
# ---------------------------------------------------------------------------

@dataclass
class CriticalPath:
    delay_ps: float
    gates: list[str]
    kinds: list[GateKind]

    def kind_names(self) -> list[str]:
        return [k.value for k in self.kinds]


def critical_path(net: Netlist, lib: TimingLibrary,
                  exclude_kinds=FRONTEND_KINDS) -> CriticalPath:
    """Longest weighted input-to-output path (static analysis).

    Gate kinds in ``exclude_kinds`` contribute zero delay and are left
    out of the reported sequence (by default the digit-product stage).
    Ties between equally late paths break toward the lexicographically
    smallest gate-id sequence.
    """
    missing = lib.missing_for(net)
    if missing:
        raise LibraryError(f"timing library {lib.name!r} missing entries "
                           "for " + ", ".join(missing))
    exclude = frozenset(exclude_kinds)
    neg_inf = float("-inf")

    order = topo_order(net)
    consumers: dict[str, list] = {}
    for g in order:
        for w in g.inputs:
            consumers.setdefault(w, []).append(g)

    def gate_delay(g, port_idx):
        if g.kind in exclude:
            return 0.0
        return lib.delay(g.kind, PORTS[g.kind].outputs[port_idx][0])

    # suffix potential per wire: max remaining delay down to any output
    outputs = set(net.primary_outputs)
    suffix = {w: (0.0 if w in outputs else neg_inf) for w in net.wires}
    for g in reversed(order):
        best = neg_inf
        for k, w in enumerate(g.outputs):
            if suffix[w] > neg_inf:
                best = max(best, gate_delay(g, k) + suffix[w])
        if best > neg_inf:
            for w in g.inputs:
                if suffix[w] < best:
                    suffix[w] = best

    total = max((suffix[w] for w in net.primary_inputs), default=neg_inf)
    if total == neg_inf or not net.gates:
        return CriticalPath(0.0, [], [])

    # forward greedy reconstruction: among equally late continuations the
    # lexicographically smallest gate id wins, making the report stable
    eps = 1e-9
    frontier = {w for w in net.primary_inputs if suffix[w] >= total - eps}
    remaining = total
    gates_seq: list[str] = []
    kinds_seq: list[GateKind] = []
    while remaining > eps or not (frontier & outputs):
        candidates = []
        for w in frontier:
            for g in consumers.get(w, ()):
                for k, ow in enumerate(g.outputs):
                    tail = suffix[ow]
                    if ow in outputs:
                        tail = max(tail, 0.0)
                    if tail == neg_inf:
                        continue
                    if abs(gate_delay(g, k) + tail - remaining) <= eps:
                        candidates.append((g, k))
        if not candidates:
            break
        g, k = min(candidates, key=lambda t: (t[0].id, t[1]))
        if g.kind not in exclude:
            gates_seq.append(g.id)
            kinds_seq.append(g.kind)
        remaining -= gate_delay(g, k)
        frontier = {g.outputs[k]}
    return CriticalPath(total, gates_seq, kinds_seq)


# ---------------------------------------------------------------------------
# comparison reports
# ---------------------------------------------------------------------------

@dataclass
class DesignMetrics:
    label: str
    radix: int
    width: int
    inventory: dict[str, int]
    area_nm: float
    delay_ps: float
    path_kinds: list[str]
    frontend_delay_ps: float
    energy: float | None = None  # optional per-gate attribute, no defaults


@dataclass
class ComparisonReport:
    designs: list[DesignMetrics]
    pair_ratios: list[dict]
    component_ratios: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({
            "designs": [vars(d) for d in self.designs],
            "pair_ratios": self.pair_ratios,
            "component_ratios": self.component_ratios,
        }, indent=2) + "\n"

    def to_markdown(self) -> str:
        lines = ["| design | radix | width | gates | area ΣDi (nm) | "
                 "worst path (ps) | digit stage (ps) |",
                 "|---|---|---|---|---|---|---|"]
        for d in self.designs:
            inv = " ".join(f"{k}:{v}" for k, v in sorted(d.inventory.items()))
            lines.append(f"| {d.label} | {d.radix} | {d.width} | {inv} | "
                         f"{d.area_nm:g} | {d.delay_ps:g} | "
                         f"{d.frontend_delay_ps:g} |")
        if self.pair_ratios:
            lines += ["", "| pair | area ratio | delay ratio | smaller area "
                      "| faster |", "|---|---|---|---|---|"]
            for r in self.pair_ratios:
                lines.append(f"| {r['pair']} | x{r['area_ratio']:.2f} | "
                             f"x{r['delay_ratio']:.2f} | {r['smaller_area']} "
                             f"| {r['faster']} |")
        if self.component_ratios:
            lines += ["", "| component ratio | value |", "|---|---|"]
            for k, v in self.component_ratios.items():
                lines.append(f"| {k} | {v:.4g} |")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        rows = ["section,key,value"]
        for d in self.designs:
            rows.append(f"design,{d.label}.area_nm,{d.area_nm:g}")
            rows.append(f"design,{d.label}.delay_ps,{d.delay_ps:g}")
            for k, v in sorted(d.inventory.items()):
                rows.append(f"design,{d.label}.count.{k},{v}")
        for r in self.pair_ratios:
            rows.append(f"pair,{r['pair']}.area_ratio,{r['area_ratio']:.6g}")
            rows.append(f"pair,{r['pair']}.delay_ratio,{r['delay_ratio']:.6g}")
        for k, v in self.component_ratios.items():
            rows.append(f"component,{k},{v:.6g}")
        return "\n".join(rows) + "\n"


def _metrics_for(label: str, net: Netlist, cost: CostLibrary,
                 timing: TimingLibrary) -> DesignMetrics:
    cp = critical_path(net, timing)
    # the digit-product stage sits outside the path sum; report its own
    # delay alongside so nothing is hidden
    frontend = 0.0
    kinds_used = {g.kind for g in net.gates}
    for kind in FRONTEND_KINDS & kinds_used:
        for pname, _ in PORTS[kind].outputs:
            frontend = max(frontend, timing.delays.get((kind, pname), 0.0))
    return DesignMetrics(label=label, radix=net.radix, width=net.width,
                         inventory=net.inventory(),
                         area_nm=area_estimate(net, cost),
                         delay_ps=cp.delay_ps, path_kinds=cp.kind_names(),
                         frontend_delay_ps=frontend)


def compare(designs) -> ComparisonReport:
    """Build a comparison over (label, netlist, cost_lib, timing_lib) tuples.

    Reports absolute metrics per design, pairwise area/delay ratios
    (first named design over second), and, whenever a quaternary design
    is paired with a binary one, the component-level adder ratios.
    """
    if len(designs) < 2:
        raise ValueError("compare needs at least two designs")
    metrics = [_metrics_for(*d) for d in designs]
    pair_ratios = []
    component: dict[str, float] = {}
    for i in range(len(metrics)):
        for j in range(i + 1, len(metrics)):
            a, b = metrics[i], metrics[j]
            ratio = {
                "pair": f"{a.label} vs {b.label}",
                "area_ratio": a.area_nm / b.area_nm if b.area_nm else
                float("inf"),
                "delay_ratio": a.delay_ps / b.delay_ps if b.delay_ps else
                float("inf"),
            }
            ratio["smaller_area"] = a.label if a.area_nm <= b.area_nm else b.label
            ratio["faster"] = a.label if a.delay_ps <= b.delay_ps else b.label
            pair_ratios.append(ratio)
            quat, binr = None, None
            if a.radix == 4 and b.radix == 2:
                quat, binr = (i, a), (j, b)
            elif b.radix == 4 and a.radix == 2:
                quat, binr = (j, b), (i, a)
            if quat and not component:
                qi, qm = quat
                bi, bm = binr
                qcost = designs[qi][2]
                bcost = designs[bi][2]
                component = _component_ratios(qm, bm, qcost, bcost)
    return ComparisonReport(designs=metrics, pair_ratios=pair_ratios,
                            component_ratios=component)


def _component_ratios(qm: DesignMetrics, bm: DesignMetrics,
                      qcost: CostLibrary, bcost: CostLibrary) -> dict:
    out = {}
    try:
        out["ha_area_ratio"] = (qcost.lookup(GateKind.QHA)
                                / bcost.lookup(GateKind.BIN_HA))
        out["fa_area_ratio"] = (qcost.lookup(GateKind.QFAC2)
                                / bcost.lookup(GateKind.BIN_FA))
    except LibraryError:
        pass
    qha = qm.inventory.get("QHA", 0)
    qfa = qm.inventory.get("QFAC2", 0) + qm.inventory.get("QFAC2WC", 0)
    bha = bm.inventory.get("BIN_HA", 0)
    bfa = bm.inventory.get("BIN_FA", 0)
    if bha:
        out["ha_count_ratio"] = qha / bha
    if bfa:
        out["fa_count_ratio"] = qfa / bfa
    return out
