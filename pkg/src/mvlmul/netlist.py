"""Gate-level netlist: an immutable DAG of typed gate instances.

Wires are single-driver and carry a ``range_max`` annotation (1/2/3).
The central structural rule is the carry discipline: a gate input port
only accepts wires whose range fits the port, so a quaternary wire can
never reach a ternary carry-in.  :func:`validate_netlist` checks that
rule along with acyclicity, single drivers and output completeness.

Netlists serialize to a versioned JSON document; see :meth:`Netlist.to_json`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .core import GateKind, PORTS

JSON_FORMAT = "mvl-netlist"
JSON_VERSION = 1


class NetlistError(ValueError):
    """Raised when a netlist document cannot be parsed or built."""


@dataclass(frozen=True)
class Wire:
    id: str
    range_max: int  # 1 = binary, 2 = ternary, 3 = quaternary


@dataclass(frozen=True)
class GateInstance:
    id: str
    kind: GateKind
    inputs: tuple[str, ...]   # wire ids, in port order
    outputs: tuple[str, ...]  # wire ids, in port order


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass
class Netlist:
    """A generated or hand-built multiplier netlist.

    ``stats`` carries generator bookkeeping (stage count, tree/final-add
    inventories); it is advisory and not part of the structural identity.
    """

    radix: int
    width: int
    wires: dict[str, Wire]
    gates: list[GateInstance]
    primary_inputs: list[str]
    primary_outputs: list[str]
    stats: dict = field(default_factory=dict)

    # -- queries ------------------------------------------------------

    def inventory(self) -> dict[str, int]:
        """Per-kind gate counts, e.g. ``{"AND": 64, "BIN_FA": 47, ...}``."""
        counts = Counter(g.kind.value for g in self.gates)
        return dict(sorted(counts.items()))

    def drivers(self) -> dict[str, tuple]:
        """Map wire id -> ("input", name) or (gate_id, port_index)."""
        drv: dict[str, tuple] = {}
        for name in self.primary_inputs:
            drv.setdefault(name, ("input", name))
        for g in self.gates:
            for k, w in enumerate(g.outputs):
                if w in drv:
                    drv[w] = ("multi", w)
                else:
                    drv[w] = (g.id, k)
        return drv

    # -- serialization -------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "format": JSON_FORMAT,
            "version": JSON_VERSION,
            "radix": self.radix,
            "width": self.width,
            "inputs": list(self.primary_inputs),
            "outputs": list(self.primary_outputs),
            "wires": [{"id": w.id, "range_max": w.range_max}
                      for w in self.wires.values()],
            "gates": [{"id": g.id, "kind": g.kind.value,
                       "inputs": list(g.inputs), "outputs": list(g.outputs)}
                      for g in self.gates],
        }
        if self.stats:
            doc["meta"] = self.stats
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Netlist":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise NetlistError(f"not valid JSON: {e}") from None
        if not isinstance(doc, dict) or doc.get("format") != JSON_FORMAT:
            raise NetlistError("not a netlist document "
                               f"(format={doc.get('format')!r})")
        if doc.get("version") != JSON_VERSION:
            raise NetlistError(f"unsupported version {doc.get('version')!r}")
        try:
            wires = {w["id"]: Wire(w["id"], int(w["range_max"]))
                     for w in doc["wires"]}
            gates = [GateInstance(g["id"], GateKind(g["kind"]),
                                  tuple(g["inputs"]), tuple(g["outputs"]))
                     for g in doc["gates"]]
            return cls(radix=int(doc["radix"]), width=int(doc["width"]),
                       wires=wires, gates=gates,
                       primary_inputs=list(doc["inputs"]),
                       primary_outputs=list(doc["outputs"]),
                       stats=doc.get("meta", {}))
        except (KeyError, TypeError, ValueError) as e:
            raise NetlistError(f"malformed netlist document: {e}") from None


def validate_netlist(n: Netlist) -> list[Violation]:
    """Check structural invariants; returns an empty list when sound.

    Checks: field sanity, wire ranges, port arity, single drivers,
    dangling inputs, port/wire range compatibility (no quaternary wire
    on a carry port), acyclicity, and product-output completeness.
    """
    v: list[Violation] = []
    if n.radix not in (2, 4):
        v.append(Violation("radix", f"radix must be 2 or 4, got {n.radix}"))
    if n.width < 1:
        v.append(Violation("width", f"width must be >= 1, got {n.width}"))

    for w in n.wires.values():
        if w.range_max not in (1, 2, 3):
            v.append(Violation("wire-range",
                               f"wire {w.id} has range_max {w.range_max}"))

    seen_gate_ids = set()
    driver_count: Counter = Counter()
    for name in n.primary_inputs:
        if name not in n.wires:
            v.append(Violation("missing-wire", f"input wire {name} undeclared"))
        driver_count[name] += 1

    for g in n.gates:
        if g.id in seen_gate_ids:
            v.append(Violation("dup-gate", f"gate id {g.id} reused"))
        seen_gate_ids.add(g.id)
        spec = PORTS[g.kind]
        if len(g.inputs) != len(spec.inputs) or len(g.outputs) != len(spec.outputs):
            v.append(Violation("arity", f"gate {g.id} ({g.kind}) has "
                               f"{len(g.inputs)} in / {len(g.outputs)} out"))
            continue
        for (pname, pmax), wid in zip(spec.inputs, g.inputs):
            w = n.wires.get(wid)
            if w is None:
                v.append(Violation("missing-wire",
                                   f"gate {g.id} input {pname} -> {wid} undeclared"))
            elif w.range_max > pmax:
                v.append(Violation(
                    "range", f"gate {g.id} ({g.kind}) port {pname} accepts "
                    f"max {pmax} but wire {wid} carries up to {w.range_max}"))
        for (pname, pmax), wid in zip(spec.outputs, g.outputs):
            w = n.wires.get(wid)
            if w is None:
                v.append(Violation("missing-wire",
                                   f"gate {g.id} output {pname} -> {wid} undeclared"))
            else:
                driver_count[wid] += 1
                if w.range_max > pmax:
                    v.append(Violation(
                        "range", f"gate {g.id} ({g.kind}) output {pname} "
                        f"max {pmax} but wire {wid} declares {w.range_max}"))

    for wid in n.wires:
        c = driver_count[wid]
        if c == 0:
            v.append(Violation("undriven", f"wire {wid} has no driver"))
        elif c > 1:
            v.append(Violation("multi-driver", f"wire {wid} has {c} drivers"))

    for out in n.primary_outputs:
        if out not in n.wires:
            v.append(Violation("missing-wire", f"output wire {out} undeclared"))

    # completeness: a width-N multiplier emits 2N digits; the degenerate
    # binary 1x1 is a bare AND whose product is a single bit.
    expected = 2 * n.width
    if n.radix == 2 and n.width == 1:
        expected = 1
    if len(n.primary_outputs) != expected:
        v.append(Violation("outputs", f"expected {expected} product digits, "
                           f"got {len(n.primary_outputs)}"))

    v.extend(_check_acyclic(n))
    return v


def _check_acyclic(n: Netlist) -> list[Violation]:
    producer: dict[str, str] = {}
    for g in n.gates:
        for w in g.outputs:
            producer.setdefault(w, g.id)
    indeg = {g.id: 0 for g in n.gates}
    consumers: dict[str, list[str]] = {}
    for g in n.gates:
        for w in g.inputs:
            src = producer.get(w)
            if src is not None:
                indeg[g.id] += 1
                consumers.setdefault(src, []).append(g.id)
    queue = [gid for gid, d in indeg.items() if d == 0]
    done = 0
    while queue:
        gid = queue.pop()
        done += 1
        for nxt in consumers.get(gid, ()):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    if done != len(n.gates):
        stuck = sorted(gid for gid, d in indeg.items() if d > 0)
        return [Violation("cycle", "combinational cycle through "
                          + ", ".join(stuck[:8]))]
    return []


def topo_order(n: Netlist) -> list[GateInstance]:
    """Gates in dependency order; raises NetlistError on cycles."""
    producer = {}
    for g in n.gates:
        for w in g.outputs:
            producer.setdefault(w, g)
    ready = {w: True for w in n.primary_inputs}
    order: list[GateInstance] = []
    pending = list(n.gates)
    while pending:
        rest = []
        progressed = False
        for g in pending:
            if all(w in ready or producer.get(w) is None for w in g.inputs):
                order.append(g)
                for w in g.outputs:
                    ready[w] = True
                progressed = True
            else:
                rest.append(g)
        if not progressed:
            raise NetlistError("netlist has a combinational cycle")
        pending = rest
    return order


def disjoint_union(a: Netlist, b: Netlist, sep: str = "__") -> Netlist:
    """Combine two netlists side by side (ids prefixed, no shared wires).

    Useful for additivity checks; the result is a two-multiplier module
    rather than anything electrically meaningful.
    """
    wires: dict[str, Wire] = {}
    gates: list[GateInstance] = []
    ins: list[str] = []
    outs: list[str] = []
    for tag, net in (("a", a), ("b", b)):
        ren = lambda w: f"{tag}{sep}{w}"
        for w in net.wires.values():
            wires[ren(w.id)] = Wire(ren(w.id), w.range_max)
        for g in net.gates:
            gates.append(GateInstance(ren(g.id), g.kind,
                                      tuple(ren(w) for w in g.inputs),
                                      tuple(ren(w) for w in g.outputs)))
        ins.extend(ren(w) for w in net.primary_inputs)
        outs.extend(ren(w) for w in net.primary_outputs)
    return Netlist(radix=a.radix, width=max(a.width, b.width), wires=wires,
                   gates=gates, primary_inputs=ins, primary_outputs=outs)
