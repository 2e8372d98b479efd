"""Structural SPICE-style export.

Each gate kind becomes one black-box ``.SUBCKT`` (port list only, no
transistor body), and the netlist becomes a top-level subcircuit that
instantiates them.  The text depends only on the netlist, so exporting
the same design twice is byte-identical.  No simulator is invoked or
implied; the deck is a structural interchange format.
"""

from __future__ import annotations

from .core import PORTS
from .netlist import Netlist


def export_spice(net: Netlist, title: str | None = None) -> str:
    """Render a netlist as a hierarchical structural deck."""
    kinds = sorted({g.kind for g in net.gates}, key=lambda k: k.value)
    name = title or f"mul_r{net.radix}_w{net.width}"
    lines = [f"* {name}: structural deck, behavioral black-box cells",
             f"* radix={net.radix} width={net.width} "
             f"gates={len(net.gates)} wires={len(net.wires)}"]
    for k, wid in enumerate(net.primary_outputs):
        lines.append(f"* product digit {k} = {wid}")
    lines.append("")

    for kind in kinds:
        spec = PORTS[kind]
        ports = " ".join(n for n, _ in spec.inputs + spec.outputs)
        lines.append(f".SUBCKT {kind.value} {ports}")
        lines.append(f"* behavioral black box ({len(spec.inputs)} in, "
                     f"{len(spec.outputs)} out)")
        lines.append(".ENDS")
        lines.append("")

    ports = " ".join(net.primary_inputs + net.primary_outputs)
    lines.append(f".SUBCKT {name} {ports}")
    for g in net.gates:
        conns = " ".join(g.inputs + g.outputs)
        lines.append(f"X{g.id} {conns} {g.kind.value}")
    lines.append(".ENDS")
    lines.append(".END")
    return "\n".join(lines) + "\n"
