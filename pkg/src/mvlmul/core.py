"""Logic-value domain and behavioral gate semantics.

Signals carry small unsigned digits. A wire is binary (max 1), ternary
(max 2) or quaternary (max 3); the quaternary multipliers mix all three,
because digit products carry in ternary while sums stay quaternary.

Every gate used by the netlist generator is defined here as a pure
function over digit values, together with its port signature (input and
output ranges). The simulator evaluates netlists through the
:data:`KERNELS` table; the typed wrappers (:func:`qmul1`, :func:`qfac2`,
...) are the public single-gate API.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product


class LogicError(ValueError):
    """A digit value is outside the range its wire or port allows."""


@dataclass(frozen=True)
class LogicLevel:
    """A digit value paired with the radix range of its carrier.

    ``range_max`` is 1 for binary, 2 for ternary and 3 for quaternary.
    """

    value: int
    range_max: int

    def __post_init__(self):
        if self.range_max not in (1, 2, 3):
            raise LogicError(f"range_max must be 1, 2 or 3, got {self.range_max}")
        if not 0 <= self.value <= self.range_max:
            raise LogicError(
                f"value {self.value} outside 0..{self.range_max}")


def bit(v: int) -> LogicLevel:
    return LogicLevel(v, 1)


def trit(v: int) -> LogicLevel:
    return LogicLevel(v, 2)


def quit(v: int) -> LogicLevel:
    return LogicLevel(v, 3)


def _check(name: str, v: int, hi: int) -> None:
    if not isinstance(v, int) or not 0 <= v <= hi:
        raise LogicError(f"{name}={v!r} outside 0..{hi}")


# ---------------------------------------------------------------------------
# unary quaternary operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnaryTable:
    """A quaternary unary operator given by its four output digits.

    The name encodes the outputs for inputs 0,1,2,3: operator "0321"
    maps 0->0, 1->3, 2->2, 3->1.
    """

    name: str
    outputs: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.outputs) != 4:
            raise LogicError("unary table needs exactly 4 entries")
        for v in self.outputs:
            if not 0 <= v <= 3:
                raise LogicError(f"unary output {v} outside 0..3")

    @classmethod
    def from_name(cls, name: str) -> "UnaryTable":
        if len(name) != 4 or not name.isdigit():
            raise LogicError(f"bad unary operator name {name!r}")
        return cls(name, tuple(int(c) for c in name))


#: the unary operators used inside the digit multiplier, plus identity.
STANDARD_TABLES = {
    name: UnaryTable.from_name(name)
    for name in ("0000", "0123", "0202", "0321", "0001", "0011", "0012")
}


def unary_apply(table: UnaryTable, x: LogicLevel) -> LogicLevel:
    """Apply a unary operator table to a quaternary input."""
    _check("x", x.value, 3)
    return quit(table.outputs[x.value])


def decode_thresholds(x: LogicLevel) -> tuple[LogicLevel, LogicLevel, LogicLevel]:
    """Threshold-decode a quit into (nqi, iqi, pqi) pseudo-binary levels.

    The three outputs swing between 0 and 3 (full quaternary rails), one
    threshold each: nqi drops first, pqi last.

        in   nqi iqi pqi
        0    3   3   3
        1    0   3   3
        2    0   0   3
        3    0   0   0
    """
    _check("x", x.value, 3)
    n, i, p = _decode_vals(x.value)
    return quit(n), quit(i), quit(p)


def _decode_vals(x: int) -> tuple[int, int, int]:
    return (3 if x < 1 else 0, 3 if x < 2 else 0, 3 if x < 3 else 0)


def mux4(sel: LogicLevel, in0: LogicLevel, in1: LogicLevel,
         in2: LogicLevel, in3: LogicLevel) -> LogicLevel:
    """4-way mux with quaternary select: returns in<sel>."""
    _check("sel", sel.value, 3)
    return (in0, in1, in2, in3)[sel.value]


# ---------------------------------------------------------------------------
# arithmetic cells
# ---------------------------------------------------------------------------

def _qm1_vals(a: int, b: int) -> tuple[int, int]:
    p = a * b
    return p % 4, p // 4


def qmul1(a: LogicLevel, b: LogicLevel) -> tuple[LogicLevel, LogicLevel]:
    """1x1 quaternary digit multiplier: product quit and ternary carry.

    Satisfies 4*carry + product == a*b for every input pair; the carry
    never exceeds 2 (max total is 9).
    """
    _check("a", a.value, 3)
    _check("b", b.value, 3)
    qm, qc = _qm1_vals(a.value, b.value)
    return quit(qm), trit(qc)


def qmul1_mux(a: LogicLevel, b: LogicLevel) -> tuple[LogicLevel, LogicLevel]:
    """Digit multiplier decomposed into a selector over unary operators.

    The product selects between 0, identity, 0202 and 0321 applied to
    ``b``; the carry selects between 0, 0, 0011 and 0012.  Equals
    :func:`qmul1` on all 16 input pairs.
    """
    t = STANDARD_TABLES
    qm = mux4(a, unary_apply(t["0000"], b), unary_apply(t["0123"], b),
              unary_apply(t["0202"], b), unary_apply(t["0321"], b))
    qc = mux4(a, unary_apply(t["0000"], b), unary_apply(t["0000"], b),
              unary_apply(t["0011"], b), unary_apply(t["0012"], b))
    return quit(qm.value), trit(qc.value)


def qfac2(a: LogicLevel, b: LogicLevel, cin: LogicLevel) \
        -> tuple[LogicLevel, LogicLevel]:
    """Quaternary full adder with ternary carries.

    sum = (a+b+cin) mod 4, cout = (a+b+cin) div 4.  The carry-in port is
    ternary; cin=3 is rejected because a generator that produces it has
    violated the carry discipline.  Max total 3+3+2=8, so cout <= 2.
    """
    _check("a", a.value, 3)
    _check("b", b.value, 3)
    if cin.value > 2:
        raise LogicError(f"carry-in {cin.value} outside 0..2")
    t = a.value + b.value + cin.value
    return quit(t % 4), trit(t // 4)


def qfac2wc(a: LogicLevel, b: LogicLevel, cin: LogicLevel) -> LogicLevel:
    """Carry-less variant of :func:`qfac2` for the top of a final adder."""
    s, _ = qfac2(a, b, cin)
    return s


def qha(a: LogicLevel, b: LogicLevel) -> tuple[LogicLevel, LogicLevel]:
    """Quaternary half adder: sum quit plus a binary carry."""
    _check("a", a.value, 3)
    _check("b", b.value, 3)
    t = a.value + b.value
    return quit(t % 4), bit(t // 4)


def bin_fa(a: LogicLevel, b: LogicLevel, cin: LogicLevel) \
        -> tuple[LogicLevel, LogicLevel]:
    """Binary full adder."""
    for n, x in (("a", a), ("b", b), ("cin", cin)):
        _check(n, x.value, 1)
    t = a.value + b.value + cin.value
    return bit(t & 1), bit(t >> 1)


def bin_ha(a: LogicLevel, b: LogicLevel) -> tuple[LogicLevel, LogicLevel]:
    """Binary half adder."""
    _check("a", a.value, 1)
    _check("b", b.value, 1)
    t = a.value + b.value
    return bit(t & 1), bit(t >> 1)


def and2(a: LogicLevel, b: LogicLevel) -> LogicLevel:
    """2-input AND, the 1x1 binary multiplier."""
    _check("a", a.value, 1)
    _check("b", b.value, 1)
    return bit(a.value & b.value)


# ---------------------------------------------------------------------------
# gate kinds and port signatures
# ---------------------------------------------------------------------------

class GateKind(enum.Enum):
    AND = "AND"
    BIN_HA = "BIN_HA"
    BIN_FA = "BIN_FA"
    QM1 = "QM1"
    QHA = "QHA"
    QFAC2 = "QFAC2"
    QFAC2WC = "QFAC2WC"
    MUX4 = "MUX4"
    DECODER = "DECODER"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PortSpec:
    """Named ports with the maximum digit each port may carry."""

    inputs: tuple[tuple[str, int], ...]
    outputs: tuple[tuple[str, int], ...]


PORTS = {
    GateKind.AND: PortSpec((("a", 1), ("b", 1)), (("y", 1),)),
    GateKind.BIN_HA: PortSpec((("a", 1), ("b", 1)), (("sum", 1), ("cout", 1))),
    GateKind.BIN_FA: PortSpec((("a", 1), ("b", 1), ("cin", 1)),
                              (("sum", 1), ("cout", 1))),
    GateKind.QM1: PortSpec((("a", 3), ("b", 3)), (("product", 3), ("carry", 2))),
    GateKind.QHA: PortSpec((("a", 3), ("b", 3)), (("sum", 3), ("cout", 1))),
    GateKind.QFAC2: PortSpec((("a", 3), ("b", 3), ("cin", 2)),
                             (("sum", 3), ("cout", 2))),
    GateKind.QFAC2WC: PortSpec((("a", 3), ("b", 3), ("cin", 2)), (("sum", 3),)),
    GateKind.MUX4: PortSpec((("sel", 3), ("in0", 3), ("in1", 3),
                             ("in2", 3), ("in3", 3)), (("y", 3),)),
    GateKind.DECODER: PortSpec((("x", 3),),
                               (("nqi", 3), ("iqi", 3), ("pqi", 3))),
}


#: int-level gate kernels used by the netlist simulator.
KERNELS = {
    GateKind.AND: lambda a, b: (a & b,),
    GateKind.BIN_HA: lambda a, b: ((a + b) & 1, (a + b) >> 1),
    GateKind.BIN_FA: lambda a, b, c: ((a + b + c) & 1, (a + b + c) >> 1),
    GateKind.QM1: lambda a, b: _qm1_vals(a, b),
    GateKind.QHA: lambda a, b: ((a + b) % 4, (a + b) // 4),
    GateKind.QFAC2: lambda a, b, c: ((a + b + c) % 4, (a + b + c) // 4),
    GateKind.QFAC2WC: lambda a, b, c: ((a + b + c) % 4,),
    GateKind.MUX4: lambda s, i0, i1, i2, i3: ((i0, i1, i2, i3)[s],),
    GateKind.DECODER: lambda x: _decode_vals(x),
}


def evaluate_gate(kind: GateKind, inputs: tuple[int, ...]) -> tuple[int, ...]:
    """Evaluate one gate on raw digit values, with port range checks."""
    spec = PORTS[kind]
    if len(inputs) != len(spec.inputs):
        raise LogicError(f"{kind} takes {len(spec.inputs)} inputs, "
                         f"got {len(inputs)}")
    for (name, hi), v in zip(spec.inputs, inputs):
        if not 0 <= v <= hi:
            raise LogicError(f"{kind}.{name}={v} outside 0..{hi}")
    return tuple(KERNELS[kind](*inputs))


def output_ranges(kind: GateKind, in_ranges: tuple[int, ...]) -> tuple[int, ...]:
    """Tight per-output ranges for a gate given its input wire ranges.

    Carry outputs narrow when the inputs cannot reach the port maximum
    (a quaternary adder fed one quit and two ternaries only ever carries
    a bit); the netlist generator uses this to type every wire.
    """
    spec = PORTS[kind]
    if len(in_ranges) != len(spec.inputs):
        raise LogicError(f"{kind} takes {len(spec.inputs)} inputs")
    for (name, hi), r in zip(spec.inputs, in_ranges):
        if r > hi:
            raise LogicError(f"{kind}.{name} accepts at most {hi}, "
                             f"wire range is {r}")
    if kind in (GateKind.QHA, GateKind.QFAC2, GateKind.QFAC2WC):
        t = sum(in_ranges)
        out = (min(3, t), t // 4)
        return out[:len(spec.outputs)]
    if kind in (GateKind.BIN_HA, GateKind.BIN_FA):
        t = sum(in_ranges)
        return (min(1, t), t >> 1)
    # small domains: enumerate exactly
    maxima = [0] * len(spec.outputs)
    for vals in product(*(range(r + 1) for r in in_ranges)):
        for i, o in enumerate(KERNELS[kind](*vals)):
            if o > maxima[i]:
                maxima[i] = o
    return tuple(maxima)
