"""Wallace-tree multiplier generation for radix 2 and radix 4.

The flow is the classic three-step one: digit-product stage (AND gates
or 1x1 quit multipliers), row-grouped column reduction until every
column holds at most two dots, then a ripple final add.

Reduction policy
----------------
Rows are grouped in threes; inside a group each column compresses
3 dots into a full adder, 2 into a half adder, and single dots pass.
Sum dots stay in-column, carry dots move one column up.  In radix 4 the
full adder is QFAC2, whose carry-in port is ternary: the first dot with
range <= 2 is wired to the carry-in, and when a triple has no such dot
the group falls back to a QHA plus a pass-through.

Grouping order is deterministic.  Most matrices use consecutive triples
from the top; the 8-row binary matrix and the 4-row quaternary matrix
use fixed grouping plans (see ``_GROUPING_PLANS``) chosen so the
generated inventories and stage counts land on the reference totals for
the 8x8-bit and 2x2-quit designs.

Carries whose weight falls beyond the product width are provably zero
(the product of width-N operands always fits in 2N digits); such carry
outputs are left dangling, and the top gate of a quaternary final add
is rewritten to the carry-less QFAC2WC.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .core import GateKind, output_ranges
from .netlist import GateInstance, Netlist, Wire, validate_netlist


class NetgenError(ValueError):
    """Raised for invalid generator arguments or internal rule violations."""


@dataclass(frozen=True)
class Dot:
    """One partial-product term: a wire plus its value range."""

    wire: str
    range_max: int


class NetBuilder:
    """Accumulates wires and gates with deterministic ids."""

    def __init__(self):
        self.wires: dict[str, Wire] = {}
        self.gates: list[GateInstance] = []
        self._nwire = 0
        self._ngate = 0

    def add_input(self, name: str, range_max: int) -> str:
        self.wires[name] = Wire(name, range_max)
        return name

    def _new_wire(self, range_max: int) -> str:
        wid = f"n{self._nwire:05d}"
        self._nwire += 1
        # a provably-zero output still needs a legal (binary) wire
        self.wires[wid] = Wire(wid, max(1, range_max))
        return wid

    def add_gate(self, kind: GateKind, inputs: list[str]) \
            -> tuple[str, list[str], tuple[int, ...]]:
        """Instantiate a gate; returns (gate id, output wires, true ranges).

        Output wire ranges are the tight bounds computed from the input
        wire ranges; a true range of 0 means the output is constant zero.
        """
        in_ranges = tuple(self.wires[w].range_max for w in inputs)
        ranges = output_ranges(kind, in_ranges)
        outs = [self._new_wire(r) for r in ranges]
        gid = f"g{self._ngate:05d}"
        self._ngate += 1
        self.gates.append(GateInstance(gid, kind, tuple(inputs), tuple(outs)))
        return gid, outs, ranges

    def replace_with_wc(self, gate_id: str) -> None:
        """Rewrite a QFAC2 into QFAC2WC, dropping its carry wire."""
        for i, g in enumerate(self.gates):
            if g.id == gate_id:
                if g.kind is not GateKind.QFAC2:
                    raise NetgenError(f"{gate_id} is {g.kind}, not QFAC2")
                del self.wires[g.outputs[1]]
                self.gates[i] = GateInstance(g.id, GateKind.QFAC2WC,
                                             g.inputs, g.outputs[:1])
                return
        raise NetgenError(f"no gate {gate_id}")


@dataclass
class DotMatrix:
    """Partial-product dots, kept per row with column positions.

    ``rows`` preserves the reduction ordering; the column view used for
    heights and the capacity check is derived.
    """

    base: int
    width: int
    rows: list[dict[int, Dot]] = field(default_factory=list)
    max_product: int = 0

    def columns(self) -> list[list[Dot]]:
        cols: list[list[Dot]] = [[] for _ in range(self.width)]
        for row in self.rows:
            for c in sorted(row):
                cols[c].append(row[c])
        return cols

    def heights(self) -> list[int]:
        h = [0] * self.width
        for row in self.rows:
            for c in row:
                h[c] += 1
        return h

    def max_height(self) -> int:
        return max(self.heights(), default=0)

    def capacity(self) -> int:
        """Largest value the dot pattern can represent."""
        return sum(d.range_max * self.base ** c
                   for row in self.rows for c, d in row.items())

    def capacity_ok(self) -> bool:
        return self.capacity() >= self.max_product


# ---------------------------------------------------------------------------
# partial products
# ---------------------------------------------------------------------------

def build_pp_binary(builder: NetBuilder, x_width: int, y_width: int) -> DotMatrix:
    """AND-gate partial products; row j holds the XiYj terms at column i+j."""
    if x_width < 1 or y_width < 1:
        raise NetgenError("operand widths must be >= 1")
    m = DotMatrix(base=2, width=x_width + y_width,
                  max_product=(2 ** x_width - 1) * (2 ** y_width - 1))
    for j in range(y_width):
        row: dict[int, Dot] = {}
        for i in range(x_width):
            _, outs, rng = builder.add_gate(GateKind.AND, [f"x{i}", f"y{j}"])
            row[i + j] = Dot(outs[0], rng[0])
        m.rows.append(row)
    return m


def build_pp_quaternary(builder: NetBuilder, x_width: int, y_width: int) -> DotMatrix:
    """QM1 partial products: per y digit, a product row and a carry row.

    The digit product of pair (i, j) lands in column i+j; its ternary
    carry is a weight-4 term and lands in column i+j+1.  A width-N
    operand pair therefore yields 2N rows.
    """
    if x_width < 1 or y_width < 1:
        raise NetgenError("operand widths must be >= 1")
    m = DotMatrix(base=4, width=x_width + y_width,
                  max_product=(4 ** x_width - 1) * (4 ** y_width - 1))
    for j in range(y_width):
        prow: dict[int, Dot] = {}
        crow: dict[int, Dot] = {}
        for i in range(x_width):
            _, outs, rng = builder.add_gate(GateKind.QM1, [f"x{i}", f"y{j}"])
            prow[i + j] = Dot(outs[0], rng[0])
            if i + j + 1 < m.width:
                crow[i + j + 1] = Dot(outs[1], rng[1])
        m.rows.append(prow)
        m.rows.append(crow)
    return m


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

# Fixed grouping plans, keyed by (base, row count) and stage index.
# Entries list the row-index triples to group; unlisted rows pass through.
# The 8-row binary plan keeps the 8x8 totals at 47 FA + 16 HA; the 4-row
# quaternary plan reduces the 2x2-quit matrix in a single stage.
_GROUPING_PLANS = {
    (2, 8): {0: ((0, 1, 2), (3, 5, 6)),
             1: ((0, 1, 4), (2, 3, 5))},
    (4, 4): {0: ((1, 2, 3),)},
}


def _default_grouping(nrows: int) -> tuple[tuple[int, int, int], ...]:
    return tuple((3 * g, 3 * g + 1, 3 * g + 2) for g in range(nrows // 3))


def _full_adder_kind(base: int) -> GateKind:
    return GateKind.BIN_FA if base == 2 else GateKind.QFAC2


def _half_adder_kind(base: int) -> GateKind:
    return GateKind.BIN_HA if base == 2 else GateKind.QHA


def wallace_stage(builder: NetBuilder, matrix: DotMatrix,
                  grouping: tuple[tuple[int, int, int], ...] | None = None) \
        -> tuple[DotMatrix, list[str]]:
    """One reduction stage. A matrix already at height <= 2 is untouched.

    Returns the reduced matrix and the ids of the gates created.
    """
    if matrix.max_height() <= 2:
        return matrix, []
    if grouping is None:
        grouping = _default_grouping(len(matrix.rows))
    grouped = [i for trip in grouping for i in trip]
    if sorted(grouped) != sorted(set(grouped)) or \
            any(i >= len(matrix.rows) for i in grouped):
        raise NetgenError(f"bad grouping {grouping} for {len(matrix.rows)} rows")

    base = matrix.base
    new_rows: list[dict[int, Dot]] = []
    created: list[str] = []

    for trip in grouping:
        grp = [matrix.rows[i] for i in trip]
        srow: dict[int, Dot] = {}
        crow: dict[int, Dot] = {}
        spill: list[dict[int, Dot]] = []
        for c in sorted(set().union(*(set(r) for r in grp))):
            dots = [r[c] for r in grp if c in r]
            if len(dots) == 1:
                srow[c] = dots[0]
                continue
            use_full = len(dots) == 3
            if use_full and base == 4:
                ti = next((k for k, d in enumerate(dots) if d.range_max <= 2),
                          None)
                if ti is None:
                    use_full = False  # no legal carry-in: half adder instead
                else:
                    cin = dots.pop(ti)
                    dots.append(cin)  # cin is the last port
            if use_full:
                kind = _full_adder_kind(base)
                gid, outs, rng = builder.add_gate(
                    kind, [d.wire for d in dots])
                leftover = None
            else:
                kind = _half_adder_kind(base)
                gid, outs, rng = builder.add_gate(
                    kind, [dots[0].wire, dots[1].wire])
                leftover = dots[2] if len(dots) == 3 else None
            created.append(gid)
            srow[c] = Dot(outs[0], rng[0])
            if rng[1] > 0 and c + 1 < matrix.width:
                crow[c + 1] = Dot(outs[1], rng[1])
            # rng[1] == 0 or a carry beyond the top column is provably
            # zero; the wire stays dangling.
            if leftover is not None:
                placed = False
                if c not in crow:
                    crow[c] = leftover
                    placed = True
                if not placed:
                    for row in spill:
                        if c not in row:
                            row[c] = leftover
                            placed = True
                            break
                if not placed:
                    spill.append({c: leftover})
        new_rows.append(srow)
        if crow:
            new_rows.append(crow)
        new_rows.extend(spill)

    in_group = set(grouped)
    new_rows.extend(matrix.rows[i] for i in range(len(matrix.rows))
                    if i not in in_group)

    return DotMatrix(base=base, width=matrix.width, rows=new_rows,
                     max_product=matrix.max_product), created


def final_cpa(builder: NetBuilder, matrix: DotMatrix) \
        -> tuple[list[str], list[str]]:
    """Ripple final add over a height-<=2 matrix.

    Returns (product digit wires LSB-first, created gate ids).  A column
    with a single value passes straight through; two values make a half
    adder; two dots plus the incoming carry make a full adder.  The
    carry out of the top column is dangling (provably zero by operand
    capacity) unless it lands on a product column, in which case the
    bare carry wire is that digit.
    """
    if matrix.max_height() > 2:
        raise NetgenError("final add requires height <= 2 everywhere")
    base = matrix.base
    cols = matrix.columns()
    digits: list[str] = []
    created: list[str] = []
    carry: Dot | None = None
    for c in range(matrix.width):
        items = list(cols[c])
        if carry is not None:
            items.append(carry)
            carry = None
        if not items:
            if any(cols[k] for k in range(c + 1, matrix.width)):
                raise NetgenError(f"gap at column {c} inside the product")
            break  # product ends here
        if len(items) == 1:
            digits.append(items[0].wire)
            continue
        if len(items) == 2:
            kind = _half_adder_kind(base)
        elif len(items) == 3:
            # two dots plus the incoming carry; the carry sits last and
            # takes the (ternary) carry-in port
            kind = _full_adder_kind(base)
            if base == 4 and items[-1].range_max > 2:
                raise NetgenError(f"column {c}: carry-in wire "
                                  f"{items[-1].wire} is quaternary")
        else:
            raise NetgenError(f"column {c} has {len(items)} values")
        gid, outs, rng = builder.add_gate(kind, [d.wire for d in items])
        created.append(gid)
        digits.append(outs[0])
        if rng[1] > 0:
            carry = Dot(outs[1], rng[1])
    if carry is not None and len(digits) < matrix.width:
        digits.append(carry.wire)  # bare top carry is the last digit
    return digits, created


def _substitute_wc(builder: NetBuilder, cpa_gates: list[str],
                   outputs: list[str]) -> list[str]:
    """Rewrite the top final-add QFAC2 to QFAC2WC when its carry dangles.

    Applied after the final add; only the carry-less variant of the full
    adder exists, so half adders with dangling carries are left alone.
    """
    if not cpa_gates:
        return []
    consumed = {w for g in builder.gates for w in g.inputs}
    consumed.update(outputs)
    last = cpa_gates[-1]
    swapped = []
    for g in builder.gates:
        if g.id == last and g.kind is GateKind.QFAC2 \
                and g.outputs[1] not in consumed:
            builder.replace_with_wc(g.id)
            swapped.append(g.id)
    return swapped


# ---------------------------------------------------------------------------
# top level
# ---------------------------------------------------------------------------

def gen_multiplier(radix: int, width: int) -> Netlist:
    """Generate a complete width x width multiplier netlist.

    The result is validated before being returned; stage count and the
    tree / final-add inventory split are recorded in ``Netlist.stats``.
    """
    if radix not in (2, 4):
        raise NetgenError(f"radix must be 2 or 4, got {radix}")
    if not isinstance(width, int) or width < 1:
        raise NetgenError(f"width must be a positive integer, got {width}")

    builder = NetBuilder()
    digit_range = radix - 1
    for i in range(width):
        builder.add_input(f"x{i}", digit_range)
    for j in range(width):
        builder.add_input(f"y{j}", digit_range)

    if radix == 2:
        matrix = build_pp_binary(builder, width, width)
    else:
        matrix = build_pp_quaternary(builder, width, width)

    plans = _GROUPING_PLANS.get((radix, len(matrix.rows)), {})
    tree_gates: list[str] = []
    stage_heights = [matrix.heights()]
    stage = 0
    while matrix.max_height() > 2:
        if not matrix.capacity_ok():
            raise NetgenError("dot matrix lost capacity during reduction")
        matrix, created = wallace_stage(builder, matrix, plans.get(stage))
        if not created:
            raise NetgenError("reduction stage made no progress")
        tree_gates.extend(created)
        stage_heights.append(matrix.heights())
        stage += 1
        if stage > 64:
            raise NetgenError("reduction did not converge")

    digits, cpa_gates = final_cpa(builder, matrix)
    _substitute_wc(builder, cpa_gates, digits)

    kind_of = {g.id: g.kind.value for g in builder.gates}
    stats = {
        "stages": stage,
        "stage_heights": stage_heights,
        "tree_inventory": dict(sorted(Counter(
            kind_of[g] for g in tree_gates).items())),
        "final_add_inventory": dict(sorted(Counter(
            kind_of[g] for g in cpa_gates).items())),
    }

    net = Netlist(radix=radix, width=width, wires=builder.wires,
                  gates=builder.gates,
                  primary_inputs=[f"x{i}" for i in range(width)]
                  + [f"y{j}" for j in range(width)],
                  primary_outputs=digits, stats=stats)
    problems = validate_netlist(net)
    if problems:
        raise NetgenError("generated netlist is invalid: "
                          + "; ".join(str(p) for p in problems[:5]))
    return net
