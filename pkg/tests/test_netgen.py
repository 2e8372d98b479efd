"""Generator structure: partial products, reduction, final add."""

import pytest

from mvlmul.core import GateKind, PORTS
from mvlmul.netgen import (NetBuilder, NetgenError, build_pp_binary,
                           build_pp_quaternary, final_cpa, gen_multiplier,
                           wallace_stage)


def _fresh_builder(radix, width):
    b = NetBuilder()
    for i in range(width):
        b.add_input(f"x{i}", radix - 1)
        b.add_input(f"y{i}", radix - 1)
    return b


# --- partial products -----------------------------------------------------

def test_pp_binary_shapes():
    b = _fresh_builder(2, 2)
    m = build_pp_binary(b, 2, 2)
    assert sum(1 for g in b.gates if g.kind is GateKind.AND) == 4
    assert m.heights() == [1, 2, 1, 0]

    b = _fresh_builder(2, 1)
    m = build_pp_binary(b, 1, 1)
    assert m.heights() == [1, 0]

    b = _fresh_builder(2, 8)
    m = build_pp_binary(b, 8, 8)
    assert len(b.gates) == 64
    assert max(m.heights()) == 8


def test_pp_quaternary_shapes():
    b = _fresh_builder(4, 4)
    m = build_pp_quaternary(b, 4, 4)
    assert len(b.gates) == 16
    assert len(m.rows) == 8  # product row + carry row per y digit

    b = _fresh_builder(4, 1)
    m = build_pp_quaternary(b, 1, 1)
    cols = m.columns()
    assert len(cols[0]) == 1 and cols[0][0].range_max == 3
    assert len(cols[1]) == 1 and cols[1][0].range_max == 2

    b = _fresh_builder(4, 2)
    m = build_pp_quaternary(b, 2, 2)
    assert len(b.gates) == 4
    dots = [d for row in m.rows for d in row.values()]
    assert sum(1 for d in dots if d.range_max == 3) == 4  # products
    assert sum(1 for d in dots if d.range_max == 2) == 4  # carries


def test_pp_rejects_zero_width():
    b = _fresh_builder(2, 1)
    with pytest.raises(NetgenError):
        build_pp_binary(b, 0, 1)
    with pytest.raises(NetgenError):
        build_pp_quaternary(b, 1, 0)


def test_capacity_holds_from_the_start():
    b = _fresh_builder(4, 4)
    m = build_pp_quaternary(b, 4, 4)
    assert m.capacity_ok()


# --- reduction ------------------------------------------------------------

def test_stage_noop_on_reduced_matrix():
    b = _fresh_builder(2, 2)
    m = build_pp_binary(b, 2, 2)
    before = len(b.gates)
    m2, created = wallace_stage(b, m)
    assert created == [] and len(b.gates) == before
    assert m2.heights() == m.heights()


def test_stage_heights_strictly_decrease(all_designs):
    for (radix, width), net in all_designs.items():
        hs = net.stats["stage_heights"]
        maxima = [max(h) for h in hs]
        for before, after in zip(maxima, maxima[1:]):
            assert after < before, (radix, width, maxima)
        assert maxima[-1] <= 2


def test_capacity_preserved_each_stage():
    b = _fresh_builder(4, 4)
    m = build_pp_quaternary(b, 4, 4)
    while m.max_height() > 2:
        assert m.capacity_ok()
        m, _ = wallace_stage(b, m)
    assert m.capacity_ok()


def test_stage_rejects_bad_grouping():
    b = _fresh_builder(2, 4)
    m = build_pp_binary(b, 4, 4)
    with pytest.raises(NetgenError):
        wallace_stage(b, m, grouping=((0, 1, 1),))
    with pytest.raises(NetgenError):
        wallace_stage(b, m, grouping=((0, 1, 9),))


def test_final_cpa_requires_reduced_matrix():
    b = _fresh_builder(2, 4)
    m = build_pp_binary(b, 4, 4)
    with pytest.raises(NetgenError):
        final_cpa(b, m)


def test_final_cpa_single_row_passthrough():
    b = _fresh_builder(2, 1)
    m = build_pp_binary(b, 1, 1)
    digits, created = final_cpa(b, m)
    assert created == []
    assert len(digits) == 1


# --- generated inventories -------------------------------------------------

def test_inventories(all_designs):
    inv = {k: n.inventory() for k, n in all_designs.items()}
    assert inv[(2, 1)] == {"AND": 1}
    assert inv[(2, 2)] == {"AND": 4, "BIN_HA": 2}
    assert inv[(2, 4)] == {"AND": 16, "BIN_FA": 8, "BIN_HA": 4}
    assert inv[(2, 8)] == {"AND": 64, "BIN_FA": 47, "BIN_HA": 16}
    assert inv[(4, 1)] == {"QM1": 1}
    assert inv[(4, 2)] == {"QM1": 4, "QFAC2": 2, "QFAC2WC": 1, "QHA": 2}
    assert inv[(4, 4)] == {"QM1": 16, "QFAC2": 21, "QFAC2WC": 1, "QHA": 5}


def test_tree_and_final_add_split(b8, q4):
    assert b8.stats["tree_inventory"] == {"BIN_FA": 38, "BIN_HA": 14}
    assert b8.stats["final_add_inventory"] == {"BIN_FA": 9, "BIN_HA": 2}
    assert q4.stats["tree_inventory"] == {"QFAC2": 20, "QHA": 4}
    assert q4.stats["final_add_inventory"] == {"QFAC2": 1, "QFAC2WC": 1,
                                               "QHA": 1}


def test_stage_counts(all_designs):
    stages = {k: n.stats["stages"] for k, n in all_designs.items()}
    assert stages[(2, 8)] == 4
    assert stages[(4, 4)] == 4
    assert stages[(4, 2)] == 1  # single reduction stage, then the final add
    assert stages[(2, 4)] == 2


def test_no_quaternary_wire_feeds_a_carry_port(all_designs):
    for net in all_designs.values():
        for g in net.gates:
            for (pname, pmax), wid in zip(PORTS[g.kind].inputs, g.inputs):
                assert net.wires[wid].range_max <= pmax, (g.id, pname)


def test_wc_substitution_only_at_the_top(q2, q4):
    for net in (q2, q4):
        wcs = [g for g in net.gates if g.kind is GateKind.QFAC2WC]
        assert len(wcs) == 1
        # its sum drives the most significant product digit
        assert wcs[0].outputs[0] == net.primary_outputs[-1]


def test_determinism(q4):
    a = gen_multiplier(4, 4)
    assert a.to_json() == q4.to_json()


def test_bad_arguments_rejected():
    with pytest.raises(NetgenError):
        gen_multiplier(3, 4)
    with pytest.raises(NetgenError):
        gen_multiplier(2, 0)
    with pytest.raises(NetgenError):
        gen_multiplier(4, -1)


def test_unusual_widths_still_generate():
    for radix, width in ((2, 3), (2, 5), (4, 3), (4, 5)):
        net = gen_multiplier(radix, width)
        assert net.stats["stages"] >= 1
