"""Command-line behavior: exit codes, files, round trips."""

import json
import subprocess
import sys

import pytest

from mvlmul.cli import main
from mvlmul.netlist import Netlist, validate_netlist


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_prints_inventory_and_writes(tmp_path, capsys):
    out = tmp_path / "b8.json"
    code, stdout, _ = run(["generate", "--radix", "2", "--width", "8",
                           "--out", str(out)], capsys)
    assert code == 0
    assert "AND: 64" in stdout and "BIN_FA: 47" in stdout \
        and "BIN_HA: 16" in stdout
    net = Netlist.from_json(out.read_text())
    assert validate_netlist(net) == []


def test_generate_round_trip_inventory(tmp_path, capsys):
    out = tmp_path / "q4.json"
    code, _, _ = run(["generate", "--radix", "4", "--width", "4",
                      "--out", str(out)], capsys)
    assert code == 0
    from mvlmul import gen_multiplier
    assert Netlist.from_json(out.read_text()).inventory() == \
        gen_multiplier(4, 4).inventory()


def test_generate_rejects_bad_radix(capsys):
    code, _, _ = run(["generate", "--radix", "3", "--width", "2"], capsys)
    assert code == 2


def test_verify_pass_and_reference_vector(tmp_path, capsys):
    nl = tmp_path / "q2.json"
    run(["generate", "--radix", "4", "--width", "2", "--out", str(nl)],
        capsys)
    rep = tmp_path / "report.json"
    code, stdout, _ = run(["verify", str(nl), "--mode", "exhaustive",
                           "--out", str(rep)], capsys)
    assert code == 0
    assert "256 vectors" in stdout and "PASS" in stdout
    doc = json.loads(rep.read_text())
    assert doc["passed"] is True and doc["vectors_tested"] == 256


def test_verify_detects_corruption(tmp_path, capsys):
    nl = tmp_path / "b4.json"
    run(["generate", "--radix", "2", "--width", "4", "--out", str(nl)],
        capsys)
    doc = json.loads(nl.read_text())
    # cross two partial-product inputs: output stays structurally valid
    g0 = next(g for g in doc["gates"] if g["kind"] == "AND"
              and g["inputs"] == ["x0", "y0"])
    g1 = next(g for g in doc["gates"] if g["kind"] == "AND"
              and g["inputs"] == ["x1", "y1"])
    g0["inputs"], g1["inputs"] = ["x0", "y1"], ["x1", "y0"]
    nl.write_text(json.dumps(doc))
    code, stdout, _ = run(["verify", str(nl)], capsys)
    assert code == 1
    assert "FAIL" in stdout and "expected=" in stdout


def test_verify_missing_file_is_io_error(capsys):
    code, _, err = run(["verify", "/nonexistent/netlist.json"], capsys)
    assert code == 3


def test_verify_invalid_netlist_is_usage_error(tmp_path, capsys):
    # structural problems exit 2, distinct from functional mismatches (1)
    nl = tmp_path / "bad.json"
    run(["generate", "--radix", "2", "--width", "2", "--out", str(nl)],
        capsys)
    doc = json.loads(nl.read_text())
    doc["gates"][0]["inputs"] = ["x0", "ghost"]
    nl.write_text(json.dumps(doc))
    code, _, err = run(["verify", str(nl)], capsys)
    assert code == 2
    assert "invalid netlist" in err


def test_verify_oversized_exhaustive_guides_to_random(tmp_path, capsys):
    nl = tmp_path / "b8.json"
    run(["generate", "--radix", "2", "--width", "8", "--out", str(nl)],
        capsys)
    code, _, err = run(["verify", str(nl), "--cap", "1000"], capsys)
    assert code == 2
    assert "--mode random" in err


def test_verify_random_seeded(tmp_path, capsys):
    nl = tmp_path / "b8.json"
    run(["generate", "--radix", "2", "--width", "8", "--out", str(nl)],
        capsys)
    code, stdout, _ = run(["verify", str(nl), "--mode", "random",
                           "--count", "200", "--seed", "42"], capsys)
    assert code == 0 and "200 vectors" in stdout


def test_compare_preset_markdown(capsys):
    code, stdout, _ = run(["compare", "--preset"], capsys)
    assert code == 0
    assert "x1.84" in stdout   # 1x1 quit vs 2x2 bit area
    assert "x2.92" in stdout   # 2x2 quit vs 4x4 bit area
    assert "x3.18" in stdout   # 4x4 quit vs 8x8 bit area
    assert "ha_count_ratio" in stdout


def test_compare_explicit_designs_csv(capsys):
    code, stdout, _ = run(["compare", "--design", "4,4", "--design", "2,8",
                           "--format", "csv"], capsys)
    assert code == 0
    assert "pair,radix4 4x4 vs radix2 8x8.area_ratio,3.18471" in stdout


def test_compare_identical_designs_unity(capsys):
    code, stdout, _ = run(["compare", "--design", "2,4", "--design", "2,4",
                           "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(stdout)
    assert doc["pair_ratios"][0]["area_ratio"] == pytest.approx(1.0)


def test_compare_needs_designs(capsys):
    code, _, err = run(["compare"], capsys)
    assert code == 2


def test_export_spice_counts_and_determinism(tmp_path, capsys):
    nl = tmp_path / "b2.json"
    run(["generate", "--radix", "2", "--width", "2", "--out", str(nl)],
        capsys)
    d1 = tmp_path / "a.sp"
    d2 = tmp_path / "b.sp"
    assert run(["export-spice", str(nl), "--out", str(d1)], capsys)[0] == 0
    assert run(["export-spice", str(nl), "--out", str(d2)], capsys)[0] == 0
    assert d1.read_bytes() == d2.read_bytes()
    deck = d1.read_text()
    lines = deck.splitlines()
    assert sum(1 for l in lines if l.startswith("X") and l.endswith(" AND")) == 4
    assert sum(1 for l in lines if l.startswith("X")
               and l.endswith(" BIN_HA")) == 2


def test_export_spice_instances_match_inventory(tmp_path, capsys, q4):
    nl = tmp_path / "q4.json"
    nl.write_text(q4.to_json())
    out = tmp_path / "q4.sp"
    run(["export-spice", str(nl), "--out", str(out)], capsys)
    lines = out.read_text().splitlines()
    for kind, count in q4.inventory().items():
        assert sum(1 for l in lines
                   if l.startswith("X") and l.endswith(" " + kind)) == count


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "mvlmul.cli", "generate", "--radix", "4",
         "--width", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "QM1: 1" in proc.stdout


def test_env_library_override(tmp_path, capsys, monkeypatch):
    from mvlmul.metrics import default_cost_library
    lib = default_cost_library()
    lib.sigma_di = dict(lib.sigma_di)
    lib.sigma_di[list(lib.sigma_di)[0]] = 1.0
    libdir = tmp_path / "libs"
    libdir.mkdir()
    (libdir / "cost.json").write_text(lib.to_json())
    monkeypatch.setenv("MVL_DEFAULT_LIBS", str(libdir))
    code, stdout, _ = run(["compare", "--design", "2,2", "--design", "2,2",
                           "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(stdout)
    # AND cost dropped from 8.9 to 1.0 -> area 4*1 + 2*18 = 40
    assert doc["designs"][0]["area_nm"] == pytest.approx(40.0)
