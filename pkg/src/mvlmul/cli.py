"""Command-line front end.

Commands: ``generate``, ``verify``, ``compare``, ``export-spice``.

Exit codes: 0 success, 1 verification found mismatches, 2 usage or
configuration error, 3 I/O error.  ``MVL_DEFAULT_LIBS`` may point at a
directory containing ``cost.json`` / ``timing-<preset>.json`` files that
replace the built-in libraries.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .metrics import (CostLibrary, LibraryError, TIMING_PRESETS,
                      TimingLibrary, compare, default_cost_library)
from .netgen import NetgenError, gen_multiplier
from .netlist import Netlist, NetlistError, validate_netlist
from .sim import (DEFAULT_EXHAUSTIVE_CAP, VerificationSpaceError,
                  verify_exhaustive, verify_random)
from .spice import export_spice

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3

#: the bundled head-to-head comparison: equal-information designs side
#: by side (an N-quit operand carries the bits of a 2N-bit one).
COMPARE_PRESET = (((4, 1), (2, 2)), ((4, 2), (2, 4)), ((4, 4), (2, 8)))


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}", EXIT_IO) from None


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e}", EXIT_IO) from None


def _load_netlist(path: str) -> Netlist:
    text = _read_text(path)
    try:
        net = Netlist.from_json(text)
    except NetlistError as e:
        raise CliError(f"{path}: {e}", EXIT_USAGE) from None
    problems = validate_netlist(net)
    if problems:
        msgs = "; ".join(str(p) for p in problems[:8])
        raise CliError(f"{path}: invalid netlist: {msgs}", EXIT_USAGE)
    return net


def _cost_library(path: str | None) -> CostLibrary:
    if path:
        return CostLibrary.from_json(_read_text(path))
    env = os.environ.get("MVL_DEFAULT_LIBS")
    if env:
        cand = Path(env) / "cost.json"
        if cand.exists():
            return CostLibrary.from_json(_read_text(str(cand)))
    return default_cost_library()


def _timing_library(spec: str) -> TimingLibrary:
    env = os.environ.get("MVL_DEFAULT_LIBS")
    if env:
        cand = Path(env) / f"timing-{spec}.json"
        if cand.exists():
            return TimingLibrary.from_json(_read_text(str(cand)))
    if spec in TIMING_PRESETS:
        return TIMING_PRESETS[spec]()
    if Path(spec).exists():
        return TimingLibrary.from_json(_read_text(spec))
    raise CliError(f"unknown timing library {spec!r} "
                   f"(presets: {', '.join(TIMING_PRESETS)})", EXIT_USAGE)


def _digit_str(digits) -> str:
    return "".join(str(d) for d in reversed(list(digits)))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    try:
        net = gen_multiplier(args.radix, args.width)
    except NetgenError as e:
        raise CliError(str(e), EXIT_USAGE) from None
    inv = ", ".join(f"{k}: {v}" for k, v in net.inventory().items())
    print(f"radix-{args.radix} {args.width}x{args.width} multiplier: "
          f"{{{inv}}}")
    print(f"reduction stages: {net.stats.get('stages')}")
    if args.out:
        _write_text(args.out, net.to_json())
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    net = _load_netlist(args.netlist)
    if args.mode == "exhaustive":
        try:
            report = verify_exhaustive(net, cap=args.cap)
        except VerificationSpaceError as e:
            raise CliError(f"{e} (rerun with --mode random --count N)",
                           EXIT_USAGE) from None
    else:
        try:
            report = verify_random(net, args.count, args.seed,
                                   workers=args.workers)
        except ValueError as e:
            raise CliError(str(e), EXIT_USAGE) from None
    if args.out:
        _write_text(args.out, report.to_json(max_mismatches=args.show))
    status = "PASS" if report.passed else "FAIL"
    print(f"{report.design} {report.mode}: {report.vectors_tested} vectors, "
          f"{len(report.mismatches)} mismatches -> {status}")
    for m in report.mismatches[:args.show]:
        print(f"  x={_digit_str(m['x'])} y={_digit_str(m['y'])} "
              f"expected={_digit_str(m['expected'])} "
              f"got={_digit_str(m['got'])}")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_compare(args) -> int:
    cost = _cost_library(args.cost_lib)
    reports = []
    if args.preset:
        ql = _timing_library("quaternary-0.9v")
        bl = _timing_library("binary-0.9v")
        for (qr, qw), (br, bw) in COMPARE_PRESET:
            reports.append(compare(
                [(f"{qw}x{qw} quit", gen_multiplier(qr, qw), cost, ql),
                 (f"{bw}x{bw} bit", gen_multiplier(br, bw), cost, bl)]))
    else:
        if len(args.design or ()) < 2:
            raise CliError("need --preset or at least two "
                           "--design radix,width", EXIT_USAGE)
        designs = []
        for spec in args.design:
            try:
                radix, width = (int(v) for v in spec.split(","))
            except ValueError:
                raise CliError(f"bad --design {spec!r}, expected radix,width",
                               EXIT_USAGE) from None
            try:
                net = gen_multiplier(radix, width)
            except NetgenError as e:
                raise CliError(str(e), EXIT_USAGE) from None
            tl = _timing_library(args.timing_lib if args.timing_lib else
                                 ("quaternary-0.9v" if radix == 4
                                  else "binary-0.9v"))
            designs.append((f"radix{radix} {width}x{width}", net, cost, tl))
        try:
            reports.append(compare(designs))
        except LibraryError as e:
            raise CliError(str(e), EXIT_USAGE) from None
    render = {"md": lambda r: r.to_markdown(),
              "csv": lambda r: r.to_csv()}.get(args.format,
                                               lambda r: r.to_json())
    text = "\n".join(render(r) for r in reports)
    if args.out:
        _write_text(args.out, text)
    else:
        print(text)
    return EXIT_OK


def cmd_export_spice(args) -> int:
    net = _load_netlist(args.netlist)
    deck = export_spice(net)
    if args.out:
        _write_text(args.out, deck)
        print(f"wrote {args.out}")
    else:
        print(deck, end="")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mvlmul",
        description="Generate, verify and compare gate-level binary and "
                    "quaternary Wallace-tree multipliers.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a multiplier netlist")
    g.add_argument("--radix", type=int, required=True, choices=(2, 4))
    g.add_argument("--width", type=int, required=True,
                   help="operand width in digits")
    g.add_argument("--out", help="write netlist JSON here")
    g.set_defaults(fn=cmd_generate)

    v = sub.add_parser("verify", help="verify a netlist against integer "
                                      "multiplication")
    v.add_argument("netlist", help="netlist JSON file")
    v.add_argument("--mode", choices=("exhaustive", "random"),
                   default="exhaustive")
    v.add_argument("--count", type=int, default=10000,
                   help="random vectors to run")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP,
                   help="max exhaustive vectors")
    v.add_argument("--show", type=int, default=10,
                   help="mismatches to print/serialize")
    v.add_argument("--out", help="write a JSON report here")
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("compare", help="compare generated designs")
    c.add_argument("--preset", action="store_true",
                   help="run the bundled equal-information head-to-heads")
    c.add_argument("--design", action="append", metavar="RADIX,WIDTH",
                   help="add a design (repeatable)")
    c.add_argument("--cost-lib", help="cost library JSON")
    c.add_argument("--timing-lib",
                   help="timing preset name or JSON file")
    c.add_argument("--format", choices=("md", "csv", "json"), default="md")
    c.add_argument("--out", help="append output here instead of stdout")
    c.set_defaults(fn=cmd_compare)

    e = sub.add_parser("export-spice", help="write a structural SPICE-style "
                                            "deck")
    e.add_argument("netlist", help="netlist JSON file")
    e.add_argument("--out", help="deck file (stdout if omitted)")
    e.set_defaults(fn=cmd_export_spice)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed a message; normalize its exit code
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except LibraryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
