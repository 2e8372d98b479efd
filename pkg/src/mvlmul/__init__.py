"""Gate-level binary and quaternary Wallace-tree multipliers.

Generate multiplier netlists in radix 2 or 4, verify them exhaustively
against integer multiplication, and compare designs by transistor-
diameter area and calibrated worst-path delay.
"""

from .core import (GateKind, LogicError, LogicLevel, UnaryTable,
                   STANDARD_TABLES, and2, bin_fa, bin_ha, bit,
                   decode_thresholds, mux4, qfac2, qfac2wc, qha, qmul1,
                   qmul1_mux, quit, trit, unary_apply)
from .netgen import (DotMatrix, NetBuilder, NetgenError, build_pp_binary,
                     build_pp_quaternary, final_cpa, gen_multiplier,
                     wallace_stage)
from .netlist import (GateInstance, Netlist, NetlistError, Violation, Wire,
                      disjoint_union, validate_netlist)
from .metrics import (CalibrationError, ComparisonReport, CostLibrary,
                      CriticalPath, LibraryError, TimingLibrary,
                      area_estimate, calibrate_timing, compare, critical_path,
                      default_cost_library, timing_binary_0v45,
                      timing_binary_0v9, timing_quaternary_0v9)
from .sim import (SimulationError, VerificationReport,
                  VerificationSpaceError, evaluate, oracle,
                  verify_exhaustive, verify_random)
from .spice import export_spice

__version__ = "0.1.0"
