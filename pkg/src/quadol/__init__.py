"""Approximate dual-output LUT merging for LUT-6 mapped netlists."""

from .dualout import (DualOutputConfig, MergeError, SimContext, apply_merge,
                      apply_merges, optimize_pair, optimize_shared5_65,
                      optimize_shared5_66, optimize_shared6)
from .flow import (FlowParams, FlowResult, PlusResult, run_quadol,
                   run_quadol_plus)
from .matching import Matching, k_random_matchings, maximum_matching
from .netlist import (BlifError, LutNetwork, LutNode, NetlistError, lut_count,
                      normalize_support, parse_blif, parse_blif_file,
                      topological_order, validate, write_blif, write_blif_file)
from .pairs import (ConflictGraph, MergeType, PairCandidate,
                    build_conflict_graph, enumerate_pairs)
from .sim import (ErrorReport, StimulusSet, WordSpec, compute_metric,
                  error_rate, error_report, mred, output_signatures,
                  resimulate_cone, simulate)
from .truthtab import TruthTable, hamming_distance, majority3

__version__ = "0.1.0"

__all__ = [
    "BlifError", "ConflictGraph", "DualOutputConfig", "ErrorReport",
    "FlowParams", "FlowResult", "LutNetwork", "LutNode", "Matching",
    "MergeError", "MergeType", "NetlistError", "PairCandidate", "PlusResult",
    "SimContext", "StimulusSet", "TruthTable", "WordSpec", "apply_merge",
    "apply_merges", "build_conflict_graph", "compute_metric", "enumerate_pairs",
    "error_rate", "error_report", "hamming_distance", "k_random_matchings",
    "lut_count", "majority3", "maximum_matching", "mred", "normalize_support",
    "optimize_pair", "optimize_shared5_65", "optimize_shared5_66",
    "optimize_shared6", "output_signatures", "parse_blif", "parse_blif_file",
    "resimulate_cone", "run_quadol", "run_quadol_plus", "simulate",
    "topological_order", "validate", "write_blif", "write_blif_file",
]
