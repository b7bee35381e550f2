"""Ambiguity and language operations for ω-context-free languages on lasso words."""

from .cfl import Cfg, ParseCount, Rule, count_derivations, grammar, intersect_dfa, is_infinite, prefix_closure, reduce
from .degrees import Claim, DegreeBound, DegreeLabel
from .ops import (
    adherence_member,
    count_decompositions,
    delta_limit_member,
    omega_power_bpda,
    substitute,
)
from .pda import (
    AmbiguityReport,
    Bpda,
    Certificate,
    Config,
    RunStep,
    Transition,
    accepts_lasso,
    count_runs_bounded,
    encode_run_prefix,
    in_R_prime,
    in_R_second,
    is_empty,
    step,
    verify_certificate,
)
from .relations import (
    CardinalityClass,
    Computation,
    TwoTapeBa,
    accepts_pair,
    classify_computations,
    degree_scan,
    encode_computation_prefix,
)
from .words import Alphabet, FormatError, LassoWord, canonicalize, parse_lasso, prefix_dfa, prefix_of

__all__ = [
    "accepts_lasso",
    "accepts_pair",
    "adherence_member",
    "Alphabet",
    "AmbiguityReport",
    "Bpda",
    "canonicalize",
    "CardinalityClass",
    "Certificate",
    "Cfg",
    "Claim",
    "classify_computations",
    "Computation",
    "Config",
    "count_decompositions",
    "count_derivations",
    "count_runs_bounded",
    "degree_scan",
    "DegreeBound",
    "DegreeLabel",
    "delta_limit_member",
    "encode_computation_prefix",
    "encode_run_prefix",
    "FormatError",
    "grammar",
    "in_R_prime",
    "in_R_second",
    "intersect_dfa",
    "is_empty",
    "is_infinite",
    "LassoWord",
    "omega_power_bpda",
    "parse_lasso",
    "ParseCount",
    "prefix_closure",
    "prefix_dfa",
    "prefix_of",
    "reduce",
    "Rule",
    "RunStep",
    "step",
    "substitute",
    "Transition",
    "TwoTapeBa",
    "verify_certificate",
]
