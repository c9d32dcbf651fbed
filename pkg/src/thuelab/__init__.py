"""Workbench for length-preserving string rewriting systems.

Builds and validates rewriting systems, computes derivational depth and
complexity exactly at small scale, explores symmetrized equivalence classes
(geodesics, diameters, Dehn-function data), and machine-checks the
structural lemmas of the two builtin systems with exhaustive and randomized
oracles.
"""

from .core import (Alphabet, CapExceededError, Orientation, ParseError, Role,
                   Rule, RewriteSystem, StaleRedexError, ThueLabError,
                   UnknownTokenError, ValidationReport, Word, format_system,
                   format_word, make_system, parse_system, parse_word,
                   symmetrize)
from .engine import Redex, Step, apply_redex, find_redexes, successors
from .systems import (builtin, e0, e0_counter, e0_reoriented, e0_terminal,
                      main_case_endpoint, s0, seed_word, unary_counter,
                      all_zero)
from .derivation import (ComplexityRow, Depth, DerivationTrace, INFINITE,
                         derivational_complexity, derivational_depth,
                         derive_deterministic)
from .geodesic import (ComponentGraph, ComponentTooLargeError, DehnRow,
                       DistanceResult, DistanceStatus, GammaRow,
                       as_symmetrized, component, dehn, diameter, distance,
                       dot_document, edge_lines, gamma_capital, gamma_exact)
from .fitting import FitReport, ModelFit, fit_models
from .lemmas import CheckReport, Verdict, run_all_checks, run_fault_injection

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "CapExceededError", "CheckReport", "ComplexityRow",
    "ComponentGraph", "ComponentTooLargeError", "DehnRow", "Depth",
    "DerivationTrace", "DistanceResult", "DistanceStatus", "FitReport",
    "GammaRow", "INFINITE", "ModelFit", "Orientation", "ParseError", "Redex",
    "RewriteSystem", "Role", "Rule", "StaleRedexError", "Step",
    "ThueLabError", "UnknownTokenError", "ValidationReport", "Verdict",
    "Word", "all_zero", "apply_redex", "as_symmetrized", "builtin",
    "component", "dehn", "derivational_complexity", "derivational_depth",
    "derive_deterministic", "diameter", "distance", "dot_document", "e0",
    "e0_counter", "e0_reoriented", "e0_terminal", "edge_lines",
    "find_redexes", "fit_models", "format_system", "format_word",
    "gamma_capital", "gamma_exact", "main_case_endpoint", "make_system",
    "parse_system", "parse_word", "run_all_checks", "run_fault_injection",
    "s0", "seed_word", "successors", "symmetrize", "unary_counter",
]
