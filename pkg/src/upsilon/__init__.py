"""Exact Upsilon-invariant calculus for knot concordance.

Piecewise-linear Upsilon functions over the rationals, a rule engine that
propagates invariants through connected sums, mirrors, cables and
satellites, and certificate-producing linear-independence checks.
"""
from .derivation import DerivationError, derive
from .enumerator import enumerate_profiles, oracle_enumerate
from .expr import parse_expr, to_text
from .facts import FactTable, KnotFacts, bundled_facts, load_facts, load_report, save_report
from .independence import (Decision, IndependenceReport, SingularityCertificate, check_independence,
                           lambda_value)
from .pl import Envelope, Interval, PLFunction, validate_candidate

__all__ = [
    "DerivationError", "Decision", "Envelope", "FactTable", "IndependenceReport", "Interval",
    "KnotFacts", "PLFunction", "SingularityCertificate", "bundled_facts", "check_independence",
    "derive", "enumerate_profiles", "lambda_value", "load_facts", "load_report", "oracle_enumerate",
    "parse_expr", "save_report", "to_text", "validate_candidate",
]
