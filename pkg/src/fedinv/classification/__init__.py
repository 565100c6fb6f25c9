"""Degree solutions, pairing schemes and exact basis extraction."""

from .degrees import DegreeSolution, enumerate_degree_solutions
from .extract import ClassificationReport, SolutionResult, classify, extract_basis, sample_inputs
from .pairings import DEFAULT_MAX_DIM, DEFAULT_MAX_SLOTS, Pairing, double_factorial, enumerate_pairings
from .schemes import (
    CURVATURE,
    NAMED_SCHEMES,
    NORMAL,
    InvariantScheme,
    SchemeEvaluator,
    antisymmetric_trace_scheme,
    bianchi_partner_scheme,
    canonical_scheme,
    evaluate_scheme,
    f1_scheme,
    f2_scheme,
    f3_scheme,
    generate_schemes,
)

__all__ = [
    "CURVATURE",
    "ClassificationReport",
    "DEFAULT_MAX_DIM",
    "DEFAULT_MAX_SLOTS",
    "DegreeSolution",
    "InvariantScheme",
    "NAMED_SCHEMES",
    "NORMAL",
    "Pairing",
    "SchemeEvaluator",
    "SolutionResult",
    "antisymmetric_trace_scheme",
    "bianchi_partner_scheme",
    "canonical_scheme",
    "classify",
    "double_factorial",
    "enumerate_degree_solutions",
    "enumerate_pairings",
    "evaluate_scheme",
    "extract_basis",
    "f1_scheme",
    "f2_scheme",
    "f3_scheme",
    "generate_schemes",
    "sample_inputs",
]
