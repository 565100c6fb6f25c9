"""Concrete polynomial Fedosov structures, their curvature and normal tensors."""

from .curvature import curvature, curvature_at, gamma_upper_series
from .invariants import IndependenceCertificate, eval_invariant, eval_invariant_tensor, independence_certificate, rank_certificate
from .normal import (
    DEFAULT_MAX_ORDER,
    CoordinateJet,
    normal_coordinate_jet,
    normal_gamma,
    normal_tensor,
    normal_tensors,
    transformed_gamma,
)
from .structure import (
    FedosovStructure,
    build_structure,
    compatibility_check,
    fixture_document,
    flat_structure,
    load_structure,
    load_structure_file,
    pfaffian,
    reference_structure,
    validation_checks,
)
from .transform import pullback_structure, random_structure, random_symplectic_matrix, linear_map, triangular_map

__all__ = [
    "CoordinateJet",
    "DEFAULT_MAX_ORDER",
    "FedosovStructure",
    "IndependenceCertificate",
    "build_structure",
    "compatibility_check",
    "curvature",
    "curvature_at",
    "eval_invariant",
    "eval_invariant_tensor",
    "fixture_document",
    "flat_structure",
    "gamma_upper_series",
    "independence_certificate",
    "linear_map",
    "load_structure",
    "load_structure_file",
    "normal_coordinate_jet",
    "normal_gamma",
    "normal_tensor",
    "normal_tensors",
    "pfaffian",
    "pullback_structure",
    "random_structure",
    "random_symplectic_matrix",
    "rank_certificate",
    "reference_structure",
    "transformed_gamma",
    "triangular_map",
    "validation_checks",
]
