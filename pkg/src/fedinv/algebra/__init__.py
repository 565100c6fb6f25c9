"""Exact scalar, polynomial, tensor and linear-algebra substrate."""

from .linalg import RationalMatrix, determinant, rank, rank_kernel, solve, sparse_kernel
from .parser import parse_rational, poly_parse
from .polynomial import Polynomial, poly_eval
from .tensor import Tensor, canonical_form, inverse_form, tensor_contract, trace

__all__ = [
    "Polynomial",
    "RationalMatrix",
    "Tensor",
    "canonical_form",
    "determinant",
    "inverse_form",
    "parse_rational",
    "poly_eval",
    "poly_parse",
    "rank",
    "rank_kernel",
    "solve",
    "sparse_kernel",
    "tensor_contract",
    "trace",
]
