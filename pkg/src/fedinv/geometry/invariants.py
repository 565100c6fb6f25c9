"""Evaluating classified invariants on concrete structures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..algebra.linalg import Echelon, RationalMatrix, determinant, integer_row
from ..algebra.tensor import Tensor
from ..classification.schemes import InvariantScheme, evaluate_scheme
from ..errors import InvalidInputError
from .normal import DEFAULT_MAX_ORDER, normal_tensors
from .structure import FedosovStructure


def eval_invariant_tensor(
    scheme: InvariantScheme, F: FedosovStructure, point: Sequence, max_order: int = DEFAULT_MAX_ORDER
) -> Tensor:
    """The scheme applied to the normal tensors of ``F`` at ``point``, in the
    normal frame (which agrees with the coordinate frame at the point)."""
    pt = F.check_point(point)
    orders = sorted(set(scheme.factors))
    tensors = normal_tensors(F, pt, orders, max_order)
    omega = F.omega_at(pt)
    return evaluate_scheme(scheme, [tensors[m] for m in scheme.factors], omega, check=False)


def eval_invariant(
    scheme: InvariantScheme, F: FedosovStructure, point: Sequence, max_order: int = DEFAULT_MAX_ORDER
) -> Fraction:
    """Value of a scalar (valence-0) invariant at a point."""
    if scheme.valence != 0:
        raise InvalidInputError(f"scheme has valence {scheme.valence}; use eval_invariant_tensor")
    return Fraction(eval_invariant_tensor(scheme, F, point, max_order).value())


@dataclass(frozen=True)
class IndependenceCertificate:
    rank: int
    values: tuple[tuple[Fraction, ...], ...]
    rows: tuple[int, ...]
    columns: tuple[int, ...]
    minor: tuple[tuple[Fraction, ...], ...]
    determinant: Fraction

    def verify(self) -> bool:
        """Re-check the witness minor against the stored value matrix."""
        if self.rank == 0:
            return all(v == 0 for row in self.values for v in row)
        minor = [[self.values[r][c] for c in self.columns] for r in self.rows]
        if tuple(tuple(row) for row in minor) != self.minor:
            return False
        return determinant(RationalMatrix.from_rows(minor)) == self.determinant != 0

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "values": [[str(v) for v in row] for row in self.values],
            "witness_rows": list(self.rows),
            "witness_columns": list(self.columns),
            "witness_minor": [[str(v) for v in row] for row in self.minor],
            "determinant": str(self.determinant),
        }


def rank_certificate(values: Sequence[Sequence[Fraction]]) -> IndependenceCertificate:
    """Exact rank of a (schemes x points) matrix with a non-singular witness minor."""
    values = tuple(tuple(Fraction(v) for v in row) for row in values)
    if not values:
        return IndependenceCertificate(0, (), (), (), (), Fraction(1))
    n_cols = len(values[0])
    # independent rows, greedily in order
    echelon = Echelon()
    rows = []
    for i, row in enumerate(values):
        if echelon.insert(integer_row({j: v for j, v in enumerate(row) if v})):
            rows.append(i)
    # columns of the chosen rows: pivots of the column echelon form
    col_echelon = Echelon()
    cols = []
    for j in range(n_cols):
        col = {k: values[r][j] for k, r in enumerate(rows) if values[r][j]}
        if col and col_echelon.insert(integer_row(col)):
            cols.append(j)
    minor = tuple(tuple(values[r][c] for c in cols) for r in rows)
    det = determinant(RationalMatrix.from_rows([list(r) for r in minor])) if rows else Fraction(1)
    return IndependenceCertificate(len(rows), values, tuple(rows), tuple(cols), minor, det)


def independence_certificate(
    schemes: Sequence[InvariantScheme], F: FedosovStructure, points: Sequence[Sequence]
) -> IndependenceCertificate:
    """Rank of the scheme-by-point value matrix of scalar invariants on ``F``."""
    values = [[eval_invariant(s, F, pt) for pt in points] for s in schemes]
    return rank_certificate(values)


def curvature_invariant_polynomial(scheme: InvariantScheme, F: FedosovStructure):
    """A curvature-kind scalar scheme on d_1 = 2 evaluated on the polynomial
    curvature of ``F`` (needs det(omega) constant); returns a Polynomial."""
    from ..classification.schemes import CURVATURE, contract_scheme
    from .curvature import curvature, omega_inverse_polynomial

    if scheme.kind != CURVATURE or set(scheme.factors) != {1} or scheme.valence != 0:
        raise InvalidInputError("only scalar curvature-kind schemes built from curvature tensors are supported")
    n = F.two_n
    R = curvature(F)
    winv = omega_inverse_polynomial(F)
    # contravariant form omega^{ij} with omega^{ik} omega_{jk} = delta: the transpose of omega^{-1}
    inv = Tensor.from_function(n, 2, lambda i, j: winv[j][i])
    value = contract_scheme(scheme, [R] * len(scheme.factors), inv, F.omega).value()
    return value
