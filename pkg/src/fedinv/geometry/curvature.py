"""Curvature R_{ijkl} = omega(d_i, R(d_k, d_l) d_j) and Taylor series of the
contravariant Christoffel symbols Gamma^l_{jk} = (omega^{-1})^{li} Gamma_{ijk}."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from ..algebra.linalg import RationalMatrix, inverse
from ..algebra.polynomial import Polynomial
from ..algebra.tensor import Tensor
from ..errors import InvalidInputError
from .structure import FedosovStructure

Matrix = list[list[Polynomial]]


def _mat_mul(a: Matrix, b: Matrix, zero: Polynomial, max_degree: int | None = None) -> Matrix:
    n = len(a)
    out = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for k in range(n):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k].mul_truncated(b[k][j], max_degree)
            out[i][j] = acc
    return out


def faddeev_leverrier(a: Matrix) -> tuple[Matrix, Polynomial]:
    """(M_n, c_0) of the Faddeev-LeVerrier recursion for det(lambda I - a).

    ``a^{-1} = -M_n / c_0`` and ``det(a) = (-1)^n c_0``; only integer
    divisions occur, so polynomial entries stay polynomial.
    """
    n = len(a)
    zero = a[0][0] * 0
    m = [[zero] * n for _ in range(n)]
    c = zero + 1
    for k in range(1, n + 1):
        am = _mat_mul(a, m, zero)
        m = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        tr = zero
        for i in range(n):
            for r in range(n):
                tr = tr + a[i][r] * m[r][i]
        c = tr.scale(Fraction(-1, k))
    return m, c


def omega_inverse_polynomial(F: FedosovStructure) -> Matrix:
    """(omega^{-1}) as polynomials; requires a constant determinant."""
    n = F.two_n
    w = [[F.omega[i, j] for j in range(n)] for i in range(n)]
    numerator, c0 = faddeev_leverrier(w)
    if not c0.is_constant() or c0.constant_term() == 0:
        raise InvalidInputError(
            "omega has a non-constant determinant; its inverse is not polynomial (use curvature_at)"
        )
    factor = Fraction(-1) / c0.constant_term()
    return [[x.scale(factor) for x in row] for row in numerator]


def gamma_upper_polynomial(F: FedosovStructure) -> list[list[list[Polynomial]]]:
    n = F.two_n
    winv = omega_inverse_polynomial(F)
    zero = Polynomial.zero(F.coordinates)
    out = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for l, j, k in itertools.product(range(n), repeat=3):
        acc = zero
        for i in range(n):
            if not winv[l][i].is_zero():
                acc = acc + winv[l][i] * F.gamma_lower[i, j, k]
        out[l][j][k] = acc
    return out


def _riemann(omega, gup, dgup, n: int, zero):
    # R_{ijkl} = omega_{im} (d_k G^m_{lj} - d_l G^m_{kj} + G^m_{kp} G^p_{lj} - G^m_{lp} G^p_{kj})
    rup = {}
    for m, j, k, l in itertools.product(range(n), repeat=4):
        if k >= l:
            continue
        acc = dgup[k][m][l][j] - dgup[l][m][k][j]
        for p in range(n):
            acc = acc + gup[m][k][p] * gup[p][l][j] - gup[m][l][p] * gup[p][k][j]
        rup[m, j, k, l] = acc
        rup[m, j, l, k] = -acc
    for m, j, k in itertools.product(range(n), repeat=3):
        rup[m, j, k, k] = zero

    def entry(i, j, k, l):
        acc = zero
        for m in range(n):
            w = omega[i][m]
            if w != 0:
                acc = acc + w * rup[m, j, k, l]
        return acc

    return entry


def curvature(F: FedosovStructure) -> Tensor:
    """Polynomial curvature tensor; available when det(omega) is constant."""
    n = F.two_n
    gup = gamma_upper_polynomial(F)
    dgup = [[[[gup[m][l][j].diff(k) for j in range(n)] for l in range(n)] for m in range(n)] for k in range(n)]
    omega = [[F.omega[i, j] for j in range(n)] for i in range(n)]
    zero = Polynomial.zero(F.coordinates)
    return Tensor.from_function(n, 4, _riemann(omega, gup, dgup, n, zero))


def gamma_upper_series(F: FedosovStructure, point: Sequence, degree: int) -> list[list[list[Polynomial]]]:
    """Taylor polynomial of Gamma^l_{jk}(point + h) in h through ``degree``."""
    n = F.two_n
    pt = F.check_point(point)
    coords = F.coordinates
    zero = Polynomial.zero(coords)
    w_shift = [[F.omega[i, j].shift(pt) for j in range(n)] for i in range(n)]
    w0 = RationalMatrix.from_rows([[w_shift[i][j].constant_term() for j in range(n)] for i in range(n)])
    a0 = inverse(w0)
    a0p = [[zero + a0[i, j] for j in range(n)] for i in range(n)]
    nil = [[w_shift[i][j] - w_shift[i][j].constant_term() for j in range(n)] for i in range(n)]
    # W^{-1} = sum_k (-A0 N)^k A0
    step = [[-x for x in row] for row in _mat_mul(a0p, nil, zero, degree)]
    term = a0p
    winv = a0p
    for _ in range(degree):
        term = _mat_mul(step, term, zero, degree)
        if all(x.is_zero() for row in term for x in row):
            break
        winv = [[winv[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    g_shift = {idx: F.gamma_lower[idx].shift(pt).truncate(degree) for idx in itertools.product(range(n), repeat=3)}
    out = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for l, j, k in itertools.product(range(n), repeat=3):
        if k < j:
            out[l][j][k] = out[l][k][j]
            continue
        acc = zero
        for i in range(n):
            if not winv[l][i].is_zero() and not g_shift[i, j, k].is_zero():
                acc = acc + winv[l][i].mul_truncated(g_shift[i, j, k], degree)
        out[l][j][k] = acc
    return out


def curvature_at(F: FedosovStructure, point: Sequence) -> Tensor:
    """Exact rational curvature at a point (any polynomial omega)."""
    n = F.two_n
    pt = F.check_point(point)
    series = gamma_upper_series(F, pt, 1)
    gup = [[[series[m][j][k].constant_term() for k in range(n)] for j in range(n)] for m in range(n)]
    unit = [tuple(1 if a == b else 0 for a in range(n)) for b in range(n)]
    dgup = [
        [[[series[m][l][j].coefficient(unit[k]) for j in range(n)] for l in range(n)] for m in range(n)]
        for k in range(n)
    ]
    omega = F.omega_at(pt)
    w = [[omega[i, j] for j in range(n)] for i in range(n)]
    entry = _riemann(w, gup, dgup, n, Fraction(0))
    return Tensor.from_function(n, 4, lambda *idx: _small(Fraction(entry(*idx))))


def _small(x: Fraction):
    return int(x) if x.denominator == 1 else x
