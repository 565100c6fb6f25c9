"""Normal coordinates as truncated power series and the normal tensors.

The exponential map at a point is ``x(y) = point + y + phi_2(y) + phi_3(y) + ...``
with ``phi_r`` homogeneous of degree r. Because ``t -> x(t y)`` is a geodesic,
comparing degree-r parts of the geodesic equation at t = 1 gives

    r (r - 1) phi_r^l = - [deg r] Gamma^l_{jk}(x(y)) v^j v^k,    v = sum_s s phi_s,

whose right side only involves phi_s with s < r. In the y coordinates the
lowered symbols are

    G_{cab}(y) = J^j_c ( omega_{jl}(x(y)) d_a d_b x^l + Gamma_{jpq}(x(y)) J^p_a J^q_b ),

J = dx/dy, and the m-th normal tensor is d^m G_{ijk} / dy_{a_1} ... dy_{a_m} at 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..algebra.polynomial import Polynomial
from ..algebra.tensor import Tensor
from ..errors import CapExceededError, InvariantViolation
from ..symmetry import build_normal_space, is_member
from .curvature import gamma_upper_series
from .structure import FedosovStructure

DEFAULT_MAX_ORDER = 6


def jet_variables(two_n: int) -> tuple[str, ...]:
    return tuple(f"y{i}" for i in range(1, two_n + 1))


def euler(p: Polynomial) -> Polynomial:
    """sum_i y_i d/dy_i: multiplies each term by its degree."""
    return Polynomial(p.variables, {e: c * sum(e) for e, c in p.terms()})


@dataclass(frozen=True, eq=False)
class CoordinateJet:
    """Truncated map ``y -> point + displacement(y)`` with identity linear part.

    ``order`` counts derivatives of connection coefficients the jet controls;
    the displacement is kept through degree ``order + 2``.
    """

    point: tuple[Fraction, ...]
    order: int
    displacement: tuple[Polynomial, ...]

    def __post_init__(self):
        n = len(self.displacement)
        for l, p in enumerate(self.displacement):
            if p.constant_term() != 0:
                raise ValueError("a coordinate jet must fix the base point")
            for a in range(n):
                unit = tuple(1 if b == a else 0 for b in range(n))
                if p.coefficient(unit) != (1 if a == l else 0):
                    raise ValueError("a coordinate jet must have identity linear part")

    @property
    def degree(self) -> int:
        return self.order + 2

    @property
    def variables(self) -> tuple[str, ...]:
        return self.displacement[0].variables

    @classmethod
    def identity(cls, point: Sequence, order: int) -> "CoordinateJet":
        n = len(point)
        ys = jet_variables(n)
        return cls(tuple(Fraction(x) for x in point), order, tuple(Polynomial.variable(i, ys) for i in range(n)))

    def compose(self, other: "CoordinateJet") -> "CoordinateJet":
        """``self`` after ``other`` (both displacement maps), truncated."""
        order = min(self.order, other.order)
        deg = order + 2
        parts = tuple(p.substitute(list(other.displacement), deg) for p in self.displacement)
        return CoordinateJet(self.point, order, parts)

    def inverse(self) -> "CoordinateJet":
        deg = self.degree
        ys = self.variables
        ident = [Polynomial.variable(i, ys) for i in range(len(ys))]
        nonlinear = [p - q for p, q in zip(self.displacement, ident)]
        g = list(ident)
        for _ in range(deg):
            g = [i - q.substitute(g, deg) for i, q in zip(ident, nonlinear)]
        return CoordinateJet(self.point, self.order, tuple(p.truncate(deg) for p in g))

    def truncate(self, order: int) -> "CoordinateJet":
        return CoordinateJet(self.point, order, tuple(p.truncate(order + 2) for p in self.displacement))

    def jacobian(self) -> list[list[Polynomial]]:
        """J[l][a] = d x^l / d y^a."""
        n = len(self.displacement)
        return [[self.displacement[l].diff(a) for a in range(n)] for l in range(n)]


def _check_order(order: int, max_order: int):
    if order < 0:
        raise ValueError("jet order must be non-negative")
    if order > max_order:
        raise CapExceededError(f"jet order {order} exceeds the cap of {max_order}", order=order, cap=max_order)


def normal_coordinate_jet(
    F: FedosovStructure, point: Sequence, order: int, max_order: int = DEFAULT_MAX_ORDER
) -> CoordinateJet:
    _check_order(order, max_order)
    return _normal_jet(F, tuple(F.check_point(point)), order)


@lru_cache(maxsize=64)
def _normal_jet(F: FedosovStructure, point: tuple[Fraction, ...], order: int) -> CoordinateJet:
    n = F.two_n
    deg = order + 2
    ys = jet_variables(n)
    gup = gamma_upper_series(F, point, max(deg - 2, 0))
    gup = [[[p.rename(ys) for p in row] for row in mat] for mat in gup]
    phi = [Polynomial.variable(i, ys) for i in range(n)]
    for r in range(2, deg + 1):
        current = [p.truncate(r - 1) for p in phi]
        velocity = [euler(p) for p in current]
        new_terms = []
        for l in range(n):
            acc = Polynomial.zero(ys)
            for j, k in itertools.product(range(n), repeat=2):
                g = gup[l][j][k]
                if g.is_zero():
                    continue
                # degree of g(x(y)) part must be <= r - 2
                gx = g.substitute(current, r - 2)
                acc = acc + gx.mul_truncated(velocity[j], r).mul_truncated(velocity[k], r)
            new_terms.append(acc.homogeneous_part(r).scale(Fraction(-1, r * (r - 1))))
        phi = [p + t for p, t in zip(phi, new_terms)]
    return CoordinateJet(point, order, tuple(phi))


def transformed_gamma(F: FedosovStructure, jet: CoordinateJet) -> Tensor:
    """Lowered Christoffel symbols in the jet's coordinates, through degree ``jet.order``."""
    n = F.two_n
    order = jet.order
    ys = jet.variables
    x = list(jet.displacement)
    jac = jet.jacobian()
    hess = [[[x[l].diff(a).diff(b) for b in range(n)] for a in range(n)] for l in range(n)]
    w = [[F.omega[i, j].shift(jet.point).substitute(x, order) for j in range(n)] for i in range(n)]
    g = {
        idx: F.gamma_lower[idx].shift(jet.point).substitute(x, order)
        for idx in itertools.product(range(n), repeat=3)
    }
    zero = Polynomial.zero(ys)
    # inner[j][a][b] = omega_{jl} d_a d_b x^l + Gamma_{jpq} J^p_a J^q_b
    inner = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for a in range(n):
            for b in range(a, n):
                acc = zero
                for l in range(n):
                    if not w[j][l].is_zero() and not hess[l][a][b].is_zero():
                        acc = acc + w[j][l].mul_truncated(hess[l][a][b], order)
                for p, q in itertools.product(range(n), repeat=2):
                    gp = g[j, p, q]
                    if gp.is_zero() or jac[p][a].is_zero() or jac[q][b].is_zero():
                        continue
                    acc = acc + gp.mul_truncated(jac[p][a].mul_truncated(jac[q][b], order), order)
                inner[j][a][b] = inner[j][b][a] = acc

    def entry(c, a, b):
        acc = zero
        for j in range(n):
            if not jac[j][c].is_zero():
                acc = acc + jac[j][c].mul_truncated(inner[j][a][b], order)
        return acc

    return Tensor.from_function(n, 3, entry)


def normal_gamma(F: FedosovStructure, point: Sequence, order: int, max_order: int = DEFAULT_MAX_ORDER) -> Tensor:
    """Lowered symbols in normal coordinates at ``point`` (Taylor polynomial in y)."""
    jet = normal_coordinate_jet(F, point, order, max_order)
    return _normal_gamma_cached(F, jet.point, order)


@lru_cache(maxsize=64)
def _normal_gamma_cached(F: FedosovStructure, point: tuple[Fraction, ...], order: int) -> Tensor:
    return transformed_gamma(F, _normal_jet(F, point, order))


def normal_tensor_from_gamma(gamma: Tensor, m: int) -> Tensor:
    n = gamma.dim

    def entry(i, j, k, *a):
        return _small(gamma[i, j, k].derivative_at_zero(a))

    return Tensor.from_function(n, m + 3, entry)


def normal_tensor(F: FedosovStructure, point: Sequence, m: int, max_order: int = DEFAULT_MAX_ORDER) -> Tensor:
    """The m-th normal tensor at ``point``; always an exact member of N_m."""
    if m < 0:
        raise ValueError("normal tensor order must be non-negative")
    gamma = normal_gamma(F, point, m, max_order)
    t = normal_tensor_from_gamma(gamma, m)
    if not is_member(t, build_normal_space(m, F.two_n)):
        raise InvariantViolation(f"normal tensor of order {m} at {list(map(str, point))} is not in N_{m}")
    return t


def normal_tensors(F: FedosovStructure, point: Sequence, orders: Sequence[int], max_order: int = DEFAULT_MAX_ORDER) -> dict[int, Tensor]:
    """Several normal tensors from one normal-coordinate expansion."""
    if not orders:
        return {}
    top = max(orders)
    gamma = normal_gamma(F, point, top, max_order)
    out = {}
    for m in sorted(set(orders)):
        t = normal_tensor_from_gamma(gamma, m)
        if not is_member(t, build_normal_space(m, F.two_n)):
            raise InvariantViolation(f"normal tensor of order {m} at {list(map(str, point))} is not in N_{m}")
        out[m] = t
    return out


def _small(x: Fraction):
    return int(x) if x.denominator == 1 else x
