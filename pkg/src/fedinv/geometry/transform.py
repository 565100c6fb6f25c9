"""Pullbacks of structures along polynomial coordinate changes, and random structures."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from ..algebra.polynomial import Polynomial
from ..algebra.tensor import Tensor
from .structure import FedosovStructure, build_structure, default_coordinates


def pullback_structure(F: FedosovStructure, psi: Sequence[Polynomial], check: bool = True) -> FedosovStructure:
    """The structure in coordinates u with x = psi(u).

    omega'_{ab} = omega_{jk}(psi) J^j_a J^k_b and
    Gamma'_{cab} = J^j_c (omega_{jl}(psi) d_a d_b psi^l + Gamma_{jpq}(psi) J^p_a J^q_b).
    ``psi`` must be a polynomial diffeomorphism (e.g. triangular with unit diagonal
    or an invertible linear map) for the result to be a structure on the same space.
    """
    n = F.two_n
    if len(psi) != n:
        raise ValueError(f"need {n} component polynomials")
    us = psi[0].variables
    jac = [[psi[l].diff(a) for a in range(n)] for l in range(n)]
    w = [[F.omega[i, j].substitute(list(psi)) for j in range(n)] for i in range(n)]
    g = {idx: F.gamma_lower[idx].substitute(list(psi)) for idx in itertools.product(range(n), repeat=3)}
    zero = Polynomial.zero(us)

    def omega_entry(a, b):
        acc = zero
        for j, k in itertools.product(range(n), repeat=2):
            if not w[j][k].is_zero() and not jac[j][a].is_zero() and not jac[k][b].is_zero():
                acc = acc + w[j][k] * jac[j][a] * jac[k][b]
        return acc

    inner = {}
    for j, a, b in itertools.product(range(n), repeat=3):
        if b < a:
            inner[j, a, b] = inner[j, b, a]
            continue
        acc = zero
        for l in range(n):
            h = psi[l].diff(a).diff(b)
            if not h.is_zero() and not w[j][l].is_zero():
                acc = acc + w[j][l] * h
        for p, q in itertools.product(range(n), repeat=2):
            if not g[j, p, q].is_zero() and not jac[p][a].is_zero() and not jac[q][b].is_zero():
                acc = acc + g[j, p, q] * jac[p][a] * jac[q][b]
        inner[j, a, b] = acc

    gamma = {}
    for c, a, b in itertools.product(range(n), repeat=3):
        acc = zero
        for j in range(n):
            if not jac[j][c].is_zero():
                acc = acc + jac[j][c] * inner[j, a, b]
        if not acc.is_zero():
            gamma[c, a, b] = acc
    omega = [[omega_entry(a, b) for b in range(n)] for a in range(n)]
    return build_structure(n, omega, gamma, us, check=check)


def linear_map(matrix: Sequence[Sequence], variables: Sequence[str]) -> list[Polynomial]:
    """x^l = sum_a M[l][a] u^a."""
    n = len(matrix)
    return [
        sum((Polynomial.variable(a, variables).scale(Fraction(matrix[l][a])) for a in range(n)), Polynomial.zero(variables))
        for l in range(n)
    ]


def random_symplectic_matrix(two_n: int, rng: random.Random, steps: int = 6) -> list[list[Fraction]]:
    """Product of symplectic transvections v -> v + c * eta(u, v) u for the canonical form."""
    m = [[Fraction(int(i == j)) for j in range(two_n)] for i in range(two_n)]
    for _ in range(steps):
        u = [Fraction(rng.randint(-2, 2)) for _ in range(two_n)]
        if not any(u):
            continue
        c = Fraction(rng.choice([-2, -1, 1, 2]), rng.choice([1, 2]))
        # T = I + c u (eta u)^T with (eta u)_k = sum_i u_i eta_{ik}
        eta_u = [Fraction(0)] * two_n
        for a in range(0, two_n, 2):
            eta_u[a + 1] += u[a]
            eta_u[a] -= u[a + 1]
        t = [[Fraction(int(i == j)) + c * u[i] * eta_u[j] for j in range(two_n)] for i in range(two_n)]
        m = [[sum(t[i][k] * m[k][j] for k in range(two_n)) for j in range(two_n)] for i in range(two_n)]
    return m


def triangular_map(two_n: int, rng: random.Random, variables: Sequence[str] | None = None, max_degree: int = 2) -> list[Polynomial]:
    """x^l = u^l + p_l(u^1, ..., u^{l-1}): a polynomial diffeomorphism with polynomial inverse."""
    us = tuple(variables) if variables else default_coordinates(two_n)
    out = []
    for l in range(two_n):
        p = Polynomial.variable(l, us)
        for _ in range(2 if l else 0):
            e = [0] * two_n
            for _ in range(rng.randint(1, max_degree)):
                e[rng.randrange(l)] += 1
            p = p + Polynomial.monomial(tuple(e), rng.choice([-1, 1, 2]), us)
        out.append(p)
    return out


def random_structure(two_n: int, seed: int, max_degree: int = 3, terms: int = 6, warp: bool = True) -> FedosovStructure:
    """A valid structure: canonical omega with a random fully symmetric Gamma
    (which is exactly the compatibility condition for constant omega),
    optionally pulled back along a random triangular diffeomorphism so that
    omega becomes non-constant."""
    rng = random.Random(seed)
    us = default_coordinates(two_n)
    gamma: dict[tuple[int, int, int], Polynomial] = {}
    for _ in range(terms):
        idx = tuple(sorted(rng.randrange(two_n) for _ in range(3)))
        e = [0] * two_n
        for _ in range(rng.randint(0, max_degree)):
            e[rng.randrange(two_n)] += 1
        mono = Polynomial.monomial(tuple(e), rng.choice([-2, -1, 1, 2]), us)
        for perm in set(itertools.permutations(idx)):
            gamma[perm] = gamma.get(perm, Polynomial.zero(us)) + mono
    F = build_structure(two_n, None, gamma, us)
    if warp:
        F = pullback_structure(F, triangular_map(two_n, rng, us))
    return F


def apply_map(psi: Sequence[Polynomial], point: Sequence) -> list[Fraction]:
    return [p.evaluate(point) for p in psi]
