"""Exact polynomial, parser, linear algebra and tensor substrate."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from fedinv.algebra import (
    Polynomial,
    RationalMatrix,
    Tensor,
    canonical_form,
    determinant,
    inverse_form,
    parse_rational,
    poly_parse,
    rank,
    rank_kernel,
    solve,
    tensor_contract,
    trace,
)
from fedinv.errors import PolynomialSyntaxError, ShapeError, UnknownVariableError

VARS = ("x1", "x2", "x3")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exponents = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exponents, rationals, max_size=5).map(lambda t: Polynomial(VARS, t))
points = st.lists(rationals, min_size=3, max_size=3)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(VARS)


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)


@given(polys)
def test_printing_round_trips_through_the_parser(p):
    assert poly_parse(str(p), VARS) == p


@given(polys, st.integers(0, 2))
def test_diff_matches_sympy(p, i):
    xs = sp.symbols(VARS)
    expr = sp.sympify(str(p).replace("^", "**"), locals=dict(zip(VARS, xs)))
    ours = sp.sympify(str(p.diff(i)).replace("^", "**"), locals=dict(zip(VARS, xs)))
    assert sp.expand(sp.diff(expr, xs[i]) - ours) == 0


@given(polys, points)
def test_shift_is_translation(p, pt):
    q = p.shift(pt)
    assert q.evaluate([0, 0, 0]) == p.evaluate(pt)
    assert q.evaluate([1, 2, 3]) == p.evaluate([pt[0] + 1, pt[1] + 2, pt[2] + 3])


@given(polys, polys, st.integers(0, 4))
def test_truncated_product(a, b, d):
    assert a.mul_truncated(b, d) == (a * b).truncate(d)


def test_parser_examples():
    x1, x2 = (Polynomial.variable(i, VARS) for i in range(2))
    assert poly_parse("x1*x3", VARS) == x1 * Polynomial.variable(2, VARS)
    assert poly_parse("-(x1 + 1/2)^2", VARS) == -((x1 + Fraction(1, 2)) * (x1 + Fraction(1, 2)))
    assert poly_parse("3/4 - x2", VARS) == Polynomial.constant(Fraction(3, 4), VARS) - x2
    assert poly_parse("0", VARS).is_zero()


@pytest.mark.parametrize("text", ["x1 +", "x1 ** 2", "2x", "(x1", "x1 $ 2", "1/0", ""])
def test_parser_rejects_malformed_input(text):
    with pytest.raises(PolynomialSyntaxError):
        poly_parse(text, VARS)


def test_parser_reports_unknown_variables():
    with pytest.raises(UnknownVariableError):
        poly_parse("x1 + y", VARS)


def test_parse_rational():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational("7") == 7
    for bad in ("1.5", "a", "1/0", "1//2"):
        with pytest.raises(PolynomialSyntaxError):
            parse_rational(bad)


small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
)


def brute_rank(rows):
    """Largest k with a non-zero k x k minor (sympy determinants)."""
    r, c = len(rows), len(rows[0])
    for k in range(min(r, c), 0, -1):
        for rs in itertools.combinations(range(r), k):
            for cs in itertools.combinations(range(c), k):
                if sp.Matrix([[rows[i][j] for j in cs] for i in rs]).det() != 0:
                    return k
    return 0


@given(small_matrices)
def test_rank_matches_minor_oracle(rows):
    assert rank(RationalMatrix.from_rows(rows)) == brute_rank(rows)


@given(small_matrices)
def test_kernel_vectors_are_annihilated(rows):
    m = RationalMatrix.from_rows(rows)
    r, k = rank_kernel(m)
    assert r + k.cols == m.cols
    for vec in k.columns():
        assert all(v == 0 for v in m.apply(vec))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(rows):
    assert determinant(RationalMatrix.from_rows(rows)) == sp.Matrix(rows).det()


def test_solve():
    m = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert solve(m, [5, 6]) == [-4, Fraction(9, 2)]
    assert solve(RationalMatrix.from_rows([[1, 1], [1, 1]]), [1, 2]) is None


def test_canonical_form_and_inverse():
    w = canonical_form(4)
    inv = inverse_form(w)
    # omega^{ik} omega_{jk} = delta
    for i, j in itertools.product(range(4), repeat=2):
        assert sum(inv[i, k] * w[j, k] for k in range(4)) == (i == j)
    with pytest.raises(ShapeError):
        canonical_form(3)


def test_trace_of_the_form_is_the_dimension():
    w = canonical_form(4)
    assert trace(w, 0, 1, inverse_form(w)).value() == 4


@given(st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.lists(st.integers(-4, 4), min_size=16, max_size=16), st.integers(-3, 3))
def test_contraction_is_bilinear(a, b, lam):
    inv = inverse_form(canonical_form(4))
    ta, tb = Tensor.from_flat(4, 2, a), Tensor.from_flat(4, 2, b)
    lhs = tensor_contract(ta * lam + tb, ta, [(0, 0), (1, 1)], inv).value()
    rhs = lam * tensor_contract(ta, ta, [(0, 0), (1, 1)], inv).value() + tensor_contract(tb, ta, [(0, 0), (1, 1)], inv).value()
    assert lhs == rhs


def test_contraction_matches_explicit_sum():
    inv = inverse_form(canonical_form(2))
    a = Tensor.from_flat(2, 2, [1, 2, 3, 4])
    b = Tensor.from_flat(2, 1, [5, 7])
    got = tensor_contract(a, b, [(1, 0)], inv)
    want = [sum(a[i, x] * inv[x, y] * b[y] for x in range(2) for y in range(2)) for i in range(2)]
    assert got.flat() == want


def test_object_arrays_stay_exact():
    t = Tensor.from_flat(2, 1, [Fraction(1, 3), Fraction(2, 3)])
    assert t.array.dtype == np.dtype(object)
    assert (t * 3).flat() == [1, 2]
