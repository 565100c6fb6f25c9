"""Degree solutions, pairings, schemes and exact basis extraction."""

import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from fedinv.algebra import RationalMatrix, Tensor, canonical_form, determinant, inverse_form
from fedinv.classification import (
    CURVATURE,
    NAMED_SCHEMES,
    NORMAL,
    DegreeSolution,
    InvariantScheme,
    Pairing,
    antisymmetric_trace_scheme,
    bianchi_partner_scheme,
    canonical_scheme,
    classify,
    double_factorial,
    enumerate_degree_solutions,
    enumerate_pairings,
    evaluate_scheme,
    f1_scheme,
    f2_scheme,
    f3_scheme,
    generate_schemes,
    sample_inputs,
)
from fedinv.errors import CapExceededError, InvalidInputError, MembershipError, ShapeError
from fedinv.geometry import random_symplectic_matrix
from fedinv.symmetry import build_normal_space, n1_to_curvature, random_element


# -- degree equation -------------------------------------------------------------


def brute_solutions(p, delta):
    target = p - delta
    if target < 0:
        return set()
    if target == 0:
        return {()}
    found = set()
    ranges = [range(target // (m + 1) + 1) for m in range(1, target + 1)]
    for vec in itertools.product(*ranges):
        if sum((m + 1) * d for m, d in enumerate(vec, start=1)) == target:
            found.add(tuple((m, d) for m, d in enumerate(vec, start=1) if d))
    return found


@pytest.mark.parametrize("p", range(0, 5))
@pytest.mark.parametrize("delta", range(-8, 5))
def test_degree_solutions_match_brute_force(p, delta):
    got = enumerate_degree_solutions(p, delta, max(1, p - delta))
    assert {s.degrees for s in got} == brute_solutions(p, delta)
    assert len(got) == len({s.degrees for s in got})


def test_degree_solutions_worked_cases():
    assert [s.label() for s in enumerate_degree_solutions(0, -2, 8)] == ["d1=1"]
    assert {s.label() for s in enumerate_degree_solutions(0, -4, 8)} == {"d1=2", "d3=1"}
    assert [s.label() for s in enumerate_degree_solutions(2, 2, 8)] == ["constant"]


def test_degree_solution_validation():
    with pytest.raises(ValueError):
        DegreeSolution(((1, 1),), 0, -4)
    assert DegreeSolution(((1, 2),), 0, -4).factors == (1, 1)


# -- pairings --------------------------------------------------------------------


@pytest.mark.parametrize("n", range(0, 11))
def test_pairing_counts(n):
    pairings = enumerate_pairings(n, max_slots=14)
    assert len(pairings) == (0 if n % 2 else double_factorial(n - 1))
    assert len(set(pairings)) == len(pairings)


def test_pairing_cap():
    with pytest.raises(CapExceededError) as err:
        enumerate_pairings(16, max_slots=14)
    assert err.value.exit_code == 2


def test_pairing_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FEDINV_MAX_SLOTS", "6")
    with pytest.raises(CapExceededError):
        enumerate_pairings(8)
    assert len(enumerate_pairings(6)) == 15


def test_pairing_rejects_non_matchings():
    with pytest.raises(ValueError):
        Pairing(4, ((0, 1), (1, 2)))


# -- a naive contraction oracle ----------------------------------------------------


def naive_value(scheme, inputs, omega):
    """Scalar value by explicit summation over index assignments of every pair."""
    n = omega.dim
    inv = inverse_form(omega)
    tensors = []
    for t, m in zip(inputs, scheme.factors):
        tensors.append(n1_to_curvature(t) if scheme.kind == CURVATURE and m == 1 else t)
    owners = scheme.slot_owner()
    options = [[(x, y, inv[x, y]) for x in range(n) for y in range(n) if inv[x, y]] for _ in scheme.pairing.pairs]
    total = 0
    for choice in itertools.product(*options):
        idx = {}
        weight = 1
        for (s, t), (x, y, w) in zip(scheme.pairing.pairs, choice):
            idx[s], idx[t] = x, y
            weight *= w
        for f, t in enumerate(tensors):
            slots = [i for i, (owner, _) in enumerate(owners) if owner == f]
            weight *= t[tuple(idx[s] for s in slots)]
            if weight == 0:
                break
        total += weight
    return total


def all_raw_schemes(solution, kind):
    n = solution.input_slot_count
    return [InvariantScheme(solution, p, kind) for p in enumerate_pairings(n)]


def raw_rank(solution, kind, two_n, samples=24):
    omega = canonical_form(two_n)
    rows = []
    for s in all_raw_schemes(solution, kind):
        row = []
        for seed in range(samples):
            inputs = sample_inputs(solution.factors, two_n, seed)
            row.append(naive_value(s, inputs, omega))
        rows.append(row)
    m = DomainMatrix([[QQ(x) for x in row] for row in rows], (len(rows), samples), QQ)
    return m.rank()


D1_2 = DegreeSolution(((1, 2),), 0, -4)
D3_1 = DegreeSolution(((3, 1),), 0, -4)


def test_scheme_counts():
    assert len(generate_schemes(D1_2, NORMAL)) == 16
    assert len(generate_schemes(D1_2, CURVATURE)) == 6
    assert len(generate_schemes(D3_1, NORMAL)) == 1


@pytest.mark.parametrize("solution,kind", [(D1_2, CURVATURE), (D1_2, NORMAL), (D3_1, NORMAL)])
def test_canonicalization_matches_naive_values(solution, kind):
    omega = canonical_form(4)
    generated = set(generate_schemes(solution, kind))
    for raw in all_raw_schemes(solution, kind):
        rep, sign = canonical_scheme(raw)
        assert sign == 0 or rep in generated
        for seed in range(2):
            inputs = sample_inputs(solution.factors, 4, seed)
            assert naive_value(raw, inputs, omega) == sign * naive_value(rep, inputs, omega)


@pytest.mark.parametrize("two_n,expected", [(2, 1), (4, 2)])
def test_rank_of_all_raw_pairings(two_n, expected):
    # every one of the 105 raw contractions, evaluated by explicit summation
    assert raw_rank(D1_2, NORMAL, two_n) == expected
    assert classify(0, -4, two_n).result_for(D1_2).rank == expected


def test_d3_raw_rank():
    assert raw_rank(D3_1, NORMAL, 4, samples=6) == 1


@pytest.mark.parametrize("name", sorted(NAMED_SCHEMES))
def test_einsum_evaluation_matches_naive(name):
    scheme = NAMED_SCHEMES[name]()
    omega = canonical_form(4)
    for seed in range(3):
        inputs = sample_inputs(scheme.factors, 4, seed)
        assert evaluate_scheme(scheme, inputs, omega).value() == scheme.coefficient * naive_value(scheme, inputs, omega)


def test_bianchi_and_trace_identities_on_samples():
    omega = canonical_form(4)
    for seed in range(10):
        inputs = sample_inputs((1, 1), 4, seed)
        f1 = evaluate_scheme(f1_scheme(), inputs, omega).value()
        f2 = evaluate_scheme(f2_scheme(), inputs, omega).value()
        assert evaluate_scheme(bianchi_partner_scheme(), inputs, omega).value() == Fraction(f1, 2)
        assert evaluate_scheme(antisymmetric_trace_scheme(), inputs, omega).value() == -4 * f2


# -- equivariance and homogeneity ------------------------------------------------------


def tensor_outputs():
    """A few valence-2 schemes (weight 0 on N_1, and omega itself)."""
    sol = DegreeSolution(((1, 1),), 2, 0)
    return generate_schemes(sol, NORMAL) + generate_schemes(DegreeSolution((), 2, 2), NORMAL)


@pytest.mark.parametrize("seed", range(12))
def test_symplectic_equivariance(seed):
    rng = random.Random(seed)
    m = random_symplectic_matrix(4, rng)
    omega = canonical_form(4)
    assert omega.pullback(m) == omega
    for scheme in [f1_scheme(), f2_scheme(), f3_scheme()] + tensor_outputs():
        inputs = sample_inputs(scheme.factors, 4, seed)
        moved = [t.pullback(m) for t in inputs]
        before = evaluate_scheme(scheme, inputs, omega)
        after = evaluate_scheme(scheme, moved, omega)
        assert after == before.pullback(m)


@pytest.mark.parametrize("seed", range(4))
def test_general_linear_naturality(seed):
    # pulling back inputs and omega along any invertible map transforms values by the same map
    rng = random.Random(100 + seed)
    while True:
        a = [[Fraction(rng.randint(-2, 2)) for _ in range(4)] for _ in range(4)]
        if determinant(RationalMatrix.from_rows(a)) != 0:
            break
    omega = canonical_form(4)
    for scheme in [f1_scheme(), f3_scheme()] + tensor_outputs():
        inputs = sample_inputs(scheme.factors, 4, seed)
        before = evaluate_scheme(scheme, inputs, omega)
        after = evaluate_scheme(scheme, [t.pullback(a) for t in inputs], omega.pullback(a), check=False)
        assert after == before.pullback(a)


@settings(max_examples=15)
@given(st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda x: x != 0), st.integers(0, 50))
def test_homogeneity(lam, seed):
    omega = canonical_form(4)
    for scheme in [f1_scheme(), f2_scheme(), f3_scheme()] + tensor_outputs():
        inputs = sample_inputs(scheme.factors, 4, seed)
        scaled = [t * lam ** (m + 1) for t, m in zip(inputs, scheme.factors)]
        weight = scheme.valence - scheme.solution.delta
        assert evaluate_scheme(scheme, scaled, omega) == evaluate_scheme(scheme, inputs, omega) * lam**weight


def test_zero_inputs_give_zero():
    omega = canonical_form(4)
    zero = build_normal_space(3, 4).combination([0] * build_normal_space(3, 4).dimension)
    assert evaluate_scheme(f3_scheme(), [zero], omega).value() == 0


def test_evaluation_checks_inputs():
    omega = canonical_form(4)
    member = random_element(build_normal_space(1, 4), 0)
    with pytest.raises(ShapeError):
        evaluate_scheme(f1_scheme(), [member], omega)
    with pytest.raises(ShapeError):
        evaluate_scheme(f3_scheme(), [member], omega)
    with pytest.raises(MembershipError):
        evaluate_scheme(f3_scheme(), [Tensor.from_function(4, 6, lambda *i: 1)], omega)


def test_scheme_round_trip_and_rendering():
    for name, make in NAMED_SCHEMES.items():
        s = make()
        back = InvariantScheme.from_dict(json.loads(json.dumps(s.to_dict())))
        assert back == s
    assert f1_scheme().render() == "R_{ijkl} R^{ijkl}"
    assert f3_scheme().render() == "T_{ijk}{}^{ijk}"


# -- classification ------------------------------------------------------------------


def test_weight_minus_two_is_empty():
    report = classify(0, -2, 4)
    assert report.dimension == 0
    assert report.scheme_counts == {"d1=1": 1}


@pytest.mark.parametrize("kind", [NORMAL, CURVATURE])
def test_weight_minus_four(kind):
    report = classify(0, -4, 4, kind)
    assert report.dimension == 3
    for result in report.results:
        assert result.witness_holds()
        assert result.sufficient
    if kind == CURVATURE:
        assert report.is_relation({bianchi_partner_scheme(): 1, f1_scheme(): Fraction(-1, 2)})
        assert report.is_relation({antisymmetric_trace_scheme(): 1, f2_scheme(): 4})
        assert not report.is_relation({f1_scheme(): 1, f2_scheme(): 1})


def test_low_dimensional_collapse():
    # in dimension 2 the two quadratic curvature scalars are proportional
    assert classify(0, -4, 2, CURVATURE).dimension == 2


@pytest.mark.parametrize("p,delta", [(1, -1), (1, -3), (3, -1), (0, -3), (0, -5), (2, -1)])
def test_odd_slot_counts_vanish(p, delta):
    assert classify(p, delta, 4).dimension == 0


def test_constant_solution_is_the_form():
    report = classify(2, 2, 4)
    assert report.dimension == 1
    assert report.basis[0].solution.is_constant


def test_report_is_deterministic_json():
    a = classify(0, -4, 4, CURVATURE).to_json()
    b = classify(0, -4, 4, CURVATURE).to_json()
    assert a == b
    data = json.loads(a)
    assert data["schema_version"] == 1
    assert data["dimension"] == 3


def test_different_seeds_agree_on_dimension():
    assert classify(0, -4, 4, seeds=range(500, 600)).dimension == 3


def test_classify_input_errors():
    with pytest.raises(InvalidInputError):
        classify(0, -4, 3)
    with pytest.raises(InvalidInputError):
        classify(-1, -4, 4)
    with pytest.raises(CapExceededError):
        classify(0, -4, 10)
    with pytest.raises(CapExceededError) as err:
        classify(0, -8, 4, max_slots=8)
    assert err.value.details["overflows"]
