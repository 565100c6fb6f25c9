"""Acceptance criteria, one test per criterion.

Every test prints a single ``[PASS]``/``[FAIL] criterion N: ...`` line (also
repeated in the terminal summary) and then asserts the same outcome. All
comparisons are exact rationals; runtimes are checked against the budgets.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from fedinv.algebra import canonical_form, inverse_form, poly_parse, trace
from fedinv.classification import (
    CURVATURE,
    DegreeSolution,
    NORMAL,
    bianchi_partner_scheme,
    classify,
    enumerate_degree_solutions,
    evaluate_scheme,
    f1_scheme,
    f2_scheme,
    f3_scheme,
    generate_schemes,
    sample_inputs,
)
from fedinv.geometry import (
    curvature_at,
    eval_invariant,
    independence_certificate,
    normal_tensors,
    random_structure,
    random_symplectic_matrix,
    reference_structure,
)
from fedinv.geometry.invariants import curvature_invariant_polynomial
from fedinv.symmetry import build_normal_space, is_member, n1_to_curvature, random_element

RESULTS: list[str] = []

F1 = "-4*x3^2*x4^2*(-4*x1^2 + 4*x1 + 1)"
F2 = "2*x3^2*x4^2*(4*x1^2 - 1)"
# the three rational points named for the independence check
LISTED_POINTS = ([1, 0, 1, 1], [0, 0, 1, 1], [2, 0, 1, 1])


def report(number: int, title: str, passed: bool, detail: str, elapsed: float, budget: float):
    in_time = elapsed < budget
    ok = passed and in_time
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail} ({elapsed:.1f} s, budget {budget:.0f} s)"
    RESULTS.append(line)
    print(line)
    assert passed, line
    assert in_time, line


def test_criterion_1_worked_example():
    start = time.perf_counter()
    F = reference_structure()
    coords = F.coordinates
    f1 = curvature_invariant_polynomial(f1_scheme(), F)
    f2 = curvature_invariant_polynomial(f2_scheme(), F)
    f1_ok = f1 == poly_parse(F1, coords)
    f2_ok = f2 == poly_parse(F2, coords)
    f3_values = [eval_invariant(f3_scheme(), F, pt) for pt in LISTED_POINTS]
    f3_ok = all(v == 6 for v in f3_values)
    detail = (
        f"f1 identity {'holds' if f1_ok else 'fails: ' + str(f1)}; "
        f"f2 identity {'holds' if f2_ok else 'fails: ' + str(f2)}; "
        f"f3 at {[tuple(p) for p in LISTED_POINTS]} = {[str(v) for v in f3_values]} (expected 6 each)"
    )
    report(1, "f1, f2 polynomials and f3 = 6 on the R^4 example", f1_ok and f2_ok and f3_ok, detail,
           time.perf_counter() - start, 10)


def test_criterion_2_weight_minus_two():
    start = time.perf_counter()
    dimension = classify(0, -2, 4).dimension
    inv = inverse_form(canonical_form(4))
    space = build_normal_space(1, 4)
    values = []
    for seed in range(25):
        t = random_element(space, seed)
        values.append(trace(trace(t, 0, 1, inv), 0, 1, inv).value())
    ok = dimension == 0 and all(v == 0 for v in values)
    report(2, "weight -2 scalars vanish", ok,
           f"dimension {dimension}; omega^ij omega^ka T_ijka = 0 on {sum(v == 0 for v in values)}/25 N_1 samples",
           time.perf_counter() - start, 5)


def test_criterion_3_weight_minus_four():
    start = time.perf_counter()
    normal = classify(0, -4, 4)
    curv = classify(0, -4, 4, CURVATURE)
    bianchi = curv.is_relation({bianchi_partner_scheme(): 1, f1_scheme(): Fraction(-1, 2)})
    witnesses = all(r.witness_holds() for r in normal.results + curv.results)
    F = reference_structure()
    schemes = [f1_scheme(), f2_scheme(), f3_scheme()]
    cert = independence_certificate(schemes, F, LISTED_POINTS)
    wider = independence_certificate(schemes, F, LISTED_POINTS + ([1, 1, 2, 1], [0, 1, 1, 2]))
    ok = normal.dimension == 3 and curv.dimension == 3 and bianchi and witnesses and cert.rank == 3 and cert.verify()
    detail = (
        f"dimension {normal.dimension} (curvature inputs {curv.dimension}); "
        f"Bianchi relation {'detected' if bianchi else 'missing'}; witness minors {'verified' if witnesses else 'FAILED'}; "
        f"certificate rank at listed points {cert.rank} (with two further points: {wider.rank})"
    )
    report(3, "weight -4 space has dimension 3", ok, detail, time.perf_counter() - start, 60)


def brute_solutions(p, delta):
    target = p - delta
    if target < 0:
        return set()
    if target == 0:
        return {()}
    found = set()
    for vec in itertools.product(*[range(target // (m + 1) + 1) for m in range(1, target + 1)]):
        if sum((m + 1) * d for m, d in enumerate(vec, start=1)) == target:
            found.add(tuple((m, d) for m, d in enumerate(vec, start=1) if d))
    return found


def test_criterion_4_degree_enumeration():
    start = time.perf_counter()
    mismatches = []
    cases = 0
    for p in range(0, 5):
        for delta in range(-8, 5):
            cases += 1
            got = {s.degrees for s in enumerate_degree_solutions(p, delta, max(1, p - delta))}
            if got != brute_solutions(p, delta):
                mismatches.append((p, delta))
    worked = (
        {s.degrees for s in enumerate_degree_solutions(0, -2, 8)} == {((1, 1),)}
        and {s.degrees for s in enumerate_degree_solutions(0, -4, 8)} == {((1, 2),), ((3, 1),)}
    )
    report(4, "degree equation solutions", not mismatches and worked,
           f"{cases - len(mismatches)}/{cases} (p, delta) cases match brute force; worked cases {'match' if worked else 'differ'}",
           time.perf_counter() - start, 1)


def test_criterion_5_normal_tensors():
    start = time.perf_counter()
    structures = [("reference", reference_structure(), [1, 0, 1, 1])]
    structures += [(f"random-{s}", random_structure(4, s), [1, -1, 2, 1]) for s in range(5)]
    problems = []
    for name, F, point in structures:
        tensors = normal_tensors(F, point, [0, 1, 2, 3])
        if not tensors[0].is_zero():
            problems.append(f"{name}: N_0 part non-zero")
        for m in (1, 2, 3):
            if not is_member(tensors[m], build_normal_space(m, 4)):
                problems.append(f"{name}: order {m} not in N_{m}")
        if n1_to_curvature(tensors[1]) != curvature_at(F, point):
            problems.append(f"{name}: m=1 tensor does not map to the curvature")
    report(5, "normal tensors lie in N_m and match the curvature", not problems,
           f"{len(structures)} structures, orders 0-3; " + ("all checks hold" if not problems else "; ".join(problems)),
           time.perf_counter() - start, 30)


def test_criterion_6_equivariance_and_homogeneity():
    start = time.perf_counter()
    omega = canonical_form(4)
    schemes = [f1_scheme(), f2_scheme(), f3_scheme()]
    schemes += generate_schemes(DegreeSolution(((1, 1),), 2, 0), NORMAL)
    schemes += generate_schemes(DegreeSolution(((2, 1),), 1, -2), NORMAL)
    failures = 0
    checks = 0
    for seed in range(12):
        m = random_symplectic_matrix(4, random.Random(seed))
        for scheme in schemes:
            inputs = sample_inputs(scheme.factors, 4, seed)
            before = evaluate_scheme(scheme, inputs, omega)
            after = evaluate_scheme(scheme, [t.pullback(m) for t in inputs], omega)
            checks += 1
            failures += after != before.pullback(m)
    for lam in (Fraction(2), Fraction(-3, 5), Fraction(7, 2)):
        for scheme in schemes:
            inputs = sample_inputs(scheme.factors, 4, 1)
            scaled = [t * lam ** (k + 1) for t, k in zip(inputs, scheme.factors)]
            weight = scheme.valence - scheme.solution.delta
            checks += 1
            failures += evaluate_scheme(scheme, scaled, omega) != evaluate_scheme(scheme, inputs, omega) * lam**weight
    report(6, "Sp-equivariance and homogeneity of scheme evaluation", failures == 0,
           f"{checks - failures}/{checks} exact checks (12 symplectic maps, 3 scalings, {len(schemes)} schemes)",
           time.perf_counter() - start, 30)


def test_criterion_7_parity():
    start = time.perf_counter()
    odd_slots = [(1, -1), (1, -3), (3, -1), (3, 1), (1, -5), (3, -3)]
    odd_weights = [(0, -1), (0, -3), (0, -5), (2, -1), (2, 1)]
    dims = {case: classify(*case, 4).dimension for case in odd_slots + odd_weights}
    ok = all(d == 0 for d in dims.values())
    report(7, "odd slot counts and odd weights give nothing", ok,
           f"{sum(d == 0 for d in dims.values())}/{len(dims)} (p, delta) cases have dimension 0",
           time.perf_counter() - start, 1)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
