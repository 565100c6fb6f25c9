"""Recompute the reference values of the worked example and compare with the expected ones."""

from __future__ import annotations

from fractions import Fraction

from .algebra.parser import poly_parse
from .classification import (
    CURVATURE,
    bianchi_partner_scheme,
    classify,
    enumerate_degree_solutions,
    f1_scheme,
    f2_scheme,
    f3_scheme,
)
from .errors import FedinvError
from .geometry import eval_invariant, independence_certificate, load_structure_file, reference_structure
from .geometry.invariants import curvature_invariant_polynomial
from .symmetry import build_curvature_space, build_normal_space

F1_TEXT = "-4*x3^2*x4^2*(-4*x1^2 + 4*x1 + 1)"
F2_TEXT = "2*x3^2*x4^2*(4*x1^2 - 1)"
F3_VALUE = 6
F3_POINTS = ([1, 0, 1, 1], [0, 0, 1, 1], [2, 0, 1, 1])
CERT_POINTS = ([1, 0, 1, 1], [0, 0, 1, 1], [2, 0, 1, 1])
# the three points above all lie on x3 = x4 = 1; two points off that line
EXTRA_POINTS = ([1, 1, 2, 1], [0, 1, 1, 2])


def _labels(p: int, delta: int) -> list[str]:
    return [s.label() for s in enumerate_degree_solutions(p, delta, 8)]


def _pt(pt) -> str:
    return "(" + ",".join(str(x) for x in pt) + ")"


def run_checks(structure_path: str | None = None) -> list[dict]:
    results: list[dict] = []

    def record(check: str, source: str, expected, compute):
        try:
            got = compute()
            passed = got == expected
        except FedinvError as exc:
            got, passed = f"error: {exc}", False
        results.append({"check": check, "source": source, "expected": str(expected), "got": str(got), "passed": passed})

    record("degrees p=0 delta=-2", "weight -2 scalars: only d1=1", ["d1=1"], lambda: _labels(0, -2))
    record("degrees p=0 delta=-4", "weight -4 scalars: d1=2 and d3=1", ["d3=1", "d1=2"], lambda: _labels(0, -4))
    record("degrees p=2 delta=2", "omega: weight-2 2-tensor, all-zero solution", ["constant"], lambda: _labels(2, 2))
    record("dim N_0 (2n=4)", "N_0 vanishes", 0, lambda: build_normal_space(0, 4).dimension)
    record("dim N_1 = dim curvature space (2n=4)", "N_1 isomorphic to the curvature space", True,
           lambda: build_normal_space(1, 4).dimension == build_curvature_space(4).dimension)
    record("classify p=0 delta=-2 2n=4", "no non-constant weight -2 scalars", 0, lambda: classify(0, -2, 4).dimension)
    weight4 = {}

    def w4():
        weight4["report"] = classify(0, -4, 4, CURVATURE)
        return weight4["report"].dimension

    record("classify p=0 delta=-4 2n=4", "three independent weight -4 scalars", 3, w4)
    record("R_ijkl R^ikjl = f1/2", "relation from the cyclic identity", True,
           lambda: weight4["report"].is_relation({bianchi_partner_scheme(): 1, f1_scheme(): Fraction(-1, 2)}))
    record("classify p=0 delta=-3 2n=4", "odd weights give nothing", 0, lambda: classify(0, -3, 4).dimension)
    record("classify p=1 delta=-3 2n=4", "odd slot count gives nothing", 0, lambda: classify(1, -3, 4).dimension)

    holder = {}

    def load():
        holder["F"] = load_structure_file(structure_path) if structure_path else reference_structure()
        return True

    record("reference structure validates", "worked example on R^4", True, load)
    if "F" not in holder:
        return results
    F = holder["F"]
    coords = F.coordinates
    record("f1 polynomial", "f1 = R_ijkl R^ijkl on the example", str(poly_parse(F1_TEXT, coords)),
           lambda: str(curvature_invariant_polynomial(f1_scheme(), F)))
    record("f2 polynomial", "f2 = Ricci contraction squared on the example", str(poly_parse(F2_TEXT, coords)),
           lambda: str(curvature_invariant_polynomial(f2_scheme(), F)))
    record("f1 at (1,0,1,1) via normal tensors", "f1 polynomial at a point", poly_parse(F1_TEXT, coords).evaluate([1, 0, 1, 1]),
           lambda: eval_invariant(f1_scheme(), F, [1, 0, 1, 1]))
    record("f3 at (0,0,0,0)", "f3 = T_ijk^ijk is 6 on the example", F3_VALUE,
           lambda: eval_invariant(f3_scheme(), F, [0, 0, 0, 0]))
    for pt in F3_POINTS:
        record(f"f3 at {_pt(pt)}", "f3 = T_ijk^ijk is 6 on the example", F3_VALUE, lambda pt=pt: eval_invariant(f3_scheme(), F, pt))
    record("rank of f1, f2, f3 at " + " ".join(_pt(p) for p in CERT_POINTS), "f1, f2, f3 linearly independent", 3,
           lambda: independence_certificate([f1_scheme(), f2_scheme(), f3_scheme()], F, CERT_POINTS).rank)
    wide = CERT_POINTS + EXTRA_POINTS
    record("rank of f1, f2, f3 at " + " ".join(_pt(p) for p in wide), "f1, f2, f3 linearly independent", 3,
           lambda: independence_certificate([f1_scheme(), f2_scheme(), f3_scheme()], F, wide).rank)
    return results
