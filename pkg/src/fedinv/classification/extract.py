"""Exact basis extraction by evaluation at random normal tensors.

For each degree solution the schemes are evaluated on sampled inputs; every
output component of every sample is one column of the evaluation matrix
(rows = schemes). The row rank of that matrix is a certified lower bound for
the dimension of the span of the schemes. Sampling stops once the matrix has
at least ``k * rank`` columns and the last ``k`` samples added no rank, which
makes the rank an upper bound as well unless the samples are degenerate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..algebra.linalg import Echelon, RationalMatrix, determinant, integer_row, sparse_kernel
from ..algebra.tensor import Tensor, canonical_form
from ..errors import CapExceededError, InvalidInputError
from ..symmetry import build_normal_space, random_element
from .degrees import DegreeSolution, enumerate_degree_solutions
from .pairings import DEFAULT_MAX_DIM, max_slots_from_env, double_factorial
from .schemes import NORMAL, CURVATURE, InvariantScheme, SchemeEvaluator, canonical_scheme, generate_schemes

SCHEMA_VERSION = 1
DIMENSION_LABEL = "certified-lower / generic-upper"
MAX_SAMPLES = 10_000


def sample_seed(seed: int, m: int) -> int:
    """Seed of the N_m input in the sample with seed ``seed``."""
    return seed * 1009 + m


def sample_inputs(factors: Sequence[int], two_n: int, seed: int) -> list[Tensor]:
    """One random member per factor; repeated orders share a tensor (symmetric powers)."""
    cache: dict[int, Tensor] = {}
    out = []
    for m in factors:
        if m not in cache:
            cache[m] = random_element(build_normal_space(m, two_n), sample_seed(seed, m))
        out.append(cache[m])
    return out


@dataclass
class SolutionResult:
    solution: DegreeSolution
    schemes: list[InvariantScheme]
    raw_pairings: int
    rank: int
    basis: list[int]
    relations: list[dict[int, Fraction]]
    witness_rows: list[int]
    witness_columns: list[tuple[int, int]]
    witness_matrix: list[list[Fraction]]
    witness_determinant: Fraction
    samples: list[int]
    sufficient: bool
    two_n: int

    @property
    def basis_schemes(self) -> list[InvariantScheme]:
        return [self.schemes[i] for i in self.basis]

    def is_relation(self, combination: dict[InvariantScheme, Fraction]) -> bool:
        """Whether the linear combination vanishes on every sample (exactly)."""
        index = {s: i for i, s in enumerate(self.schemes)}
        y: dict[int, Fraction] = {}
        for scheme, coeff in combination.items():
            canon, sign = canonical_scheme(scheme)
            if sign == 0:
                continue
            if canon not in index:
                raise KeyError(f"{scheme.render()} is not among the generated schemes")
            i = index[canon]
            y[i] = y.get(i, 0) + Fraction(coeff) * scheme.coefficient * sign
        y = {i: c for i, c in y.items() if c}
        pivots = set(self.basis)
        expected: dict[int, Fraction] = {}
        for rel in self.relations:
            free = next(i for i in rel if i not in pivots)
            c = y.get(free, 0)
            if c:
                for i, v in rel.items():
                    expected[i] = expected.get(i, 0) + c * v
        expected = {i: c for i, c in expected.items() if c}
        return expected == y

    def witness_holds(self) -> bool:
        """Recompute the witness minor from scratch and check it is non-singular."""
        if self.rank == 0:
            return True
        recomputed = _witness_values(self)
        m = RationalMatrix.from_rows(recomputed)
        return recomputed == self.witness_matrix and determinant(m) == self.witness_determinant != 0

    def to_dict(self) -> dict:
        return {
            "solution": self.solution.to_dict(),
            "label": self.solution.label(),
            "all_zero_solution": self.solution.is_constant,
            "slot_count": self.solution.input_slot_count + self.solution.p,
            "raw_pairings": self.raw_pairings,
            "scheme_count": len(self.schemes),
            "rank": self.rank,
            "basis": [self.schemes[i].to_dict() for i in self.basis],
            "relations": [
                {"terms": [{"scheme": self.schemes[i].render(), "index": i, "coefficient": str(c)} for i, c in sorted(rel.items())]}
                for rel in self.relations
            ],
            "samples": self.samples,
            "samples_sufficient": self.sufficient,
            "witness": {
                "rows": self.witness_rows,
                "columns": [list(c) for c in self.witness_columns],
                "matrix": [[str(x) for x in row] for row in self.witness_matrix],
                "determinant": str(self.witness_determinant),
            },
        }


def _witness_values(result: SolutionResult) -> list[list[Fraction]]:
    two_n = result.two_n
    evaluator = SchemeEvaluator(canonical_form(two_n))
    rows = []
    inputs = {s: sample_inputs(result.solution.factors, two_n, s) for s, _ in result.witness_columns}
    for r in result.witness_rows:
        scheme = result.schemes[r]
        row = []
        for s, comp in result.witness_columns:
            row.append(Fraction(evaluator(scheme, inputs[s]).flat()[comp]))
        rows.append(row)
    return rows


def extract_solution(
    solution: DegreeSolution,
    schemes: list[InvariantScheme],
    two_n: int,
    seeds: Sequence[int] | None = None,
    k: int = 3,
    omega: Tensor | None = None,
) -> SolutionResult:
    omega = canonical_form(two_n) if omega is None else omega
    evaluator = SchemeEvaluator(omega)
    n = len(schemes)
    echelon = Echelon()
    witness_cols: list[tuple[int, int]] = []
    witness_vals: list[dict[int, Fraction]] = []
    used: list[int] = []
    stale = 0
    n_columns = 0
    seed_iter: Iterable[int] = seeds if seeds is not None else range(MAX_SAMPLES)
    sufficient = False
    for seed in seed_iter:
        if n == 0:
            sufficient = True
            break
        used.append(seed)
        inputs = sample_inputs(solution.factors, two_n, seed)
        values = [evaluator(s, inputs).flat() for s in schemes]
        grew = False
        for comp in range(len(values[0])):
            col = {i: values[i][comp] for i in range(n) if values[i][comp] != 0}
            n_columns += 1
            if col and echelon.insert(integer_row(col)):
                witness_cols.append((seed, comp))
                witness_vals.append(col)
                grew = True
        stale = 0 if grew else stale + 1
        if echelon.rank == n or (stale >= k and n_columns >= k * echelon.rank):
            sufficient = True
            break
    rank = echelon.rank
    reduced = echelon.reduced()
    basis = sorted(reduced)
    _, kernel = sparse_kernel(reduced.values(), n)
    relations = [{i: Fraction(c) for i, c in vec.items() if c} for vec in kernel]
    minor = [[Fraction(witness_vals[c].get(r, 0)) for c in range(rank)] for r in basis]
    det = determinant(RationalMatrix.from_rows(minor)) if rank else Fraction(1)
    result = SolutionResult(
        solution=solution,
        schemes=list(schemes),
        raw_pairings=_raw_count(solution),
        rank=rank,
        basis=basis,
        relations=relations,
        witness_rows=basis,
        witness_columns=witness_cols,
        witness_matrix=minor,
        witness_determinant=det,
        samples=used,
        sufficient=sufficient,
        two_n=two_n,
    )
    return result


def _raw_count(solution: DegreeSolution) -> int:
    n = solution.input_slot_count + solution.p
    return 0 if n % 2 else double_factorial(n - 1)


@dataclass
class ClassificationReport:
    p: int
    delta: int
    two_n: int
    kind: str
    k: int
    results: list[SolutionResult] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return sum(r.rank for r in self.results)

    @property
    def scheme_counts(self) -> dict[str, int]:
        return {r.solution.label(): len(r.schemes) for r in self.results}

    @property
    def basis(self) -> list[InvariantScheme]:
        return [s for r in self.results for s in r.basis_schemes]

    def result_for(self, solution: DegreeSolution) -> SolutionResult:
        for r in self.results:
            if r.solution == solution:
                return r
        raise KeyError(solution.label())

    def is_relation(self, combination: dict[InvariantScheme, Fraction]) -> bool:
        solutions = {s.solution for s in combination}
        if len(solutions) != 1:
            raise ValueError("a relation must involve schemes of a single degree solution")
        return self.result_for(solutions.pop()).is_relation(combination)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "p": self.p,
            "delta": self.delta,
            "two_n": self.two_n,
            "kind": self.kind,
            "k": self.k,
            "dimension": self.dimension,
            "dimension_label": DIMENSION_LABEL,
            "solutions": [r.to_dict() for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def render_text(self) -> str:
        lines = [
            f"valence p = {self.p}, weight delta = {self.delta}, dimension 2n = {self.two_n}, inputs: {self.kind}",
            f"dimension: {self.dimension} ({DIMENSION_LABEL})",
        ]
        if not self.results:
            lines.append("no degree solutions")
        for r in self.results:
            tag = " [all-zero solution]" if r.solution.is_constant else ""
            lines.append(
                f"  {r.solution.label()}{tag}: {r.solution.input_slot_count + r.solution.p} slots, "
                f"{r.raw_pairings} pairings, {len(r.schemes)} schemes, rank {r.rank}"
            )
            for s in r.basis_schemes:
                lines.append(f"    {s.render()}")
            if r.relations:
                lines.append(f"    relations: {len(r.relations)}")
            if not r.sufficient:
                lines.append("    warning: sampling stopped before the rank stabilised")
        return "\n".join(lines) + "\n"


def extract_basis(
    schemes: Sequence[InvariantScheme],
    two_n: int,
    seeds: Sequence[int] | None = None,
    k: int = 3,
    p: int | None = None,
    delta: int | None = None,
) -> ClassificationReport:
    """Rank and basis of the span of ``schemes`` (grouped by degree solution)."""
    groups: dict[DegreeSolution, list[InvariantScheme]] = {}
    for s in schemes:
        groups.setdefault(s.solution, []).append(s)
    kinds = {s.kind for s in schemes} or {NORMAL}
    if len(kinds) != 1:
        raise ValueError("all schemes must share one input kind")
    if p is None or delta is None:
        first = next(iter(groups), None)
        p = first.p if first else 0
        delta = first.delta if first else 0
    report = ClassificationReport(p, delta, two_n, kinds.pop(), k)
    for solution in sorted(groups):
        report.results.append(extract_solution(solution, groups[solution], two_n, seeds, k))
    return report


def classify(
    p: int,
    delta: int,
    two_n: int,
    kind: str = NORMAL,
    seeds: Sequence[int] | None = None,
    max_slots: int | None = None,
    k: int = 3,
    max_dim: int = DEFAULT_MAX_DIM,
) -> ClassificationReport:
    """Basis of the weight-``delta``, valence-``p`` equivariant maps in dimension ``two_n``."""
    if two_n < 2 or two_n % 2:
        raise InvalidInputError(f"dimension must be an even integer >= 2, got {two_n}")
    if p < 0:
        raise InvalidInputError("valence must be non-negative")
    if kind not in (NORMAL, CURVATURE):
        raise InvalidInputError(f"unknown input kind {kind!r}")
    if two_n > max_dim:
        raise CapExceededError(f"dimension {two_n} exceeds the cap of {max_dim}", two_n=two_n, cap=max_dim)
    cap = max_slots_from_env() if max_slots is None else max_slots
    solutions = enumerate_degree_solutions(p, delta, max(1, p - delta))
    overflows = [
        {"solution": s.to_dict(), "label": s.label(), "slot_count": s.input_slot_count + p}
        for s in solutions
        if s.input_slot_count + p > cap and (s.input_slot_count + p) % 2 == 0
    ]
    if overflows:
        raise CapExceededError(
            f"{len(overflows)} degree solution(s) exceed the slot cap of {cap}", overflows=overflows, cap=cap
        )
    report = ClassificationReport(p, delta, two_n, kind, k)
    for s in solutions:
        schemes = generate_schemes(s, kind, max_slots=max(cap, s.input_slot_count + p))
        report.results.append(extract_solution(s, schemes, two_n, seeds, k))
    return report
