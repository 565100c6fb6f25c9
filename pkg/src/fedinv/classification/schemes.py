"""Invariant schemes: one complete omega-pairing of the input and output slots.

A scheme for the degree solution (d_1, ..., d_r) takes one tensor per N_m
factor (d_m copies of N_m, ordered by m) and returns a valence-p tensor.
Slots are numbered factor by factor, then the p output slots. A pair
``(s, t)`` with ``s < t`` means

* both inputs:   sum_{x,y} omega^{xy} (.. x at s ..)(.. y at t ..)
* input, output: the input index at ``s`` becomes free output index ``t``
* both outputs:  a factor omega_{st}

so each pair contributes one omega^{-1}, one identity, or one omega.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..algebra.tensor import Tensor, inverse_form
from ..errors import CapExceededError, MembershipError, ShapeError
from ..symmetry import build_normal_space, is_member, n1_to_curvature
from .degrees import DegreeSolution
from .pairings import Pairing, double_factorial, max_slots_from_env

NORMAL = "normal"
CURVATURE = "curvature"


def factor_valence(m: int) -> int:
    return m + 3


def factor_offsets(solution: DegreeSolution) -> list[int]:
    offsets, pos = [], 0
    for m in solution.factors:
        offsets.append(pos)
        pos += factor_valence(m)
    return offsets


@dataclass(frozen=True)
class InvariantScheme:
    solution: DegreeSolution
    pairing: Pairing
    kind: str = NORMAL
    coefficient: Fraction = Fraction(1)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in (NORMAL, CURVATURE):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        expected = self.solution.input_slot_count + self.solution.p
        if self.pairing.slot_count != expected:
            raise ValueError(f"pairing covers {self.pairing.slot_count} slots, scheme needs {expected}")

    @property
    def factors(self) -> tuple[int, ...]:
        return self.solution.factors

    @property
    def valence(self) -> int:
        return self.solution.p

    @property
    def input_slot_count(self) -> int:
        return self.solution.input_slot_count

    def slot_owner(self) -> list[tuple[int, int] | tuple[None, int]]:
        """For every slot, (factor index, position) or (None, output position)."""
        out: list = []
        for f, m in enumerate(self.factors):
            out.extend((f, r) for r in range(factor_valence(m)))
        out.extend((None, o) for o in range(self.valence))
        return out

    def factor_symbol(self, f: int) -> str:
        m = self.factors[f]
        if self.kind == CURVATURE and m == 1:
            return "R"
        if len(set(self.factors)) == 1:
            return "T"
        return f"T{m}"

    def render(self) -> str:
        return render_scheme(self)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "solution": self.solution.to_dict(),
            "pairs": [list(p) for p in self.pairing.pairs],
            "coefficient": str(self.coefficient),
            "notation": self.render(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InvariantScheme":
        solution = DegreeSolution.from_dict(data["solution"])
        slot_count = solution.input_slot_count + solution.p
        pairing = Pairing.from_pairs(slot_count, [tuple(p) for p in data["pairs"]])
        return cls(solution, pairing, data.get("kind", NORMAL), Fraction(data.get("coefficient", "1")), data.get("name", ""))


# -- rendering -----------------------------------------------------------------

_CONTRACTED = "ijklmnpqrstuvwxyz"
_FREE = "abcdefgh"


def _group(marks: list[tuple[str, str]]) -> str:
    # marks: (position "_" or "^", letter); consecutive same-position letters share braces
    out, i = "", 0
    while i < len(marks):
        pos = marks[i][0]
        j = i
        while j < len(marks) and marks[j][0] == pos:
            j += 1
        letters = "".join(letter for _, letter in marks[i:j])
        out += f"{pos}{{{letters}}}" if i == 0 else f"{{}}{pos}{{{letters}}}"
        i = j
    return out


def render_scheme(scheme: InvariantScheme) -> str:
    owner = scheme.slot_owner()
    n_in = scheme.input_slot_count
    marks: dict[int, tuple[str, str]] = {}
    omegas = []
    contracted = iter(_CONTRACTED)
    for s, t in scheme.pairing.pairs:
        if t < n_in:
            letter = next(contracted)
            marks[s] = ("_", letter)
            marks[t] = ("^", letter)
        elif s < n_in:
            marks[s] = ("_", _FREE[t - n_in])
        else:
            omegas.append(f"ω_{{{_FREE[s - n_in]}{_FREE[t - n_in]}}}")
    pieces = []
    offsets = [o for o in range(n_in) if owner[o][1] == 0] if n_in else []
    for f, start in enumerate(offsets):
        val = factor_valence(scheme.factors[f])
        pieces.append(scheme.factor_symbol(f) + _group([marks[start + r] for r in range(val)]))
    pieces.extend(omegas)
    body = " ".join(pieces) if pieces else "1"
    c = scheme.coefficient
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c} " + body


# -- slot symmetries and canonical forms ------------------------------------------


def _blocks(solution: DegreeSolution, kind: str) -> list[tuple[tuple[int, ...], int]]:
    """Slot blocks (size >= 2) on which every input factor is (anti)symmetric."""
    blocks = []
    for m, o in zip(solution.factors, factor_offsets(solution)):
        if kind == CURVATURE and m == 1:
            blocks.append(((o, o + 1), 1))
            blocks.append(((o + 2, o + 3), -1))
        else:
            blocks.append(((o + 1, o + 2), 1))
            if m >= 2:
                blocks.append((tuple(range(o + 3, o + 3 + m)), 1))
    return blocks


def _parity(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetry_group(solution: DegreeSolution, kind: str) -> list[tuple[tuple[int, ...], int]]:
    """Signed slot maps g with value(g . P) = sign * value(P) on symmetric-power inputs."""
    n = solution.input_slot_count + solution.p
    block_choices = []
    for slots, bsign in _blocks(solution, kind):
        options = []
        for perm in itertools.permutations(range(len(slots))):
            sign = _parity(perm) if bsign < 0 else 1
            options.append(({slots[i]: slots[perm[i]] for i in range(len(slots))}, sign))
        block_choices.append(options)
    # permutations of identical factors (same order m)
    offsets = factor_offsets(solution)
    groups: dict[int, list[int]] = {}
    for f, m in enumerate(solution.factors):
        groups.setdefault(m, []).append(f)
    factor_maps = [dict()]
    for m, members in groups.items():
        new = []
        for perm in itertools.permutations(members):
            for base in factor_maps:
                mapping = dict(base)
                for src, dst in zip(members, perm):
                    for r in range(factor_valence(m)):
                        mapping[offsets[src] + r] = offsets[dst] + r
                new.append(mapping)
        factor_maps = new
    elements = []
    for choice in itertools.product(*block_choices):
        block_map = list(range(n))
        sign = 1
        for mapping, s in choice:
            sign *= s
            for a, b in mapping.items():
                block_map[a] = b
        for fmap in factor_maps:
            g = tuple(fmap.get(block_map[i], block_map[i]) for i in range(n))
            elements.append((g, sign))
    return elements


def _act(pairs: Sequence[tuple[int, int]], g: Sequence[int], sign: int) -> tuple[tuple[tuple[int, int], ...], int]:
    out = []
    for a, b in pairs:
        ga, gb = g[a], g[b]
        if ga > gb:
            ga, gb = gb, ga
            sign = -sign
        out.append((ga, gb))
    out.sort()
    return tuple(out), sign


def canonicalize(pairs, group) -> tuple[tuple[tuple[int, int], ...], int]:
    """Lexicographically least image of ``pairs`` under ``group``, with the sign
    relating it to ``pairs``; sign 0 when the scheme vanishes identically."""
    best, best_sign = None, 0
    seen: dict[tuple, int] = {}
    zero = False
    for g, s in group:
        image, sign = _act(pairs, g, s)
        prev = seen.get(image)
        if prev is None:
            seen[image] = sign
        elif prev != sign:
            zero = True
        if best is None or image < best:
            best, best_sign = image, sign
    return best, 0 if zero else best_sign


def _block_sorted_pairings(n: int, blocks: list[tuple[tuple[int, ...], int]]) -> list[list[tuple[int, int]]]:
    """Matchings in which partners increase along every block and no symmetric
    block is paired with itself: one representative per block-permutation orbit."""
    block_of: dict[int, int] = {}
    for b, (slots, _) in enumerate(blocks):
        for s in slots:
            block_of[s] = b
    partner = [-1] * n
    results: list[list[tuple[int, int]]] = []

    def ordered(u: int, v: int) -> bool:
        b = block_of.get(u)
        if b is None:
            return True
        for w in blocks[b][0]:
            pw = partner[w]
            if w == u or pw < 0:
                continue
            if w < u and pw > v:
                return False
            if w > u and pw < v:
                return False
        return True

    def allowed(s: int, t: int) -> bool:
        bs, bt = block_of.get(s), block_of.get(t)
        if bs is not None and bs == bt:
            return blocks[bs][1] < 0
        return ordered(s, t) and ordered(t, s)

    def rec(acc: list[tuple[int, int]]):
        try:
            s = partner.index(-1)
        except ValueError:
            results.append(list(acc))
            return
        for t in range(s + 1, n):
            if partner[t] >= 0 or not allowed(s, t):
                continue
            partner[s], partner[t] = t, s
            acc.append((s, t))
            rec(acc)
            acc.pop()
            partner[s] = partner[t] = -1

    if n % 2 == 0:
        rec([])
    return results


def generate_schemes(solution: DegreeSolution, kind: str = NORMAL, max_slots: int | None = None) -> list[InvariantScheme]:
    """Canonical, not identically vanishing schemes spanning the equivariant maps
    for ``solution``; the result is sorted and duplicate-free."""
    n = solution.input_slot_count + solution.p
    cap = max_slots_from_env() if max_slots is None else max_slots
    if n > cap:
        raise CapExceededError(
            f"solution {solution.label()} needs {n} slots, above the cap of {cap}",
            overflows=[{"solution": solution.to_dict(), "slot_count": n}],
            cap=cap,
        )
    if n % 2:
        return []
    blocks = _blocks(solution, kind)
    group = symmetry_group(solution, kind)
    canonical: dict[tuple, bool] = {}
    for pairs in _block_sorted_pairings(n, blocks):
        rep, sign = canonicalize(pairs, group)
        if rep in canonical:
            continue
        canonical[rep] = sign != 0
    return [
        InvariantScheme(solution, Pairing(n, rep), kind)
        for rep, nonzero in sorted(canonical.items())
        if nonzero
    ]


def raw_pairing_count(solution: DegreeSolution) -> int:
    n = solution.input_slot_count + solution.p
    return 0 if n % 2 else double_factorial(n - 1)


# -- evaluation ----------------------------------------------------------------

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class _Plan:
    subscripts: str
    n_inverse: int
    n_forms: int


def _plan(scheme: InvariantScheme) -> _Plan:
    n_in = scheme.input_slot_count
    slot_letter: dict[int, str] = {}
    output_letter = {}
    extra = []
    letters = iter(_LETTERS)
    for o in range(scheme.valence):
        output_letter[o] = next(letters)
    n_inv = n_form = 0
    for s, t in scheme.pairing.pairs:
        if t < n_in:
            a, b = next(letters), next(letters)
            slot_letter[s], slot_letter[t] = a, b
            extra.append(("inv", a + b))
            n_inv += 1
        elif s < n_in:
            slot_letter[s] = output_letter[t - n_in]
        else:
            extra.append(("form", output_letter[s - n_in] + output_letter[t - n_in]))
            n_form += 1
    terms = []
    pos = 0
    for m in scheme.factors:
        val = factor_valence(m)
        terms.append("".join(slot_letter[pos + r] for r in range(val)))
        pos += val
    inv_terms = [sub for k, sub in extra if k == "inv"]
    form_terms = [sub for k, sub in extra if k == "form"]
    lhs = ",".join(terms + inv_terms + form_terms)
    rhs = "".join(output_letter[o] for o in range(scheme.valence))
    return _Plan(f"{lhs}->{rhs}", n_inv, n_form)


def _contract(plan: _Plan, tensors: Sequence[np.ndarray], inv: np.ndarray, form: np.ndarray, dim: int) -> Tensor:
    operands = list(tensors) + [inv] * plan.n_inverse + [form] * plan.n_forms
    if not operands:
        out = np.empty((), dtype=object)
        out[()] = 1
        return Tensor._wrap(out, 0)
    arr = np.einsum(plan.subscripts, *operands, optimize="greedy")
    if not isinstance(arr, np.ndarray) or arr.ndim == 0:
        out = np.empty((), dtype=object)
        out[()] = arr[()] if isinstance(arr, np.ndarray) else arr
        return Tensor._wrap(out, 0)
    return Tensor._wrap(np.ascontiguousarray(arr), dim)


def evaluate_scheme(
    scheme: InvariantScheme, inputs: Sequence[Tensor], omega: Tensor, check: bool = True
) -> Tensor:
    """Value of the scheme on one tensor per N_m factor, as a valence-p tensor.

    For a symmetric power S^d N_m pass the same tensor d times. N_1 inputs of
    a curvature-kind scheme are mapped to curvature tensors first.
    """
    factors = scheme.factors
    if len(inputs) != len(factors):
        raise ShapeError(f"scheme takes {len(factors)} inputs, got {len(inputs)}")
    dim = omega.dim
    tensors = []
    for t, m in zip(inputs, factors):
        if t.valence != factor_valence(m) or t.dim != dim:
            raise ShapeError(f"input for N_{m} must have valence {factor_valence(m)} and dimension {dim}")
        if check and not is_member(t, build_normal_space(m, dim)):
            raise MembershipError(f"input is not in N_{m}")
        if scheme.kind == CURVATURE and m == 1:
            t = n1_to_curvature(t, check=False)
        tensors.append(t.array)
    inv = inverse_form(omega).array
    result = _contract(_plan(scheme), tensors, inv, omega.array, dim)
    c = scheme.coefficient
    if c == 1:
        return result
    return result * (int(c) if c.denominator == 1 else c)


class SchemeEvaluator:
    """Evaluates many schemes against one fixed omega, caching contraction plans."""

    def __init__(self, omega: Tensor):
        self.omega = omega
        self.dim = omega.dim
        self._inv = inverse_form(omega).array
        self._plans: dict[InvariantScheme, _Plan] = {}

    def __call__(self, scheme: InvariantScheme, inputs: Sequence[Tensor]) -> Tensor:
        plan = self._plans.get(scheme)
        if plan is None:
            plan = self._plans[scheme] = _plan(scheme)
        tensors = []
        for t, m in zip(inputs, scheme.factors):
            if scheme.kind == CURVATURE and m == 1:
                t = n1_to_curvature(t, check=False)
            tensors.append(t.array)
        result = _contract(plan, tensors, self._inv, self.omega.array, self.dim)
        c = scheme.coefficient
        if c == 1:
            return result
        return result * (int(c) if c.denominator == 1 else c)


# -- named invariants ------------------------------------------------------------------


def _scalar_solution(degrees) -> DegreeSolution:
    total = sum((m + 1) * d for m, d in degrees)
    return DegreeSolution(tuple(degrees), 0, -total)


def f1_scheme() -> InvariantScheme:
    """R_{ijkl} R^{ijkl}."""
    sol = _scalar_solution([(1, 2)])
    return InvariantScheme(sol, Pairing(8, ((0, 4), (1, 5), (2, 6), (3, 7))), CURVATURE, name="f1")


def f2_scheme() -> InvariantScheme:
    """rho_{jl} rho^{jl} with the Ricci tensor rho_{jl} = omega^{ik} R_{ijkl}."""
    sol = _scalar_solution([(1, 2)])
    return InvariantScheme(sol, Pairing(8, ((0, 2), (1, 5), (3, 7), (4, 6))), CURVATURE, name="f2")


def antisymmetric_trace_scheme() -> InvariantScheme:
    """R_{ijk}^k R^{ijl}_l = omega^{km} R_{ijkm} omega^{ia} omega^{jb} omega^{lc} R_{abcl}.

    By the cyclic identity omega^{kl} R_{ijkl} = -2 rho_{ij} for this
    orientation, so on curvature tensors this equals -4 times ``f2_scheme``.
    """
    sol = _scalar_solution([(1, 2)])
    # the last pair is written (7, 6) in the formula; canonical orientation costs a sign
    return InvariantScheme(sol, Pairing(8, ((0, 4), (1, 5), (2, 3), (6, 7))), CURVATURE, Fraction(-1), name="f2-trace")


def bianchi_partner_scheme() -> InvariantScheme:
    """R_{ijkl} R^{ikjl}."""
    sol = _scalar_solution([(1, 2)])
    return InvariantScheme(sol, Pairing(8, ((0, 4), (1, 6), (2, 5), (3, 7))), CURVATURE, name="bianchi")


def f3_scheme() -> InvariantScheme:
    """T_{ijk}^{ijk} = omega^{ia} omega^{jb} omega^{kc} T_{ijkabc} on N_3."""
    sol = _scalar_solution([(3, 1)])
    return InvariantScheme(sol, Pairing(6, ((0, 3), (1, 4), (2, 5))), NORMAL, name="f3")


NAMED_SCHEMES = {
    "f1": f1_scheme,
    "f2": f2_scheme,
    "f3": f3_scheme,
    "bianchi": bianchi_partner_scheme,
    "f2-trace": antisymmetric_trace_scheme,
}


def canonical_scheme(scheme: InvariantScheme) -> tuple[InvariantScheme, int]:
    """The generated representative of ``scheme`` and the sign relating them
    (``scheme`` equals ``sign * coefficient * representative``); sign 0 if it vanishes."""
    group = symmetry_group(scheme.solution, scheme.kind)
    rep, sign = canonicalize(scheme.pairing.pairs, group)
    canon = InvariantScheme(scheme.solution, Pairing(scheme.pairing.slot_count, rep), scheme.kind)
    return canon, sign


def contract_scheme(scheme: InvariantScheme, tensors: Sequence[Tensor], inverse: Tensor, form: Tensor) -> Tensor:
    """Raw contraction with explicitly supplied factors and forms.

    No membership checks and no N_1 -> curvature map: ``tensors`` are used
    as given, so curvature-kind schemes can be applied to curvature tensors
    with polynomial entries.
    """
    if len(tensors) != len(scheme.factors):
        raise ShapeError(f"scheme takes {len(scheme.factors)} inputs, got {len(tensors)}")
    result = _contract(_plan(scheme), [t.array for t in tensors], inverse.array, form.array, form.dim)
    c = scheme.coefficient
    if c == 1:
        return result
    return result * (int(c) if c.denominator == 1 else c)
