"""Normal-tensor spaces N_m and the symplectic curvature space as exact subspaces.

A subspace is cut out of ``(V*)^{\\otimes valence}`` by a list of
:class:`SymmetryConstraint`. Slot symmetries (plain or signed swaps and
full block symmetries) are solved directly by parametrising the tensor by
orbit representatives; the remaining linear constraints are then imposed on
the orbit coordinates and solved with exact sparse elimination. The
resulting kernel of the stacked system is the same subspace as solving all
constraints on raw components at once (``constraint_rows`` exposes that raw
system for independent checking).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterator, Sequence

import numpy as np

from .algebra.linalg import RationalMatrix, integer_row, solve, sparse_kernel, SparseRow
from .algebra.tensor import Tensor, permute_axes
from .errors import MembershipError, ShapeError

SWAP = "swap"
BLOCK = "block"
SYMMETRIZATION_ZERO = "symmetrization-zero"
DERIVED = "derived"
CYCLIC = "cyclic"


def _swap_perm(valence: int, a: int, b: int) -> tuple[int, ...]:
    perm = list(range(valence))
    perm[a], perm[b] = perm[b], perm[a]
    return tuple(perm)


@dataclass(frozen=True)
class SymmetryConstraint:
    """One linear condition on tensors of a fixed valence.

    kinds
      ``swap``                 T = sign * T with slots[0], slots[1] exchanged
      ``block``                T symmetric under every permutation of ``slots``
      ``symmetrization-zero``  sum over all permutations of ``slots`` of T is 0
      ``derived``              with slots (i, k, j, a): T_{ikja..} - T_{jkia..}
                               is symmetric in k and a
      ``cyclic``               with slots (j, k, l): T_{.jkl.} + T_{.klj.} + T_{.ljk.} = 0
    """

    kind: str
    slots: tuple[int, ...]
    valence: int
    sign: int = 1

    def __post_init__(self):
        if any(not 0 <= s < self.valence for s in self.slots):
            raise ValueError(f"constraint slots {self.slots} out of range for valence {self.valence}")
        expected = {SWAP: 2, DERIVED: 4, CYCLIC: 3}
        if self.kind in expected and len(self.slots) != expected[self.kind]:
            raise ValueError(f"{self.kind} constraint needs {expected[self.kind]} slots")
        if self.kind not in (SWAP, BLOCK, SYMMETRIZATION_ZERO, DERIVED, CYCLIC):
            raise ValueError(f"unknown constraint kind {self.kind!r}")

    @property
    def is_slot_symmetry(self) -> bool:
        return self.kind in (SWAP, BLOCK)

    def generators(self) -> list[tuple[tuple[int, ...], int]]:
        """Signed slot permutations under which the constraint demands invariance."""
        v = self.valence
        if self.kind == SWAP:
            return [(_swap_perm(v, *self.slots), self.sign)]
        if self.kind == BLOCK:
            s = self.slots
            return [(_swap_perm(v, s[i], s[i + 1]), 1) for i in range(len(s) - 1)]
        return []

    # -- exact check on a component array ----------------------------------

    def holds(self, arr: np.ndarray) -> bool:
        v = self.valence
        if self.kind in (SWAP, BLOCK):
            return all(_all_equal(arr, sign * permute_axes(arr, perm)) for perm, sign in self.generators())
        if self.kind == SYMMETRIZATION_ZERO:
            return _is_zero(_symmetrize(arr, self.slots))
        if self.kind == DERIVED:
            i, k, j, a = self.slots
            d = arr - permute_axes(arr, _swap_perm(v, i, j))
            return _all_equal(d, permute_axes(d, _swap_perm(v, k, a)))
        if self.kind == CYCLIC:
            j, k, l = self.slots
            p1 = list(range(v))
            p1[j], p1[k], p1[l] = k, l, j
            p2 = list(range(v))
            p2[j], p2[k], p2[l] = l, j, k
            return _is_zero(arr + permute_axes(arr, p1) + permute_axes(arr, p2))
        raise AssertionError(self.kind)

    # -- raw linear equations on flattened components ----------------------

    def equations(self, dim: int) -> Iterator[dict[tuple[int, ...], int]]:
        """Linear equations as {index tuple: coefficient}; naive, no deduplication."""
        v = self.valence
        for idx in itertools.product(range(dim), repeat=v):
            row: dict[tuple[int, ...], int] = {}

            def add(key, c):
                row[key] = row.get(key, 0) + c

            if self.kind in (SWAP, BLOCK):
                for perm, sign in self.generators():
                    add(idx, 1)
                    add(tuple(idx[p] for p in perm), -sign)
                    yield {k: c for k, c in row.items() if c}
                    row = {}
                continue
            if self.kind == SYMMETRIZATION_ZERO:
                for values in itertools.permutations([idx[s] for s in self.slots]):
                    key = list(idx)
                    for s, val in zip(self.slots, values):
                        key[s] = val
                    add(tuple(key), 1)
            elif self.kind == DERIVED:
                i, k, j, a = self.slots
                add(idx, 1)
                add(_permute_index(idx, _swap_perm(v, i, j)), -1)
                swapped = _permute_index(idx, _swap_perm(v, k, a))
                add(swapped, -1)
                add(_permute_index(swapped, _swap_perm(v, i, j)), 1)
            elif self.kind == CYCLIC:
                j, k, l = self.slots
                for shift in range(3):
                    key = list(idx)
                    vals = [idx[j], idx[k], idx[l]]
                    key[j], key[k], key[l] = vals[shift % 3], vals[(shift + 1) % 3], vals[(shift + 2) % 3]
                    add(tuple(key), 1)
            yield {k: c for k, c in row.items() if c}


def _permute_index(idx: tuple[int, ...], perm: Sequence[int]) -> tuple[int, ...]:
    return tuple(idx[p] for p in perm)


def _all_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))


def _is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in a.reshape(-1))


def _symmetrize(arr: np.ndarray, slots: Sequence[int]) -> np.ndarray:
    # sum over S_n built as S_{k-1} times the coset representatives (i k)
    v = arr.ndim
    acc = arr
    for pos in range(1, len(slots)):
        total = acc
        for i in range(pos):
            total = total + permute_axes(acc, _swap_perm(v, slots[i], slots[pos]))
        acc = total
    return acc


# -- orbit parametrisation -----------------------------------------------------


def _slot_group(constraints: Sequence[SymmetryConstraint], valence: int) -> list[tuple[tuple[int, ...], int]]:
    gens = [g for c in constraints for g in c.generators()]
    identity = tuple(range(valence))
    group = {identity: 1}
    frontier = [identity]
    while frontier:
        new = []
        for perm in frontier:
            for gperm, gsign in gens:
                composed = tuple(perm[gperm[i]] for i in range(valence))
                sign = group[perm] * gsign
                if composed not in group:
                    group[composed] = sign
                    new.append(composed)
                elif group[composed] != sign:
                    # inconsistent signs would force the whole space to zero; keep as marker
                    group[composed] = 0
        frontier = new
    return sorted(group.items())


@dataclass(frozen=True)
class _Orbits:
    # rep_of[flat] = (orbit id, sign); sign 0 means the component is forced to zero
    rep_of: tuple[tuple[int, int], ...]
    members: tuple[tuple[tuple[int, int], ...], ...]


def _orbits(constraints: Sequence[SymmetryConstraint], dim: int, valence: int) -> _Orbits:
    group = _slot_group(constraints, valence)
    if any(sign == 0 for _, sign in group):
        raise ValueError("inconsistent signed slot symmetries")
    size = dim**valence
    rep_of: list[tuple[int, int] | None] = [None] * size
    members: list[list[tuple[int, int]]] = []
    radix = [dim ** (valence - 1 - s) for s in range(valence)]
    for flat, idx in enumerate(itertools.product(range(dim), repeat=valence)):
        if rep_of[flat] is not None:
            continue
        images: dict[int, int] = {}
        zero = False
        for perm, sign in group:
            img = sum(idx[perm[s]] * radix[s] for s in range(valence))
            if img in images and images[img] != sign:
                zero = True
            images.setdefault(img, sign)
        if zero:
            for img in images:
                rep_of[img] = (-1, 0)
            continue
        oid = len(members)
        members.append(sorted(images.items()))
        for img, sign in images.items():
            rep_of[img] = (oid, sign)
    return _Orbits(tuple(rep_of), tuple(tuple(m) for m in members))


def _flat_index(idx: Sequence[int], dim: int) -> int:
    out = 0
    for x in idx:
        out = out * dim + x
    return out


# -- subspaces -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SymmetricSubspace:
    """Exact subspace of valence-``valence`` tensors on a ``dim``-dimensional space.

    ``basis`` holds one column per basis tensor (flattened, row-major). The
    basis is the canonical null-space basis of the reduced echelon form in
    orbit coordinates, each vector scaled to a primitive integer vector, so
    two subspaces built from the same constraints compare equal by basis.
    """

    dim: int
    valence: int
    constraints: tuple[SymmetryConstraint, ...]
    name: str = ""
    _orbits: _Orbits = field(repr=False, default=None)
    _orbit_basis: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False, default=())

    @property
    def dimension(self) -> int:
        return len(self._orbit_basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymmetricSubspace):
            return NotImplemented
        return (self.dim, self.valence) == (other.dim, other.valence) and self.basis == other.basis

    __hash__ = object.__hash__

    def basis_vector(self, b: int) -> dict[int, int]:
        """Sparse flattened components of basis tensor ``b``."""
        out: dict[int, int] = {}
        for oid, coeff in self._orbit_basis[b]:
            for flat, sign in self._orbits.members[oid]:
                out[flat] = sign * coeff
        return out

    def basis_tensors(self) -> list[Tensor]:
        return [Tensor.from_sparse(self.dim, self.valence, self.basis_vector(b)) for b in range(self.dimension)]

    @property
    def basis(self) -> RationalMatrix:
        size = self.dim**self.valence
        cols = []
        for b in range(self.dimension):
            vec = self.basis_vector(b)
            cols.append([vec.get(i, 0) for i in range(size)])
        if not cols:
            return RationalMatrix.zeros(size, 0)
        return RationalMatrix.from_columns(cols, size)

    def combination(self, coefficients: Sequence) -> Tensor:
        """Tensor ``sum_b coefficients[b] * basis_b``."""
        if len(coefficients) != self.dimension:
            raise ShapeError("one coefficient per basis vector is required")
        orbit_values: dict[int, object] = {}
        for c, vec in zip(coefficients, self._orbit_basis):
            if not c:
                continue
            for oid, coeff in vec:
                orbit_values[oid] = orbit_values.get(oid, 0) + c * coeff
        entries = {}
        for oid, value in orbit_values.items():
            if value:
                for flat, sign in self._orbits.members[oid]:
                    entries[flat] = sign * value
        return Tensor.from_sparse(self.dim, self.valence, entries)

    def coordinates(self, t: Tensor) -> list[Fraction]:
        """Coefficients of a member in the basis (exact)."""
        _check_shape(t, self)
        if not is_member(t, self):
            raise MembershipError(f"tensor is not in {self.name or 'the subspace'}")
        flat = t.flat()
        coords = []
        for vec in self._orbit_basis:
            oid, coeff = _free_entry(vec, self._orbit_basis)
            flat_idx, sign = self._orbits.members[oid][0]
            coords.append(Fraction(flat[flat_idx]) / (sign * coeff))
        return coords

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "valence": self.valence,
                "dimension": self.dimension,
                "basis": [[str(x) for x in col] for col in self.basis.columns()],
            },
            sort_keys=True,
        )


def _free_entry(vec, basis):
    # the orbit coordinate that is nonzero in ``vec`` and in no other basis vector
    others = {}
    for other in basis:
        for oid, _ in other:
            others[oid] = others.get(oid, 0) + 1
    for oid, coeff in vec:
        if others[oid] == 1:
            return oid, coeff
    raise AssertionError("basis is not in echelon form")


def build_subspace(
    constraints: Sequence[SymmetryConstraint], dim: int, valence: int, name: str = ""
) -> SymmetricSubspace:
    constraints = tuple(constraints)
    orbits = _orbits([c for c in constraints if c.is_slot_symmetry], dim, valence)
    n_orbits = len(orbits.members)
    rows: dict[tuple, SparseRow] = {}
    for c in constraints:
        if c.is_slot_symmetry:
            continue
        for eq in _orbit_equations(c, dim, orbits):
            if eq:
                key = tuple(sorted(eq.items()))
                rows.setdefault(key, eq)
    _, kernel = sparse_kernel(rows.values(), n_orbits)
    orbit_basis = []
    for vec in kernel:
        den = lcm(*(x.denominator for x in vec.values()))
        ints = {oid: int(x * den) for oid, x in vec.items()}
        g = gcd(*ints.values())
        orbit_basis.append(tuple(sorted((oid, int(x // g)) for oid, x in ints.items())))
    return SymmetricSubspace(dim, valence, constraints, name, orbits, tuple(orbit_basis))


def _orbit_equations(c: SymmetryConstraint, dim: int, orbits: _Orbits) -> Iterator[SparseRow]:
    seen = set()
    for eq in _distinct_equations(c, dim):
        row: SparseRow = {}
        for idx, coeff in eq.items():
            oid, sign = orbits.rep_of[_flat_index(idx, dim)]
            if sign:
                row[oid] = row.get(oid, 0) + sign * coeff
        row = {k: v for k, v in row.items() if v}
        if row:
            key = tuple(sorted(row.items()))
            if key not in seen:
                seen.add(key)
                yield integer_row(row)


def _distinct_equations(c: SymmetryConstraint, dim: int) -> Iterator[dict[tuple[int, ...], int]]:
    if c.kind != SYMMETRIZATION_ZERO:
        yield from c.equations(dim)
        return
    # the equation only depends on the multiset of values in the symmetrised slots
    rest = [s for s in range(c.valence) if s not in c.slots]
    for fixed in itertools.product(range(dim), repeat=len(rest)):
        for values in itertools.combinations_with_replacement(range(dim), len(c.slots)):
            row: dict[tuple[int, ...], int] = {}
            for perm in itertools.permutations(values):
                key = [0] * c.valence
                for s, val in zip(rest, fixed):
                    key[s] = val
                for s, val in zip(c.slots, perm):
                    key[s] = val
                key = tuple(key)
                row[key] = row.get(key, 0) + 1
            yield row


def constraint_rows(space: SymmetricSubspace) -> Iterator[dict[int, int]]:
    """The full raw constraint system on flattened components (for auditing)."""
    for c in space.constraints:
        for eq in c.equations(space.dim):
            yield {_flat_index(idx, space.dim): v for idx, v in eq.items()}


# -- the concrete spaces -------------------------------------------------------


def normal_space_constraints(m: int, two_n: int) -> tuple[SymmetryConstraint, ...]:
    v = m + 3
    cons = [SymmetryConstraint(SWAP, (1, 2), v)]
    if m >= 2:
        cons.append(SymmetryConstraint(BLOCK, tuple(range(3, v)), v))
    cons.append(SymmetryConstraint(SYMMETRIZATION_ZERO, tuple(range(1, v)), v))
    if m >= 1:
        cons.append(SymmetryConstraint(DERIVED, (0, 1, 2, 3), v))
    return tuple(cons)


@lru_cache(maxsize=None)
def build_normal_space(m: int, two_n: int) -> SymmetricSubspace:
    """N_m: valence m+3, symmetric in slots (1,2) and in the last m, zero total
    symmetrisation over the last m+2 slots, and T_{ikja..} - T_{jkia..}
    symmetric in k and a_1."""
    _check_dim(two_n)
    if m < 0:
        raise ValueError("normal tensor order must be non-negative")
    return build_subspace(normal_space_constraints(m, two_n), two_n, m + 3, name=f"N_{m}")


def curvature_space_constraints() -> tuple[SymmetryConstraint, ...]:
    return (
        SymmetryConstraint(SWAP, (0, 1), 4, 1),
        SymmetryConstraint(SWAP, (2, 3), 4, -1),
        SymmetryConstraint(CYCLIC, (1, 2, 3), 4),
    )


@lru_cache(maxsize=None)
def build_curvature_space(two_n: int) -> SymmetricSubspace:
    """Symmetric in slots (0,1), antisymmetric in (2,3), cyclic sum over (1,2,3) zero."""
    _check_dim(two_n)
    return build_subspace(curvature_space_constraints(), two_n, 4, name="R")


def _check_dim(two_n: int):
    if two_n < 2 or two_n % 2:
        raise ShapeError("dimension must be an even integer >= 2")


def _check_shape(t: Tensor, space: SymmetricSubspace):
    if not isinstance(t, Tensor) or t.valence != space.valence or (t.valence and t.dim != space.dim):
        raise ShapeError(
            f"tensor of valence {getattr(t, 'valence', '?')} does not fit a valence-{space.valence} space"
        )


def is_member(t: Tensor, space: SymmetricSubspace) -> bool:
    _check_shape(t, space)
    arr = t.array
    return all(c.holds(arr) for c in space.constraints)


def project(t: Tensor, space: SymmetricSubspace) -> Tensor:
    """Orthogonal projection in the standard component inner product."""
    _check_shape(t, space)
    k = space.dimension
    if k == 0:
        return Tensor.zeros(space.dim, space.valence)
    vectors = [space.basis_vector(b) for b in range(k)]
    flat = t.flat()
    gram = [[sum(v1[i] * v2.get(i, 0) for i in v1) for v2 in vectors] for v1 in vectors]
    rhs = [sum(Fraction(flat[i]) * c for i, c in v.items()) for v in vectors]
    coeffs = solve(RationalMatrix.from_rows(gram), rhs)
    return space.combination([_small(c) for c in coeffs])


def random_element(space: SymmetricSubspace, seed: int) -> Tensor:
    """Deterministic member with basis coefficients uniform in {-9, ..., 9}.

    Coefficients come from ``random.Random(seed).random()`` (Mersenne Twister
    MT19937, whose seeding and ``random()`` stream Python keeps stable across
    versions and platforms) mapped by ``floor(19 * u) - 9``.
    """
    rng = random.Random(seed)
    coeffs = [int(19 * rng.random()) - 9 for _ in range(space.dimension)]
    return space.combination(coeffs)


def n1_to_curvature(t: Tensor, check: bool = True) -> Tensor:
    """R_{ijkl} = T_{ijlk} - T_{ijkl}."""
    if t.valence != 4:
        raise ShapeError("N_1 tensors have valence 4")
    if check and not is_member(t, build_normal_space(1, t.dim)):
        raise MembershipError("tensor is not in N_1")
    return t.permute((0, 1, 3, 2)) - t


def _small(x: Fraction):
    return int(x) if x.denominator == 1 else x
