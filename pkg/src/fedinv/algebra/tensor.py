"""Dense covariant tensors over exact scalars or polynomials.

Components live in a numpy object array of shape ``(dim,) * valence``; numpy
only supplies indexing, transposition and the contraction loops, every
scalar operation stays in Python ints / Fractions / Polynomials.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from ..errors import ShapeError
from .linalg import RationalMatrix, determinant, inverse as matrix_inverse


def _zero_array(dim: int, valence: int, zero=0) -> np.ndarray:
    arr = np.empty((dim,) * valence, dtype=object)
    arr.fill(zero)
    return arr


def permute_axes(arr: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Array ``B`` with ``B[i_0, ..., i_{v-1}] = arr[i_perm[0], ..., i_perm[v-1]]``."""
    return np.transpose(arr, np.argsort(perm))


class Tensor:
    __slots__ = ("dim", "valence", "_data")

    def __init__(self, data: np.ndarray):
        data = np.asarray(data, dtype=object)
        if data.ndim == 0:
            dim = 0
        else:
            dim = data.shape[0]
            if any(s != dim for s in data.shape):
                raise ShapeError(f"tensor array must be cubical, got shape {data.shape}")
        self.dim = dim
        self.valence = data.ndim
        data = data.copy()
        data.flags.writeable = False
        self._data = data

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, dim: int, valence: int, zero=0) -> "Tensor":
        return cls._wrap(_zero_array(dim, valence, zero), dim)

    @classmethod
    def scalar(cls, value) -> "Tensor":
        arr = np.empty((), dtype=object)
        arr[()] = value
        return cls(arr)

    @classmethod
    def from_function(cls, dim: int, valence: int, fn: Callable[..., object]) -> "Tensor":
        arr = _zero_array(dim, valence)
        for idx in itertools.product(range(dim), repeat=valence):
            arr[idx] = fn(*idx)
        return cls._wrap(arr, dim)

    @classmethod
    def from_flat(cls, dim: int, valence: int, values: Sequence) -> "Tensor":
        if len(values) != dim**valence:
            raise ShapeError(f"expected {dim ** valence} components, got {len(values)}")
        arr = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            arr[i] = v
        return cls._wrap(arr.reshape((dim,) * valence), dim)

    @classmethod
    def from_sparse(cls, dim: int, valence: int, entries: dict[int, object]) -> "Tensor":
        flat = np.empty(dim**valence, dtype=object)
        flat.fill(0)
        for i, v in entries.items():
            flat[i] = v
        return cls._wrap(flat.reshape((dim,) * valence), dim)

    @classmethod
    def _wrap(cls, arr: np.ndarray, dim: int) -> "Tensor":
        # trusted constructor: no copy
        t = cls.__new__(cls)
        t.dim = dim
        t.valence = arr.ndim
        arr.flags.writeable = False
        t._data = arr
        return t

    # -- access -----------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Read-only component array."""
        return self._data

    def __getitem__(self, idx):
        return self._data[idx]

    def flat(self) -> list:
        return list(self._data.reshape(-1))

    def value(self):
        if self.valence != 0:
            raise ShapeError("only valence-0 tensors have a scalar value")
        return self._data[()]

    def shape_matches(self, other: "Tensor") -> bool:
        return self.dim == other.dim and self.valence == other.valence

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._data.reshape(-1))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor) or not self.shape_matches(other):
            raise ShapeError("tensor shapes differ")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor._wrap(self._data + other._data, self.dim)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        return Tensor._wrap(self._data - other._data, self.dim)

    def __neg__(self) -> "Tensor":
        return Tensor._wrap(-self._data, self.dim)

    def __mul__(self, factor) -> "Tensor":
        if isinstance(factor, Tensor):
            return NotImplemented
        out = np.empty(self._data.shape, dtype=object)
        flat_in = self._data.reshape(-1)
        flat_out = out.reshape(-1)
        for i, x in enumerate(flat_in):
            flat_out[i] = x * factor
        return Tensor._wrap(out, self.dim)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        if not self.shape_matches(other):
            return False
        return all(a == b for a, b in zip(self._data.reshape(-1), other._data.reshape(-1)))

    __hash__ = None

    def map(self, fn: Callable[[object], object]) -> "Tensor":
        out = np.empty(self._data.shape, dtype=object)
        flat_out = out.reshape(-1)
        for i, x in enumerate(self._data.reshape(-1)):
            flat_out[i] = fn(x)
        return Tensor._wrap(out, self.dim)

    def permute(self, perm: Sequence[int]) -> "Tensor":
        """Tensor ``S`` with ``S[i_0, ...] = self[i_perm[0], ...]``."""
        if self.valence == 0:
            return self
        return Tensor._wrap(np.ascontiguousarray(permute_axes(self._data, perm)), self.dim)

    def pullback(self, matrix: Sequence[Sequence]) -> "Tensor":
        """Components ``T'_{i...} = T_{a...} M^a_i`` on every slot."""
        if self.valence == 0:
            # ascontiguousarray would promote a 0-d array to 1-d
            return self
        m = np.array([[Fraction(x) if not isinstance(x, int) else x for x in row] for row in matrix], dtype=object)
        arr = self._data
        for axis in range(self.valence):
            arr = np.moveaxis(np.tensordot(arr, m, axes=([axis], [0])), -1, axis)
        return Tensor._wrap(np.ascontiguousarray(arr), self.dim)

    def outer(self, other: "Tensor") -> "Tensor":
        return Tensor._wrap(np.multiply.outer(self._data, other._data), self.dim)

    def __repr__(self) -> str:
        return f"Tensor(dim={self.dim}, valence={self.valence})"


# -- symplectic forms ---------------------------------------------------------


def canonical_form(two_n: int) -> Tensor:
    """dx1^dx2 + dx3^dx4 + ...: omega[2a, 2a+1] = 1 (0-based)."""
    if two_n <= 0 or two_n % 2:
        raise ShapeError("symplectic dimension must be a positive even integer")
    arr = _zero_array(two_n, 2)
    for a in range(0, two_n, 2):
        arr[a, a + 1] = 1
        arr[a + 1, a] = -1
    return Tensor._wrap(arr, two_n)


def inverse_form(omega: Tensor) -> Tensor:
    """The contravariant form with omega^{ik} omega_{jk} = delta^i_j.

    As matrices this is ``(W^T)^{-1}``; for an antisymmetric W it is
    ``-W^{-1}``. Indices are raised as ``T^n = omega^{nm} T_m``.
    """
    if omega.valence != 2:
        raise ShapeError("a bilinear form has valence 2")
    w = RationalMatrix.from_rows([[omega[i, j] for j in range(omega.dim)] for i in range(omega.dim)])
    try:
        inv = matrix_inverse(w.transpose())
    except ZeroDivisionError as exc:
        raise ShapeError("form is singular") from exc
    return Tensor.from_function(omega.dim, 2, lambda i, j: _small(inv[i, j]))


def _small(x: Fraction):
    return int(x) if x.denominator == 1 else x


# -- contraction --------------------------------------------------------------


def _check_metric(metric: Tensor, dim: int):
    if metric.valence != 2 or metric.dim != dim:
        raise ShapeError("metric must be a valence-2 tensor of matching dimension")
    w = RationalMatrix.from_rows([[metric[i, j] for j in range(dim)] for i in range(dim)])
    if determinant(w) == 0:
        raise ShapeError("metric is singular")


def apply_on_slot(t: Tensor, slot: int, metric: Tensor) -> Tensor:
    """``T'[.., x, ..] = sum_y metric[x, y] T[.., y, ..]`` at ``slot``."""
    arr = np.tensordot(metric.array, t.array, axes=([1], [slot]))
    return Tensor._wrap(np.ascontiguousarray(np.moveaxis(arr, 0, slot)), t.dim)


def tensor_contract(a: Tensor, b: Tensor, pairs: Iterable[tuple[int, int]], metric: Tensor) -> Tensor:
    """Contract slot pairs between ``a`` and ``b`` through ``metric``.

    Each pair ``(s, t)`` contributes ``sum_{x,y} metric[x, y] a[..x@s..] b[..y@t..]``.
    The result keeps a's free slots, then b's, in their original order.
    """
    pairs = list(pairs)
    if a.dim != b.dim and a.valence and b.valence:
        raise ShapeError("contracted tensors live in different dimensions")
    sa = [s for s, _ in pairs]
    sb = [t for _, t in pairs]
    for s in sa:
        if not 0 <= s < a.valence:
            raise ShapeError(f"slot {s} out of range for valence {a.valence}")
    for t in sb:
        if not 0 <= t < b.valence:
            raise ShapeError(f"slot {t} out of range for valence {b.valence}")
    if len(set(sa)) != len(sa) or len(set(sb)) != len(sb):
        raise ShapeError("a slot may be contracted only once")
    dim = a.dim or b.dim
    if pairs:
        _check_metric(metric, dim)
    bb = b
    for t in sb:
        bb = apply_on_slot(bb, t, metric)
    arr = np.tensordot(a.array, bb.array, axes=(sa, sb))
    if not isinstance(arr, np.ndarray):
        out = np.empty((), dtype=object)
        out[()] = arr
        arr = out
    return Tensor._wrap(arr, dim if arr.ndim else 0)


def trace(t: Tensor, s1: int, s2: int, metric: Tensor) -> Tensor:
    """``sum_{x,y} metric[x, y] t[..x@s1..y@s2..]``."""
    if s1 == s2 or not (0 <= s1 < t.valence and 0 <= s2 < t.valence):
        raise ShapeError("trace needs two distinct slots in range")
    tt = apply_on_slot(t, s2, metric)
    arr = np.trace(tt.array, axis1=s1, axis2=s2)
    if not isinstance(arr, np.ndarray):
        out = np.empty((), dtype=object)
        out[()] = arr
        arr = out
    if arr.ndim:
        arr = np.ascontiguousarray(arr)
    return Tensor._wrap(arr, t.dim if arr.ndim else 0)
