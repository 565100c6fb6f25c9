"""Exact linear algebra over Q.

Elimination works on sparse integer rows (``dict[col, int]``): rational rows
are scaled to integers first, every combination step is fraction-free
(``b*r - a*p``) and rows are divided by their content afterwards, which keeps
the integers small without ever forming a Fraction inside the loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

SparseRow = dict[int, int]


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RationalMatrix":
        return cls.from_rows([[col[i] for col in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        cols = other.columns()
        return RationalMatrix.from_rows(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.entries],
            cols=other.cols,
        )

    def apply(self, vector: Sequence) -> list[Fraction]:
        if len(vector) != self.cols:
            raise ValueError("vector length differs from column count")
        return [sum((a * Fraction(v) for a, v in zip(row, vector)), Fraction(0)) for row in self.entries]

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix.from_rows([[self.entries[i][j] for j in cols] for i in rows], cols=len(cols))

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


# -- sparse integer elimination ---------------------------------------------


def integer_row(values: dict[int, Fraction] | Sequence) -> SparseRow:
    """Scale a rational row (dense or sparse) to a primitive integer row."""
    items = values.items() if isinstance(values, dict) else enumerate(values)
    frac = {j: Fraction(v) for j, v in items if v}
    if not frac:
        return {}
    den = lcm(*(v.denominator for v in frac.values()))
    return _primitive({j: int(v * den) for j, v in frac.items()})


def _primitive(row: SparseRow) -> SparseRow:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _combine(b: int, row: SparseRow, a: int, pivot: SparseRow) -> SparseRow:
    # b*row - a*pivot
    out = {j: b * v for j, v in row.items()} if b != 1 else dict(row)
    for j, v in pivot.items():
        s = out.get(j, 0) - a * v
        if s:
            out[j] = s
        else:
            out.pop(j, None)
    return out


class Echelon:
    """Incremental row echelon form over the integers.

    Rows are inserted one at a time; ``insert`` reports whether the row was
    independent of everything inserted before.
    """

    def __init__(self):
        self.pivots: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: SparseRow) -> SparseRow:
        row = _primitive(dict(row))
        while row:
            c = min(row)
            pivot = self.pivots.get(c)
            if pivot is None:
                return row
            a, b = row[c], pivot[c]
            g = gcd(a, b)
            row = _primitive(_combine(b // g, row, a // g, pivot))
        return row

    def insert(self, row: SparseRow) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def reduced(self) -> dict[int, SparseRow]:
        """Reduced row echelon form: each pivot column is zero in all other rows."""
        rows = dict(self.pivots)
        for c in sorted(rows, reverse=True):
            pivot = rows[c]
            b = pivot[c]
            for c2 in list(rows):
                if c2 >= c:
                    continue
                other = rows[c2]
                a = other.get(c)
                if a:
                    g = gcd(a, b)
                    rows[c2] = _primitive(_combine(b // g, other, a // g, pivot))
        return rows


def sparse_kernel(rows: Iterable[SparseRow], ncols: int) -> tuple[int, list[dict[int, Fraction]]]:
    """Rank and canonical kernel basis of a sparse integer system.

    The kernel basis is the standard one read off the reduced echelon form:
    vector ``f`` has a 1 in free column ``f``, zeros in the other free columns.
    """
    ech = Echelon()
    for row in rows:
        ech.insert(row)
    rref = ech.reduced()
    pivot_cols = set(rref)
    by_free: dict[int, dict[int, Fraction]] = {f: {f: Fraction(1)} for f in range(ncols) if f not in pivot_cols}
    for c, row in rref.items():
        lead = row[c]
        for j, v in row.items():
            if j != c:
                by_free[j][c] = Fraction(-v, lead)
    return len(rref), [by_free[f] for f in sorted(by_free)]


def rank_kernel(matrix: RationalMatrix) -> tuple[int, RationalMatrix]:
    """Exact rank and kernel basis (as columns of a cols x k matrix)."""
    rows = (integer_row(r) for r in matrix.entries)
    rank, kernel = sparse_kernel(rows, matrix.cols)
    columns = [[vec.get(i, Fraction(0)) for i in range(matrix.cols)] for vec in kernel]
    return rank, RationalMatrix.from_columns(columns, matrix.cols) if columns else RationalMatrix.zeros(matrix.cols, 0)


def rank(matrix: RationalMatrix) -> int:
    ech = Echelon()
    for r in matrix.entries:
        ech.insert(integer_row(r))
    return ech.rank


def determinant(matrix: RationalMatrix) -> Fraction:
    """Bareiss fraction-free determinant of a square rational matrix."""
    n = matrix.rows
    if n != matrix.cols:
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    a = []
    row_scale = 1
    for row in matrix.entries:
        d = lcm(*(x.denominator for x in row))
        row_scale *= d
        a.append([int(x * d) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], row_scale)


def solve(matrix: RationalMatrix, rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of ``matrix @ x = rhs``, or None if inconsistent.

    Free variables are set to zero.
    """
    n = matrix.cols
    ech = Echelon()
    for r, b in zip(matrix.entries, rhs):
        dense = list(r) + [Fraction(b)]
        ech.insert(integer_row(dense))
    rref = ech.reduced()
    if n in rref:
        return None
    x = [Fraction(0)] * n
    for c, row in rref.items():
        x[c] = Fraction(row.get(n, 0), row[c])
    return x


def inverse(matrix: RationalMatrix) -> RationalMatrix:
    n = matrix.rows
    if n != matrix.cols:
        raise ValueError("inverse needs a square matrix")
    columns = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve(matrix, e)
        if x is None:
            raise ZeroDivisionError("matrix is singular")
        columns.append(x)
    result = RationalMatrix.from_columns(columns, n)
    if result @ matrix != RationalMatrix.identity(n):
        raise ZeroDivisionError("matrix is singular")
    return result
