"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _graded_lex_key(exponent: Exponent):
    return (sum(exponent), exponent)


class Polynomial:
    """Immutable polynomial over Q in a fixed, ordered tuple of variables.

    Terms map exponent tuples to nonzero Fractions. Zero coefficients are
    never stored, so two polynomials over the same variables are equal iff
    their term dictionaries are equal.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exponent, coeff in terms.items():
                exponent = tuple(exponent)
                if len(exponent) != n:
                    raise ValueError(f"exponent {exponent} has wrong length for {n} variables")
                c = _as_fraction(coeff)
                if c:
                    clean[exponent] = clean.get(exponent, 0) + c
                    if not clean[exponent]:
                        del clean[exponent]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Fraction]) -> "Polynomial":
        # trusted constructor: terms already clean
        poly = cls.__new__(cls)
        poly.variables = variables
        poly._terms = terms
        poly._hash = None
        return poly

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        c = _as_fraction(value)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, which: int | str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        index = variables.index(which) if isinstance(which, str) else which
        exponent = tuple(1 if i == index else 0 for i in range(len(variables)))
        return cls._raw(variables, {exponent: Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Exponent, coeff, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {tuple(exponent): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order, highest first."""
        return sorted(self._terms.items(), key=lambda kv: _graded_lex_key(kv[0]), reverse=True)

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, factor) -> "Polynomial":
        c = _as_fraction(factor)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Polynomial", max_degree: int | None) -> "Polynomial":
        """Product with every term of total degree > max_degree dropped."""
        terms: dict[Exponent, Fraction] = {}
        if max_degree is None:
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, 0) + c1 * c2
        else:
            right = [(e2, c2, sum(e2)) for e2, c2 in other._terms.items()]
            for e1, c1 in self._terms.items():
                budget = max_degree - sum(e1)
                if budget < 0:
                    continue
                for e2, c2, d2 in right:
                    if d2 > budget:
                        continue
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial._raw(self.variables, {e: c for e, c in terms.items() if c})

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1, self.variables)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation ------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        values = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for exponent, coeff in self._terms.items():
            term = coeff
            for v, k in zip(values, exponent):
                if k:
                    term *= v**k
            total += term
        return total

    def diff(self, index: int) -> "Polynomial":
        terms = {}
        for e, c in self._terms.items():
            k = e[index]
            if k:
                new = e[:index] + (k - 1,) + e[index + 1 :]
                terms[new] = c * k
        return Polynomial._raw(self.variables, terms)

    def derivative_at_zero(self, indices: Iterable[int]) -> Fraction:
        """Mixed partial derivative d^m/dx_{a1}...dx_{am} evaluated at the origin."""
        counts = [0] * self.nvars
        for a in indices:
            counts[a] += 1
        coeff = self._terms.get(tuple(counts), Fraction(0))
        if not coeff:
            return coeff
        for k in counts:
            coeff *= factorial(k)
        return coeff

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def truncate(self, max_degree: int) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: c for e, c in self._terms.items() if sum(e) <= max_degree})

    def substitute(self, values: Sequence["Polynomial"], max_degree: int | None = None) -> "Polynomial":
        """Compose: replace variable i by ``values[i]``.

        All replacement polynomials must share one variable tuple, which
        becomes the variable tuple of the result. With ``max_degree`` the
        result (and every intermediate power) is truncated.
        """
        if len(values) != self.nvars:
            raise ValueError("need one replacement polynomial per variable")
        if not values:
            raise ValueError("cannot substitute into a polynomial with no variables")
        target = values[0].variables
        one = Polynomial.constant(1, target)
        powers: list[list[Polynomial]] = [[one] for _ in values]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= k:
                cache.append(cache[-1].mul_truncated(values[i], max_degree))
            return cache[k]

        result = Polynomial.zero(target)
        for exponent, coeff in self._terms.items():
            term = Polynomial.constant(coeff, target)
            for i, k in enumerate(exponent):
                if k:
                    term = term.mul_truncated(power(i, k), max_degree)
                    if term.is_zero():
                        break
            result = result + term
        return result

    def shift(self, point: Sequence) -> "Polynomial":
        """Return q with q(z) = p(point + z), over the same variables."""
        values = [
            Polynomial.variable(i, self.variables) + _as_fraction(c) for i, c in enumerate(point)
        ]
        return self.substitute(values)

    def rename(self, variables: Sequence[str]) -> "Polynomial":
        if len(variables) != self.nvars:
            raise ValueError("rename needs the same number of variables")
        return Polynomial._raw(tuple(variables), dict(self._terms))

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exponent, coeff in self.terms():
            factors = []
            for name, k in zip(self.variables, exponent):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            magnitude = abs(coeff)
            sign = "-" if coeff < 0 else "+"
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = f"{magnitude}*" + "*".join(factors)
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, variables={self.variables})"


def poly_eval(p: Polynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)
