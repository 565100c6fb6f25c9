"""Recursive-descent parser for polynomial text.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..errors import PolynomialSyntaxError, UnknownVariableError
from .polynomial import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        if match.group(1) is not None:
            tokens.append(("int", match.group(1), match.start(1)))
        elif match.group(2) is not None:
            tokens.append(("name", match.group(2), match.start(2)))
        elif match.group(3) is not None:
            char = match.group(3)
            if char not in "+-*^/()":
                raise PolynomialSyntaxError(f"unexpected character {char!r}", match.start(3), text)
            tokens.append(("op", char, match.start(3)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.advance()
        if kind != "op" or value != op:
            shown = value or "end of input"
            raise PolynomialSyntaxError(f"expected {op!r}, found {shown!r}", pos, self.text)

    def error(self, message: str):
        _, _, pos = self.peek()
        raise PolynomialSyntaxError(message, pos, self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {value!r}", pos, self.text)
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.unary()
            else:
                return result

    def unary(self) -> Polynomial:
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            operand = self.unary()
            return -operand if value == "-" else operand
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, exp, pos = self.advance()
            if kind != "int":
                raise PolynomialSyntaxError("exponent must be a non-negative integer", pos, self.text)
            return base ** int(exp)
        return base

    def atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "int":
            number = Fraction(int(value))
            nkind, nvalue, _ = self.peek()
            if nkind == "op" and nvalue == "/":
                self.advance()
                dkind, dvalue, dpos = self.advance()
                if dkind != "int":
                    raise PolynomialSyntaxError("expected integer denominator", dpos, self.text)
                if int(dvalue) == 0:
                    raise PolynomialSyntaxError("zero denominator", dpos, self.text)
                number = Fraction(int(value), int(dvalue))
            return Polynomial.constant(number, self.variables)
        if kind == "name":
            if value not in self.variables:
                raise UnknownVariableError(value, pos)
            return Polynomial.variable(value, self.variables)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        shown = value or "end of input"
        raise PolynomialSyntaxError(f"unexpected {shown!r}", pos, self.text)


def poly_parse(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a canonical Polynomial over ``variables``."""
    return _Parser(text, variables).parse()


def parse_rational(text: str) -> Fraction:
    """Parse an integer or ``p/q`` literal (optionally signed)."""
    stripped = text.strip()
    if not _RATIONAL.fullmatch(stripped):
        raise PolynomialSyntaxError(f"not a rational literal: {text!r}", 0, text)
    try:
        return Fraction(stripped)
    except ZeroDivisionError as exc:
        raise PolynomialSyntaxError(f"zero denominator in {text!r}", 0, text) from exc


_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")
