"""Parser for the polynomial / rational-function text form.

Accepts ``+ - * / ^`` (``**`` is a synonym for ``^``), parentheses, integer
literals and identifiers.  Juxtaposition multiplies, so ``4s``, ``2L^2``
and ``(1+s)(5+6s)`` are all read as products.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .poly import MPoly
from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> RatFunc:
        if not self.toks:
            raise ParseError("empty expression")
        value = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_primary(self):
        kind, val = self.peek()
        return kind in ("num", "name") or (kind == "op" and val == "(")

    def term(self):
        value = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                value = value * rhs if val == "*" else value / rhs
            elif self._starts_primary():
                value = value * self.power()
            else:
                return value

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind == "num":
                return base ** (sign * val)
            if kind == "op" and val == "(":
                exp = self.expr()
                self.expect(")")
                if not exp.is_constant() or exp.constant_value().denominator != 1:
                    raise ParseError(f"non-integer exponent in {self.text!r}")
                return base ** (sign * int(exp.constant_value()))
            raise ParseError(f"bad exponent in {self.text!r}")
        return base

    def primary(self):
        kind, val = self.take()
        if kind == "num":
            return RatFunc(MPoly.const(val))
        if kind == "name":
            return RatFunc(MPoly.var(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_ratfunc(text: str) -> RatFunc:
    return _Parser(str(text)).parse()


def parse_poly(text: str) -> MPoly:
    f = parse_ratfunc(text)
    if not f.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.as_poly()


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"-3"``, or an int/Fraction into a Fraction."""
    if isinstance(text, bool):
        raise ParseError("boolean is not a rational number")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
