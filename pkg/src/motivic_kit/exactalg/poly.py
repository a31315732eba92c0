"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial stores only the variables it actually uses, so two equal
polynomials always compare equal structurally, whatever ring they were
built in.  Variables are ordered canonically: the value-ring symbols
``L, T, u, v, s, w`` first, then any other name in natural order
(``x1 < x2 < x10``, ``a1_0 < a1_1 < a2_0``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

VALUE_VARIABLES = ("L", "T", "u", "v", "s", "w")

Scalar = Union[int, Fraction]
Monomial = Tuple[int, ...]

_NAT = re.compile(r"(\d+)")


def var_key(name: str):
    """Sort key putting value-ring symbols first, then natural order."""
    if name in VALUE_VARIABLES:
        return (0, VALUE_VARIABLES.index(name), ())
    parts = tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in _NAT.split(name) if p)
    return (1, 0, parts)


def _merge_vars(a: Tuple[str, ...], b: Tuple[str, ...]) -> Tuple[str, ...]:
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b), key=var_key))


def _lift(terms: Mapping[Monomial, Fraction], src: Tuple[str, ...], dst: Tuple[str, ...]):
    if src == dst:
        return terms
    pos = [dst.index(v) for v in src]
    out = {}
    n = len(dst)
    for mon, c in terms.items():
        e = [0] * n
        for i, k in zip(pos, mon):
            e[i] = k
        out[tuple(e)] = c
    return out


class MPoly:
    """Immutable sparse polynomial over Q.

    >>> L = MPoly.var("L")
    >>> str((L - 1) * (L + 1))
    'L^2 - 1'
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping[Monomial, Scalar] | None = None):
        vars = tuple(vars)
        clean: Dict[Monomial, Fraction] = {}
        for mon, c in (terms or {}).items():
            if c:
                if len(mon) != len(vars):
                    raise ValueError("exponent vector length does not match variables")
                clean[tuple(mon)] = Fraction(c)
        # drop variables that never occur
        used = [i for i in range(len(vars)) if any(m[i] for m in clean)]
        if len(used) != len(vars):
            vars = tuple(vars[i] for i in used)
            clean = {tuple(m[i] for i in used): c for m, c in clean.items()}
        order = sorted(range(len(vars)), key=lambda i: var_key(vars[i]))
        if order != list(range(len(vars))):
            vars = tuple(vars[i] for i in order)
            clean = {tuple(m[i] for i in order): c for m, c in clean.items()}
        self.vars: Tuple[str, ...] = vars
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        return cls((), {(): c})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def coerce(cls, x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MPoly")

    @classmethod
    def from_univariate(cls, coeffs, name: str) -> "MPoly":
        """Build ``sum(coeffs[i] * name^i)``."""
        return cls((name,), {(i,): c for i, c in enumerate(coeffs)})

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> Fraction:
        if self.vars:
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def degree(self, name: str | None = None) -> int:
        """Total degree, or degree in ``name``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max(m[i] for m in self.terms)

    def is_univariate(self) -> bool:
        return len(self.vars) <= 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def sorted_terms(self):
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading(self) -> Tuple[Monomial, Fraction]:
        return self.sorted_terms()[0]

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive in Z[vars]."""
        from math import gcd, lcm

        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def coefficients_in(self, name: str) -> Dict[int, "MPoly"]:
        """Split as ``sum(coeff_k * name^k)``; coefficients free of ``name``."""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1 :]
        buckets: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            buckets.setdefault(m[i], {})[m[:i] + m[i + 1 :]] = c
        return {k: MPoly(rest, t) for k, t in buckets.items()}

    def univariate_coeffs(self, name: str | None = None) -> list:
        """Dense coefficient list (lowest degree first) of a univariate poly."""
        if len(self.vars) > 1 or (name is not None and self.vars and self.vars[0] != name):
            raise ValueError(f"{self} is not univariate in {name}")
        if not self.terms:
            return []
        if not self.vars:
            return [self.terms[()]]
        out = [Fraction(0)] * (self.degree() + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    # -- arithmetic ---------------------------------------------------
    def _binary(self, other, sign: int) -> "MPoly":
        other = MPoly.coerce(other)
        vs = _merge_vars(self.vars, other.vars)
        out = dict(_lift(self.terms, self.vars, vs))
        for m, c in _lift(other.terms, other.vars, vs).items():
            out[m] = out.get(m, 0) + sign * c
        return MPoly(vs, out)

    def __add__(self, other):
        try:
            return self._binary(other, 1)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return self._binary(other, -1)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return MPoly.coerce(other) - self

    def __neg__(self):
        return MPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.vars, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        vs = _merge_vars(self.vars, other.vars)
        a = _lift(self.terms, self.vars, vs)
        b = _lift(other.terms, other.vars, vs)
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return MPoly(vs, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        from .ratfunc import RatFunc

        return RatFunc(self, other)

    def __rtruediv__(self, other):
        from .ratfunc import RatFunc

        return RatFunc(MPoly.coerce(other), self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------
    def subs(self, values: Mapping[str, object]):
        """Substitute variables by scalars, polynomials or rational functions.

        Returns an MPoly unless some value is a RatFunc.
        """
        from .ratfunc import RatFunc

        if not any(v in values for v in self.vars):
            return self
        ratlike = any(isinstance(values.get(v), RatFunc) for v in self.vars)
        zero = RatFunc.coerce(0) if ratlike else MPoly.const(0)
        one = RatFunc.coerce(1) if ratlike else MPoly.const(1)
        # cache powers per variable
        powers: Dict[Tuple[int, int], object] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                name = self.vars[i]
                base = values[name] if name in values else MPoly.var(name)
                if ratlike and not isinstance(base, RatFunc):
                    base = RatFunc.coerce(base)
                elif not ratlike:
                    base = MPoly.coerce(base) if not isinstance(base, MPoly) else base
                powers[key] = base**k
            return powers[key]

        total = zero
        for m, c in self.terms.items():
            t = one * c
            for i, k in enumerate(m):
                if k:
                    t = t * power(i, k)
            total = total + t
        return total

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a full assignment of the variables."""
        missing = [v for v in self.vars if v not in values]
        if missing:
            raise ValueError(f"no value for {missing}")
        total = Fraction(0)
        vals = [Fraction(values[v]) for v in self.vars]
        for m, c in self.terms.items():
            t = c
            for x, k in zip(vals, m):
                if k:
                    t *= x**k
            total += t
        return total

    def rename(self, mapping: Mapping[str, str]) -> "MPoly":
        return MPoly(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    # -- text ---------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MPoly({format_poly(self)!r})"


def _fmt_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(vars, mon) -> str:
    parts = []
    for v, k in zip(vars, mon):
        if k == 1:
            parts.append(v)
        elif k:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def format_poly(p: MPoly) -> str:
    """Canonical text: graded-lex order, e.g. ``2*L^2 - L``."""
    if not p.terms:
        return "0"
    out = []
    for i, (mon, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        body = _fmt_monomial(p.vars, mon)
        if not body:
            text = _fmt_scalar(a)
        elif a == 1:
            text = body
        else:
            text = f"{_fmt_scalar(a)}*{body}"
        if i == 0:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


# -- univariate algebra over Q ----------------------------------------


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def udivmod(a: list, b: list):
    """Dense univariate division with remainder over Q (lowest degree first)."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a.pop()
        _trim(a)
    return _trim(q), a


def ugcd(a: list, b: list) -> list:
    """Monic gcd of dense univariate polynomials over Q."""
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def common_variable(*polys: MPoly) -> str | None:
    """The single variable shared by univariate polys, or None if all constant.

    Raises ValueError when the polys are not jointly univariate.
    """
    names = set()
    for p in polys:
        names.update(p.vars)
    if len(names) > 1:
        raise ValueError(f"not jointly univariate: {sorted(names)}")
    return next(iter(names)) if names else None
