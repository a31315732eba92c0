"""Rational functions over Q.

Fractions whose numerator and denominator live in one common variable are
kept fully reduced: gcd removed, coefficients made integral and primitive,
denominator with positive leading coefficient.  Multivariate fractions only
get monomial and scalar content cancelled (plus exact division when the
denominator happens to divide the numerator); equality never relies on a
canonical form and is decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..errors import ZeroDenominator
from .poly import MPoly, Scalar, common_variable, ugcd, udivmod


def _mono_content(a: MPoly, b: MPoly):
    """Common monomial factor of a and b as {var: exponent}."""
    names = set(a.vars) & set(b.vars)
    out = {}
    for name in names:
        ia, ib = a.vars.index(name), b.vars.index(name)
        k = min(min(m[ia] for m in a.terms), min(m[ib] for m in b.terms))
        if k:
            out[name] = k
    return out


def _divide_monomial(p: MPoly, mono: Mapping[str, int]) -> MPoly:
    idx = {p.vars.index(v): k for v, k in mono.items()}
    return MPoly(p.vars, {tuple(e - idx.get(i, 0) for i, e in enumerate(m)): c for m, c in p.terms.items()})


def mdiv_exact(a: MPoly, b: MPoly) -> MPoly | None:
    """Quotient a/b if b divides a exactly in Q[vars], else None."""
    if b.is_zero():
        raise ZeroDenominator("division by zero polynomial")
    if a.is_zero():
        return a
    if not set(b.vars) <= set(a.vars):
        return None
    lm_b, lc_b = b.leading()
    bvars = b.vars
    q = MPoly.const(0)
    r = a
    # bounded by the number of monomials that can appear below lead(a)
    for _ in range(10_000):
        if r.is_zero():
            return q
        lm_r, lc_r = r.leading()
        pos = {v: r.vars.index(v) for v in r.vars}
        shift = {}
        for v, e in zip(bvars, lm_b):
            got = lm_r[pos[v]] if v in pos else 0
            if got < e:
                return None
            shift[v] = got - e
        for v in r.vars:
            if v not in shift:
                shift[v] = lm_r[pos[v]]
        names = tuple(shift)
        t = MPoly(names, {tuple(shift[v] for v in names): lc_r / lc_b})
        q = q + t
        r = r - t * b
    return None


class RatFunc:
    """Immutable fraction numer/denom of MPolys.

    >>> from motivic_kit.exactalg import parse_ratfunc
    >>> str(parse_ratfunc("(L^2 - 1)/(L - 1)"))
    'L + 1'
    """

    __slots__ = ("numer", "denom", "canonical")

    def __init__(self, numer, denom=1, *, _raw: bool = False):
        numer = MPoly.coerce(numer)
        denom = MPoly.coerce(denom)
        if denom.is_zero():
            raise ZeroDenominator(f"zero denominator for {numer}")
        if _raw:
            self.numer, self.denom, self.canonical = numer, denom, False
            return
        self.numer, self.denom, self.canonical = _normalize(numer, denom)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(MPoly.coerce(x))

    @property
    def vars(self):
        return tuple(sorted(set(self.numer.vars) | set(self.denom.vars), key=_key))

    def is_zero(self) -> bool:
        return self.numer.is_zero()

    def is_polynomial(self) -> bool:
        return self.denom.is_constant()

    def as_poly(self) -> MPoly:
        if not self.denom.is_constant():
            raise ValueError(f"{self} is not a polynomial")
        return self.numer * (1 / self.denom.constant_value())

    def is_constant(self) -> bool:
        return self.numer.is_constant() and self.denom.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.numer.constant_value() / self.denom.constant_value()

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.denom == other.denom:
            return RatFunc(self.numer + other.numer, self.denom)
        return RatFunc(self.numer * other.denom + other.numer * self.denom, self.denom * other.denom)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.numer, self.denom, _raw=True)._keep(self)

    def _keep(self, src: "RatFunc") -> "RatFunc":
        self.canonical = src.canonical
        return self

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.numer * other, self.denom)
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.numer * other.numer, self.denom * other.denom)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominator(f"division of {self} by zero")
        return RatFunc(self.numer * other.denom, self.denom * other.numer)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.denom**-n, self.numer**-n)
        return RatFunc(self.numer**n, self.denom**n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_equal(self, other)

    __hash__ = None  # equality is semantic, not structural

    # -- substitution -------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "RatFunc":
        n = RatFunc.coerce(self.numer.subs(values))
        d = RatFunc.coerce(self.denom.subs(values))
        return n / d

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        d = self.denom.evaluate(values)
        if d == 0:
            raise ZeroDenominator(f"{self} has a pole at {dict(values)}")
        return self.numer.evaluate(values) / d

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"


def _key(name):
    from .poly import var_key

    return var_key(name)


def _scale_primitive(n: MPoly, d: MPoly):
    cn, cd = n.content(), d.content()
    ratio = cn / cd
    n = n * (ratio.numerator / cn)
    d = d * (ratio.denominator / cd)
    if d.leading()[1] < 0:
        n, d = -n, -d
    return n, d


def _normalize(n: MPoly, d: MPoly):
    if n.is_zero():
        return MPoly.const(0), MPoly.const(1), True
    try:
        var = common_variable(n, d)
        univariate = True
    except ValueError:
        univariate = False
    if univariate:
        if var is not None:
            nc, dc = n.univariate_coeffs(var), d.univariate_coeffs(var)
            g = ugcd(nc, dc)
            if len(g) > 1:
                nc, _ = udivmod(nc, g)
                dc, _ = udivmod(dc, g)
                n, d = MPoly.from_univariate(nc, var), MPoly.from_univariate(dc, var)
        n, d = _scale_primitive(n, d)
        return n, d, True
    mono = _mono_content(n, d)
    if mono:
        n, d = _divide_monomial(n, mono), _divide_monomial(d, mono)
    if len(d.terms) > 1:
        q = mdiv_exact(n, d)
        if q is not None:
            n, d = q, MPoly.const(1)
    n, d = _scale_primitive(n, d)
    try:
        common_variable(n, d)
        return _normalize(n, d)
    except ValueError:
        return n, d, False


def ratfunc_equal(f: RatFunc, g: RatFunc) -> bool:
    """Cross-multiplication equality; needs no canonical form."""
    return f.numer * g.denom == g.numer * f.denom


def ratfunc_reduce(f: RatFunc) -> RatFunc:
    """Re-normalize ``f`` (gcd-reduced when univariate)."""
    return RatFunc(f.numer, f.denom)


def _wrap(text: str, single: bool) -> str:
    return text if single else f"({text})"


def format_ratfunc(f: RatFunc) -> str:
    """Canonical text ``numer`` or ``(numer)/(denom)``."""
    if f.denom == MPoly.const(1):
        return str(f.numer)
    n = str(f.numer)
    d = str(f.denom)
    n_single = len(f.numer.terms) == 1 and not n.startswith("-")
    d_single = len(f.denom.terms) == 1 and "*" not in d
    return f"{_wrap(n, n_single)}/{_wrap(d, d_single)}"


def as_univariate_fraction(f: RatFunc, var: str):
    """(numer coeffs, denom coeffs) for a fraction in ``var`` only."""
    return f.numer.univariate_coeffs(var), f.denom.univariate_coeffs(var)

