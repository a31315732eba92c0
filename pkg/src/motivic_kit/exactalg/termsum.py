"""Sums over strata in resolution normal form.

Every resolution formula handled here has the shape

    sum over strata I of  coeff(I) * prod_{i in I} factor(nu_i, N_i)

and only the interpretation of a factor changes with the level:

* class level:  (L-1) T^N / (L^nu - T^N), which is (L-1)/(L^nu - 1) for N = 0
* hodge level:  the same with L replaced by uv
* euler level:  1 / (nu + s N)

Fractional nu are handled with an auxiliary variable w, w^r = L (class
level) or w^r = uv (hodge level), where r is the lcm of the denominators
of all nu.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Tuple, Union

from ..errors import DivisionByZeroDiscrepancy, NonIntegerCoefficients, UnsupportedLevel
from .parse import format_rational
from .poly import MPoly
from .ratfunc import RatFunc
from .series import TruncSeries

CLASS = "class-L"
HODGE = "hodge"
EULER = "euler"
LEVELS = (CLASS, HODGE, EULER)

L = MPoly.var("L")
T = MPoly.var("T")
S = MPoly.var("s")
W = MPoly.var("w")
UV = MPoly.var("u") * MPoly.var("v")

Coeff = Union[MPoly, Fraction]


@dataclass(frozen=True)
class Factor:
    """One factor of a resolution product, keyed by (nu, N)."""

    nu: Fraction
    N: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "nu", Fraction(self.nu))
        object.__setattr__(self, "N", Fraction(self.N))
        if self.nu == 0 and self.N == 0:
            raise DivisionByZeroDiscrepancy("factor with nu = N = 0")

    def __str__(self):
        return f"[{format_rational(self.nu)},{format_rational(self.N)}]"


Term = Tuple[Coeff, Tuple[Factor, ...]]


class TermSum:
    """A formal sum of (coefficient, factors) terms at a fixed level."""

    __slots__ = ("level", "terms")

    def __init__(self, level: str, terms: Iterable[Tuple[object, Iterable[Factor]]]):
        if level not in LEVELS:
            raise UnsupportedLevel(f"unknown level {level!r}")
        clean = []
        for coeff, factors in terms:
            factors = tuple(f if isinstance(f, Factor) else Factor(*f) for f in factors)
            if level == EULER:
                coeff = Fraction(coeff) if not isinstance(coeff, MPoly) else coeff.constant_value()
            else:
                coeff = MPoly.coerce(coeff)
            clean.append((coeff, factors))
        self.level = level
        self.terms: Tuple[Term, ...] = tuple(clean)
        self._validate()

    def _validate(self):
        signs = {f.N > 0 for _, fs in self.terms for f in fs if f.N != 0}
        if len(signs) > 1:
            raise UnsupportedLevel("factors mix N > 0 and N < 0 in one sum")
        if self.level != EULER:
            for _, fs in self.terms:
                for f in fs:
                    if f.N < 0 or f.N.denominator != 1:
                        raise UnsupportedLevel(f"factor {f} only makes sense at the euler level")

    @property
    def root_index(self) -> int:
        r = 1
        for _, fs in self.terms:
            for f in fs:
                r = lcm(r, f.nu.denominator)
        return r

    @property
    def factors(self):
        return [f for _, fs in self.terms for f in fs]

    def has_T(self) -> bool:
        return any(f.N != 0 for f in self.factors)

    def __add__(self, other: "TermSum") -> "TermSum":
        if other.level != self.level:
            raise UnsupportedLevel(f"cannot add {self.level} and {other.level} sums")
        return TermSum(self.level, self.terms + other.terms)

    def same_terms(self, other: "TermSum") -> bool:
        """Multiset equality of terms (termwise comparison)."""
        key = lambda t: (str(t[0]), tuple(sorted(map(str, t[1]))))  # noqa: E731
        if self.level != other.level or len(self.terms) != len(other.terms):
            return False
        a = Counter(key(t) for t in self.terms)
        b = Counter(key(t) for t in other.terms)
        if a == b:
            return True
        # coefficients may print differently yet be equal polynomials
        rest = list(other.terms)
        for c, fs in self.terms:
            for j, (c2, fs2) in enumerate(rest):
                if Counter(fs) == Counter(fs2) and _coeff_eq(c, c2):
                    del rest[j]
                    break
            else:
                return False
        return True

    def to_ratfunc(self) -> RatFunc:
        """The rational function the sum denotes."""
        if self.level == EULER:
            return specialize_topological(self)
        r = self.root_index
        pieces = []
        for coeff, fs in self.terms:
            if r > 1 and self.level == CLASS:
                coeff = coeff.subs({"L": W**r})
            num = coeff
            dens = Counter()
            for f in fs:
                n, d = self._factor_parts(f, r)
                num = num * n
                dens[d] += 1
            pieces.append((num, dens))
        common = Counter()
        for _, dens in pieces:
            common |= dens
        total = MPoly.const(0)
        for num, dens in pieces:
            extra = common - dens
            for d, k in extra.items():
                num = num * d**k
            total = total + num
        denom = MPoly.const(1)
        for d, k in sorted(common.items(), key=lambda x: str(x[0])):
            denom = denom * d**k
        return RatFunc(total, denom)

    def _factor_parts(self, f: Factor, r: int):
        base = L if self.level == CLASS else UV
        if r > 1:
            one = W**r
            big = W ** int(f.nu * r)
        else:
            one = base
            big = base ** int(f.nu) if f.nu >= 0 else None
        if big is None:
            raise UnsupportedLevel(f"negative nu in {f} at the {self.level} level")
        if f.N == 0:
            return one - 1, big - 1
        tn = T ** int(f.N)
        return (one - 1) * tn, big - tn

    def __str__(self):
        parts = []
        for c, fs in self.terms:
            cs = format_rational(c) if isinstance(c, Fraction) else str(c)
            parts.append(f"({cs})" + "".join(str(f) for f in fs))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"TermSum({self.level!r}, {self})"


def _coeff_eq(a, b):
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return Fraction(a if not isinstance(a, MPoly) else a.constant_value()) == Fraction(
            b if not isinstance(b, MPoly) else b.constant_value()
        )
    return a == b


def _chi_of(coeff: Coeff, level: str) -> Fraction:
    if level == EULER:
        return Fraction(coeff)
    # L = 1 at class level, u = v = 1 at hodge level
    return coeff.evaluate({v: 1 for v in coeff.vars})


def specialize_chi(t: TermSum) -> Fraction:
    """Euler characteristic of a sum with only N = 0 factors.

    Each factor contributes its limit at L = 1, that is 1/nu.

    >>> from motivic_kit.exactalg import parse_poly
    >>> specialize_chi(TermSum(CLASS, [(parse_poly("L - 1"), []), (1, [Factor(2)])]))
    Fraction(1, 2)
    """
    total = Fraction(0)
    for coeff, fs in t.terms:
        value = _chi_of(coeff, t.level)
        for f in fs:
            if f.N != 0:
                raise UnsupportedLevel(f"factor {f} depends on T or s; use specialize_topological")
            if f.nu == 0:
                raise DivisionByZeroDiscrepancy(f"factor {f} has no finite Euler limit")
            value /= f.nu
        total += value
    return total


def specialize_topological(t: TermSum) -> RatFunc:
    """Substitute T = L^(-s) and take chi factorwise: sum chi * prod 1/(nu + sN)."""
    numer_den = []
    for coeff, fs in t.terms:
        value = _chi_of(coeff, t.level)
        if value == 0:
            continue
        den = MPoly.const(1)
        for f in fs:
            den = den * (S * f.N + f.nu)
        numer_den.append((value, den))
    total = RatFunc.coerce(0)
    for value, den in numer_den:
        total = total + RatFunc(MPoly.const(value), den)
    return total


def specialize_hodge(t: TermSum) -> TermSum:
    """Class level -> Hodge level via L -> uv on the coefficients."""
    if t.level == HODGE:
        return t
    if t.level != CLASS:
        raise UnsupportedLevel("hodge specialization needs class-level coefficients")
    return TermSum(HODGE, [(c.subs({"L": UV}), fs) for c, fs in t.terms])


def series_expand(t: TermSum, order: int) -> TruncSeries:
    """Coefficients of T^0..T^order of the sum, as elements of Q(L).

    A factor (L-1)T^N/(L^nu - T^N) expands as (L-1) sum_{k>=1} L^(-k nu) T^(kN).
    """
    if t.level == EULER:
        if t.has_T():
            raise UnsupportedLevel("euler-level sums with N != 0 have no T-expansion")
        return TruncSeries([specialize_chi(t)] + [0] * order)
    if t.level != CLASS:
        raise UnsupportedLevel(f"series expansion at the {t.level} level")
    r = t.root_index
    base = W if r > 1 else L
    one_minus = RatFunc(base**r - 1 if r > 1 else L - 1)
    total = TruncSeries([0] * (order + 1))
    for coeff, fs in t.terms:
        c = coeff.subs({"L": W**r}) if r > 1 else coeff
        s = TruncSeries([c] + [0] * order)
        for f in fs:
            e = int(f.nu * r)
            if f.N == 0:
                s = s * one_minus / RatFunc(base**e - 1)
                continue
            N = int(f.N)
            coeffs = [RatFunc.coerce(0)] * (order + 1)
            k = 1
            while k * N <= order:
                coeffs[k * N] = one_minus / RatFunc(base ** (k * e))
                k += 1
            s = s * TruncSeries(coeffs)
        total = total + s
    return total


def eval_at_prime(c: MPoly, p: int) -> int:
    """Integer value of an integral polynomial in L at L = p.

    >>> from motivic_kit.exactalg import parse_poly
    >>> eval_at_prime(parse_poly("2*L^2 - L"), 3)
    15
    """
    c = MPoly.coerce(c)
    if set(c.vars) - {"L"}:
        raise NonIntegerCoefficients(f"{c} is not a polynomial in L alone")
    if not c.is_integral():
        raise NonIntegerCoefficients(f"{c} has non-integer coefficients")
    value = c.evaluate({"L": p}) if c.vars else c.constant_value()
    return int(value)
