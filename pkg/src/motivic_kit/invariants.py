"""Closed-form invariants evaluated from resolution data.

All of them are sums over strata with one product factor per component in
the stratum; see :mod:`motivic_kit.exactalg.termsum`.  Only the choice of
(nu, N) per component and the level of the stratum coefficients differ:

=====================  =============  ==================
invariant              factor         coefficient
=====================  =============  ==================
nc_integral            (1 + N, 0)     class in L
motivic_volume         (nu, 0)        class in L
motivic_zeta           (nu, N)        class in L
z_top                  (nu, N)        chi
stringy (three levels) (a, 0)         class / Hodge / chi
stringy_zeta           (nu, N <= 0)   chi
birational identity    (nu, 0)        class in L and chi
=====================  =============  ==================
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm, prod
from typing import Iterable, List, Optional, Tuple

from .errors import (
    DConsistencyFailure,
    DegenerateDenominator,
    MotivicKitError,
    NotLogTerminal,
    PoleAtOne,
    SchemaError,
    StrictlyLogCanonical,
    UnsupportedLevel,
)
from .exactalg import (
    CLASS,
    EULER,
    HODGE,
    Factor,
    MPoly,
    RatFunc,
    TermSum,
    format_rational,
    parse_rational,
    specialize_chi,
    specialize_topological,
)
from .exactalg.poly import udivmod
from .strata import ResolutionData

L = MPoly.var("L")
T = MPoly.var("T")
S = MPoly.var("s")


def _expect(data: ResolutionData, *contexts: str):
    if data.context not in contexts:
        raise SchemaError(f"expected a {' or '.join(contexts)} document, got context {data.context!r}")


def _class_terms(data: ResolutionData, factor_of) -> TermSum:
    terms = []
    for s in data.strata:
        if s.chi_symbol:
            raise UnsupportedLevel("a symbolic chi has no class in L")
        if s.classL is None:
            raise SchemaError(f"stratum {sorted(s.subset)} needs classL for a class-level invariant")
        terms.append((s.classL, [factor_of(c) for c in data.factors_of(s)]))
    return TermSum(CLASS, terms)


def _euler_terms(data: ResolutionData, factor_of) -> TermSum:
    return TermSum(EULER, [(s.chi, [factor_of(c) for c in data.factors_of(s)]) for s in data.strata])


# -- motivic integrals ------------------------------------------------


def nc_integral(data: ResolutionData) -> TermSum:
    """Integral of L^(-ord_t D) over the arcs of X for a normal crossings D."""
    _expect(data, "nc-integral")
    return _class_terms(data, lambda c: Factor(1 + c.N, 0))


def motivic_volume(data: ResolutionData) -> TermSum:
    _expect(data, "volume")
    return _class_terms(data, lambda c: Factor(c.nu, 0))


def motivic_zeta(data: ResolutionData) -> TermSum:
    _expect(data, "zeta")
    return _class_terms(data, lambda c: Factor(c.nu, c.N))


def J_from_Z(z: TermSum, m: int) -> RatFunc:
    """Generating series of the jet classes, J(T) = (Z(L^m T) - L^m)/(L^m T - 1)."""
    if z.level != CLASS:
        raise UnsupportedLevel("J_from_Z needs a class-level zeta sum")
    if any(f.N < 0 for f in z.factors):
        raise UnsupportedLevel("J_from_Z needs a zeta-context sum (N >= 0)")
    lm = L**m
    shifted = z.to_ratfunc().subs({"T": lm * T})
    return (shifted - RatFunc(lm)) / RatFunc(lm * T - 1)


def z_top(data: ResolutionData) -> RatFunc:
    """Topological zeta function: sum chi(E_I°) prod 1/(nu_i + s N_i)."""
    _expect(data, "zeta")
    return specialize_topological(_euler_terms(data, lambda c: Factor(c.nu, c.N)))


def candidate_poles(data: ResolutionData) -> List[Fraction]:
    """-nu_i/N_i for every component with N_i != 0 (with repetition)."""
    return [-c.nu / c.N for c in data.components if c.N]


# -- poles and monodromy ----------------------------------------------


@dataclass(frozen=True)
class PoleList:
    poles: Tuple[Tuple[Fraction, int], ...]

    @property
    def locations(self) -> List[Fraction]:
        return [p for p, _ in self.poles]

    def __iter__(self):
        return iter(self.poles)

    def __len__(self):
        return len(self.poles)

    def __str__(self):
        return "[" + ", ".join(f"{format_rational(p)} (order {k})" for p, k in self.poles) + "]"


def _root_multiplicity(coeffs: list, root: Fraction) -> Tuple[int, list]:
    k = 0
    lin = [-root, Fraction(1)]
    while len(coeffs) > 1:
        q, r = udivmod(coeffs, lin)
        if r:
            break
        coeffs = q
        k += 1
    return k, coeffs


def extract_poles(f: RatFunc, candidates: Iterable) -> PoleList:
    """Poles of a reduced rational function in s, located among ``candidates``.

    >>> from motivic_kit.exactalg import parse_ratfunc
    >>> str(extract_poles(parse_ratfunc("1/(1+s)^2"), [-1]))
    '[-1 (order 2)]'
    """
    f = RatFunc(f.numer, f.denom)
    if set(f.vars) - {"s"}:
        raise UnsupportedLevel(f"{f} is not a function of s alone")
    den = f.denom.univariate_coeffs("s") if f.denom.vars else [f.denom.constant_value()]
    found = []
    for c in sorted({parse_rational(c) for c in candidates}):
        k, den = _root_multiplicity(den, c)
        if k:
            found.append((c, k))
    if len(den) > 1:
        raise MotivicKitError(f"denominator of {f} has roots outside the candidate set")
    return PoleList(tuple(found))


def _ascending(coeffs: list, var: str) -> str:
    """Integer polynomial written lowest degree first with juxtaposed products."""
    parts = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = format_rational(mag) if not mono or mag != 1 else ""
        body += mono
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts) or "0"


def factored_form(f: RatFunc, poles: PoleList, var: str = "s") -> str:
    """Display f with its denominator split into the linear factors of its poles.

    A pole at -nu/N shows as (nu+Ns); factors are ordered by decreasing
    pole and the numerator is written in ascending powers.

    >>> from motivic_kit.exactalg import parse_ratfunc
    >>> f = parse_ratfunc("(4s + 5)/(6s^2 + 11s + 5)")
    >>> factored_form(f, extract_poles(f, ["-1", "-5/6"]))
    '(5+4s)/((5+6s)(1+s))'
    """
    f = RatFunc(f.numer, f.denom)
    num = f.numer.univariate_coeffs(var)
    rest = f.denom.univariate_coeffs(var) if f.denom.vars else [f.denom.constant_value()]
    factors = []
    for pole, k in sorted(poles, key=lambda pk: -pk[0]):
        lin = [Fraction(-pole.numerator), Fraction(pole.denominator)]
        for _ in range(k):
            rest, r = udivmod(rest, lin)
            if any(r):
                return str(f)
        factors.append((lin, k))
    if len(rest) != 1:
        return str(f)
    c = rest[0]
    num = [x / c for x in num]
    scale = lcm(1, *(x.denominator for x in num))
    num = [x * scale for x in num]
    top = _ascending(num, var)
    if sum(1 for x in num if x) > 1:
        top = f"({top})"
    pieces = [format_rational(Fraction(scale))] if scale != 1 else []
    for lin, k in factors:
        piece = _ascending(lin, var)
        if sum(1 for x in lin if x) > 1:
            piece = f"({piece})"
        pieces.append(piece + (f"^{k}" if k > 1 else ""))
    if not pieces:
        return top
    bottom = "".join(pieces)
    if len(pieces) > 1 or scale != 1:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"


def _frac(q: Fraction) -> Fraction:
    return q - floor(q)


@dataclass(frozen=True)
class MonodromyVerdict:
    pole: Fraction
    exponent: Fraction
    satisfied: bool

    def __str__(self):
        status = "ok" if self.satisfied else "VIOLATED"
        return f"s0 = {format_rational(self.pole)}: exp(2 pi i s0) exponent {format_rational(self.exponent)} {status}"


def eigenvalue_set(values: Iterable) -> frozenset:
    """Normalize eigenvalue exponents q (eigenvalue exp(2 pi i q)) into [0, 1)."""
    return frozenset(_frac(parse_rational(v)) for v in values)


def monodromy_check(poles: PoleList, eigenvalues: Iterable) -> List[MonodromyVerdict]:
    """Per pole s0: is exp(2 pi i s0) among the given eigenvalues?"""
    eig = eigenvalue_set(eigenvalues)
    out = []
    for s0, _ in poles:
        e = _frac(s0)
        out.append(MonodromyVerdict(s0, e, e in eig))
    return out


# -- stringy invariants -----------------------------------------------


@dataclass
class StringyInvariants:
    e_st: Fraction
    E_st: Optional[TermSum]
    calE_st: Optional[TermSum]
    euler_terms: TermSum


def stringy_invariants(data: ResolutionData) -> StringyInvariants:
    """e_st, E_st and the class-level stringy invariant of a log terminal X.

    E_st (resp. the class-level sum) is None when some stratum lacks its
    Hodge polynomial (resp. class in L).
    """
    _expect(data, "stringy")
    bad = [c.id for c in data.components if c.a <= 0]
    if bad:
        raise NotLogTerminal(f"log discrepancies <= 0 on {bad}")
    factor = lambda c: Factor(c.a, 0)  # noqa: E731
    euler = _euler_terms(data, factor)
    e_st = specialize_chi(euler)
    hodge = None
    if all(s.hodge is not None for s in data.strata):
        hodge = TermSum(HODGE, [(s.hodge, [factor(c) for c in data.factors_of(s)]) for s in data.strata])
    cal = None
    if all(s.classL is not None for s in data.strata):
        cal = _class_terms(data, factor)
    return StringyInvariants(e_st, hodge, cal, euler)


def stringy_zeta(data: ResolutionData) -> RatFunc:
    """sum chi(E_I°) prod 1/(nu_i + s N_i) with nu_i >= 0 >= N_i.

    A symbolic chi on the empty stratum counts as 0 here; the caller
    reports ``data.offset_symbol`` as an additive term.
    """
    _expect(data, "stringy-zeta")
    return specialize_topological(_euler_terms(data, lambda c: Factor(c.nu, c.N)))


def limit_s1(f: RatFunc) -> Fraction:
    """Value at s = 1 of a rational function in s; PoleAtOne if there is a pole."""
    f = RatFunc(f.numer, f.denom)
    if set(f.vars) - {"s"}:
        raise UnsupportedLevel(f"{f} is not a function of s alone")
    if f.is_constant():
        return f.constant_value()
    den = f.denom.univariate_coeffs("s") if f.denom.vars else [f.denom.constant_value()]
    k, _ = _root_multiplicity(den, Fraction(1))
    if k:
        raise PoleAtOne(k)
    return f.evaluate({"s": 1})


# -- Seifert data -----------------------------------------------------


@dataclass(frozen=True)
class SeifertData:
    g: int
    kappa: int
    chains: Tuple[Tuple[int, int], ...]
    chi_complement: Fraction = Fraction(0)
    d: Optional[int] = None
    chi_symbol: Optional[str] = None

    def __post_init__(self):
        from math import gcd

        if self.g < 0:
            raise SchemaError("genus must be non-negative")
        if self.kappa < 1:
            raise SchemaError("kappa must be >= 1")
        for n, q in self.chains:
            if n < 1 or q < 1 or gcd(n, q) != 1:
                raise SchemaError(f"chain ({n}, {q}) needs positive coprime n, q")
        object.__setattr__(self, "chains", tuple((int(n), int(q)) for n, q in self.chains))
        object.__setattr__(self, "chi_complement", Fraction(self.chi_complement))

    @property
    def k(self) -> int:
        return len(self.chains)


@dataclass(frozen=True)
class SeifertResult:
    a: Fraction
    e_st: Fraction
    d_derived: int


def seifert_e_st(data: SeifertData) -> SeifertResult:
    """Log discrepancy of the central curve and the generalized e_st.

    a = (2 - 2g - k + sum 1/n_i) / (kappa - sum q_i/n_i)
    e_st = (2 - 2g - k + sum n_i) / a + chi(X minus P)
    """
    g, k = data.g, data.k
    ns = [n for n, _ in data.chains]
    top = Fraction(2 - 2 * g - k) + sum(Fraction(1, n) for n in ns)
    bottom = Fraction(data.kappa) - sum(Fraction(q, n) for n, q in data.chains)
    if bottom == 0:
        raise DegenerateDenominator("kappa - sum q_i/n_i = 0")
    a = top / bottom
    if a == 0:
        raise StrictlyLogCanonical("central log discrepancy a = 0")
    d_frac = bottom * prod(ns)
    if d_frac.denominator != 1:
        raise DConsistencyFailure(f"(kappa - sum q_i/n_i) * prod n_i = {d_frac} is not an integer")
    d_derived = int(d_frac)
    if data.d is not None:
        if abs(d_derived) != data.d:
            raise DConsistencyFailure(f"|det| given as {data.d}, derived {abs(d_derived)}")
        if top != 0:
            a2 = Fraction(prod(ns), data.d) * top
            if a2 != a:
                raise DConsistencyFailure(f"the two expressions for a disagree: {a} vs {a2}")
    e_st = (2 - 2 * g - k + sum(ns)) / a + data.chi_complement
    return SeifertResult(a, e_st, d_derived)


# -- birational identity ----------------------------------------------


def birational_terms(data: ResolutionData) -> TermSum:
    _expect(data, "birational-identity")
    return _class_terms(data, lambda c: Factor(c.nu, 0))


def birational_identity(data: ResolutionData, lhs_class: MPoly) -> bool:
    """Check [X] = sum [E_I°] prod (L-1)/(L^nu - 1) and its chi specialization."""
    terms = birational_terms(data)
    lhs = MPoly.coerce(lhs_class)
    class_ok = terms.to_ratfunc() == RatFunc(lhs)
    chi_ok = specialize_chi(terms) == lhs.evaluate({"L": 1})
    return class_ok and chi_ok


def fermat_terms(d: int, k: int, class_e: MPoly):
    """Resolution sums for the Fermat hypersurface x_1^k + ... + x_{d+1}^k = 0.

    One blow-up at the origin; the exceptional divisor E is the projective
    Fermat hypersurface with class ``class_e``, and E_∅° is a C*-bundle
    over E.  Returns (stringy sum, motivic volume sum, class of X) where
    the stringy sum uses a = d + 1 - k and the volume uses rho = d.  The
    stringy sum is None unless k < d + 1 (log terminal).
    """
    class_e = MPoly.coerce(class_e)
    open_part = (L - 1) * class_e
    stringy = None
    if k < d + 1:
        stringy = TermSum(CLASS, [(open_part, []), (class_e, [Factor(d + 1 - k, 0)])])
    volume = TermSum(CLASS, [(open_part, []), (class_e, [Factor(d, 0)])])
    return stringy, volume, open_part + 1

