"""Brute-force point counts over finite rings and rational generating series.

Three counts are supported:

* congruence: F_n = #{x in (Z/p^(n+1))^m : f_i(x) = 0 mod p^(n+1)}
* jet points: #{solutions over F_p} of a JetSystem
* contact:    #{n-jets of A^m over F_p with ord_t f(gamma) = n exactly}

All three are computed by a staged sieve.  A solution modulo p^(k+1) (or
a k-jet) reduces to a solution modulo p^k (a (k-1)-jet), so candidates
are built one p-adic digit (one t-degree) at a time and filtered as soon
as the equations that are already determined fail.  The work is then
proportional to the number of partial solutions, not to p^(vars).
The configured budget still applies to the naive enumeration size, so a
request is refused up front rather than depending on how well the sieve
happens to prune.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, InsufficientData, SchemaError
from .exactalg import MPoly, RatFunc, TruncSeries, ratfunc_series
from .jets import AffineSystem, JetSystem, base_var, generic_jets, jet_var, _compose

CONGRUENCE = "congruence"
JET = "jet-points"
CONTACT = "contact"
MODES = (CONGRUENCE, JET, CONTACT)

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "MOTIVIC_KIT_BUDGET"

# rows materialized at once while extending candidates
CHUNK = 1 << 18
# beyond this modulus products of residues no longer fit in int64
INT64_MODULUS = 3_037_000_499


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    if value is None:
        return DEFAULT_BUDGET
    try:
        return int(value)
    except ValueError:
        raise SchemaError(f"{BUDGET_ENV}={value!r} is not an integer") from None


def _check_budget(required: int, budget: Optional[int]):
    if budget is None:
        budget = default_budget()
    if required > budget:
        raise BudgetExceeded(required, budget)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _check_prime(p: int):
    if not isinstance(p, (int, np.integer)) or not _is_prime(int(p)):
        raise ValueError(f"{p} is not a prime")


# -- compiled polynomials ----------------------------------------------------

# A compiled polynomial is a tuple of (integer coefficient, ((column, exponent), ...)).
Compiled = Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...]


def _compile(p: MPoly, columns: dict) -> Compiled:
    if not p.is_integral():
        raise SchemaError(f"{p} has non-integer coefficients")
    out = []
    for mon, c in p.terms.items():
        factors = tuple((columns[name], e) for name, e in zip(p.vars, mon) if e)
        out.append((int(c), factors))
    return tuple(out)


def _evaluate(poly: Compiled, X: np.ndarray, q: int) -> np.ndarray:
    """Values of a compiled polynomial on the rows of X, reduced mod q."""
    powers = {}

    def power(col, e):
        key = (col, e)
        if key not in powers:
            if e == 1:
                powers[key] = X[:, col]
            else:
                half = power(col, e // 2)
                sq = (half * half) % q
                powers[key] = sq if e % 2 == 0 else (sq * X[:, col]) % q
        return powers[key]

    acc = np.zeros(X.shape[0], dtype=X.dtype)
    for c, factors in poly:
        term = None
        for col, e in factors:
            v = power(col, e)
            term = v if term is None else (term * v) % q
        c %= q
        if term is None:
            acc = (acc + c) % q
        else:
            acc = (acc + (term * c) % q) % q
    return acc


# -- staged sieve -------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    """Extend every candidate by ``p^len(cols)`` digit choices and filter.

    The new digit d_j is added as scale * d_j to column cols[j].  Survivors
    must satisfy every ``zero`` polynomial mod q; if ``nonzero`` is given
    the final polynomial must in addition be nonzero mod q.
    """

    cols: Tuple[int, ...]
    scale: int
    q: int
    zero: Tuple[Compiled, ...]
    nonzero: Optional[Compiled] = None


@dataclass(frozen=True)
class Plan:
    p: int
    width: int
    stages: Tuple[Stage, ...]

    @property
    def naive_size(self) -> int:
        return self.p ** sum(len(s.cols) for s in self.stages)

    @property
    def dtype(self):
        return np.int64 if max(s.q for s in self.stages) <= INT64_MODULUS else object


def _digits(p: int, k: int, dtype) -> np.ndarray:
    """All k-tuples over range(p), lexicographic, shape (p^k, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=dtype)
    grids = np.indices((p,) * k).reshape(k, -1).T
    return grids.astype(dtype)


def _filter(stage: Stage, X: np.ndarray) -> np.ndarray:
    keep = np.ones(X.shape[0], dtype=bool)
    for poly in stage.zero:
        idx = np.nonzero(keep)[0]
        if idx.size == 0:
            break
        vals = _evaluate(poly, X[idx], stage.q)
        keep[idx[vals != 0]] = False
    if stage.nonzero is not None:
        idx = np.nonzero(keep)[0]
        if idx.size:
            vals = _evaluate(stage.nonzero, X[idx], stage.q)
            keep[idx[vals == 0]] = False
    return X[keep]


def _extend(plan: Plan, X: np.ndarray, k: int) -> int:
    """Number of completions of the candidate rows X through stages k.."""
    if k == len(plan.stages):
        return X.shape[0]
    stage = plan.stages[k]
    D = _digits(plan.p, len(stage.cols), plan.dtype) * stage.scale
    total = 0
    step = max(1, CHUNK // D.shape[0])
    cols = list(stage.cols)
    for start in range(0, X.shape[0], step):
        block = X[start : start + step]
        Y = np.repeat(block, D.shape[0], axis=0)
        if cols:
            Y[:, cols] += np.tile(D, (block.shape[0], 1))
        Y = _filter(stage, Y)
        if Y.shape[0]:
            total += _extend(plan, Y, k + 1)
    return total


def _run(plan: Plan, first_values: Optional[Sequence[int]] = None) -> int:
    """Count for the plan, optionally restricted to given digits of the first stage column."""
    X = np.zeros((1, plan.width), dtype=plan.dtype)
    if first_values is None:
        return _extend(plan, X, 0)
    first = plan.stages[0]
    if not first.cols:
        return _extend(plan, X, 0) if 0 in first_values else 0
    rest = Stage(first.cols[1:], first.scale, first.q, first.zero, first.nonzero)
    tail = Plan(plan.p, plan.width, (rest,) + plan.stages[1:])
    total = 0
    for v in first_values:
        Y = X.copy()
        Y[:, first.cols[0]] = v * first.scale
        total += _extend(tail, Y, 0)
    return total


def execute(plan: Plan, threads: int = 1, budget: Optional[int] = None) -> int:
    """Run a plan, splitting the first coordinate's digits over worker processes."""
    _check_budget(plan.naive_size, budget)
    threads = max(1, int(threads))
    if threads == 1 or not plan.stages or not plan.stages[0].cols:
        return _run(plan)
    parts = [list(range(i, plan.p, threads)) for i in range(min(threads, plan.p))]
    with ProcessPoolExecutor(max_workers=len(parts)) as pool:
        return sum(pool.map(_run, [plan] * len(parts), parts))


# -- plans --------------------------------------------------------------------


def congruence_plan(sys: AffineSystem, p: int, n: int) -> Plan:
    m = sys.num_vars
    columns = {base_var(j): j - 1 for j in range(1, m + 1)}
    polys = tuple(_compile(f, columns) for f in sys.polys)
    stages = tuple(Stage(tuple(range(m)), p**k, p ** (k + 1), polys) for k in range(n + 1))
    return Plan(p, m, stages)


def _jet_columns(m: int, n: int) -> dict:
    return {jet_var(j, k): (j - 1) * (n + 1) + k for j in range(1, m + 1) for k in range(n + 1)}


def _var_level(name: str) -> int:
    return int(name.rsplit("_", 1)[1])


def jet_plan(js: JetSystem, p: int) -> Plan:
    m, n = js.num_base_vars, js.level
    columns = _jet_columns(m, n)
    # an equation is checked at the first stage where all its variables are known
    by_stage = [[] for _ in range(n + 1)]
    for eq in js.equations:
        unknown = set(eq.vars) - set(columns)
        if unknown:
            raise SchemaError(f"equation {eq} uses unknown variables {sorted(unknown)}")
        level = max((_var_level(v) for v in eq.vars), default=0)
        by_stage[level].append(_compile(eq, columns))
    stages = tuple(
        Stage(tuple(columns[v] for v in js.level_variables(k)), 1, p, tuple(by_stage[k])) for k in range(n + 1)
    )
    return Plan(p, m * (n + 1), stages)


def contact_plan(sys: AffineSystem, p: int, n: int) -> Plan:
    if len(sys.polys) != 1:
        raise SchemaError("contact counting needs exactly one polynomial")
    m = sys.num_vars
    columns = _jet_columns(m, n)
    coeffs = _compose(sys.polys[0], generic_jets(m, n), n)
    stages = []
    for k in range(n + 1):
        cols = tuple(columns[jet_var(j, k)] for j in range(1, m + 1))
        compiled = _compile(coeffs[k], columns)
        if k < n:
            stages.append(Stage(cols, 1, p, (compiled,)))
        else:
            stages.append(Stage(cols, 1, p, (), compiled))
    return Plan(p, m * (n + 1), tuple(stages))


def count_congruence(sys: AffineSystem, p: int, n: int, budget: Optional[int] = None, threads: int = 1) -> int:
    """Number of solutions of the system modulo p^(n+1).

    >>> count_congruence(AffineSystem.parse("x1*x2"), 3, 1)
    21
    """
    _check_prime(p)
    if n < 0:
        raise ValueError("level must be >= 0")
    _check_budget(p ** ((n + 1) * sys.num_vars), budget)
    return execute(congruence_plan(sys, p, n), threads, budget)


def count_jet_points(js: JetSystem, p: int, budget: Optional[int] = None, threads: int = 1) -> int:
    """Number of F_p-points of a jet scheme given by its equations.

    >>> from motivic_kit.jets import jet_equations
    >>> count_jet_points(jet_equations(AffineSystem.parse("x2^2 - x1^3"), 1), 3)
    15
    """
    _check_prime(p)
    _check_budget(p**js.num_vars, budget)
    return execute(jet_plan(js, p), threads, budget)


def count_contact(sys: AffineSystem, p: int, n: int, budget: Optional[int] = None, threads: int = 1) -> int:
    """Number of n-jets of A^m over F_p along which f has order exactly n."""
    _check_prime(p)
    if n < 0:
        raise ValueError("level must be >= 0")
    _check_budget(p ** (sys.num_vars * (n + 1)), budget)
    return execute(contact_plan(sys, p, n), threads, budget)


# -- series -------------------------------------------------------------------


@dataclass(frozen=True)
class CountSeries:
    p: int
    mode: str
    counts: Tuple[int, ...]
    num_vars: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise SchemaError(f"unknown counting mode {self.mode!r}")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise SchemaError("negative count")
        if self.mode == CONGRUENCE and self.num_vars is not None:
            bound = self.p**self.num_vars
            for a, b in zip(self.counts, self.counts[1:]):
                if b > bound * a:
                    raise SchemaError(f"count {b} exceeds p^m times previous count {a}")


def count_series(sys: AffineSystem, p: int, mode: str, max_n: int, budget=None, threads: int = 1) -> CountSeries:
    """Counts for n = 0..max_n in the given mode."""
    if mode == CONGRUENCE:
        counts = [count_congruence(sys, p, n, budget, threads) for n in range(max_n + 1)]
    elif mode == CONTACT:
        counts = [count_contact(sys, p, n, budget, threads) for n in range(max_n + 1)]
    elif mode == JET:
        from .jets import jet_equations

        counts = [count_jet_points(jet_equations(sys, n), p, budget, threads) for n in range(max_n + 1)]
    else:
        raise SchemaError(f"unknown counting mode {mode!r}")
    return CountSeries(p, mode, tuple(counts), sys.num_vars)


def assemble_series(counts: CountSeries) -> TruncSeries:
    return TruncSeries(list(counts.counts), "T")


@dataclass(frozen=True)
class DenominatorShape:
    """prod (1 - p^a T^b) over the listed (a, b)."""

    factors: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        facs = tuple((int(a), int(b)) for a, b in self.factors)
        if any(b <= 0 for _, b in facs):
            raise SchemaError("exponent of T in a denominator factor must be positive")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def parse(cls, text: str) -> "DenominatorShape":
        """From "a:b,a:b,...", for example "1:1,1:1" for (1-pT)^2."""
        facs = []
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            try:
                a, b = part.split(":")
                facs.append((int(a), int(b)))
            except ValueError:
                raise SchemaError(f"bad denominator factor {part!r}; expected a:b") from None
        return cls(tuple(facs))

    @property
    def degree(self) -> int:
        return sum(b for _, b in self.factors)

    def coefficients(self, p: int) -> List[Fraction]:
        out = [Fraction(1)]
        for a, b in self.factors:
            c = Fraction(p) ** a
            new = out + [Fraction(0)] * b
            for i, x in enumerate(out):
                new[i + b] -= c * x
            out = new
        return out


def _as_number(c) -> Fraction:
    c = RatFunc.coerce(c)
    if not c.is_constant():
        raise SchemaError(f"series coefficient {c} is not a number")
    return Fraction(c.constant_value())


def fit_rational(
    series: TruncSeries, shape: DenominatorShape, p: int, num_degree: Optional[int] = None, margin: int = 2
) -> Optional[RatFunc]:
    """Find N(T) with series = N(T)/D(T), D the shape at p; None if no fit.

    The numerator is the truncation of series * D to ``num_degree`` (by
    default deg D).  Every further coefficient of series * D must vanish;
    at least ``margin`` of them are required so that a fit is confirmed on
    held-out data.

    >>> s = TruncSeries([5, 21, 81, 297, 1053, 3645, 12393, 41553])
    >>> str(fit_rational(s, DenominatorShape(((1, 1), (1, 1))), 3))
    '(-9*T + 5)/(9*T^2 - 6*T + 1)'
    """
    if not shape.factors:
        raise SchemaError("denominator shape needs at least one factor")
    if margin < 2:
        raise ValueError("held-out margin must be at least 2")
    if num_degree is None:
        num_degree = shape.degree
    needed = num_degree + 1 + margin
    if len(series) < needed:
        raise InsufficientData(f"need at least {needed} coefficients, got {len(series)}")
    s = [_as_number(c) for c in series.coeffs]
    d = shape.coefficients(p)
    prod = [sum(d[i] * s[k - i] for i in range(min(k, len(d) - 1) + 1)) for k in range(len(s))]
    if any(prod[num_degree + 1 :]):
        return None
    T = MPoly.var(series.var)
    numer = sum((MPoly.const(c) * T**k for k, c in enumerate(prod[: num_degree + 1])), MPoly.const(0))
    denom = sum((MPoly.const(c) * T**k for k, c in enumerate(d)), MPoly.const(0))
    return RatFunc(numer, denom)


def verify_rational(series: TruncSeries, f: RatFunc) -> bool:
    """True iff the Taylor coefficients of f at 0 match every series coefficient."""
    if len(series) == 0:
        return True
    expansion = ratfunc_series(RatFunc.coerce(f), series.var, series.order)
    return all(a == b for a, b in zip(expansion.coeffs, series.coeffs))
