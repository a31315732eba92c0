"""Equations of jet schemes of affine varieties.

The n-jets of X = {f_1 = ... = f_r = 0} in A^m are the tuples of
truncated polynomials x_j(t) = a{j}_0 + a{j}_1 t + ... + a{j}_n t^n with
f_i(x(t)) = 0 mod t^(n+1).  Expanding by truncated series arithmetic
gives (n+1) equations per f_i, one per power of t; the t^k equation only
involves coefficients of index <= k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple, Union

from .errors import OrderMismatch, ParseError, SchemaError
from .exactalg import MPoly, TruncSeries, parse_poly


def base_var(j: int) -> str:
    return f"x{j}"


def jet_var(j: int, k: int) -> str:
    """Name of the t^k coefficient of x_j."""
    return f"a{j}_{k}"


@dataclass(frozen=True)
class AffineSystem:
    num_vars: int
    polys: Tuple[MPoly, ...]

    def __post_init__(self):
        allowed = {base_var(j) for j in range(1, self.num_vars + 1)}
        for p in self.polys:
            if p.is_zero():
                raise SchemaError("zero polynomial in affine system")
            if not p.is_integral():
                raise SchemaError(f"{p} has non-integer coefficients")
            extra = set(p.vars) - allowed
            if extra:
                raise SchemaError(f"{p} uses {sorted(extra)}; expected variables among x1..x{self.num_vars}")

    @property
    def variables(self) -> List[str]:
        return [base_var(j) for j in range(1, self.num_vars + 1)]

    @classmethod
    def parse(cls, lines: Union[str, Sequence[str]], num_vars: int | None = None) -> "AffineSystem":
        """One polynomial per line; blank lines and ``#`` comments ignored."""
        if isinstance(lines, str):
            lines = lines.splitlines()
        polys = []
        for line in lines:
            line = line.split("#", 1)[0].strip()
            if line:
                try:
                    polys.append(parse_poly(line))
                except ParseError as exc:
                    raise SchemaError(f"bad polynomial line {line!r}: {exc}") from exc
        if not polys:
            raise SchemaError("no polynomials given")
        if num_vars is None:
            num_vars = 0
            for p in polys:
                for v in p.vars:
                    if v.startswith("x") and v[1:].isdigit():
                        num_vars = max(num_vars, int(v[1:]))
        return cls(num_vars, tuple(polys))

    @classmethod
    def from_file(cls, path, num_vars: int | None = None) -> "AffineSystem":
        with open(path) as fh:
            return cls.parse(fh.read(), num_vars)


@dataclass(frozen=True)
class JetSystem:
    """Equations of the n-jet scheme, ``groups[k]`` holding the t^k equations."""

    level: int
    num_base_vars: int
    groups: Tuple[Tuple[MPoly, ...], ...]

    @property
    def variables(self) -> List[str]:
        return [jet_var(j, k) for j in range(1, self.num_base_vars + 1) for k in range(self.level + 1)]

    @property
    def num_vars(self) -> int:
        return self.num_base_vars * (self.level + 1)

    @property
    def equations(self) -> List[MPoly]:
        return [eq for group in self.groups for eq in group]

    def level_variables(self, k: int) -> List[str]:
        return [jet_var(j, k) for j in range(1, self.num_base_vars + 1)]

    def to_text(self) -> str:
        out = []
        for k, group in enumerate(self.groups):
            out.append(f"# t^{k}")
            out.extend(str(eq) for eq in group)
        return "\n".join(out) + "\n"


def _series_mul(a: List[MPoly], b: List[MPoly], n: int) -> List[MPoly]:
    out = []
    for k in range(n + 1):
        acc = MPoly.const(0)
        for i in range(k + 1):
            if not a[i].is_zero() and not b[k - i].is_zero():
                acc = acc + a[i] * b[k - i]
        out.append(acc)
    return out


def _compose(p: MPoly, series: Mapping[str, List[MPoly]], n: int) -> List[MPoly]:
    powers = {}

    def power(name, e):
        key = (name, e)
        if key not in powers:
            if e == 1:
                powers[key] = series[name][: n + 1]
            else:
                powers[key] = _series_mul(power(name, e - 1), series[name], n)
        return powers[key]

    total = [MPoly.const(0)] * (n + 1)
    for mon, c in p.terms.items():
        term = [MPoly.const(c)] + [MPoly.const(0)] * n
        for name, e in zip(p.vars, mon):
            if e:
                term = _series_mul(term, power(name, e), n)
        total = [x + y for x, y in zip(total, term)]
    return total


def truncate_compose(p: MPoly, series, order: int) -> TruncSeries:
    """Coefficients of t^0..t^order of p evaluated on truncated series.

    ``series`` maps each variable of p to a TruncSeries (or coefficient
    list); a sequence is matched against ``p.vars`` in order.
    """
    if not isinstance(series, Mapping):
        series = list(series)
        if len(series) != len(p.vars):
            raise OrderMismatch(f"{len(series)} series for {len(p.vars)} variables")
        series = dict(zip(p.vars, series))
    polys = {}
    for name in p.vars:
        if name not in series:
            raise OrderMismatch(f"no series for variable {name}")
        s = series[name]
        coeffs = s.coeffs if isinstance(s, TruncSeries) else s
        if len(coeffs) < order + 1:
            raise OrderMismatch(f"series for {name} has order {len(coeffs) - 1} < {order}")
        polys[name] = [c.as_poly() if hasattr(c, "as_poly") else MPoly.coerce(c) for c in coeffs]
    return TruncSeries(_compose(p, polys, order), "t")


def generic_jets(num_vars: int, n: int):
    return {base_var(j): [MPoly.var(jet_var(j, k)) for k in range(n + 1)] for j in range(1, num_vars + 1)}


def jet_equations(sys: AffineSystem, n: int) -> JetSystem:
    """Equations of L_n(X) in the jet coefficients a{j}_k.

    >>> js = jet_equations(AffineSystem.parse("x2^2 - x1^3"), 1)
    >>> [str(e) for e in js.equations]
    ['-a1_0^3 + a2_0^2', '-3*a1_0^2*a1_1 + 2*a2_0*a2_1']
    """
    if n < 0:
        raise ValueError("jet level must be >= 0")
    series = generic_jets(sys.num_vars, n)
    per_poly = [_compose(f, series, n) for f in sys.polys]
    groups = tuple(tuple(coeffs[k] for coeffs in per_poly) for k in range(n + 1))
    return JetSystem(n, sys.num_vars, groups)
