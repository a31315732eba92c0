"""Truncated power series in one variable with exact coefficients."""

from __future__ import annotations

from typing import List, Sequence

from ..errors import NonExpandable, OrderMismatch
from .poly import MPoly
from .ratfunc import RatFunc


class TruncSeries:
    """Coefficients c_0..c_n of a series in ``var``, known modulo var^(n+1).

    Coefficients are RatFuncs in the remaining variables.  An empty
    coefficient list is allowed and denotes a series known to no order.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Sequence, var: str = "T"):
        self.var = var
        self.coeffs: List[RatFunc] = [RatFunc.coerce(c) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise OrderMismatch(f"cannot raise order {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.var)

    def _check(self, other: "TruncSeries"):
        if other.var != self.var:
            raise OrderMismatch(f"series in {self.var} and {other.var}")

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check(other)
        n = min(len(self), len(other))
        return TruncSeries([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], self.var)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "TruncSeries":
        return TruncSeries([a * c for a in self.coeffs], self.var)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = RatFunc.coerce(0)
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return TruncSeries(out, self.var)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return TruncSeries([x / c for x in self.coeffs], self.var)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.var == other.var and len(self) == len(other) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    __hash__ = None

    def subs(self, values) -> "TruncSeries":
        """Substitute in the coefficients (not in the series variable)."""
        return TruncSeries([c.subs(values) for c in self.coeffs], self.var)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"

    def __repr__(self):
        return f"TruncSeries({self}, var={self.var!r})"


def poly_series(p: MPoly, var: str, order: int) -> TruncSeries:
    parts = p.coefficients_in(var)
    return TruncSeries([parts.get(k, MPoly.const(0)) for k in range(order + 1)], var)


def ratfunc_series(f: RatFunc, var: str, order: int) -> TruncSeries:
    """Taylor coefficients of ``f`` at var = 0 up to var^order.

    Raises NonExpandable when the denominator vanishes at var = 0.
    """
    num = f.numer.coefficients_in(var)
    den = f.denom.coefficients_in(var)
    d0 = den.get(0)
    if d0 is None or d0.is_zero():
        raise NonExpandable(f"denominator of {f} vanishes at {var} = 0")
    d0 = RatFunc.coerce(d0)
    dks = sorted((k, RatFunc.coerce(c)) for k, c in den.items() if k > 0)
    out: List[RatFunc] = []
    for n in range(order + 1):
        acc = RatFunc.coerce(num.get(n, MPoly.const(0)))
        for k, c in dks:
            if k > n:
                break
            if not out[n - k].is_zero():
                acc = acc - c * out[n - k]
        out.append(acc / d0)
    return TruncSeries(out, var)
