"""Exact value-ring calculus: polynomials, rational functions, series, term sums."""

from fractions import Fraction as Rational

from .parse import format_rational, parse_poly, parse_ratfunc, parse_rational
from .poly import VALUE_VARIABLES, MPoly, format_poly
from .ratfunc import RatFunc, format_ratfunc, ratfunc_equal, ratfunc_reduce
from .series import TruncSeries, poly_series, ratfunc_series
from .termsum import (
    CLASS,
    EULER,
    HODGE,
    Factor,
    TermSum,
    eval_at_prime,
    series_expand,
    specialize_chi,
    specialize_hodge,
    specialize_topological,
)


def poly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """Apply ``op`` in {"add", "sub", "mul"}; variable sets merge by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


__all__ = [
    "CLASS",
    "EULER",
    "HODGE",
    "VALUE_VARIABLES",
    "Factor",
    "MPoly",
    "RatFunc",
    "Rational",
    "TermSum",
    "TruncSeries",
    "eval_at_prime",
    "format_poly",
    "format_ratfunc",
    "format_rational",
    "parse_poly",
    "parse_ratfunc",
    "parse_rational",
    "poly_arith",
    "poly_series",
    "ratfunc_equal",
    "ratfunc_reduce",
    "ratfunc_series",
    "series_expand",
    "specialize_chi",
    "specialize_hodge",
    "specialize_topological",
]
