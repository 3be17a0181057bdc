"""Exact rational arithmetic, sparse polynomials, truncated series, parsing."""

from logbb.algebra.parser import parse_poly
from logbb.algebra.poly import (
    Ambient,
    MPoly,
    Rational,
    derive,
    eval_poly,
    format_rational,
    poly_arith,
    to_rational,
    variables,
)
from logbb.algebra.series import TruncSeries, coeff, series_inverse

__all__ = [
    "Ambient",
    "MPoly",
    "Rational",
    "TruncSeries",
    "coeff",
    "derive",
    "eval_poly",
    "format_rational",
    "parse_poly",
    "poly_arith",
    "series_inverse",
    "to_rational",
    "variables",
]
