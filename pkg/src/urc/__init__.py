"""Exact-arithmetic toolkit for rank-2 distributions, jet systems,
curve-germ fundamental forms, and the classification of line families on
hypersurfaces as Goursat or Cartan type.

All computation is over Q or Q(s) with arbitrary-precision rationals;
there is no floating point and no randomized verdict: generic ranks are
fraction-field ranks, probe-point ranks are exact evaluations.
"""

from .scalars import (
    MultiPoly,
    QQ,
    RationalFunction,
    ScalarField,
    TruncatedSeries,
    binary_form_common_zeros,
    poly_partial_derivative,
    poly_substitute,
    series_substitute,
)
from .parsing import parse_expression, parse_vector_field

__all__ = [
    "MultiPoly",
    "QQ",
    "RationalFunction",
    "ScalarField",
    "TruncatedSeries",
    "binary_form_common_zeros",
    "parse_expression",
    "parse_vector_field",
    "poly_partial_derivative",
    "poly_substitute",
    "series_substitute",
]
