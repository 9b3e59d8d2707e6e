"""Exact sparse multivariate polynomial and rational-function arithmetic."""

from .polynomial import ALPHAS, AUTONOMOUS, REDUCED, Context, Polynomial, poly_gcd
from .rational import (
    RationalFunction,
    constraint_image,
    constraint_residual,
    rf_arith,
    rf_diff,
    rf_equals_mod_constraint,
    rf_eval_exact,
    rf_substitute,
)
from .serialize import format_polynomial, format_rational, parse, parse_rational

__all__ = [
    "ALPHAS", "AUTONOMOUS", "REDUCED", "Context", "Polynomial", "RationalFunction",
    "constraint_image", "constraint_residual", "format_polynomial", "format_rational",
    "parse", "parse_rational", "poly_gcd", "rf_arith", "rf_diff",
    "rf_equals_mod_constraint", "rf_eval_exact", "rf_substitute",
]
