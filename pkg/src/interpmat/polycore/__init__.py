"""Exact polynomial arithmetic, linear algebra, resultants and real solving."""

from .bivariate import bivariate_solve, interval_eval
from .parse import format_poly, parse_poly, sort_variables
from .poly import MultiPoly, grlex_key, poly_arith
from .resultant import (exact_divide_power, resultant, strip_linear_power,
                        sylvester_resultant, uni_resultant)
from .roots import RealRoot, isolate_real_roots
from .scalar import EXACT, FLOAT
from .unipoly import UniPoly, squarefree_decomposition, uni_gcd

__all__ = [
    "EXACT", "FLOAT", "MultiPoly", "UniPoly", "RealRoot",
    "bivariate_solve", "exact_divide_power", "format_poly", "grlex_key",
    "interval_eval", "isolate_real_roots", "parse_poly", "poly_arith",
    "resultant", "sort_variables", "squarefree_decomposition",
    "strip_linear_power", "sylvester_resultant", "uni_gcd", "uni_resultant",
]
