"""Exact Toeplitz operators, Berezin transforms and symbol construction on the unit ball.

Modules:

``arith``      exact scalars, multi-indices, moment constants
``symbolic``   bipolynomials in z, zbar and the operator calculus on them
``wirtinger``  jets of rational expressions, pointwise kernel identities
``bergman``    truncated operator matrices and Berezin coefficient series
``mellin``     Mellin-transform construction of symbols with given Berezin transform
``bhsuite``    Brown-Halmos type statements and the built-in example suites
``cli``        command-line front end
"""
from ._accel import BACKEND
from .arith import GaussianRational, format_scalar, parse_scalar
from .symbolic import BiPolynomial, UnivariatePoly

__version__ = "0.1.0"

__all__ = ["BACKEND", "GaussianRational", "BiPolynomial", "UnivariatePoly",
           "format_scalar", "parse_scalar", "__version__"]
