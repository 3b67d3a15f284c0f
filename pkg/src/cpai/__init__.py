"""Critical points at infinity for Laurent polynomials.

Exact Newton-polytope and toric computations decide where critical points
at infinity can occur for a Laurent polynomial with smooth torus zero set,
whether they are heighted, and what their critical values at infinity are.
A numeric witness-curve harness cross-checks the symbolic verdicts.
"""

from .laurent import (
    GaussianRational,
    LaurentPolynomial,
    ParseError,
    parse,
    to_text,
    evaluate,
    gradient,
    log_gradient,
    mul_monomial,
    substitute_monomial_map,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "LaurentPolynomial",
    "ParseError",
    "parse",
    "to_text",
    "evaluate",
    "gradient",
    "log_gradient",
    "mul_monomial",
    "substitute_monomial_map",
    "__version__",
]
