"""singulog: symbolic small-parameter expansions of nested singular integrals.

The package splits in two independent halves that check each other:

* a symbolic half that reduces families of nested integrals to finite
  ``t**p * log(t)**m`` expansions with exact rational coefficients, and
* a numeric oracle that samples the same integrals at high precision along
  complex rays and fits the singular coefficients from data alone.

On top sit a piecewise log-polynomial convolution algebra for weight
functions on ``[0, 2]``, a Weierstrass-style preparation helper for
pole-surface factorization, and a small CLI.
"""

from .coeffs import Coefficient, Exact, Fitted, Undetermined, exact
from .expansion import (
    ExpansionError,
    LogPowTerm,
    SingExpansion,
    euler_solve,
    term,
)

__version__ = "0.1.0"

__all__ = [
    "Coefficient",
    "Exact",
    "Fitted",
    "Undetermined",
    "exact",
    "ExpansionError",
    "LogPowTerm",
    "SingExpansion",
    "euler_solve",
    "term",
    "__version__",
]
