"""Rational coefficient backend.

gmpy2.mpq is used when importable (about an order of magnitude faster on
the small rationals that dominate series coefficients); otherwise the
stdlib Fraction.  Both hash and compare interchangeably, so the choice
never leaks into results.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is optional
    Q = Fraction
    HAVE_GMPY2 = False


def to_frac(x) -> Fraction:
    """Convert int / Fraction / mpq to a stdlib Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))
