"""Outcome of an identity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coeff import CycloNumber

PASS = "pass"
FAIL = "fail"
NONGENERIC = "nongeneric"
INSUFFICIENT = "insufficient_precision"

_STATUSES = frozenset({PASS, FAIL, NONGENERIC, INSUFFICIENT})


@dataclass(frozen=True)
class Verdict:
    """Result of comparing two series, or of a failed attempt to build them.

    A fail verdict always carries the smallest offending exponent and the
    two disagreeing coefficients.
    """

    status: str
    order_checked: Fraction
    first_bad_exponent: Optional[Fraction] = None
    lhs_coeff: Optional[CycloNumber] = None
    rhs_coeff: Optional[CycloNumber] = None
    note: str = ""

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown verdict status {self.status!r}")
        if self.status == FAIL:
            if (
                self.first_bad_exponent is None
                or self.lhs_coeff is None
                or self.rhs_coeff is None
            ):
                raise ValueError("fail verdict requires exponent and both coefficients")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def detail(self) -> str:
        """Human-readable one-line summary for report output."""
        if self.status == PASS:
            return f"agrees below q^({self.order_checked})"
        if self.status == FAIL:
            e = self.first_bad_exponent
            return (
                f"first mismatch at q^({e.numerator}/{e.denominator}):"
                f" lhs={self.lhs_coeff} rhs={self.rhs_coeff}"
            )
        return self.note or self.status
