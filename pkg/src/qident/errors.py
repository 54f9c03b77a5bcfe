"""Exception types shared across the engine."""

from __future__ import annotations

from fractions import Fraction


class QIdentError(Exception):
    """Base class for all qident errors."""


class OrderMismatchError(QIdentError):
    """Two cyclotomic numbers with different field orders were combined."""


class NonGenericError(QIdentError):
    """A specialization hit a singularity: a vanishing theta denominator or
    a pole 1/(1-u) with u exactly 1.

    `factor` describes the offending subexpression.
    """

    def __init__(self, factor: str):
        super().__init__(factor)
        self.factor = factor


class InsufficientPrecisionError(QIdentError):
    """A comparison was requested beyond the guaranteed precision of one side."""

    def __init__(self, required: Fraction, achieved: Fraction):
        super().__init__(
            f"comparison to order {required} exceeds guaranteed precision {achieved}"
        )
        self.required = required
        self.achieved = achieved

    @property
    def deficit(self) -> Fraction:
        return self.required - self.achieved


class CapExceededError(QIdentError):
    """An adaptive summation failed to gain valuation within the iteration cap."""


class ParseError(QIdentError):
    """Syntax or arity error in the expression DSL, with position info."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class EvalError(QIdentError):
    """Semantic error while evaluating an expression (unbound symbol, bad argument)."""
