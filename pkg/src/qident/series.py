"""Truncated Puiseux series with cyclotomic coefficients.

A QSeries stores finitely many terms c * q^(k/D) in a sparse map from the
integer grid index k to a nonzero CycloNumber c, together with the grid
denominator D, the shared coefficient field order M, and a precision P:
every coefficient with k < P is guaranteed correct, everything at or
beyond P is unknown.  Negative k is allowed (Laurent behavior).

Precision propagates through arithmetic by the min/valuation rules below,
so a comparison can never silently read coefficients outside the
guaranteed window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Callable, Optional, Union

from .coeff import CycloNumber, cyclo_embed, euler_phi, lift_order, one as cyclo_one, zero as cyclo_zero
from .errors import InsufficientPrecisionError, NonGenericError
from .verdict import FAIL, PASS, Verdict

Rat = Union[int, Fraction]


def _as_frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# Monomial: c * q^e, the shape of every specialized argument
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    coeff: CycloNumber
    expo: Fraction

    def __post_init__(self):
        if self.coeff.is_zero():
            raise ValueError("monomial coefficient must be nonzero")
        if not isinstance(self.expo, Fraction):
            object.__setattr__(self, "expo", Fraction(self.expo))

    @staticmethod
    def make(coeff: Union[CycloNumber, Rat], expo: Rat = 0) -> "Monomial":
        if not isinstance(coeff, CycloNumber):
            coeff = cyclo_embed(Fraction(coeff), 1)
        return Monomial(coeff, _as_frac(expo))

    @property
    def field_order(self) -> int:
        return self.coeff.order

    def is_q_power(self) -> bool:
        """True when the coefficient is exactly 1."""
        return self.coeff.is_rational() and self.coeff.rational_value() == 1

    def __mul__(self, other: "Monomial") -> "Monomial":
        a, b = self.coeff, other.coeff
        if a.order != b.order:
            m = a.order * b.order // gcd(a.order, b.order)
            a, b = lift_order(a, m), lift_order(b, m)
        return Monomial(a * b, self.expo + other.expo)

    def __neg__(self) -> "Monomial":
        return Monomial(-self.coeff, self.expo)

    def inv(self) -> "Monomial":
        return Monomial(self.coeff.inv(), -self.expo)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial(self.coeff**n, self.expo * n)

    def times_q(self, e: Rat) -> "Monomial":
        return Monomial(self.coeff, self.expo + _as_frac(e))

    def __str__(self) -> str:
        c = self.coeff
        cs = str(c) if (c.is_rational() or c.order == 1) else f"({c})"
        if self.expo == 0:
            return cs
        qs = f"q^({self.expo.numerator}/{self.expo.denominator})"
        if c.is_rational() and c.rational_value() == 1:
            return qs
        if c.is_rational() and c.rational_value() == -1:
            return f"-{qs}"
        return f"{cs}*{qs}"


# ---------------------------------------------------------------------------
# QSeries
# ---------------------------------------------------------------------------


class QSeries:
    """Sparse truncated series; immutable by convention."""

    __slots__ = ("denom", "prec", "terms", "field_order")

    def __init__(
        self,
        denom: int,
        prec: int,
        terms: dict[int, CycloNumber],
        field_order: int,
        _checked: bool = False,
    ):
        if not _checked:
            if denom < 1:
                raise ValueError("grid denominator must be positive")
            terms = {
                k: c for k, c in terms.items() if k < prec and not c.is_zero()
            }
            for k, c in terms.items():
                if c.order != field_order:
                    raise ValueError("coefficient field order mismatch")
        self.denom = denom
        self.prec = prec
        self.terms = terms
        self.field_order = field_order

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to the guaranteed precision."""
        return not self.terms

    @property
    def val_grid(self) -> int:
        """Valuation in grid units; precision for a zero-to-order series."""
        return min(self.terms) if self.terms else self.prec

    def valuation(self) -> Optional[Fraction]:
        """Least exponent with nonzero coefficient, None if zero to precision."""
        if not self.terms:
            return None
        return Fraction(min(self.terms), self.denom)

    def prec_order(self) -> Fraction:
        """Exponent bound below which coefficients are guaranteed."""
        return Fraction(self.prec, self.denom)

    def coeff_at(self, e: Rat) -> CycloNumber:
        """Coefficient of q^e; raises when e is outside the guaranteed window."""
        e = _as_frac(e)
        k = e * self.denom
        if e >= self.prec_order():
            raise InsufficientPrecisionError(e, self.prec_order())
        if k.denominator != 1:
            return cyclo_zero(self.field_order)
        return self.terms.get(int(k), cyclo_zero(self.field_order))

    def sorted_terms(self) -> list[tuple[int, CycloNumber]]:
        return sorted(self.terms.items())

    # -- rebasing -------------------------------------------------------------

    def rebase(self, new_denom: int) -> "QSeries":
        """Re-express on a finer grid; new_denom must be a multiple of denom."""
        if new_denom == self.denom:
            return self
        if new_denom % self.denom != 0:
            raise ValueError(f"{self.denom} does not divide {new_denom}")
        f = new_denom // self.denom
        return QSeries(
            new_denom,
            self.prec * f,
            {k * f: c for k, c in self.terms.items()},
            self.field_order,
            _checked=True,
        )

    def lift_field(self, new_order: int) -> "QSeries":
        if new_order == self.field_order:
            return self
        return QSeries(
            self.denom,
            self.prec,
            {k: lift_order(c, new_order) for k, c in self.terms.items()},
            new_order,
            _checked=True,
        )

    # -- operators ------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const_series(other, Fraction(self.prec, self.denom))
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return series_neg(self)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const_series(other, Fraction(self.prec, self.denom))
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_add(self, series_neg(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloNumber)):
            return series_scale(self, other)
        if not isinstance(other, QSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.terms:
            return f"O(q^({self.prec_order()}))"
        bits = []
        for k, c in self.sorted_terms():
            e = Fraction(k, self.denom)
            cs = str(c) if c.is_rational() else f"({c})"
            if e == 0:
                bits.append(cs)
            else:
                qs = f"q^({e.numerator}/{e.denominator})"
                bits.append(qs if cs == "1" else f"-{qs}" if cs == "-1" else f"{cs}*{qs}")
        return " + ".join(bits) + f" + O(q^({self.prec_order()}))"

    def __repr__(self) -> str:
        return f"<QSeries D={self.denom} M={self.field_order} P={self.prec} terms={len(self.terms)}>"


# ---------------------------------------------------------------------------
# Alignment helpers
# ---------------------------------------------------------------------------


def align(a: QSeries, b: QSeries) -> tuple[QSeries, QSeries]:
    """Bring two series to a common grid denominator and coefficient field."""
    d = a.denom * b.denom // gcd(a.denom, b.denom)
    m = a.field_order * b.field_order // gcd(a.field_order, b.field_order)
    return a.rebase(d).lift_field(m), b.rebase(d).lift_field(m)


def grid_prec(order: Rat, denom: int) -> int:
    """Grid precision index covering all exponents strictly below order."""
    return ceil(_as_frac(order) * denom)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def zero_series(order: Rat, denom: int = 1, field_order: int = 1) -> QSeries:
    return QSeries(denom, grid_prec(order, denom), {}, field_order, _checked=True)


def const_series(
    value: Union[CycloNumber, Rat], order: Rat, denom: int = 1
) -> QSeries:
    if not isinstance(value, CycloNumber):
        value = cyclo_embed(_as_frac(value), 1)
    p = grid_prec(order, denom)
    terms = {} if (value.is_zero() or p <= 0) else {0: value}
    return QSeries(denom, p, terms, value.order, _checked=True)


def from_monomial(m: Monomial, order: Rat) -> QSeries:
    d = m.expo.denominator
    k = int(m.expo * d)
    p = grid_prec(order, d)
    terms = {k: m.coeff} if k < p else {}
    return QSeries(d, p, terms, m.field_order, _checked=True)


def q_power(e: Rat, order: Rat) -> QSeries:
    return from_monomial(Monomial.make(1, e), order)


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------


def series_add(a: QSeries, b: QSeries) -> QSeries:
    a, b = align(a, b)
    p = min(a.prec, b.prec)
    out = dict(a.terms)
    for k, c in b.terms.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s.is_zero():
                del out[k]
            else:
                out[k] = s
    if p < max(a.prec, b.prec):
        out = {k: c for k, c in out.items() if k < p}
    return QSeries(a.denom, p, out, a.field_order, _checked=True)


def series_neg(a: QSeries) -> QSeries:
    return QSeries(
        a.denom,
        a.prec,
        {k: -c for k, c in a.terms.items()},
        a.field_order,
        _checked=True,
    )


def series_sub(a: QSeries, b: QSeries) -> QSeries:
    return series_add(a, series_neg(b))


def series_scale(a: QSeries, c: Union[CycloNumber, Rat]) -> QSeries:
    """Multiply by an exact scalar; precision is unchanged."""
    if not isinstance(c, CycloNumber):
        c = cyclo_embed(_as_frac(c), a.field_order)
    m = a.field_order
    if c.order != m:
        m = c.order * m // gcd(c.order, m)
        c = lift_order(c, m)
        a = a.lift_field(m)
    if c.is_zero():
        return QSeries(a.denom, a.prec, {}, m, _checked=True)
    return QSeries(
        a.denom, a.prec, {k: v * c for k, v in a.terms.items()}, m, _checked=True
    )


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    a, b = align(a, b)
    # unknown tail of one factor meets the leading term of the other
    p = min(a.prec + b.val_grid, b.prec + a.val_grid)
    out: dict[int, CycloNumber] = {}
    if len(a.terms) > len(b.terms):
        a, b = b, a
    for ka, ca in a.terms.items():
        top = p - ka
        for kb, cb in b.terms.items():
            if kb >= top:
                continue
            k = ka + kb
            prod = ca * cb
            s = out.get(k)
            if s is None:
                out[k] = prod
            else:
                s = s + prod
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
    return QSeries(a.denom, p, out, a.field_order, _checked=True)


def series_pow(a: QSeries, n: int) -> QSeries:
    if n < 0:
        return series_pow(series_invert(a), -n)
    result = const_series(1, Fraction(a.prec, a.denom), a.denom).lift_field(
        a.field_order
    )
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        base = series_mul(base, base) if n > 1 else base
        n >>= 1
    return result


def series_shift(a: QSeries, m: Monomial) -> QSeries:
    """m.coeff * q^(m.expo) * a, rebasing the grid as needed."""
    d = a.denom * m.expo.denominator // gcd(a.denom, m.expo.denominator)
    a = series_scale(a.rebase(d), m.coeff)
    s = int(m.expo * d)
    return QSeries(
        d,
        a.prec + s,
        {k + s: c for k, c in a.terms.items()},
        a.field_order,
        _checked=True,
    )


def substitute_base(a: QSeries, p: Rat) -> QSeries:
    """q -> q^p with p > 0: every exponent is scaled by p."""
    p = _as_frac(p)
    if p <= 0:
        raise ValueError("base exponent must be positive")
    if p == 1:
        return a
    d = a.denom * p.denominator
    n = p.numerator
    return QSeries(
        d,
        a.prec * n,
        {k * n: c for k, c in a.terms.items()},
        a.field_order,
        _checked=True,
    )


def series_invert(a: QSeries, order: Optional[Rat] = None) -> QSeries:
    """Multiplicative inverse to the best precision the input supports.

    With valuation v (grid units) and precision P, the inverse is
    guaranteed for grid indices below P - 2v; an explicit order argument
    can only lower that bound.
    """
    if not a.terms:
        raise NonGenericError(
            f"cannot invert a series that is zero to its precision O(q^({a.prec_order()}))"
        )
    v = a.val_grid
    p_res = a.prec - 2 * v
    if order is not None:
        p_res = min(p_res, grid_prec(order, a.denom))
    lead = a.terms[v]
    lead_inv = lead.inv()
    rel = {k - v: c for k, c in a.terms.items()}
    # content lattice of the tail: inverse coefficients live on it too
    g = 0
    for j in rel:
        g = gcd(g, j)
    length = p_res + v  # relative indices 0 .. length-1 are wanted
    if g == 0 or length <= 1:
        terms = {-v: lead_inv} if -v < p_res else {}
        return QSeries(a.denom, p_res, terms, a.field_order, _checked=True)
    u_sparse = sorted(
        (j // g, c * lead_inv) for j, c in rel.items() if j != 0
    )
    n_out = (length + g - 1) // g
    zero = cyclo_zero(a.field_order)
    b = [zero] * n_out
    b[0] = cyclo_one(a.field_order)
    for n in range(1, n_out):
        acc = zero
        for j, u in u_sparse:
            if j > n:
                break
            t = b[n - j]
            if not t.is_zero():
                acc = acc + u * t
        b[n] = -acc
    terms = {}
    for n, c in enumerate(b):
        k = -v + n * g
        if k >= p_res:
            break
        if not c.is_zero():
            terms[k] = c * lead_inv
    return QSeries(a.denom, p_res, terms, a.field_order, _checked=True)


def series_div(a: QSeries, b: QSeries) -> QSeries:
    return series_mul(a, series_invert(b))


def series_truncate(a: QSeries, order: Rat) -> QSeries:
    """Discard terms at or beyond order and cap the precision there.

    Lowering precision is always sound; this keeps running products in
    adaptive summations from growing past the working window.
    """
    p = min(a.prec, grid_prec(order, a.denom))
    if p == a.prec:
        return a
    return QSeries(
        a.denom,
        p,
        {k: c for k, c in a.terms.items() if k < p},
        a.field_order,
        _checked=True,
    )


def geom_inverse(u: Monomial, order: Rat, field_order: Optional[int] = None) -> QSeries:
    """Expansion of 1/(1 - u) for a monomial u = c*q^f.

    f > 0: sum of c^k q^(kf); f = 0, c != 1: the constant 1/(1-c);
    f < 0: -sum over k >= 1 of c^(-k) q^(-kf).  A pole (f = 0, c = 1)
    is a non-generic specialization and raises.
    """
    c, f = u.coeff, u.expo
    m = c.order if field_order is None else field_order
    if c.order != m:
        c = lift_order(c, m)
    order = _as_frac(order)
    if f == 0:
        if c == 1:
            raise NonGenericError("pole 1/(1 - u) with u exactly 1")
        return const_series((1 - c).inv(), order)
    d = f.denominator
    p = grid_prec(order, d)
    terms: dict[int, CycloNumber] = {}
    if f > 0:
        step = int(f * d)
        acc = cyclo_one(m)
        k = 0
        while k < p:
            terms[k] = acc
            acc = acc * c
            k += step
    else:
        step = int(-f * d)
        cinv = c.inv()
        acc = -cinv
        k = step
        while k < p:
            terms[k] = acc
            acc = acc * cinv
            k += step
    return QSeries(d, p, terms, m, _checked=True)


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------


def series_eq_to_order(a: QSeries, b: QSeries, order: Rat) -> Verdict:
    """Compare all coefficients with exponent strictly below order.

    Raises InsufficientPrecisionError when either side's guaranteed window
    is too shallow for the request; the caller must recompute deeper.
    """
    order = _as_frac(order)
    a, b = align(a, b)
    need = order * a.denom
    short = min(a.prec, b.prec)
    if short < need:
        raise InsufficientPrecisionError(order, Fraction(short, a.denom))
    diff_keys = set(a.terms) | set(b.terms)
    bad = None
    for k in diff_keys:
        if k >= need:
            continue
        if a.terms.get(k) != b.terms.get(k):
            if bad is None or k < bad:
                bad = k
    if bad is None:
        return Verdict(PASS, order)
    za = a.terms.get(bad, cyclo_zero(a.field_order))
    zb = b.terms.get(bad, cyclo_zero(b.field_order))
    return Verdict(
        FAIL,
        order,
        first_bad_exponent=Fraction(bad, a.denom),
        lhs_coeff=za,
        rhs_coeff=zb,
    )


# ---------------------------------------------------------------------------
# Adaptive bilateral summation
# ---------------------------------------------------------------------------


def bilateral_sum(
    term_val: Callable[[int], Fraction],
    term_series: Callable[[int], QSeries],
    order: Rat,
    hints: list[Fraction],
    denom: int = 1,
    field_order: int = 1,
) -> QSeries:
    """Sum term_series(n) over all integers n with term_val(n) < order.

    term_val must be convex in n (quadratic exponent growth plus at most a
    piecewise-linear kink from a geometric factor), which makes the scan
    outward from the minimizer exact: once a term's valuation reaches the
    order on each side, all further terms are beyond it.  hints lists the
    rational positions of the quadratic vertex and any kink.
    """
    order = _as_frac(order)
    lo = min(hints) if hints else Fraction(0)
    hi = max(hints) if hints else Fraction(0)
    window = range(int(lo) - 2, int(hi) + 3)
    n0 = min(window, key=lambda n: (term_val(n), abs(n)))
    total = zero_series(order, denom, field_order)
    n = n0
    while term_val(n) < order:
        total = series_add(total, term_series(n))
        n += 1
    n = n0 - 1
    while term_val(n) < order:
        total = series_add(total, term_series(n))
        n -= 1
    return total


__all__ = [
    "Monomial",
    "QSeries",
    "align",
    "bilateral_sum",
    "const_series",
    "from_monomial",
    "geom_inverse",
    "grid_prec",
    "q_power",
    "series_add",
    "series_div",
    "series_eq_to_order",
    "series_invert",
    "series_mul",
    "series_neg",
    "series_pow",
    "series_scale",
    "series_shift",
    "series_sub",
    "substitute_base",
    "zero_series",
]
