"""Eulerian q-hypergeometric sums and their root-of-unity combinations.

Each series is summed term by term with the running term carried as a
truncated series: the ratio t_n / t_{n-1} is a monomial times geometric
inverses, so every term costs one multiplication and the quadratic
exponent growth terminates the loop.  Exact pole prechecks reject the
parameter values where a denominator factor vanishes identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional, Tuple, Union

from .coeff import CycloNumber, csc_pi, sin_pi, zeta_power
from .errors import CapExceededError, NonGenericError
from .series import (
    Monomial,
    QSeries,
    bilateral_sum,
    const_series,
    from_monomial,
    geom_inverse,
    q_power,
    series_add,
    series_div,
    series_eq_to_order,
    series_invert,
    series_mul,
    series_neg,
    series_scale,
    series_shift,
    series_sub,
    series_truncate,
    zero_series,
)
from .special import J, JB, Jm, appell_m, ensure_prec, iteration_cap, theta_j
from .verdict import Verdict

Rat = Union[int, Fraction]


def _fr(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def f_c(c: int) -> int:
    """Level constant 2c/gcd(c,4) attached to the modular rescalings.

    Surfaced only as report metadata; nothing in the series arithmetic
    depends on it.
    """
    return 2 * c // gcd(c, 4)


def _is_exact_q_power(x: Monomial) -> Optional[Fraction]:
    """The exponent e with x = q^e exactly, or None."""
    c = x.coeff
    if c.is_rational() and c.rational_value() == 1:
        return x.expo
    return None


def _reject_pole(x: Monomial, parity: int, label: str):
    """Reject x = q^e with e an integer of the given parity (0 even, 1 odd)."""
    e = _is_exact_q_power(x)
    if e is not None and e.denominator == 1 and e.numerator % 2 == parity:
        raise NonGenericError(f"{label} has a vanishing denominator at {x}")


def _term_sum(
    first: QSeries,
    ratio: Callable[[int], QSeries],
    work: Fraction,
    start: int = 0,
) -> QSeries:
    """Sum t_start + t_{start+1} + ... with t_n = t_{n-1} * ratio(n)."""
    cap = iteration_cap(work)
    total = zero_series(work, first.denom, first.field_order)
    t = series_truncate(first, work)
    n = start
    while not t.is_zero():
        total = series_add(total, t)
        n += 1
        if n - start > cap:
            raise CapExceededError("Eulerian term valuation failed to grow")
        t = series_truncate(series_mul(t, ratio(n)), work)
    return total


def _one_minus(m: Monomial, work: Fraction) -> QSeries:
    one = const_series(1, work, denom=m.expo.denominator)
    return series_sub(one, from_monomial(m, work))


# ---------------------------------------------------------------------------
# The individual series
# ---------------------------------------------------------------------------


def _phi6(work: Fraction) -> QSeries:
    # sum (-1)^n q^(n^2) (q;q^2)_n / (-q;q)_{2n}
    def ratio(n):
        head = from_monomial(Monomial.make(-1, 2 * n - 1), work)
        r = series_mul(head, _one_minus(Monomial.make(1, 2 * n - 1), work))
        r = series_mul(r, geom_inverse(Monomial.make(-1, 2 * n - 1), work))
        return series_mul(r, geom_inverse(Monomial.make(-1, 2 * n), work))

    return _term_sum(const_series(1, work), ratio, work)


def _sigma6(work: Fraction) -> QSeries:
    # sum q^binom(n+2,2) (-q)_n / (q;q^2)_{n+1}
    first = series_mul(
        q_power(1, work), geom_inverse(Monomial.make(1, 1), work)
    )

    def ratio(n):
        head = from_monomial(Monomial.make(1, n + 1), work)
        r = series_mul(
            head,
            series_add(
                const_series(1, work), from_monomial(Monomial.make(1, n), work)
            ),
        )
        return series_mul(r, geom_inverse(Monomial.make(1, 2 * n + 1), work))

    return _term_sum(first, ratio, work)


def _f3(work: Fraction) -> QSeries:
    # sum q^(n^2) / (-q)_n^2
    def ratio(n):
        g = geom_inverse(Monomial.make(-1, n), work)
        return series_mul(
            series_mul(from_monomial(Monomial.make(1, 2 * n - 1), work), g), g
        )

    return _term_sum(const_series(1, work), ratio, work)


def _f0_5(work: Fraction) -> QSeries:
    # sum q^(n^2) / (-q)_n
    def ratio(n):
        return series_mul(
            from_monomial(Monomial.make(1, 2 * n - 1), work),
            geom_inverse(Monomial.make(-1, n), work),
        )

    return _term_sum(const_series(1, work), ratio, work)


def _kprime(omega: Monomial, work: Fraction) -> QSeries:
    # sum (-1)^n q^(n^2) (q;q^2)_n / ((w q^2;q^2)_n (w^-1 q^2;q^2)_n)
    _reject_pole(omega, 0, "Kprime")
    w, winv = omega, omega.inv()

    def ratio(n):
        head = from_monomial(Monomial.make(-1, 2 * n - 1), work)
        r = series_mul(head, _one_minus(Monomial.make(1, 2 * n - 1), work))
        r = series_mul(r, geom_inverse(w.times_q(2 * n), work))
        return series_mul(r, geom_inverse(winv.times_q(2 * n), work))

    first = const_series(1, work, denom=omega.expo.denominator)
    return _term_sum(first, ratio, work)


def _kprimeprime(omega: Monomial, work: Fraction) -> QSeries:
    # sum_{n>=1} (-1)^n q^(n^2) (q;q^2)_{n-1} / ((w q;q^2)_n (w^-1 q;q^2)_n)
    _reject_pole(omega, 1, "Kprimeprime")
    w, winv = omega, omega.inv()
    first = series_mul(
        from_monomial(Monomial.make(-1, 1), work),
        series_mul(
            geom_inverse(w.times_q(1), work), geom_inverse(winv.times_q(1), work)
        ),
    )

    def ratio(n):
        head = from_monomial(Monomial.make(-1, 2 * n - 1), work)
        r = series_mul(head, _one_minus(Monomial.make(1, 2 * n - 3), work))
        r = series_mul(r, geom_inverse(w.times_q(2 * n - 1), work))
        return series_mul(r, geom_inverse(winv.times_q(2 * n - 1), work))

    return _term_sum(first, ratio, work, start=1)


def _hprime(a: int, c: int, omega: Monomial, work: Fraction) -> QSeries:
    # sum q^(n(n+1)/2) (-q)_n / ((w q^(a/c))_{n+1} (w q^(1-a/c))_{n+1})
    e = _is_exact_q_power(omega)
    for frac in (Fraction(a, c), 1 - Fraction(a, c)):
        if e is not None and (e + frac).denominator == 1 and e + frac <= 0:
            raise NonGenericError(f"Hprime has a vanishing denominator at {omega}")
    u0, u1 = omega.times_q(Fraction(a, c)), omega.times_q(1 - Fraction(a, c))
    first = series_mul(geom_inverse(u0, work), geom_inverse(u1, work))

    def ratio(n):
        head = from_monomial(Monomial.make(1, n), work)
        r = series_mul(
            head,
            series_add(
                const_series(1, work), from_monomial(Monomial.make(1, n), work)
            ),
        )
        r = series_mul(r, geom_inverse(u0.times_q(n), work))
        return series_mul(r, geom_inverse(u1.times_q(n), work))

    return _term_sum(first, ratio, work)


def _lambert_even_lhs(x: Monomial, work: Fraction) -> QSeries:
    # sum (-1)^n q^(n^2) (q;q^2)_n / ((x;q^2)_{n+1} (q^2/x;q^2)_n)
    _reject_pole(x, 0, "left side of the even Lambert identity")
    xinv = x.inv()

    def ratio(n):
        head = from_monomial(Monomial.make(-1, 2 * n - 1), work)
        r = series_mul(head, _one_minus(Monomial.make(1, 2 * n - 1), work))
        r = series_mul(r, geom_inverse(x.times_q(2 * n), work))
        return series_mul(r, geom_inverse(xinv.times_q(2 * n), work))

    return _term_sum(geom_inverse(x, work), ratio, work)


def _lambert_odd_lhs(x: Monomial, work: Fraction) -> QSeries:
    # (1 - 1/x) sum (-1)^n (q;q^2)_n q^((n+1)^2)
    #                / ((xq;q^2)_{n+1} (q/x;q^2)_{n+1})
    _reject_pole(x, 1, "left side of the odd Lambert identity")
    xinv = x.inv()
    first = series_mul(
        q_power(1, work),
        series_mul(
            geom_inverse(x.times_q(1), work), geom_inverse(xinv.times_q(1), work)
        ),
    )

    def ratio(n):
        head = from_monomial(Monomial.make(-1, 2 * n + 1), work)
        r = series_mul(head, _one_minus(Monomial.make(1, 2 * n - 1), work))
        r = series_mul(r, geom_inverse(x.times_q(2 * n + 1), work))
        return series_mul(r, geom_inverse(xinv.times_q(2 * n + 1), work))

    s = _term_sum(first, ratio, work)
    return series_mul(s, _one_minus(xinv, work))


# ---------------------------------------------------------------------------
# Bilateral Lambert series
# ---------------------------------------------------------------------------


def bilateral_even(omega: Monomial, order: Rat) -> QSeries:
    """(1/JB(1,4)) * sum over all n of q^(2n^2+n) / (1 - w q^(2n))."""
    _reject_pole(omega, 0, "even bilateral Lambert sum")
    order = _fr(order)
    e = omega.expo

    def build(work):
        def term_val(n):
            return 2 * n * n + n + max(Fraction(0), -(e + 2 * n))

        def term(n):
            lead = Monomial.make(1, 2 * n * n + n)
            g = geom_inverse(omega.times_q(2 * n), work - lead.expo)
            return series_shift(g, lead)

        s = bilateral_sum(
            term_val,
            term,
            work,
            [Fraction(-1, 4), -e / 2],
            denom=e.denominator,
            field_order=omega.field_order,
        )
        return series_mul(s, series_invert(JB(1, 4, work)))

    return ensure_prec(build, order)


def bilateral_odd(omega: Monomial, order: Rat) -> QSeries:
    """(1/JB(1,4)) * sum over all n of q^(2n^2+3n+1) / (1 - w q^(2n+1))."""
    _reject_pole(omega, 1, "odd bilateral Lambert sum")
    order = _fr(order)
    e = omega.expo

    def build(work):
        def term_val(n):
            return 2 * n * n + 3 * n + 1 + max(Fraction(0), -(e + 2 * n + 1))

        def term(n):
            lead = Monomial.make(1, 2 * n * n + 3 * n + 1)
            g = geom_inverse(omega.times_q(2 * n + 1), work - lead.expo)
            return series_shift(g, lead)

        s = bilateral_sum(
            term_val,
            term,
            work,
            [Fraction(-3, 4), -(e + 1) / 2],
            denom=e.denominator,
            field_order=omega.field_order,
        )
        return series_mul(s, series_invert(JB(1, 4, work)))

    return ensure_prec(build, order)


def habc_sum(a: int, b: int, c: int, order: Rat) -> QSeries:
    """(1/J(1,2)) * sum over all n of (-1)^n q^(n+a/c) q^(n(n+1))
    / (1 - zeta_c^b q^(n+a/c))."""
    if not 0 < a < c:
        raise ValueError("need 0 < a < c")
    order = _fr(order)
    ac = Fraction(a, c)
    zb = Monomial(zeta_power(c, b % c), ac)

    def build(work):
        def term_val(n):
            return n * (n + 1) + max(n + ac, Fraction(0))

        def term(n):
            lead = Monomial.make((-1) ** n, n * (n + 1) + n + ac)
            g = geom_inverse(zb.times_q(n), work - lead.expo)
            return series_shift(g, lead)

        s = bilateral_sum(
            term_val, term, work, [Fraction(-1), Fraction(0)],
            denom=ac.denominator, field_order=zb.field_order,
        )
        return series_mul(s, series_invert(J(1, 2, work)))

    return ensure_prec(build, order)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EulerianSpec:
    """A named Eulerian sum plus whichever parameters it needs."""

    name: str
    a: Optional[int] = None
    c: Optional[int] = None
    b: Optional[int] = None
    omega: Optional[Monomial] = None
    x: Optional[Monomial] = None

    def __post_init__(self):
        if self.a is not None and not 0 < self.a < (self.c or 0):
            raise ValueError("need 0 < a < c")


def eulerian_sum(spec: EulerianSpec, order: Rat) -> QSeries:
    order = _fr(order)
    name = spec.name
    if name == "phi6":
        return ensure_prec(_phi6, order)
    if name == "sigma6":
        return ensure_prec(_sigma6, order)
    if name == "f3":
        return ensure_prec(_f3, order)
    if name == "f0_5":
        return ensure_prec(_f0_5, order)
    if name == "Kprime":
        return ensure_prec(lambda w: _kprime(spec.omega, w), order)
    if name == "Kprimeprime":
        return ensure_prec(lambda w: _kprimeprime(spec.omega, w), order)
    if name == "Hprime":
        return ensure_prec(
            lambda w: _hprime(spec.a, spec.c, spec.omega, w), order
        )
    if name == "H_abc":
        return habc_sum(spec.a, spec.b, spec.c, order)
    if name == "lambert_even_lhs":
        return ensure_prec(lambda w: _lambert_even_lhs(spec.x, w), order)
    if name == "lambert_odd_lhs":
        return ensure_prec(lambda w: _lambert_odd_lhs(spec.x, w), order)
    raise ValueError(f"unknown Eulerian series {name!r}")


# ---------------------------------------------------------------------------
# Root-of-unity combinations and closed forms
# ---------------------------------------------------------------------------


def _trig_field(c: int) -> int:
    return 4 * (2 * c) // gcd(4, 2 * c)


def k_tilde(a: int, c: int, order: Rat) -> QSeries:
    """csc(pi a/c)/4 * q^(-1/8) Kprime(zeta_c^a)
    + sin(pi a/c) * q^(-1/8) Kprimeprime(zeta_c^a)."""
    order = _fr(order)
    M = _trig_field(c)
    w = Monomial(zeta_power(c, a), Fraction(0))
    kp = eulerian_sum(EulerianSpec("Kprime", omega=w), order + Fraction(1, 8))
    kpp = eulerian_sum(
        EulerianSpec("Kprimeprime", omega=w), order + Fraction(1, 8)
    )
    pre1 = Monomial(csc_pi(a, c, M) * Fraction(1, 4), Fraction(-1, 8))
    pre2 = Monomial(sin_pi(a, c, M), Fraction(-1, 8))
    return series_add(series_shift(kp, pre1), series_shift(kpp, pre2))


def k_tilde_closed(a: int, c: int, order: Rat) -> QSeries:
    """-(i zeta_{2c}^a / 2) q^(-1/8) J(1,2)^2 / j(zeta_c^a;q)."""
    order = _fr(order)
    M = _trig_field(c)
    i = zeta_power(M, M // 4)
    half_zeta = zeta_power(M, (M // (2 * c)) * a)
    pre = Monomial(-(i * half_zeta) * Fraction(1, 2), Fraction(-1, 8))
    j12 = J(1, 2, order + Fraction(1, 8))
    quot = series_div(
        series_mul(j12, j12),
        theta_j(Monomial(zeta_power(c, a), Fraction(0)), 1, order + Fraction(1, 8)),
    )
    return series_shift(quot, pre)


def h_tilde(a: int, c: int, order: Rat, route: str = "eulerian") -> QSeries:
    """The normalized combination H-tilde, by any of three routes.

    eulerian: q^((a/c)(1-a/c)) (Hprime(a,c,1) + Hprime(a,c,-1)), the
    relative sign forced by agreement with the closed form; bilateral
    (even c only): same prefactor times (H_abc(a,0,c) - H_abc(a,c/2,c));
    closed: the theta quotient
    2 q^((a/c)(1-a/c)) Jm(2)^3 / (J(1,2) j(q^(2a/c);q^2)).
    """
    order = _fr(order)
    ac = Fraction(a, c)
    pre = Monomial.make(1, ac * (1 - ac))
    inner = order - pre.expo
    if route == "eulerian":
        hp = eulerian_sum(
            EulerianSpec("Hprime", a=a, c=c, omega=Monomial.make(1, 0)), inner
        )
        hm = eulerian_sum(
            EulerianSpec("Hprime", a=a, c=c, omega=Monomial.make(-1, 0)), inner
        )
        return series_shift(series_add(hp, hm), pre)
    if route == "bilateral":
        if c % 2:
            raise ValueError("the split-difference route needs even c")
        diff = series_sub(
            habc_sum(a, 0, c, inner), habc_sum(a, c // 2, c, inner)
        )
        return series_shift(diff, pre)
    if route == "closed":
        j2 = Jm(2, inner)
        num = series_scale(series_mul(series_mul(j2, j2), j2), 2)
        den = series_mul(
            J(1, 2, inner), theta_j(Monomial.make(1, 2 * ac), 2, inner)
        )
        return series_shift(series_div(num, den), pre)
    raise ValueError(f"unknown route {route!r}")


# ---------------------------------------------------------------------------
# Paired verifications
# ---------------------------------------------------------------------------


def _half_theta_quotient(x: Monomial, order: Fraction) -> QSeries:
    j12 = J(1, 2, order)
    return series_scale(
        series_div(series_mul(j12, j12), theta_j(x, 1, order)), Fraction(1, 2)
    )


def lambert_pair_check(x: Monomial, order: Rat) -> Tuple[Verdict, Verdict]:
    """Check both Lambert-series identities m(-x,q,-1) +- J(1,2)^2/(2 j(x;q))."""
    order = _fr(order)
    m = appell_m(-x, 1, Monomial.make(-1, 0), order)
    half = _half_theta_quotient(x, order)
    v2 = series_eq_to_order(
        eulerian_sum(EulerianSpec("lambert_even_lhs", x=x), order),
        series_add(m, half),
        order,
    )
    v4 = series_eq_to_order(
        eulerian_sum(EulerianSpec("lambert_odd_lhs", x=x), order),
        series_sub(m, half),
        order,
    )
    return v2, v4


def bilateral_pair_check(omega: Monomial, order: Rat) -> Tuple[Verdict, Verdict]:
    """Check the two bilateral Lambert expansions of Kprime and Kprimeprime."""
    order = _fr(order)
    kp = eulerian_sum(EulerianSpec("Kprime", omega=omega), order)
    v1 = series_eq_to_order(
        series_mul(kp, geom_inverse(omega, order)),
        bilateral_even(omega, order),
        order,
    )
    kpp = eulerian_sum(EulerianSpec("Kprimeprime", omega=omega), order)
    v2 = series_eq_to_order(
        series_mul(kpp, _one_minus(omega.inv(), order)),
        series_neg(bilateral_odd(omega, order)),
        order,
    )
    return v1, v2


__all__ = [
    "EulerianSpec",
    "eulerian_sum",
    "f_c",
    "h_tilde",
    "habc_sum",
    "k_tilde",
    "k_tilde_closed",
    "bilateral_pair_check",
    "bilateral_even",
    "bilateral_odd",
    "lambert_pair_check",
]
