"""Classical building blocks: Pochhammer products, the theta function j,
its J specializations, the Appell-Lerch sum m(x,q,z), the universal mock
theta function g, and the n-way Appell-Lerch splitting identity.

All arguments x, z, z' are Monomials c*q^e; the base is a positive
rational p standing for q^p.  Every function takes a target order and
returns a QSeries whose guaranteed precision reaches that order
(composite constructions re-run themselves deeper when internal division
or shifting costs precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional, Union

from .coeff import cyclo_embed, lift_order
from .errors import CapExceededError, NonGenericError
from .series import (
    Monomial,
    QSeries,
    bilateral_sum,
    const_series,
    from_monomial,
    geom_inverse,
    grid_prec,
    q_power,
    series_add,
    series_invert,
    series_mul,
    series_neg,
    series_scale,
    series_shift,
    series_sub,
    series_truncate,
    zero_series,
)

Rat = Union[int, Fraction]


def _fr(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _binom2(n: int) -> int:
    return n * (n - 1) // 2


def ensure_prec(build: Callable[[Fraction], QSeries], order: Rat, attempts: int = 4) -> QSeries:
    """Run a construction, deepening the working order until the result's
    guaranteed precision covers the request.

    Precision deficits come from fixed negative valuations (division,
    Laurent shifts), so they are independent of the working order and one
    retry normally suffices.
    """
    order = _fr(order)
    work = order
    for _ in range(attempts):
        s = build(work)
        if s.prec_order() >= order:
            return s
        work = work + (order - s.prec_order())
    raise CapExceededError(
        f"could not reach precision {order} in {attempts} attempts (got {s.prec_order()})"
    )


def iteration_cap(order: Rat) -> int:
    return 10 * (int(_fr(order)) + 10)


# ---------------------------------------------------------------------------
# Pochhammer products
# ---------------------------------------------------------------------------


def pochhammer(x: Monomial, p: Rat, n: Optional[int], order: Rat) -> QSeries:
    """(x; q^p)_n, with n = None meaning the infinite product.

    A vanishing factor (x*q^(kp) exactly 1) makes the whole product the
    zero series rather than an error.
    """
    p = _fr(p)
    if p <= 0:
        raise ValueError("Pochhammer base exponent must be positive")
    order = _fr(order)
    if n is None:
        count = 0
        while x.expo + count * p < order:
            count += 1
    else:
        if n < 0:
            raise ValueError("Pochhammer length must be nonnegative")
        count = n
    # negative-exponent factors cost precision in products; pad up front
    deficit = sum(
        (max(Fraction(0), -(x.expo + k * p)) for k in range(count)), Fraction(0)
    )
    work = order + deficit
    d = x.expo.denominator * p.denominator // gcd(x.expo.denominator, p.denominator)
    acc = const_series(1, work, d).lift_field(x.field_order)
    for k in range(count):
        factor = series_sub(
            const_series(1, work, d), from_monomial(x.times_q(k * p), work)
        )
        acc = series_mul(acc, factor)
        if acc.is_zero() and acc.prec_order() >= order:
            break
    return acc


# ---------------------------------------------------------------------------
# Theta functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaSpec:
    """J_{a,m} (barred False) or JB_{a,m} (barred True); J_m is (m, 3m)."""

    a: int
    m: int
    barred: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("theta modulus must be positive")


_theta_cache: dict[tuple, QSeries] = {}


def theta_j(x: Monomial, p: Rat, order: Rat) -> QSeries:
    """j(x; q^p) by the bilateral sum over (-1)^n q^(p*binom(n,2)) x^n.

    Always well defined; vanishes identically exactly when x is a power
    q^(p*k).
    """
    p = _fr(p)
    if p <= 0:
        raise ValueError("theta base exponent must be positive")
    order = _fr(order)
    key = (x.coeff.key(), x.expo, p, order)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    c, e = x.coeff, x.expo

    def val(n: int) -> Fraction:
        return p * _binom2(n) + n * e

    def term(n: int) -> QSeries:
        coeff = c**n if n % 2 == 0 else -(c**n)
        return from_monomial(Monomial(coeff, val(n)), order)

    denom = e.denominator * p.denominator
    s = bilateral_sum(val, term, order, [Fraction(1, 2) - e / p], denom, c.order)
    _theta_cache[key] = s
    return s


def theta_is_zero(x: Monomial, p: Rat) -> bool:
    """Exact test for identical vanishing of j(x; q^p)."""
    p = _fr(p)
    return x.is_q_power() and (x.expo / p).denominator == 1


def theta_J(spec: ThetaSpec, order: Rat, p: Rat = 1) -> QSeries:
    sign = -1 if spec.barred else 1
    base = _fr(p) * spec.m
    return theta_j(Monomial.make(sign, _fr(p) * spec.a), base, order)


def J(a: int, m: int, order: Rat, p: Rat = 1) -> QSeries:
    return theta_J(ThetaSpec(a, m, False), order, p)


def JB(a: int, m: int, order: Rat, p: Rat = 1) -> QSeries:
    return theta_J(ThetaSpec(a, m, True), order, p)


def Jm(m: int, order: Rat, p: Rat = 1) -> QSeries:
    return theta_J(ThetaSpec(m, 3 * m, False), order, p)


# ---------------------------------------------------------------------------
# Appell-Lerch sums
# ---------------------------------------------------------------------------


def _check_theta_denominator(x: Monomial, p: Fraction, label: str):
    if theta_is_zero(x, p):
        raise NonGenericError(f"{label} = j({x}; q^({p})) vanishes identically")


def _appell_pole_check(x: Monomial, p: Fraction, z: Monomial):
    prod = (x * z).coeff
    if not (prod.is_rational() and prod.rational_value() == 1):
        return
    r = 1 - (x.expo + z.expo) / p
    if r.denominator == 1:
        raise NonGenericError(
            f"Appell-Lerch denominator 1 - q^((r-1)p) x z vanishes at r = {r}"
        )


def appell_m(x: Monomial, p: Rat, z: Monomial, order: Rat) -> QSeries:
    """m(x, q^p, z): the normalized bilateral Lambert-type sum.

    Raises NonGenericError when j(z; q^p) vanishes or some denominator
    factor has a pole; both conditions are decided exactly up front.
    """
    p = _fr(p)
    if p <= 0:
        raise ValueError("Appell-Lerch base exponent must be positive")
    order = _fr(order)
    key = ("m", x.coeff.key(), x.expo, p, z.coeff.key(), z.expo, order)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    _check_theta_denominator(z, p, "j(z; q^p)")
    _appell_pole_check(x, p, z)
    cz, ez = z.coeff, z.expo
    cx, ex = x.coeff, x.expo

    def build(work: Fraction) -> QSeries:
        def val(r: int) -> Fraction:
            f = p * (r - 1) + ex + ez
            return p * _binom2(r) + r * ez + max(Fraction(0), -f)

        def term(r: int) -> QSeries:
            lead = Monomial(
                (cz**r) if r % 2 == 0 else -(cz**r), p * _binom2(r) + r * ez
            )
            u = (x * z).times_q(p * (r - 1))
            geom = geom_inverse(u, work - lead.expo)
            return series_shift(geom, lead)

        hints = [Fraction(1, 2) - ez / p, 1 - (ex + ez) / p]
        denom = ez.denominator * ex.denominator * p.denominator
        s = bilateral_sum(val, term, work, hints, denom, cz.order)
        jz = theta_j(z, p, work)
        return series_mul(s, series_invert(jz))

    result = ensure_prec(build, order)
    _theta_cache[key] = result
    return result


def m_change_z_correction(
    x: Monomial, z0: Monomial, z1: Monomial, p: Rat, order: Rat
) -> QSeries:
    """The theta quotient equal to m(x,q^p,z1) - m(x,q^p,z0):

        z0 J1^3 j(z1/z0) j(x z0 z1) / (j(z0) j(z1) j(x z0) j(x z1)),

    all thetas at base q^p and J1 = (q^p; q^p)_inf.
    """
    p = _fr(p)
    order = _fr(order)
    for mono, label in (
        (z0, "j(z0; q^p)"),
        (z1, "j(z1; q^p)"),
        (x * z0, "j(x z0; q^p)"),
        (x * z1, "j(x z1; q^p)"),
    ):
        _check_theta_denominator(mono, p, label)

    def build(work: Fraction) -> QSeries:
        j1 = theta_j(Monomial.make(1, p), 3 * p, work)
        num = series_mul(
            series_mul(series_mul(j1, j1), j1),
            series_mul(theta_j(z1 * z0.inv(), p, work), theta_j(x * z0 * z1, p, work)),
        )
        num = series_shift(num, z0)
        den = series_mul(
            series_mul(theta_j(z0, p, work), theta_j(z1, p, work)),
            series_mul(theta_j(x * z0, p, work), theta_j(x * z1, p, work)),
        )
        return series_mul(num, series_invert(den))

    return ensure_prec(build, order)


# ---------------------------------------------------------------------------
# Universal mock theta function g(x, q)
# ---------------------------------------------------------------------------


def _g_pole_check(x: Monomial, p: Fraction):
    if x.is_q_power() and (x.expo / p).denominator == 1:
        raise NonGenericError(
            f"g pole: Pochhammer factor vanishes for x = {x} a power of q^({p})"
        )


def g_universal(x: Monomial, p: Rat, order: Rat, route: str = "lambert") -> QSeries:
    """g(x, q^p) by one of its three equivalent constructions.

    lambert:  sum of q^(p n(n+1)) / ((x)_{n+1} (q^p/x)_{n+1});
    eulerian: x^(-1) (-1 + sum of q^(p n^2) / ((x)_{n+1} (q^p/x)_n));
    appell:   -x^(-1) m(q^(2p) x^(-3), q^(3p), x^2)
              - x^(-2) m(q^p x^(-3), q^(3p), x^2).

    Pochhammers are at base q^p.
    """
    p = _fr(p)
    if p <= 0:
        raise ValueError("base exponent must be positive")
    order = _fr(order)
    key = ("g", route, x.coeff.key(), x.expo, p, order)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    if route in ("lambert", "eulerian"):
        _g_pole_check(x, p)
        result = ensure_prec(lambda w: _g_sum(x, p, w, route), order)
    elif route == "appell":
        result = ensure_prec(lambda w: _g_appell(x, p, w), order)
    else:
        raise ValueError(f"unknown g construction {route!r}")
    _theta_cache[key] = result
    return result


def _g_appell(x: Monomial, p: Fraction, work: Fraction) -> QSeries:
    xinv = x.inv()
    x3 = xinv**3
    z = x * x
    a = appell_m(x3.times_q(2 * p), 3 * p, z, work + x.expo)
    b = appell_m(x3.times_q(p), 3 * p, z, work + 2 * x.expo)
    return series_add(
        series_shift(series_neg(a), xinv),
        series_shift(series_neg(b), xinv * xinv),
    )


def _g_sum(x: Monomial, p: Fraction, work: Fraction, route: str) -> QSeries:
    cap = iteration_cap(work)
    denom = x.expo.denominator * p.denominator
    total = zero_series(work, denom, x.field_order)
    if route == "lambert":
        t = series_mul(
            geom_inverse(x, work), geom_inverse(x.inv().times_q(p), work)
        )
        t = series_truncate(t, work)
        n = 0
        while not t.is_zero():
            total = series_add(total, t)
            n += 1
            if n > cap:
                raise CapExceededError("g summation failed to gain valuation")
            t = series_mul(t, q_power(2 * p * n, work + 2 * p * n))
            t = series_mul(t, geom_inverse(x.times_q(p * n), work))
            t = series_mul(t, geom_inverse(x.inv().times_q(p * (n + 1)), work))
            t = series_truncate(t, work)
        return total
    # the -1 + sum form, then the x^(-1) prefactor
    t = series_truncate(geom_inverse(x, work), work)
    n = 0
    while not t.is_zero():
        total = series_add(total, t)
        n += 1
        if n > cap:
            raise CapExceededError("g summation failed to gain valuation")
        t = series_mul(t, q_power(p * (2 * n - 1), work + p * (2 * n - 1)))
        t = series_mul(t, geom_inverse(x.times_q(p * n), work))
        t = series_mul(t, geom_inverse(x.inv().times_q(p * n), work))
        t = series_truncate(t, work)
    total = series_sub(total, const_series(1, work, denom))
    return series_shift(total, x.inv())


# ---------------------------------------------------------------------------
# The n-way splitting of m(x, q, z)
# ---------------------------------------------------------------------------


def msplit_rhs(
    x: Monomial, p: Rat, z: Monomial, zp: Monomial, n: int, order: Rat
) -> QSeries:
    """Right-hand side of the n-way Appell-Lerch splitting identity:

        sum_{r=0}^{n-1} q^(-binom(r+1,2)) (-x)^r
                        m(-q^(binom(n,2)-nr) (-x)^n, q^(n^2), z')
        + (z' J_n^3 / (j(xz;q) j(z';q^(n^2)))) *
          sum_{r=0}^{n-1} q^(binom(r,2)) (-xz)^r
            j(-q^(binom(n,2)+r) (-x)^n z z'; q^n) j(q^(nr) z^n / z'; q^(n^2))
            / ( j(-q^(binom(n,2)) (-x)^n z'; q^n) j(q^r z; q^n) ),

    with every exponent scaled by the base p.  The comma-separated theta
    denominator in the source identity is read as a product of the two
    theta functions.
    """
    p = _fr(p)
    order = _fr(order)
    if n < 1:
        raise ValueError("splitting depth must be at least 1")
    neg_x = -x
    xn = neg_x**n
    bn2 = _binom2(n)
    _check_theta_denominator(x * z, p, "j(xz; q^p)")
    _check_theta_denominator(zp, p * n * n, "j(z'; q^(p n^2))")
    _check_theta_denominator(
        (-(xn * zp)).times_q(p * bn2), p * n, "j(-q^(binom(n,2)) (-x)^n z'; q^(p n))"
    )
    for r in range(n):
        _check_theta_denominator(z.times_q(p * r), p * n, f"j(q^{r} z; q^(p n))")

    def build(work: Fraction) -> QSeries:
        parts = []
        for r in range(n):
            lead = (neg_x**r).times_q(-p * _binom2(r + 1))
            inner = appell_m(
                (-(xn)).times_q(p * (bn2 - n * r)), p * n * n, zp, work - lead.expo
            )
            parts.append(series_shift(inner, lead))
        total = parts[0]
        for extra in parts[1:]:
            total = series_add(total, extra)

        jn = theta_j(Monomial.make(1, p * n), 3 * p * n, work)
        pref_num = series_shift(series_mul(series_mul(jn, jn), jn), zp)
        pref_den = series_mul(
            theta_j(x * z, p, work), theta_j(zp, p * n * n, work)
        )
        corr = zero_series(work, 1, 1)
        for r in range(n):
            lead = ((-(x * z)) ** r).times_q(p * _binom2(r))
            num = series_mul(
                theta_j((-(xn * z * zp)).times_q(p * (bn2 + r)), p * n, work),
                theta_j((z**n * zp.inv()).times_q(p * n * r), p * n * n, work),
            )
            den = series_mul(
                theta_j((-(xn * zp)).times_q(p * bn2), p * n, work),
                theta_j(z.times_q(p * r), p * n, work),
            )
            piece = series_mul(series_shift(num, lead), series_invert(den))
            corr = series_add(corr, piece)
        correction = series_mul(
            series_mul(pref_num, series_invert(pref_den)), corr
        )
        return series_add(total, correction)

    return ensure_prec(build, order)


# ---------------------------------------------------------------------------
# Reciprocal of Jacobi's theta product (bilateral Lambert sum)
# ---------------------------------------------------------------------------


def rjtp_lhs(z: Monomial, order: Rat, p: Rat = 1) -> QSeries:
    """sum over n of (-1)^n q^(p*binom(n+1,2)) / (1 - q^(pn) z)."""
    p = _fr(p)
    order = _fr(order)
    if theta_is_zero(z, p):
        raise NonGenericError(
            f"Lambert denominator 1 - q^(pn) z has a pole: z = {z} is a power of q^({p})"
        )
    cz, ez = z.coeff, z.expo

    def val(n: int) -> Fraction:
        return p * _binom2(n + 1) + max(Fraction(0), -(ez + p * n))

    def term(n: int) -> QSeries:
        lead = Monomial.make((-1) ** n, p * _binom2(n + 1))
        geom = geom_inverse(z.times_q(p * n), order - lead.expo)
        return series_shift(geom, lead)

    hints = [Fraction(-1, 2), -ez / p]
    return bilateral_sum(val, term, order, hints, ez.denominator * p.denominator, cz.order)
