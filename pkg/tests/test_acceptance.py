"""End-to-end acceptance run.

One test per headline criterion. Every comparison is exact (tolerance
zero): a verdict is pass only when all coefficients agree on the nose up
to the stated order. Each test registers a criterion line that the
conftest hook prints after the run, so the terminal output carries one
pass/fail line per criterion.
"""

import random
from contextlib import contextmanager
from fractions import Fraction as F
from math import lcm
from typing import List

import pytest

from qident.coeff import CycloNumber, cyclo_embed, one as cyclo_one, zeta_power
from qident.dsl import Add, Call, Div, Inf, Lit, Mul, Neg, Pow, Sub, Sym, parse, print_expr
from qident.errors import NonGenericError
from qident.eulerian import h_tilde, k_tilde, k_tilde_closed
from qident.identity import builtin_cases, check, make_case, run_suite
from qident.series import (
    Monomial,
    QSeries,
    const_series,
    from_monomial,
    geom_inverse,
    series_add,
    series_eq_to_order,
    series_invert,
    series_mul,
    series_sub,
)

CRITERION_LINES: List[str] = []


@contextmanager
def criterion(num, blurb):
    try:
        yield
    except BaseException:
        CRITERION_LINES.append(f"criterion {num}: FAIL - {blurb}")
        raise
    CRITERION_LINES.append(f"criterion {num}: PASS - {blurb}")


@pytest.fixture(scope="module")
def report():
    """One full run of the built-in corpus at its stated orders."""
    return run_suite(jobs=4)


@pytest.fixture(scope="module")
def by_id():
    return {c.id: c for c in builtin_cases()}


def records(report, cid):
    out = [r for r in report.records if r.case_id == cid]
    assert out, f"no records for {cid}"
    return out


def assert_all_pass(report, cid, min_bindings=1):
    rs = records(report, cid)
    assert len(rs) >= min_bindings, f"{cid}: only {len(rs)} bindings"
    for r in rs:
        assert r.status == "pass", f"{cid} [{r.binding}]: {r.detail}"


def binding_values(case, symbol):
    out = set()
    for src in case.binding_sources:
        depth, start, parts = 0, 0, []
        for i, ch in enumerate(src):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(src[start:i])
                start = i + 1
        parts.append(src[start:])
        for part in parts:
            name, _, value = part.partition("=")
            if name.strip() == symbol:
                out.add(value.strip())
    return out


ROOTS = {"-1", "zeta(3,1)", "zeta(4,1)", "zeta(5,1)"}


def test_criterion_1_functional_equations(report, by_id):
    with criterion(1, "three Appell-Lerch functional equations, >=5 bindings each, order 40, exact"):
        for cid in ("m-shift-z", "m-shift-x", "m-change-z"):
            assert by_id[cid].default_order == F(40)
            assert_all_pass(report, cid, min_bindings=5)


def test_criterion_2_splitting(report, by_id):
    with criterion(2, "m splits into n^2 pieces for n=1,2,3 at >=5 samples each, order 40, exact"):
        for cid in ("m-split-1", "m-split-2", "m-split-3"):
            assert by_id[cid].default_order == F(40)
            assert_all_pass(report, cid, min_bindings=5)
        # the n=2 specialization used by the bilateral-sum reduction:
        # generic at the odd-order roots, a rejection case at w = -1
        assert binding_values(by_id["m-split-regroup"], "w") == ROOTS - {"-1"}
        assert_all_pass(report, "m-split-regroup", min_bindings=3)
        assert records(report, "m-split-regroup-pole")[0].status == "nongeneric"


def test_criterion_3_tilde_theorem(report, by_id):
    with criterion(3, "K-tilde and H-tilde equal their theta quotients at six (a,c), order 40, exact"):
        pairs = ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5))
        for a, c in pairs:
            for prefix in ("ktilde-new", "htilde-new"):
                cid = f"{prefix}-{a}-{c}"
                assert by_id[cid].default_order == F(40)
                assert_all_pass(report, cid)
        for a, c in ((1, 2), (1, 4), (3, 4)):
            assert_all_pass(report, f"htilde-even-{a}-{c}")
        # every expansion lives on the advertised exponent grid
        for a, c in pairs:
            bound = lcm(8, c * c, 2 * c)
            for s in (k_tilde(a, c, 5), k_tilde_closed(a, c, 5),
                      h_tilde(a, c, 5), h_tilde(a, c, 5, route="closed")):
                assert bound % s.denom == 0, (a, c, s.denom)


def test_criterion_4_bilateral_scaffolding(report, by_id):
    with criterion(4, "bilateral Lambert identities, K'/K'' forms, reduction chain, H(a,b,c), order 40, exact"):
        for cid in ("bilateral-even", "bilateral-odd", "kprime-form",
                    "kprimeprime-form", "chain-square-product", "chain-end"):
            assert binding_values(by_id[cid], "w") == ROOTS
            assert_all_pass(report, cid, min_bindings=4)
        for cid in ("chain-regroup", "chain-change-z", "chain-split",
                    "chain-collapse", "chain-regroup-quotients", "chain-dissect"):
            assert binding_values(by_id[cid], "w") == ROOTS - {"-1"}
            assert_all_pass(report, cid, min_bindings=3)
        # the omitted sample point is a genuine singularity, not a skip
        assert records(report, "chain-regroup-pole")[0].status == "nongeneric"
        for suffix in ("1-0-2", "1-1-2", "1-1-3", "2-1-5", "3-2-7"):
            assert_all_pass(report, f"habc-lambert-{suffix}")


def test_criterion_5_classical_corpus(report, by_id):
    with criterion(5, "classical mock theta identities, order 40 (60 for the modulus-30 expansion), exact"):
        for cid in ("sixth-order-sum", "lambert-even", "lambert-odd",
                    "third-order-f", "g-displays-agree", "fifth-order-conjecture"):
            assert by_id[cid].default_order == F(40)
            assert_all_pass(report, cid)
        for cid in ("mock-f0-expansion", "mock-f0-regroup"):
            assert by_id[cid].default_order == F(60)
            assert_all_pass(report, cid)


def test_criterion_6_theta_suite(report, by_id):
    with criterion(6, "theta evaluations, shifts, refinements, dissection, two-product, order 40, exact"):
        for cid in ("theta-eval-1a", "theta-eval-1b", "theta-eval-2",
                    "theta-eval-3", "theta-eval-4", "theta-eval-5"):
            assert_all_pass(report, cid)
        for cid in ("theta-shift-up1", "theta-shift-up2", "theta-shift-down1",
                    "theta-shift-down2", "theta-reflect", "theta-invert",
                    "theta-refine", "theta-dissect", "theta-square",
                    "theta-two-product", "reciprocal-theta-sum"):
            assert by_id[cid].default_order == F(40)
            assert_all_pass(report, cid, min_bindings=3)


def test_criterion_7_oracle_equivalences(report, by_id):
    with criterion(7, "sum-vs-product, Lambert-vs-Appell-Lerch, Eulerian-vs-m equivalences, order 40, exact"):
        for cid in ("triple-product", "g-appell-agrees", "phi-as-appell", "sigma-as-appell"):
            assert by_id[cid].default_order == F(40)
            assert_all_pass(report, cid)


def test_criterion_8_negative_controls(report, by_id):
    with criterion(8, "canary fails at its engineered exponent; forced poles reject, never wrongly pass"):
        v = check(by_id["canary"])
        assert v.status == "fail" and v.first_bad_exponent == F(0)
        late = make_case("late", "J(1,2)", "J(1,2) + q^30", order=40)
        v = check(late)
        assert v.status == "fail" and v.first_bad_exponent == F(30)
        for cid in ("rjtp-pole", "bilateral-even-pole", "g-appell-pole",
                    "chain-regroup-pole", "m-split-regroup-pole"):
            for r in records(report, cid):
                assert r.status == "nongeneric", f"{cid}: {r.status}"


# --- criterion 9: randomized engine properties -------------------------------


def _random_cyclo(rng, m) -> CycloNumber:
    out = cyclo_embed(F(rng.randint(-3, 3)), m)
    for _ in range(rng.randint(0, 2)):
        out = out + cyclo_embed(F(rng.randint(-2, 2)), m) * zeta_power(m, rng.randrange(m))
    return out


def _nonzero_cyclo(rng, m) -> CycloNumber:
    out = _random_cyclo(rng, m)
    while out.is_zero():
        out = _random_cyclo(rng, m)
    return out


def _random_series(rng) -> QSeries:
    m = rng.choice((1, 3, 4))
    d = rng.choice((1, 2, 3))
    prec = rng.randint(6, 10) * d
    terms = {}
    for _ in range(rng.randint(0, 6)):
        terms[rng.randint(-6, prec - 1)] = _random_cyclo(rng, m)
    return QSeries(d, prec, terms, m)


def _same(a: QSeries, b: QSeries):
    order = min(a.prec_order(), b.prec_order())
    v = series_eq_to_order(a, b, order)
    assert v.status == "pass", v.detail()


def _ring_axioms(rng):
    a, b, c = _random_series(rng), _random_series(rng), _random_series(rng)
    _same(series_add(series_add(a, b), c), series_add(a, series_add(b, c)))
    _same(series_add(a, b), series_add(b, a))
    _same(series_mul(a, b), series_mul(b, a))
    _same(series_mul(series_mul(a, b), c), series_mul(a, series_mul(b, c)))
    _same(series_mul(a, series_add(b, c)), series_add(series_mul(a, b), series_mul(a, c)))
    one = const_series(cyclo_one(a.field_order), a.prec_order())
    _same(series_mul(a, one), a)
    _same(series_add(a, series_sub(b, b)), a)


def _inverse_law(rng):
    a = _random_series(rng)
    lead = rng.randint(-3, 3)
    coeff = _nonzero_cyclo(rng, a.field_order)
    # pin a nonzero leading term so the unit precondition holds
    low = min(a.terms, default=0)
    terms = dict(a.terms)
    terms[min(low, lead * a.denom) - 1] = coeff
    a = QSeries(a.denom, a.prec, terms, a.field_order)
    prod = series_mul(a, series_invert(a))
    one = const_series(cyclo_one(prod.field_order), prod.prec_order())
    _same(prod, one)


def _geom_three_cases(rng):
    m = rng.choice((1, 3, 4))
    kind = rng.randrange(4)
    order = F(8)
    if kind == 0:
        u = Monomial(_nonzero_cyclo(rng, m), F(rng.randint(1, 4), rng.randint(1, 3)))
    elif kind == 1:
        coeff = _nonzero_cyclo(rng, m)
        while coeff == cyclo_one(m):
            coeff = _nonzero_cyclo(rng, m)
        u = Monomial(coeff, F(0))
    elif kind == 2:
        u = Monomial(_nonzero_cyclo(rng, m), F(-rng.randint(1, 4), rng.randint(1, 3)))
    else:
        with pytest.raises(NonGenericError):
            geom_inverse(Monomial(cyclo_one(m), F(0)), order)
        return
    g = geom_inverse(u, order)
    margin = order + abs(u.expo) + 1
    one_minus = series_sub(const_series(cyclo_one(m), margin), from_monomial(u, margin))
    _same(series_mul(one_minus, g), const_series(cyclo_one(g.field_order), order))
    if kind == 0:
        assert g.coeff_at(F(0)) == cyclo_one(g.field_order)
    elif kind == 1:
        assert g.valuation() == F(0) and g.coeff_at(F(0)) == (cyclo_one(m) - u.coeff).inv()
    else:
        assert g.valuation() == -u.expo


_NAMES = ("x", "w", "z", "q")
_CALLS = (("J", 2), ("Jm", 1), ("m", 3), ("zeta", 2), ("poch", 3))


def _random_expr(rng, depth):
    if depth <= 0 or rng.random() < 0.3:
        pick = rng.randrange(3)
        if pick == 0:
            return Lit(F(rng.randint(0, 9)))
        if pick == 1:
            return Sym(rng.choice(_NAMES))
        return Pow(Sym("q"), F(rng.randint(-6, 6), rng.randint(1, 4)))
    k = rng.randrange(7)
    if k < 4:
        ctor = (Add, Sub, Mul, Div)[k]
        return ctor(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))
    if k == 4:
        return Neg(_random_expr(rng, depth - 1))
    if k == 5:
        return Pow(_random_expr(rng, depth - 1), F(rng.randint(-5, 5), rng.randint(1, 3)))
    name, arity = rng.choice(_CALLS)
    args = tuple(_random_expr(rng, depth - 1) for _ in range(arity))
    if name == "poch":
        args = args[:2] + (Inf(),)
    return Call(name, args)


def _round_trip(rng):
    e = _random_expr(rng, rng.randint(1, 4))
    assert parse(print_expr(e)) == e


def test_criterion_9_engine_properties():
    with criterion(9, "ring axioms, inverse law, geometric inverse cases, parser round-trip, >=100 samples each"):
        rng = random.Random(20260815)
        for law in (_ring_axioms, _inverse_law, _geom_three_cases, _round_trip):
            for _ in range(120):
                law(rng)
