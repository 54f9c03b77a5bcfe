"""Expression language for exact q-series work.

The surface syntax is plain infix arithmetic over rational literals, bound
symbols, and a fixed set of named functions (theta products, Appell-Lerch
sums, Eulerian series). Precedence is ^ then unary minus then * / then + -.
There is no implicit multiplication: write 2*q, not 2q. Exponents after ^
are integer literals, or parenthesized fractions when the base is a pure
power of q.

parse/print round-trip structurally; eval is bottom-up and keeps monomial
subexpressions exact for as long as possible so that function arguments
(which must be monomials) never pass through a truncated series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Tuple, Union

from .coeff import csc_pi, sin_pi, zeta_power
from .errors import EvalError, ParseError
from .eulerian import (
    EulerianSpec,
    eulerian_sum,
    h_tilde,
    habc_sum,
    k_tilde,
    k_tilde_closed,
    bilateral_even,
    bilateral_odd,
)
from .series import (
    Monomial,
    QSeries,
    from_monomial,
    series_add,
    series_div,
    series_mul,
    series_neg,
    series_pow,
    series_shift,
    series_sub,
    substitute_base,
    zero_series,
)
from .special import (
    J,
    JB,
    Jm,
    appell_m,
    g_universal,
    m_change_z_correction,
    msplit_rhs,
    pochhammer,
    rjtp_lhs,
    theta_j,
)

Rat = Union[int, Fraction]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Inf:
    pass


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]


@dataclass(frozen=True)
class Neg:
    a: "Expr"


@dataclass(frozen=True)
class Add:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Sub:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Mul:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Div:
    a: "Expr"
    b: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    expo: Fraction


Expr = Union[Lit, Sym, Inf, Call, Neg, Add, Sub, Mul, Div, Pow]


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = set("+-*/^(),;")


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch in " \t\r":
            col, i = col + 1, i + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", text[i:j], line, col))
            col, i = col + (j - i), j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], line, col))
            col, i = col + (j - i), j
            continue
        if ch in _PUNCT:
            toks.append(_Tok(ch, ch, line, col))
            col, i = col + 1, i + 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", "end of input", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_MAX_DEPTH = 100


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0
        self.depth = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}", t.line, t.col)
        return self.advance()

    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            t = self.peek()
            raise ParseError("expression nested too deeply", t.line, t.col)
        e = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        self.depth -= 1
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().kind != "^":
            return base
        self.advance()
        node = Pow(base, self.exponent())
        t = self.peek()
        if t.kind == "^":
            raise ParseError("chained '^' needs parentheses", t.line, t.col)
        return node

    def exponent(self) -> Fraction:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return Fraction(int(t.text))
        if t.kind == "-":
            self.advance()
            u = self.expect("num")
            return -Fraction(int(u.text))
        if t.kind == "(":
            self.advance()
            sign = 1
            if self.peek().kind == "-":
                self.advance()
                sign = -1
            num = int(self.expect("num").text)
            den = 1
            if self.peek().kind == "/":
                slash = self.advance()
                den = int(self.expect("num").text)
                if den == 0:
                    raise ParseError("zero denominator in exponent", slash.line, slash.col)
            self.expect(")")
            return Fraction(sign * num, den)
        raise ParseError("expected an integer or (p/q) fraction after '^'", t.line, t.col)

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return Lit(Fraction(int(t.text)))
        if t.kind == "name":
            self.advance()
            if self.peek().kind == "(":
                return self.call(t)
            if t.text == "inf":
                return Inf()
            return Sym(t.text)
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.line, t.col)
        raise ParseError(f"unexpected {t.text!r}", t.line, t.col)

    def call(self, name: _Tok) -> Expr:
        if name.text not in FUNCTIONS:
            raise ParseError(f"unknown function {name.text!r}", name.line, name.col)
        self.expect("(")
        args: List[Expr] = []
        if self.peek().kind != ")":
            args.append(self.expr())
            while self.peek().kind in (",", ";"):
                self.advance()
                args.append(self.expr())
        self.expect(")")
        arities = sorted(FUNCTIONS[name.text])
        if len(args) not in arities:
            want = " or ".join(str(a) for a in arities)
            raise ParseError(
                f"{name.text} takes {want} argument(s), got {len(args)}",
                name.line,
                name.col,
            )
        return Call(name.text, tuple(args))


def parse(text: str) -> Expr:
    """Parse a source string into an Expr, or raise ParseError with position."""
    p = _Parser(_tokenize(text))
    e = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected trailing {t.text!r}", t.line, t.col)
    return e


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def _fmt_expo(v: Fraction) -> str:
    if v.denominator == 1 and v >= 0:
        return str(v.numerator)
    if v.denominator == 1:
        return f"({v.numerator})"
    return f"({v.numerator}/{v.denominator})"


def _render(e: Expr, level: int) -> str:
    s, p = _render_raw(e)
    return f"({s})" if p < level else s


def _render_raw(e: Expr) -> Tuple[str, int]:
    if isinstance(e, Lit):
        return str(e.value.numerator), 5
    if isinstance(e, Sym):
        return e.name, 5
    if isinstance(e, Inf):
        return "inf", 5
    if isinstance(e, Call):
        return f"{e.name}({', '.join(_render(a, 1) for a in e.args)})", 5
    if isinstance(e, Add):
        return f"{_render(e.a, 1)} + {_render(e.b, 2)}", 1
    if isinstance(e, Sub):
        return f"{_render(e.a, 1)} - {_render(e.b, 2)}", 1
    if isinstance(e, Mul):
        return f"{_render(e.a, 2)}*{_render(e.b, 3)}", 2
    if isinstance(e, Div):
        return f"{_render(e.a, 2)}/{_render(e.b, 3)}", 2
    if isinstance(e, Neg):
        return f"-{_render(e.a, 4)}", 3
    if isinstance(e, Pow):
        return f"{_render(e.base, 5)}^{_fmt_expo(e.expo)}", 4
    raise TypeError(f"not an Expr: {e!r}")


def print_expr(e: Expr) -> str:
    """Canonical source form; parse(print_expr(e)) == e."""
    return _render(e, 1)


# ---------------------------------------------------------------------------
# Evaluator
# ---------------------------------------------------------------------------

Value = Union[Monomial, QSeries]


def _to_series(v: Value, order: Fraction) -> QSeries:
    return v if isinstance(v, QSeries) else from_monomial(v, order)


def _as_int(name: str, idx: int, arg: Expr) -> int:
    neg = False
    a = arg
    while isinstance(a, Neg):
        neg = not neg
        a = a.a
    if isinstance(a, Lit) and a.value.denominator == 1:
        k = int(a.value)
        return -k if neg else k
    raise EvalError(f"argument {idx} of {name} must be an integer literal")


def _as_base(name: str, idx: int, arg: Expr) -> int:
    if isinstance(arg, Sym) and arg.name == "q":
        return 1
    if isinstance(arg, Pow) and isinstance(arg.base, Sym) and arg.base.name == "q":
        e = arg.expo
        if e.denominator == 1 and e > 0:
            return int(e)
    raise EvalError(f"argument {idx} of {name} must be q or q^p with p a positive integer")


def _ev(e: Expr, order: Fraction, binding: Dict[str, Monomial]) -> Value:
    if isinstance(e, Lit):
        if e.value == 0:
            return zero_series(order)
        return Monomial.make(e.value, 0)
    if isinstance(e, Sym):
        if e.name == "q":
            return Monomial.make(1, 1)
        if e.name in binding:
            return binding[e.name]
        raise EvalError(f"unbound symbol {e.name!r}")
    if isinstance(e, Inf):
        raise EvalError("'inf' is only valid as the last argument of poch")
    if isinstance(e, Neg):
        v = _ev(e.a, order, binding)
        return -v if isinstance(v, Monomial) else series_neg(v)
    if isinstance(e, Add):
        return series_add(
            _to_series(_ev(e.a, order, binding), order),
            _to_series(_ev(e.b, order, binding), order),
        )
    if isinstance(e, Sub):
        return series_sub(
            _to_series(_ev(e.a, order, binding), order),
            _to_series(_ev(e.b, order, binding), order),
        )
    if isinstance(e, Mul):
        va = _ev(e.a, order, binding)
        vb = _ev(e.b, order, binding)
        if isinstance(va, Monomial) and isinstance(vb, Monomial):
            return va * vb
        if isinstance(va, Monomial):
            return series_shift(vb, va)
        if isinstance(vb, Monomial):
            return series_shift(va, vb)
        return series_mul(va, vb)
    if isinstance(e, Div):
        va = _ev(e.a, order, binding)
        vb = _ev(e.b, order, binding)
        if isinstance(vb, Monomial):
            inv = vb.inv()
            if isinstance(va, Monomial):
                return va * inv
            return series_shift(va, inv)
        return series_div(_to_series(va, order), vb)
    if isinstance(e, Pow):
        v = _ev(e.base, order, binding)
        if e.expo.denominator == 1:
            k = int(e.expo)
            if isinstance(v, Monomial):
                return v**k if k >= 0 else v.inv() ** (-k)
            return series_pow(v, k)
        if isinstance(v, Monomial) and v.is_q_power():
            return Monomial.make(1, v.expo * e.expo)
        raise EvalError("a fractional exponent requires a pure power of q as base")
    if isinstance(e, Call):
        return _call(e, order, binding)
    raise TypeError(f"not an Expr: {e!r}")


def _call(e: Call, order: Fraction, binding: Dict[str, Monomial]) -> Value:
    kinds, fn = FUNCTIONS[e.name][len(e.args)]
    vals: List[object] = []
    for idx, (kind, arg) in enumerate(zip(kinds, e.args), 1):
        if kind == "x":
            v = _ev(arg, order, binding)
            if not isinstance(v, Monomial):
                raise EvalError(f"argument {idx} of {e.name} must reduce to a monomial")
            vals.append(v)
        elif kind == "p":
            vals.append(_as_base(e.name, idx, arg))
        elif kind == "i":
            vals.append(_as_int(e.name, idx, arg))
        elif kind == "n":
            if isinstance(arg, Inf):
                vals.append(None)
            else:
                k = _as_int(e.name, idx, arg)
                if k < 0:
                    raise EvalError(f"argument {idx} of {e.name} must be nonnegative or inf")
                vals.append(k)
        else:  # pragma: no cover
            raise AssertionError(kind)
    try:
        return fn(vals, order)
    except ValueError as exc:
        raise EvalError(f"{e.name}: {exc}") from exc


def eval_expr(
    e: Expr, order: Rat, binding: Optional[Dict[str, Monomial]] = None
) -> QSeries:
    """Evaluate to a truncated series with every exponent below order covered."""
    o = Fraction(order)
    return _to_series(_ev(e, o, dict(binding or {})), o)


def fold_monomial(e: Expr) -> Monomial:
    """Reduce a closed expression to an exact monomial, or raise EvalError."""
    v = _ev(e, Fraction(1), {})
    if isinstance(v, Monomial):
        return v
    raise EvalError("expression does not reduce to a monomial")


def parse_binding(text: str) -> Tuple[str, Monomial]:
    """Parse 'name=<monomial expression>' as used by bind: lines and --bind."""
    name, eq, val = text.partition("=")
    name = name.strip()
    if not eq:
        raise EvalError(f"binding {text!r} must look like name=monomial")
    if not name.isidentifier():
        raise EvalError(f"invalid symbol name {name!r}")
    if name in ("q", "inf"):
        raise EvalError(f"cannot bind reserved name {name!r}")
    return name, fold_monomial(parse(val))


# ---------------------------------------------------------------------------
# Function registry
# ---------------------------------------------------------------------------


def _lcm4(c: int) -> int:
    return 4 * (2 * c) // gcd(4, 2 * c)


def _trig(fn: Callable, v: List[object]) -> Monomial:
    a, c = v
    if not 0 < a < c:
        raise EvalError("need 0 < a < c")
    return Monomial(fn(a, c, _lcm4(c)), Fraction(0))


def _zeta(v: List[object], order: Fraction) -> Monomial:
    M, k = v
    if M < 1:
        raise EvalError("zeta(M, k) needs M >= 1")
    return Monomial(zeta_power(M, k), Fraction(0))


def _eul(name: str):
    def run(v: List[object], order: Fraction) -> QSeries:
        p = v[0] if v else 1
        s = eulerian_sum(EulerianSpec(name), order / p)
        return substitute_base(s, p) if p != 1 else s

    return run


def _g(route: str):
    def run(v: List[object], order: Fraction) -> QSeries:
        p = v[1] if len(v) > 1 else 1
        return g_universal(v[0], p, order, route)

    return run


def _htilde(route: str):
    def run(v: List[object], order: Fraction) -> QSeries:
        return h_tilde(v[0], v[1], order, route)

    return run


def _both(kinds: Tuple[str, ...], fn) -> Dict[int, Tuple[Tuple[str, ...], Callable]]:
    return {len(kinds): (kinds, fn)}


FUNCTIONS: Dict[str, Dict[int, Tuple[Tuple[str, ...], Callable]]] = {
    "j": _both(("x", "p"), lambda v, o: theta_j(v[0], v[1], o)),
    "J": _both(("i", "i"), lambda v, o: J(v[0], v[1], o)),
    "JB": _both(("i", "i"), lambda v, o: JB(v[0], v[1], o)),
    "Jm": _both(("i",), lambda v, o: Jm(v[0], o)),
    "poch": _both(("x", "p", "n"), lambda v, o: pochhammer(v[0], v[1], v[2], o)),
    "m": _both(("x", "p", "x"), lambda v, o: appell_m(v[0], v[1], v[2], o)),
    "mcorr": _both(
        ("x", "p", "x", "x"),
        lambda v, o: m_change_z_correction(v[0], v[2], v[3], v[1], o),
    ),
    "msplit": _both(
        ("x", "p", "x", "x", "i"),
        lambda v, o: msplit_rhs(v[0], v[1], v[2], v[3], v[4], o),
    ),
    "g": {1: (("x",), _g("lambert")), 2: (("x", "p"), _g("lambert"))},
    "g_sum": {1: (("x",), _g("eulerian")), 2: (("x", "p"), _g("eulerian"))},
    "g_appell": {1: (("x",), _g("appell")), 2: (("x", "p"), _g("appell"))},
    "phi": {0: ((), _eul("phi6")), 1: (("p",), _eul("phi6"))},
    "sigma": {0: ((), _eul("sigma6")), 1: (("p",), _eul("sigma6"))},
    "f3": {0: ((), _eul("f3")), 1: (("p",), _eul("f3"))},
    "f0": {0: ((), _eul("f0_5")), 1: (("p",), _eul("f0_5"))},
    "Kp": _both(
        ("x",), lambda v, o: eulerian_sum(EulerianSpec("Kprime", omega=v[0]), o)
    ),
    "Kpp": _both(
        ("x",), lambda v, o: eulerian_sum(EulerianSpec("Kprimeprime", omega=v[0]), o)
    ),
    "Hp": _both(
        ("i", "i", "x"),
        lambda v, o: eulerian_sum(
            EulerianSpec("Hprime", a=v[0], c=v[1], omega=v[2]), o
        ),
    ),
    "Ktilde": _both(("i", "i"), lambda v, o: k_tilde(v[0], v[1], o)),
    "Ktilde_closed": _both(("i", "i"), lambda v, o: k_tilde_closed(v[0], v[1], o)),
    "Htilde": _both(("i", "i"), _htilde("eulerian")),
    "Htilde_closed": _both(("i", "i"), _htilde("closed")),
    "Htilde_bilateral": _both(("i", "i"), _htilde("bilateral")),
    "Habc": _both(("i", "i", "i"), lambda v, o: habc_sum(v[0], v[1], v[2], o)),
    "sinpi": _both(("i", "i"), lambda v, o: _trig(sin_pi, v)),
    "cscpi": _both(("i", "i"), lambda v, o: _trig(csc_pi, v)),
    "zeta": _both(("i", "i"), _zeta),
    "bilateral_even": _both(("x",), lambda v, o: bilateral_even(v[0], o)),
    "bilateral_odd": _both(("x",), lambda v, o: bilateral_odd(v[0], o)),
    "lambert_even": _both(
        ("x",), lambda v, o: eulerian_sum(EulerianSpec("lambert_even_lhs", x=v[0]), o)
    ),
    "lambert_odd": _both(
        ("x",), lambda v, o: eulerian_sum(EulerianSpec("lambert_odd_lhs", x=v[0]), o)
    ),
    "rjtp": {
        1: (("x",), lambda v, o: rjtp_lhs(v[0], o)),
        2: (("x", "p"), lambda v, o: rjtp_lhs(v[0], o, v[1])),
    },
}

FUNCTION_NAMES = tuple(sorted(FUNCTIONS))
