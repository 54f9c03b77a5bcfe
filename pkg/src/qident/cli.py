"""Command line front end.

Three subcommands:

    qident expand "phi(q^2) + 2*sigma()" --order 20
    qident verify mycases.id --order 40 --jobs 4
    qident suite --order 50

expand prints one `q^(k/D): coefficient` line per term. verify and suite
print one report line per (case, binding) and a count summary; they exit 0
only when every verdict matches its expectation, so engineered failures in
a corpus (canaries, forced singularities) do not flip the exit code, while
any surprise does. Exit code 1 means a verification surprise, 2 a usage
problem (bad expression, unreadable file, malformed corpus).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .dsl import eval_expr, parse, parse_binding
from .errors import (
    EvalError,
    InsufficientPrecisionError,
    NonGenericError,
    ParseError,
)
from .eulerian import f_c
from .identity import DEFAULT_ORDER, parse_corpus, run_suite
from .series import Monomial, QSeries, series_truncate

_PAD_ATTEMPTS = 4


def _order_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an order: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("order must be positive")
    return value


def _parse_binds(pairs: List[str]) -> Dict[str, Monomial]:
    binding: Dict[str, Monomial] = {}
    for pair in pairs:
        name, mono = parse_binding(pair)
        if name in binding:
            raise EvalError(f"symbol {name!r} bound twice")
        binding[name] = mono
    return binding


def _expand_series(source: str, order: Fraction, binding: Dict[str, Monomial]) -> QSeries:
    expr = parse(source)
    work = order
    for _ in range(_PAD_ATTEMPTS):
        try:
            return series_truncate(eval_expr(expr, work, binding), order)
        except InsufficientPrecisionError as exc:
            work += exc.deficit + 1
    raise EvalError(f"cannot reach precision q^({order}) for {source!r}")


def _field_name(order: int) -> str:
    return "Q" if order == 1 else f"Q(zeta_{order})"


def _cmd_expand(args: argparse.Namespace) -> int:
    binding = _parse_binds(args.bind)
    s = _expand_series(args.expr, args.order, binding)
    print(f"# terms below q^({s.prec_order()}), grid 1/{s.denom}, coefficients in {_field_name(s.field_order)}")
    for k, c in s.sorted_terms():
        print(f"q^({k}/{s.denom}): {c}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        cases = parse_corpus(fh.read())
    report = run_suite(order=args.order, jobs=args.jobs, cases=cases)
    print(report.render())
    return 0 if report.ok() else 1


def _cmd_suite(args: argparse.Namespace) -> int:
    print("# metadata: level constant f_c = 2c/gcd(c,4): "
          + " ".join(f"f_{c}={f_c(c)}" for c in (2, 3, 4, 5)))
    report = run_suite(order=args.order, jobs=args.jobs)
    print(report.render())
    return 0 if report.ok() else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qident", description="exact q-series identity checker"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print the truncated expansion of an expression")
    p.add_argument("expr", help="expression to expand")
    p.add_argument("--order", type=_order_arg, default=DEFAULT_ORDER,
                   help="exponent bound (integer or fraction, default %(default)s)")
    p.add_argument("--bind", action="append", default=[], metavar="SYM=MONO",
                   help="bind a free symbol to a monomial; repeatable")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("verify", help="check every identity in a corpus file")
    p.add_argument("corpus", help="path to a corpus file")
    p.add_argument("--order", type=_order_arg, default=None,
                   help="override every case's order")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("suite", help="check the built-in identity corpus")
    p.add_argument("--order", type=_order_arg, default=None,
                   help="override every case's order")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=_cmd_suite)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, EvalError, NonGenericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
