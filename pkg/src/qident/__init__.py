"""qident: exact verification of q-series identities.

Truncated Puiseux series with cyclotomic-field coefficients, classical
theta and Appell-Lerch building blocks, Eulerian (q-hypergeometric) sums,
and a small expression language for stating and checking identities
coefficient by coefficient.
"""

from .coeff import (
    CycloNumber,
    cyclo_add,
    cyclo_embed,
    cyclo_inv,
    cyclo_mul,
    cyclo_neg,
    csc_pi,
    lift_order,
    sin_pi,
    zeta_power,
)
from .dsl import eval_expr, fold_monomial, parse, parse_binding, print_expr
from .errors import (
    CapExceededError,
    EvalError,
    InsufficientPrecisionError,
    NonGenericError,
    OrderMismatchError,
    ParseError,
    QIdentError,
)
from .eulerian import EulerianSpec, eulerian_sum, f_c, h_tilde, k_tilde, k_tilde_closed
from .identity import (
    IdentityCase,
    SuiteReport,
    builtin_cases,
    builtin_corpus_text,
    check,
    make_case,
    parse_corpus,
    run_suite,
    serialize_corpus,
)
from .series import (
    Monomial,
    QSeries,
    bilateral_sum,
    from_monomial,
    geom_inverse,
    series_add,
    series_div,
    series_eq_to_order,
    series_invert,
    series_mul,
    series_neg,
    series_pow,
    series_scale,
    series_shift,
    series_sub,
    series_truncate,
    substitute_base,
)
from .special import J, JB, Jm, appell_m, g_universal, msplit_rhs, pochhammer, theta_j
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "CycloNumber",
    "cyclo_add",
    "cyclo_embed",
    "cyclo_inv",
    "cyclo_mul",
    "cyclo_neg",
    "csc_pi",
    "lift_order",
    "sin_pi",
    "zeta_power",
    "QIdentError",
    "OrderMismatchError",
    "NonGenericError",
    "InsufficientPrecisionError",
    "CapExceededError",
    "ParseError",
    "EvalError",
    "Monomial",
    "QSeries",
    "bilateral_sum",
    "from_monomial",
    "geom_inverse",
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
    "series_truncate",
    "substitute_base",
    "J",
    "JB",
    "Jm",
    "appell_m",
    "g_universal",
    "msplit_rhs",
    "pochhammer",
    "theta_j",
    "EulerianSpec",
    "eulerian_sum",
    "f_c",
    "h_tilde",
    "k_tilde",
    "k_tilde_closed",
    "parse",
    "print_expr",
    "eval_expr",
    "fold_monomial",
    "parse_binding",
    "IdentityCase",
    "SuiteReport",
    "builtin_cases",
    "builtin_corpus_text",
    "check",
    "make_case",
    "parse_corpus",
    "run_suite",
    "serialize_corpus",
    "Verdict",
]
