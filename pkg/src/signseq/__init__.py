"""Exact sign-sequence kernel for surreal numbers and log-atomic parametrisations."""

from .ordinal import (
    NEGINF, OMEGA, ONE, ZERO, Ordinal, OrdinalError, eps_pow_omega, ord_add,
    ord_cmp, ord_eps, ord_flat, ord_mul, ord_pow_omega, parse_ordinal,
)
from .number import (
    BudgetExceeded, Number, NumberError, ZERO_NUMBER, bounded, budget, cmp,
    concat, from_ordinal, is_initial, neg, num, restrict, simplest_between,
    to_ordinal,
)
from .maps import (
    StructParams, eps, iota, kappa, mo, mo_inv, struct_params, v_of, xi_va,
    xi_va_omega,
)
from .logatomic import (
    CONVENTIONS, DEFAULT_CONVENTION, Convention, Grid, Interval, la_decompose,
    la_is_log_atomic, la_lambda, la_rebuild, la_rho, la_shift,
)
from .codec import ParseError, number_from_json, number_to_json, parse_number
from .expr import evaluate, parse_expr

__version__ = "0.1.0"
