"""Numerical special functions used by the limit formulas.

All functions take an optional ``prec`` (significand bits, default 64) and
return mpmath reals rounded to that precision.  Work is done in private
per-precision contexts with guard bits.
"""

from .barnes import barnes_g, barnes_zeta2_at0, double_sine, t1, t2
from .elementary import (
    bernoulli1,
    bernoulli2,
    bernoulli_poly,
    digamma,
    dilog,
    hurwitz_zeta,
    hurwitz_zeta0,
    lerch_log_gamma,
)
from .integrals import f_cap, f_inner
from .precision import DEFAULT_PREC, context, to_real, work_context
from .quadrature import QuadratureError, exp_sinh, tanh_sinh

__all__ = [
    "DEFAULT_PREC",
    "QuadratureError",
    "barnes_g",
    "barnes_zeta2_at0",
    "bernoulli1",
    "bernoulli2",
    "bernoulli_poly",
    "context",
    "digamma",
    "dilog",
    "double_sine",
    "exp_sinh",
    "f_cap",
    "f_inner",
    "hurwitz_zeta",
    "hurwitz_zeta0",
    "lerch_log_gamma",
    "t1",
    "t2",
    "tanh_sinh",
    "to_real",
    "work_context",
]
