"""One-variable special functions on the positive real axis.

digamma, log-gamma and Hurwitz zeta share the same scheme: shift the
argument upward with the exact recurrence, then sum the Bernoulli
asymptotic (Euler-Maclaurin) series.  dilog uses the power series on
[-1/2, 1/2] and the reflection/Landen identities elsewhere on [-1, 1].
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .precision import bernoulli_numbers, to_output, to_real, work_context

__all__ = [
    "bernoulli1",
    "bernoulli2",
    "bernoulli_poly",
    "digamma",
    "dilog",
    "hurwitz_zeta",
    "hurwitz_zeta0",
    "lerch_log_gamma",
]


def _const(x, q: Fraction):
    if isinstance(x, (int, Fraction)) or hasattr(x, "to_mpf"):
        return q
    if hasattr(x, "context"):
        return x.context.mpf(q.numerator) / q.denominator
    return float(q)


def bernoulli1(x):
    """B_1(x) = x - 1/2 (exact on rationals and surds)."""
    return x - _const(x, Fraction(1, 2))


def bernoulli2(x):
    """B_2(x) = x^2 - x + 1/6 (exact on rationals and surds)."""
    return x * x - x + _const(x, Fraction(1, 6))


def bernoulli_poly(n: int, x):
    """B_n(x) = sum_k C(n, k) B_k x^(n-k); exact when x is rational."""
    B = bernoulli_numbers(n)
    return sum(math.comb(n, k) * B[k] * x ** (n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def _b2k(ctx, count: int):
    """Numeric B_{2k} for k = 1..count in ``ctx``."""
    B = bernoulli_numbers(2 * count)
    return tuple(ctx.mpf(B[2 * k].numerator) / B[2 * k].denominator for k in range(1, count + 1))


def _shift_target(prec: int) -> int:
    # the asymptotic series reaches 2^-prec once x > prec*log(2)/(2 pi)
    return int(0.12 * prec) + 4


def _positive(ctx, x, name):
    x = to_real(ctx, x)
    if not x > 0:
        raise ValueError(f"{name}: argument must be > 0, got {x}")
    return x


def digamma(x, prec: int | None = None):
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0."""
    ctx = work_context(prec)
    x = _positive(ctx, x, "digamma")
    acc = ctx.zero
    X = _shift_target(ctx.prec)
    while x < X:
        acc -= 1 / x
        x += 1
    eps = ctx.eps
    x2 = x * x
    s = ctx.log(x) - 1 / (2 * x)
    p = x2
    for k, b in enumerate(_b2k(ctx, 60), start=1):
        term = b / (2 * k * p)
        s -= term
        if abs(term) < eps * abs(s):
            break
        p *= x2
    return to_output(s + acc, prec)


def lerch_log_gamma(x, prec: int | None = None):
    """log Gamma(x) - log(2 pi)/2, the derivative at s=0 of the Hurwitz zeta."""
    ctx = work_context(prec)
    x = _positive(ctx, x, "lerch_log_gamma")
    acc = ctx.zero
    X = _shift_target(ctx.prec)
    while x < X:
        acc -= ctx.log(x)
        x += 1
    eps = ctx.eps
    x2 = x * x
    s = (x - 0.5) * ctx.log(x) - x
    p = x
    for k, b in enumerate(_b2k(ctx, 60), start=1):
        term = b / (2 * k * (2 * k - 1) * p)
        s += term
        if abs(term) < eps * abs(s):
            break
        p *= x2
    return to_output(s + acc, prec)


def hurwitz_zeta0(x) -> Fraction:
    """zeta(0, x) = 1/2 - x, exact."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("hurwitz_zeta0: x must be > 0")
    return Fraction(1, 2) - x


def hurwitz_zeta(s, x, prec: int | None = None):
    """zeta(s, x) = sum_{n>=0} (n + x)^-s by Euler-Maclaurin (s != 1, x > 0)."""
    ctx = work_context(prec, extra=32)
    s = to_real(ctx, s)
    x = _positive(ctx, x, "hurwitz_zeta")
    if s == 1:
        raise ValueError("hurwitz_zeta: pole at s = 1")
    N = max(0, int(math.ceil(_shift_target(ctx.prec) + abs(float(s)) - float(x))))
    acc = ctx.fsum((x + k) ** (-s) for k in range(N))
    a = x + N
    tail = a ** (1 - s) / (s - 1) + a ** (-s) / 2
    eps = ctx.eps
    poch = s  # s (s+1) ... (s+2k-2)
    fact = ctx.mpf(2)  # (2k)!
    apow = a ** (-s - 1)
    prev = None
    for k, b in enumerate(_b2k(ctx, 80), start=1):
        term = b / fact * poch * apow
        if prev is not None and abs(term) > abs(prev):
            break  # asymptotic series started to diverge
        tail += term
        if abs(term) < eps * abs(tail):
            break
        prev = term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
        apow /= a * a
    return to_output(acc + tail, prec)


def _li2_series(ctx, x):
    s = ctx.zero
    p = x
    n = 1
    eps = ctx.eps
    while True:
        term = p / (n * n)
        s += term
        if abs(term) < eps * max(abs(s), ctx.eps):
            return s
        n += 1
        p *= x


def dilog(x, prec: int | None = None):
    """Li_2(x) for -1 <= x <= 1."""
    ctx = work_context(prec)
    x = to_real(ctx, x)
    if x > 1 or x < -1:
        raise ValueError(f"dilog: argument must lie in [-1, 1], got {x}")
    if x == 1:
        v = ctx.pi ** 2 / 6
    elif x == 0:
        v = ctx.zero
    elif x > 0.5:
        # Euler reflection Li2(x) + Li2(1-x) = pi^2/6 - log x log(1-x)
        v = ctx.pi ** 2 / 6 - ctx.log(x) * ctx.log(1 - x) - _li2_series(ctx, 1 - x)
    elif x < -0.5:
        # Landen: Li2(x) = -log(1-x)^2/2 - Li2(x/(x-1)), with x/(x-1) in (1/3, 1/2]
        v = -ctx.log(1 - x) ** 2 / 2 - _li2_series(ctx, x / (x - 1))
    else:
        v = _li2_series(ctx, x)
    return to_output(v, prec)

