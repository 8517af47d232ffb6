"""The two integrals entering the limit formula at s = 1.

    f(w, x) = -int_w^inf e^(-x u) / (1 - e^-u) du
    F(w, x, y) = int_0^inf (e^(-y t)/(1 - e^-t) - 1/t) f(w t, x) dt

Both rest on the generating function e^(-x t)/(1 - e^-t) = sum_n B_n(1-x) t^(n-1)/n!.
For w >= 3/2 the integrand of f is expanded geometrically,

    f(w, x) = -sum_{n>=0} e^(-(x+n) w) / (x+n),

and below 3/2 the Taylor series is integrated from w up to 3/2:

    f(w, x) = f(3/2, x) - log(3/2 / w) - sum_{n>=1} B_n(1-x) ((3/2)^n - w^n) / (n n!).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .precision import bernoulli_numbers, to_output, to_real, work_context
from .quadrature import exp_sinh, tanh_sinh

__all__ = ["f_inner", "f_cap"]

_SWITCH = Fraction(3, 2)
_SMALL_T = Fraction(1, 1000)


@lru_cache(maxsize=4096)
def _bern_poly_scaled(ctx, u, N: int):
    """B_n(u)/n! for n = 0..N: coefficients of t e^(u t)/(e^t - 1)."""
    B = bernoulli_numbers(N)
    b = []
    fact = 1
    for n in range(N + 1):
        if n:
            fact *= n
        b.append(ctx.mpf(B[n].numerator) / (B[n].denominator * fact))
    e = [ctx.one]
    for j in range(1, N + 1):
        e.append(e[-1] * u / j)
    return tuple(ctx.fsum(b[k] * e[n - k] for k in range(n + 1)) for n in range(N + 1))


def _series_len(ctx) -> int:
    # terms decay like (3/2 / 2 pi)^n, about 2 bits each
    return int(0.5 * ctx.prec) + 10


class _InnerF:
    """f(., x) for one fixed x, with the series coefficients precomputed."""

    def __init__(self, ctx, x):
        self.ctx = ctx
        self.x = x
        N = _series_len(ctx)
        bx = _bern_poly_scaled(ctx, 1 - x, N)
        self.coef = [bx[n] / n for n in range(1, N + 1)]
        self.w0 = to_real(ctx, _SWITCH)
        self.f0 = self._exp_sum(self.w0)
        self.g0 = self._g1(self.w0)

    def _exp_sum(self, w):
        ctx = self.ctx
        term = ctx.exp(-self.x * w)
        q = ctx.exp(-w)
        eps = ctx.eps
        s = ctx.zero
        n = 0
        while True:
            t = term / (self.x + n)
            s += t
            if t < eps * s:
                return -s
            term *= q
            n += 1

    def _g1(self, w):
        s = self.ctx.zero
        p = w
        for c in self.coef:
            s += c * p
            p *= w
        return s

    def __call__(self, w):
        if w >= self.w0:
            return self._exp_sum(w)
        return self.f0 - self.ctx.log(self.w0 / w) - self.g0 + self._g1(w)


def f_inner(omega, x, prec: int | None = None):
    """f(omega, x) = -int_omega^inf e^(-x u)/(1 - e^-u) du for omega, x > 0."""
    ctx = work_context(prec)
    w, xr = to_real(ctx, omega), to_real(ctx, x)
    if not xr > 0:
        raise ValueError("f_inner: x must be > 0 (the integral diverges otherwise)")
    if not w > 0:
        raise ValueError("f_inner: omega must be > 0")
    return to_output(_InnerF(ctx, xr)(w), prec)


def _kernel(ctx, y):
    """t -> e^(-y t)/(1 - e^-t) - 1/t, by Taylor series for small t."""
    N = max(6, int(ctx.prec / 9) + 2)  # (t/2 pi)^n < 2^-prec for t < 1e-3
    by = _bern_poly_scaled(ctx, 1 - y, N)
    small = to_real(ctx, _SMALL_T)

    def k(t):
        if t < small:
            s = ctx.zero
            p = ctx.one
            for c in by[1:]:
                s += c * p
                p *= t
            return s
        return ctx.exp(-y * t) / (1 - ctx.exp(-t)) - 1 / t

    return k


def _f_cap(ctx, w, x, y, split=None):
    inner = _InnerF(ctx, x)
    kern = _kernel(ctx, y)

    def integrand(t):
        return kern(t) * inner(w * t)

    scale = 1 / (x * w)
    if split is None:
        return exp_sinh(integrand, 0, ctx, scale=scale)
    split = ctx.mpf(split)
    return tanh_sinh(integrand, 0, split, ctx) + exp_sinh(integrand, split, ctx, scale=scale)


def f_cap(omega, x, y, prec: int | None = None, split=None):
    """F(omega, x, y) for omega > 0, x > 0, y >= 0.

    ``split`` optionally breaks the outer integral at t = split (used to
    cross-check the quadrature).
    """
    ctx = work_context(prec)
    w, xr, yr = to_real(ctx, omega), to_real(ctx, x), to_real(ctx, y)
    if not xr > 0:
        raise ValueError("f_cap: x must be > 0")
    if not w > 0:
        raise ValueError("f_cap: omega must be > 0")
    if yr < 0:
        raise ValueError("f_cap: y must be >= 0")
    return to_output(_f_cap(ctx, w, xr, yr, split), prec)
