"""Double-exponential quadrature in a given mpmath context.

``tanh_sinh`` integrates over a finite interval, ``exp_sinh`` over [a, inf).
Both refine by halving the step until consecutive estimates agree; the node
tables are cached per (precision, level).
"""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = ["tanh_sinh", "exp_sinh", "QuadratureError"]

MAX_LEVEL = 12
MIN_LEVEL = 3


class QuadratureError(ArithmeticError):
    pass


def _tmax(prec: int) -> float:
    # nodes closer to the end than 2^-(prec+20) carry no information
    return math.asinh(2 * (prec + 20) * math.log(2) / math.pi) + 0.1


@lru_cache(maxsize=None)
def _ts_level(ctx, level: int):
    """Tanh-sinh nodes new at ``level``: list of (complement c, weight w), t >= 0.

    The abscissa is 1 - c; the node t = 0 (c = 1) belongs to level 0.
    """
    h = ctx.ldexp(1, -level)
    tmax = _tmax(ctx.prec)
    out = []
    k = 0 if level == 0 else 1
    step = 1 if level == 0 else 2
    pi2 = ctx.pi / 2
    while True:
        t = k * h
        if t > tmax:
            break
        u = pi2 * ctx.sinh(t)
        c = 2 / (1 + ctx.exp(2 * u))
        w = pi2 * ctx.cosh(t) / ctx.cosh(u) ** 2
        out.append((c, w))
        k += step
    return tuple(out)


@lru_cache(maxsize=None)
def _es_level(ctx, level: int):
    """Exp-sinh nodes new at ``level``: list of (x, w) for x = exp(pi/2 sinh t)."""
    h = ctx.ldexp(1, -level)
    tmax = _tmax(ctx.prec)
    pi2 = ctx.pi / 2
    out = []
    if level == 0:
        ks = range(-int(tmax) - 1, int(tmax) + 2)
    else:
        kmax = int(tmax * 2**level) + 1
        ks = range(-kmax if kmax % 2 else -kmax - 1, kmax + 1, 2)
    for k in ks:
        t = k * h
        if abs(t) > tmax:
            continue
        x = ctx.exp(pi2 * ctx.sinh(t))
        w = pi2 * ctx.cosh(t) * x
        out.append((x, w))
    return tuple(out)


def _converged(ctx, prev, cur, tol, level):
    if level < MIN_LEVEL:
        return False
    return abs(cur - prev) <= tol * max(abs(cur), ctx.one)


def tanh_sinh(f, a, b, ctx, tol=None):
    """Integral of f over [a, b] (a < b finite) with endpoint clustering.

    ``tol`` is the target for |S_L - S_{L-1}|, relative to max(|S|, 1);
    convergence is quadratic in the level, so the returned value is
    typically far more accurate than ``tol``.
    """
    a, b = ctx.mpf(a), ctx.mpf(b)
    if not a < b:
        raise ValueError("tanh_sinh needs a < b")
    if tol is None:
        tol = ctx.ldexp(1, -(ctx.prec // 2))
    half = (b - a) / 2
    total = ctx.zero
    prev = None
    for level in range(MAX_LEVEL + 1):
        acc = ctx.zero
        for c, w in _ts_level(ctx, level):
            if c == 1:
                acc += w * f(a + half)
            else:
                d = half * c
                acc += w * (f(a + d) + f(b - d))
        h = ctx.ldexp(1, -level)
        total = total + acc
        est = half * h * total
        if prev is not None and _converged(ctx, prev, est, tol, level):
            return est
        prev = est
    raise QuadratureError("tanh_sinh did not converge")


def exp_sinh(f, a, ctx, scale=1, tol=None):
    """Integral of f over [a, inf) using x = a + scale * exp(pi/2 sinh t).

    ``scale`` should be of the order of the decay length of f.
    """
    a = ctx.mpf(a)
    scale = ctx.mpf(scale)
    if tol is None:
        tol = ctx.ldexp(1, -(ctx.prec // 2))
    tiny = ctx.ldexp(1, -(ctx.prec + 10))
    total = ctx.zero
    prev = None
    for level in range(MAX_LEVEL + 1):
        acc = ctx.zero
        peak = ctx.zero
        small_run = 0
        for x, w in _es_level(ctx, level):
            if small_run >= 4 and x > 1:
                # past the peak on the right and the terms are negligible
                continue
            term = w * f(a + scale * x)
            acc += term
            at = abs(term)
            if at > peak:
                peak = at
            if x > 1 and at <= tiny * peak:
                small_run += 1
            else:
                small_run = 0
        total = total + acc
        est = scale * ctx.ldexp(total, -level)
        if prev is not None and _converged(ctx, prev, est, tol, level):
            return est
        prev = est
    raise QuadratureError("exp_sinh did not converge")
