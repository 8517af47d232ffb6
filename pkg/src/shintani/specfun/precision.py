"""Precision contexts and conversions to mpmath reals.

Each precision gets its own ``mpmath.MPContext``; nothing here touches the
process-wide ``mpmath.mp``.  Cached contexts are shared and must be treated
as read-only (never assign ``.prec`` on them).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

DEFAULT_PREC = 64
GUARD_BITS = 24
MIN_PREC = 53

__all__ = [
    "DEFAULT_PREC",
    "GUARD_BITS",
    "context",
    "resolve_prec",
    "work_context",
    "to_real",
    "to_output",
    "bernoulli_numbers",
]


def resolve_prec(prec: int | None) -> int:
    if prec is None:
        return DEFAULT_PREC
    if not isinstance(prec, int) or prec < MIN_PREC:
        raise ValueError(f"precision must be an integer >= {MIN_PREC} bits, got {prec!r}")
    return prec


@lru_cache(maxsize=None)
def context(prec: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def work_context(prec: int | None, extra: int = GUARD_BITS):
    return context(resolve_prec(prec) + extra)


def to_real(ctx, v):
    """Convert int, Fraction, float, str, mpf or QuadElem to an mpf of ``ctx``."""
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    if hasattr(v, "to_mpf"):
        return v.to_mpf(ctx)
    return ctx.mpf(v)


def to_output(v, prec: int | None):
    """Round a working value to the caller's precision."""
    return context(resolve_prec(prec)).mpf(v)


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """Exact B_0..B_n (B_1 = -1/2)."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(math.comb(m + 1, k) * B[k] for k in range(m))
        B.append(-s / (m + 1))
    return tuple(B)
