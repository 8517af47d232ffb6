"""Barnes double zeta at s = 0, its derivative G, and the double sine.

G(omega, z) = zeta_2'(0, omega, z) is computed from the Mellin representation

    zeta_2(s, omega, z) = Gamma(s)^-1 int_0^inf t^(s-1) h(t) dt,
    h(t) = e^(-z t) / ((1 - e^-t)(1 - e^(-omega t))).

Splitting at delta and integrating the Laurent series of h on [0, delta]
term by term gives

    G = sum_{n>=1} c_n delta^n / n + int_delta^inf h(t)/t dt
        - c_{-2}/(2 delta^2) - c_{-1}/delta + c_0 (log delta + gamma),

where h(t) = sum_{n>=-2} c_n t^n.  The coefficients come from the product of
the generating functions t/(1-e^-t) = sum B_n(1) t^n/n!, the same in
omega*t, and e^(-z t).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..qfield import QuadElem, frac_angle, frac_brace
from .elementary import bernoulli1, bernoulli2
from .precision import bernoulli_numbers, to_output, to_real, work_context
from .quadrature import exp_sinh

__all__ = [
    "barnes_zeta2_at0",
    "barnes_g",
    "double_sine",
    "t1",
    "t2",
]


def barnes_zeta2_at0(omega, x, y):
    """zeta_2(0, omega, x*omega + y) = (omega/2) B2(x) + B1(x) B1(y) + B2(y)/(2 omega).

    Exact when omega is a rational or a QuadElem and x, y are rational.
    """
    if isinstance(omega, (int, Fraction, QuadElem)):
        x, y = Fraction(x), Fraction(y)
        if isinstance(omega, QuadElem):
            return omega * (bernoulli2(x) / 2) + bernoulli1(x) * bernoulli1(y) + omega.inverse() * (
                bernoulli2(y) / 2
            )
        omega = Fraction(omega)
        return omega / 2 * bernoulli2(x) + bernoulli1(x) * bernoulli1(y) + bernoulli2(y) / (2 * omega)
    # numeric omega: evaluate in the context of omega
    ctx = omega.context if hasattr(omega, "context") else work_context(None)
    w = ctx.mpf(omega)
    xr, yr = to_real(ctx, x), to_real(ctx, y)
    return w / 2 * bernoulli2(xr) + bernoulli1(xr) * bernoulli1(yr) + bernoulli2(yr) / (2 * w)


@lru_cache(maxsize=None)
def _bern_at_one_scaled(ctx, N: int):
    """B_n(1)/n! for n = 0..N in ``ctx``."""
    B = list(bernoulli_numbers(N))
    if N >= 1:
        B[1] = -B[1]
    out = []
    fact = 1
    for n, b in enumerate(B):
        if n:
            fact *= n
        out.append(ctx.mpf(b.numerator) / (b.denominator * fact))
    return tuple(out)


def _fixed(ctx, v, P: int) -> int:
    return int(ctx.nint(ctx.ldexp(v, P)))


def _heads(ctx, w, zs, delta, N):
    """Laurent part of G(w, z) at cut ``delta`` for each z in ``zs``.

    With t = delta*s all three generating series have O(1) coefficients
    (|z delta| <= 1 in the strip), so the Cauchy products are done in
    integer fixed point with P fractional bits.  D_n = d_n delta^n where
    h(t) = sum_n d_n t^(n-2) / w, and then

        head = (sum_{n>=1} D_{n+2}/n - D_0/2 - D_1 + D_2 (log delta + gamma)) / (w delta^2).
    """
    P = ctx.prec + 16
    a = _bern_at_one_scaled(ctx, N + 2)
    A, Bw = [], []
    dp, wdp = ctx.one, ctx.one
    for n in range(N + 3):
        A.append(_fixed(ctx, a[n] * dp, P))
        Bw.append(_fixed(ctx, a[n] * wdp, P))
        dp *= delta
        wdp *= w * delta
    AB = [sum(A[i] * Bw[n - i] for i in range(n + 1)) >> P for n in range(N + 3)]
    logd = ctx.log(delta) + ctx.euler
    scale = 1 / (w * delta * delta)
    out = []
    for z in zs:
        E = []
        term = ctx.one
        zd = -z * delta
        for k in range(N + 3):
            E.append(_fixed(ctx, term, P))
            term = term * zd / (k + 1)
        Dn = [sum(AB[i] * E[n - i] for i in range(n + 1)) for n in range(N + 3)]
        # Dn carries 2P fractional bits
        acc = sum(Fraction(Dn[n + 2], n) for n in range(1, N + 1))
        acc = ctx.mpf(acc.numerator) / acc.denominator
        d0, d1, d2 = (ctx.ldexp(ctx.mpf(v), -2 * P) for v in Dn[:3])
        out.append((ctx.ldexp(acc, -2 * P) - d0 / 2 - d1 + d2 * logd) * scale)
    return out


def _cut(ctx, w):
    delta = 1 / (2 * max(w, ctx.one))
    # |c_n delta^n| decays like (delta*max(1,w)/(2 pi))^n = (1/(4 pi))^n
    N = int(ctx.prec * math.log(2) / math.log(4 * math.pi)) + 6
    return delta, N


def _tail(ctx, w, zs, weights, delta):
    """sum_i weights[i] * int_delta^inf e^(-z_i t) / (t (1-e^-t)(1-e^(-w t))) dt.

    t >= delta keeps 1 - e^-t and 1 - e^(-w t) away from catastrophic
    cancellation (at most log2(1/delta) bits), so plain exp is used.
    """

    def integrand(t):
        den = t * (1 - ctx.exp(-t)) * (1 - ctx.exp(-w * t))
        return ctx.fsum(wt * ctx.exp(-zi * t) for zi, wt in zip(zs, weights)) / den

    zmin = min(zs)
    scale = 1 / max(zmin, ctx.mpf(1) / 64)
    return exp_sinh(integrand, delta, ctx, scale=min(scale, 8 / delta))


def _g_raw(ctx, w, z):
    delta, N = _cut(ctx, w)
    return _heads(ctx, w, [z], delta, N)[0] + _tail(ctx, w, [z], [1], delta)


def _log_double_sine_raw(ctx, w, z):
    """G(w, 1+w-z) - G(w, z) with a single tail integral."""
    delta, N = _cut(ctx, w)
    z2 = 1 + w - z
    h2, h1 = _heads(ctx, w, [z2, z], delta, N)
    return h2 - h1 + _tail(ctx, w, [z2, z], [1, -1], delta)


def _guard_bits(w: float, z: float) -> int:
    # e^(-z t) at t = delta cancels about z*delta*log2(e) bits
    return 24 + int(1.5 * z / (2 * max(w, 1.0))) + int(math.log2(max(w, 1 / w, 1.0)))


def barnes_g(omega, z, prec: int | None = None):
    """G(omega, z) = d/ds zeta_2(s, omega, z) at s = 0, for omega, z > 0."""
    fw, fz = float(to_real(work_context(prec), omega)), float(to_real(work_context(prec), z))
    if not (fw > 0 and fz > 0):
        raise ValueError("barnes_g needs omega > 0 and z > 0")
    ctx = work_context(prec, extra=_guard_bits(fw, fz))
    return to_output(_g_raw(ctx, to_real(ctx, omega), to_real(ctx, z)), prec)


def _double_sine_strip(ctx, w, z):
    return ctx.exp(_log_double_sine_raw(ctx, w, z))


def double_sine(omega, z, prec: int | None = None):
    """S(omega, z) = exp(G(omega, 1+omega-z) - G(omega, z)).

    Arguments outside the strip 0 < z < 1 + omega are moved into it with
    S(omega, z) = 2 sin(pi z) S(omega, z+omega) = 2 sin(pi z/omega) S(omega, z+1),
    always shifting by max(1, omega).
    """
    base = work_context(prec)
    fw, fz = float(to_real(base, omega)), float(to_real(base, z))
    if not fw > 0:
        raise ValueError("double_sine needs omega > 0")
    ctx = work_context(prec, extra=_guard_bits(fw, 1 + fw) + 8)
    w = to_real(ctx, omega)
    zz = to_real(ctx, z)
    pi = ctx.pi
    factor = ctx.one
    near = ctx.ldexp(1, -(base.prec // 2))
    big = w >= 1
    step = w if big else ctx.one
    shifts = 0
    while zz <= 0 or zz >= 1 + w:
        shifts += 1
        if shifts > 10_000:
            raise ValueError("double_sine: argument too far from the strip")
        if zz <= 0:
            s = 2 * ctx.sin(pi * zz) if big else 2 * ctx.sin(pi * zz / w)
            if abs(s) < near:
                raise ValueError("double_sine: argument is at a zero of S")
            factor *= s
            zz += step
        else:
            zz -= step
            s = 2 * ctx.sin(pi * zz) if big else 2 * ctx.sin(pi * zz / w)
            if abs(s) < near:
                raise ValueError("double_sine: argument is at a pole of S")
            factor /= s
    return to_output(factor * _double_sine_strip(ctx, w, zz), prec)


def _irrational_omega(omega, name):
    if isinstance(omega, (int, Fraction)) or (isinstance(omega, QuadElem) and omega.b == 0):
        raise ValueError(f"{name}: omega must be irrational")
    if isinstance(omega, float) and omega.is_integer():
        raise ValueError(f"{name}: omega must be irrational")


def t1(omega, x, y, prec: int | None = None):
    """T1(omega, x*omega + y) = S(omega, <x> omega + <y>).

    When x and y are both integers the argument 1 + omega is a pole of S;
    there the value S(omega, omega) is returned, i.e. the representative
    y = 0 is used (see the decisions ledger).
    """
    _irrational_omega(omega, "t1")
    X, Y = frac_angle(x), frac_angle(y)
    if X == 1 and Y == 1:
        Y = Fraction(0)
    return _t_eval(omega, X, Y, prec)


def t2(omega, x, y, prec: int | None = None):
    """T2(omega, x*omega + y) = S(omega, {x} omega + <y>)."""
    _irrational_omega(omega, "t2")
    return _t_eval(omega, frac_brace(x), frac_angle(y), prec)


def _t_eval(omega, X: Fraction, Y: Fraction, prec):
    base = work_context(prec, extra=16)
    w = to_real(base, omega)
    z = w * to_real(base, X) + to_real(base, Y)
    return double_sine(w, z, prec)
