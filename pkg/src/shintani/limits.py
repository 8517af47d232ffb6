"""Partial zeta values of a ray class: s = 0 exactly, s = 1, and the invariants X.

Everything here is driven by a DecompositionDatum.  Each closed formula has
a brute-force counterpart: Z_Q by direct double summation with
Euler-Maclaurin tails, zeta(s, C) by summing N(beta)^-s over the lattice
points of the fundamental domain, and the X invariants by two different
double-sine products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classdata import DecompositionDatum, StarDatum
from .qfield import QuadElem, frac_angle, frac_brace
from .specfun.barnes import double_sine, t1, t2
from .specfun.elementary import bernoulli1, bernoulli2, digamma, dilog
from .specfun.integrals import _f_cap
from .specfun.precision import (
    GUARD_BITS,
    bernoulli_numbers,
    context,
    resolve_prec,
    to_output,
    to_real,
    work_context,
)
from .specfun.quadrature import exp_sinh, tanh_sinh

__all__ = [
    "LaurentPair",
    "ShintaniInvariants",
    "QuadFormData",
    "TruncatedSum",
    "zeta0",
    "zeta0_bar",
    "p_function",
    "zq_laurent",
    "zq_direct",
    "zq_integral",
    "richardson",
    "laurent_oracle",
    "partial_zeta_direct",
    "zq_route",
    "rho",
    "rho_oracle",
    "shintani_x",
    "bridge_terms",
    "shintani_x_bridge",
    "check_star_theorem",
    "character_sum_logX",
]


@dataclass(frozen=True)
class LaurentPair:
    """c_{-1}/(s-1) + c_0 + O(s-1)."""

    poleCoeff: object
    constTerm: object


@dataclass(frozen=True)
class ShintaniInvariants:
    x: object
    x1: object
    x2: object


@dataclass(frozen=True)
class QuadFormData:
    """Q(x, y) = (x omega + y)(x omega' + y)/(omega - omega'), omega > omega'.

    ``omegaPrime`` is an independent real; for field data it is the
    conjugate of ``omega``.
    """

    omega: object
    omegaPrime: object

    @classmethod
    def from_surd(cls, w: QuadElem) -> QuadFormData:
        return cls(w, w.conj())

    def reals(self, ctx):
        w, wp = self._real(ctx, self.omega), self._real(ctx, self.omegaPrime)
        if not w > wp:
            raise ValueError("QuadFormData needs omega > omega'")
        return w, wp

    @staticmethod
    def _real(ctx, v):
        return to_real(ctx, v)

    def Q(self, x, y, ctx=None):
        ctx = ctx or work_context(None)
        w, wp = self.reals(ctx)
        x, y = to_real(ctx, x), to_real(ctx, y)
        return (x * w + y) * (x * wp + y) / (w - wp)


@dataclass(frozen=True)
class TruncatedSum:
    """A truncated Dirichlet series with its tail correction applied.

    ``errorEstimate`` is the change of the corrected value between the
    bounds T/4 and T (a heuristic, not a proof).
    """

    value: float
    errorEstimate: float
    terms: int


# ---------------------------------------------------------------------------
# s = 0


def zeta0(d: DecompositionDatum) -> Fraction:
    """zeta(0, C) = sum_k B1(x_k) B1(y_k) + (b_k/2) B2(x_k), exactly."""
    return sum(
        (bernoulli1(x) * bernoulli1(y) + Fraction(d.b_at(k), 2) * bernoulli2(x)
         for k, (x, y) in enumerate(d.xy, start=1)),
        Fraction(0),
    )


def zeta0_bar(d: DecompositionDatum) -> Fraction:
    """zeta(0, C-bar) from the coordinates (<-x_k>, {-y_k})."""
    total = Fraction(0)
    for k, (x, y) in enumerate(d.xy, start=1):
        xb, yb = frac_angle(-x), frac_brace(-y)
        total += bernoulli1(xb) * bernoulli1(yb) + Fraction(d.b_at(k), 2) * bernoulli2(xb)
    return total


# ---------------------------------------------------------------------------
# s = 1: the closed form


def _p_context(prec):
    # assembled at twice the target precision; F(w) - F(w') cancels
    return context(2 * resolve_prec(prec) + GUARD_BITS)


def _p_value(ctx, w, wp, x, y):
    if not (w > wp > 0):
        raise ValueError("P needs omega > omega' > 0")
    if not x > 0 or y < 0:
        raise ValueError("P needs x > 0 and y >= 0")
    fdiff = _f_cap(ctx, w, x, y) - _f_cap(ctx, wp, x, y)
    li = dilog(wp / w, ctx.prec) - ctx.pi ** 2 / 6
    lr = ctx.log(w / wp)
    logs = lr * (-digamma(x, ctx.prec) - ctx.log(w - wp) / 2 + lr / 4)
    return (fdiff + li) + logs


def p_function(omega, omegaPrime, x, y, prec: int | None = None):
    """P(omega, omega', x, y), the constant term of Z_Q at s = 1."""
    ctx = _p_context(prec)
    w, wp = to_real(ctx, omega), to_real(ctx, omegaPrime)
    return to_output(_p_value(ctx, w, wp, to_real(ctx, x), to_real(ctx, y)), prec)


def zq_laurent(q: QuadFormData, x, y, prec: int | None = None) -> LaurentPair:
    ctx = _p_context(prec)
    w, wp = q.reals(ctx)
    if not wp > 0:
        raise ValueError("zq_laurent needs omega > omega' > 0")
    xr, yr = to_real(ctx, x), to_real(ctx, y)
    if not xr > 0 or yr < 0:
        raise ValueError("zq_laurent needs x > 0 and y >= 0")
    pole = ctx.log(w / wp) / 2
    return LaurentPair(to_output(pole, prec), to_output(_p_value(ctx, w, wp, xr, yr), prec))


# ---------------------------------------------------------------------------
# s > 1: direct summation of Z_Q


def _falling(s, n):
    # d^n/dL^n L^-s = (-s)(-s-1)...(-s-n+1) L^(-s-n)
    r = 1
    for i in range(n):
        r *= -s - i
    return r


class _Summand:
    """phi(u, v) = (w - w')^s ((x+u) w + y + v)^-s ((x+u) w' + y + v)^-s."""

    def __init__(self, ctx, w, wp, x, y, s):
        self.ctx, self.w, self.wp, self.x, self.y, self.s = ctx, w, wp, x, y, s
        self.C = (w - wp) ** s
        self.fall = [_falling(s, n) for n in range(40)]

    def __call__(self, u, v):
        L1 = (self.x + u) * self.w + self.y + v
        L2 = (self.x + u) * self.wp + self.y + v
        return self.C * (L1 * L2) ** (-self.s)

    def deriv(self, u, v, i, j):
        """d^i/du^i d^j/dv^j phi."""
        if i == 0 and j == 0:
            return self(u, v)
        s = self.s
        L1 = (self.x + u) * self.w + self.y + v
        L2 = (self.x + u) * self.wp + self.y + v
        p1 = L1 ** (-s)
        p2 = L2 ** (-s)
        tot = 0
        for i1 in range(i + 1):
            ci = math.comb(i, i1) * self.w ** i1 * self.wp ** (i - i1)
            for j1 in range(j + 1):
                n1, n2 = i1 + j1, i + j - i1 - j1
                tot += (ci * math.comb(j, j1) * self.fall[n1] * self.fall[n2]
                        * p1 / L1 ** n1 * p2 / L2 ** n2)
        return self.C * tot


def _em_weights(ctx, K):
    """Euler-Maclaurin endpoint operators: (coefficient, derivative order)."""
    B = bernoulli_numbers(2 * K)
    ops = [(ctx.mpf(1) / 2, 0)]
    for k in range(1, K + 1):
        b = B[2 * k]
        ops.append((-ctx.mpf(b.numerator) / (b.denominator * math.factorial(2 * k)), 2 * k - 1))
    return ops


def _zq_sum(ctx, w, wp, x, y, s, N, K):
    phi = _Summand(ctx, w, wp, x, y, s)
    ops = _em_weights(ctx, K)
    Nm = ctx.mpf(N)
    box = ctx.fsum(phi(p, q) for p in range(N) for q in range(N))

    def tail_v(p):
        # sum_{q >= N} phi(p, q)
        r = exp_sinh(lambda v: phi(p, v), Nm, ctx, scale=Nm + (x + p) * w + y)
        return r + ctx.fsum(c * phi.deriv(p, Nm, 0, m) for c, m in ops)

    def tail_u(q):
        r = exp_sinh(lambda u: phi(u, q), Nm, ctx, scale=Nm + (y + q) / w + x)
        return r + ctx.fsum(c * phi.deriv(Nm, q, m, 0) for c, m in ops)

    edges = ctx.fsum(tail_v(p) for p in range(N)) + ctx.fsum(tail_u(q) for q in range(N))

    # both indices in the tail: sum_{p,q >= N} = (int + ops)_u (int + ops)_v
    a_, b_ = x + Nm, y + Nm
    ts = b_ / a_

    def g(t):
        return ((w + t) * (wp + t)) ** (-s)

    inner = tanh_sinh(lambda t: g(t) * (b_ / t) ** (2 - 2 * s), 0, ts, ctx)
    outer = exp_sinh(g, ts, ctx, scale=1 + w)
    corner = phi.C / (2 * s - 2) * (inner + a_ ** (2 - 2 * s) * outer)
    mixed = ctx.zero
    for c, m in ops:
        mixed += c * exp_sinh(lambda u: phi.deriv(u, Nm, 0, m), Nm, ctx, scale=2 * Nm)
        mixed += c * exp_sinh(lambda v: phi.deriv(Nm, v, m, 0), Nm, ctx, scale=2 * Nm)
    for cu, mu in ops:
        for cv, mv in ops:
            mixed += cu * cv * phi.deriv(Nm, Nm, mu, mv)
    return box + edges + corner + mixed


def zq_direct(q: QuadFormData, x, y, s, prec: int | None = None, N: int = 12, K: int = 6):
    """Z_Q(s, x, y) = sum_{p,q>=0} Q(x+p, y+q)^-s for s > 1.

    The box p, q < N is summed term by term and the three tails are
    replaced by their Euler-Maclaurin expansions with K Bernoulli
    corrections; the remainder is below (2K)!/((2 pi)^(2K) N^(2K+2s)).
    """
    ctx = work_context(prec, extra=GUARD_BITS + 8)
    w, wp = q.reals(ctx)
    sr = to_real(ctx, s)
    if not sr > 1:
        raise ValueError("zq_direct needs s > 1")
    xr, yr = to_real(ctx, x), to_real(ctx, y)
    if not xr > 0 or yr < 0 or not (xr * wp + yr) > 0:
        raise ValueError("zq_direct needs x > 0, y >= 0 and Q(x, y) > 0")
    return to_output(_zq_sum(ctx, w, wp, xr, yr, sr, N, K), prec)


def zq_integral(q: QuadFormData, x, y, s, prec: int | None = None):
    """Z_Q(s, x, y) from the integral representation

        (w-w')^(1-s)/Gamma(s)^2 int_{w'}^{w} ((w-u)(u-w'))^(s-1)
            int_0^inf t^(2s-1) e^(-y t)/(1-e^-t) e^(-x u t)/(1-e^(-u t)) dt du,

    an independent check of zq_direct (needs w' > 0 and s > 1).
    """
    ctx = work_context(prec)
    w, wp = q.reals(ctx)
    sr = to_real(ctx, s)
    if not wp > 0 or not sr > 1:
        raise ValueError("zq_integral needs omega' > 0 and s > 1")
    xr, yr = to_real(ctx, x), to_real(ctx, y)

    def one_minus_exp(t):
        return -ctx.expm1(-t) if t < 0.01 else 1 - ctx.exp(-t)

    # near t = 0 the integrand is ~ t^(2s-3); t = v^p makes it bounded
    p = max(1, math.ceil(1 / (2 * (float(sr) - 1))))

    def inner(u):
        def h(v):
            t = v ** p
            return p * v ** (p - 1) * t ** (2 * sr - 1) * ctx.exp(-(yr + xr * u) * t) / (
                one_minus_exp(t) * one_minus_exp(u * t))

        return exp_sinh(h, 0, ctx, scale=(1 / (xr * u + yr + 1)) ** (ctx.one / p))

    outer = tanh_sinh(lambda u: ((w - u) * (u - wp)) ** (sr - 1) * inner(u), wp, w, ctx)
    return to_output((w - wp) ** (1 - sr) / ctx.gamma(sr) ** 2 * outer, prec)


def richardson(hs: Sequence, values: Sequence, degree: int = 3):
    """Extrapolate E(h) = E0 + c1 h + ... + c_degree h^degree to h = 0.

    ``hs`` must halve from one entry to the next.  Returns the last entry
    of column ``degree`` and its distance to the previous entry.
    """
    if len(hs) != len(values) or len(values) < degree + 2:
        raise ValueError("richardson needs at least degree + 2 samples")
    col = list(values)
    for d in range(1, degree + 1):
        col = [(2 ** d * col[i + 1] - col[i]) / (2 ** d - 1) for i in range(len(col) - 1)]
    return col[-1], abs(col[-1] - col[-2])


def _laurent_samples(prec, jmin=3, jmax=8):
    ctx = work_context(prec, extra=GUARD_BITS + 8)
    return ctx, [ctx.ldexp(1, -j) for j in range(jmin, jmax + 1)]


def laurent_oracle(q: QuadFormData, x, y, prec: int | None = None):
    """Constant term of Z_Q at s = 1 by extrapolation of zq_direct.

    Samples s_j = 1 + 2^-j (j = 3..8), removes the exact pole
    log(w/w')/2 / (s-1) and applies a degree-3 Richardson table.
    Returns (estimate, spread).
    """
    ctx, hs = _laurent_samples(prec)
    w, wp = q.reals(ctx)
    pole = ctx.log(w / wp) / 2
    vals = [zq_direct(q, x, y, 1 + h, prec=ctx.prec) - pole / h for h in hs]
    est, err = richardson(hs, vals, 3)
    return to_output(est, prec), to_output(err, prec)


# ---------------------------------------------------------------------------
# partial zeta by lattice points


def _sqrt_dn(d: DecompositionDatum, ctx):
    return ctx.sqrt(d.ctx.D) * to_real(ctx, d.f.norm)


def zq_route(d: DecompositionDatum, s, prec: int | None = None):
    """zeta(s, C) = (sqrt(D) N(f))^-s sum_k Z_{Q_k}(s, x_k, y_k)."""
    ctx = work_context(prec)
    sr = to_real(ctx, s)
    tot = ctx.fsum(
        zq_direct(QuadFormData.from_surd(w), x, y, sr, prec=ctx.prec)
        for w, (x, y) in zip(d.omega, d.xy)
    )
    return to_output(_sqrt_dn(d, ctx) ** (-sr) * tot, prec)


def _norm_sum(d: DecompositionDatum, s: float, T: float):
    """sum of N(beta)^-s over beta in z + b inside X with N(beta) <= T.

    X = {x + y eps_f^-1 : x > 0, y >= 0}.  Writing beta = z + m + n omega_0,
    y >= 0 means beta' >= beta (a condition on n only) and x > 0 gives an
    exact lower bound on m.  Returns (sum, count).
    """
    eps = d.f.epsF
    w = d.omega0
    z = d.z
    ef = float(eps)
    gap = float(w - w.conj())
    dz = float(z.conj() - z)
    # y = (beta' - beta)/(eps - 1/eps) and y <= sqrt(N(beta))
    n_hi = math.floor(dz / gap) + 1
    n_lo = math.floor((dz - math.sqrt(T) * (ef - 1 / ef)) / gap) - 1
    lam = eps - eps.inverse()
    vals = []
    count = 0
    for n in range(n_lo, n_hi + 1):
        c = z + n * w
        cc = c.conj()
        if cc < c:  # y < 0
            continue
        # x > 0  <=>  m (eps - 1/eps) > c'/eps - c eps
        bound = (cc * eps.inverse() - c * eps) / lam
        if not bound.is_rational():
            raise ArithmeticError("cone bound should be rational")
        m = math.floor(bound.a) + 1
        nc, tc = c.norm(), c.trace()
        while True:
            N = nc + m * tc + m * m
            if N > T:
                break
            vals.append(float(N) ** (-s))
            count += 1
            m += 1
    return math.fsum(vals), count, vals


def partial_zeta_direct(a, f, ctx, s, normBound: int, d: DecompositionDatum | None = None) -> TruncatedSum:
    """zeta(s, C) summed over ideals of norm <= normBound, tail-corrected.

    With A(t) lattice points of norm <= t and density kappa = log(eps_f)/(w - w'),
    sum_{N > T} N^-s = -A(T) T^-s + s int_T^inf A(t) t^(-s-1) dt, and
    A(t) ~ kappa t in the integral.
    """
    from .classdata import build_datum

    s = float(s)
    if not s > 1:
        raise ValueError("partial_zeta_direct needs s > 1")
    if d is None:
        d = build_datum(a, f, ctx)
    scale = float(d.bIdeal.norm() / f.norm)  # N(beta) = N(ideal) * N(b)/N(f)
    w = d.omega0
    kappa = math.log(float(d.f.epsF)) / float(w - w.conj())

    def corrected(T):
        tot, count, _ = _norm_sum(d, s, T)
        return tot - count * T ** (-s) + kappa * s * T ** (1 - s) / (s - 1), count

    T = normBound * scale
    v, count = corrected(T)
    v4, _ = corrected(T / 4)
    pref = float(d.bIdeal.norm() / f.norm) ** s  # N(b^-1 f)^-s
    return TruncatedSum(pref * v, pref * abs(v - v4), count)


# ---------------------------------------------------------------------------
# the limit formula


def rho(d: DecompositionDatum, prec: int | None = None) -> LaurentPair:
    """Laurent data at s = 1 of (sqrt(D) N(f))^s zeta(s, C).

    poleCoeff = log eps_f (prod omega_k = eps_f is checked exactly),
    constTerm = sum_k P(omega_k, omega_k', x_k, y_k).
    """
    prod = QuadElem(1, 0, d.ctx.D)
    for w in d.omega:
        prod = prod * w
    if prod != d.f.epsF:
        raise ArithmeticError("prod omega_k != eps_f")
    ctx = _p_context(prec)
    pole = ctx.log(to_real(ctx, d.f.epsF))
    total = ctx.zero
    for w, (x, y) in zip(d.omega, d.xy):
        total += _p_value(ctx, to_real(ctx, w), to_real(ctx, w.conj()), to_real(ctx, x), to_real(ctx, y))
    return LaurentPair(to_output(pole, prec), to_output(total, prec))


def rho_oracle(d: DecompositionDatum, prec: int | None = None):
    """Constant term by extrapolating sum_k Z_{Q_k}(s) - log(eps_f)/(s-1).

    Returns (estimate, spread).
    """
    ctx, hs = _laurent_samples(prec)
    pole = ctx.log(to_real(ctx, d.f.epsF))
    vals = []
    for h in hs:
        tot = ctx.fsum(
            zq_direct(QuadFormData.from_surd(w), x, y, 1 + h, prec=ctx.prec)
            for w, (x, y) in zip(d.omega, d.xy)
        )
        vals.append(tot - pole / h)
    est, err = richardson(hs, vals, 3)
    return to_output(est, prec), to_output(err, prec)


# ---------------------------------------------------------------------------
# Shintani invariants


def shintani_x(d: DecompositionDatum, prec: int | None = None) -> ShintaniInvariants:
    """X1 = prod S(omega_k, z_k), X2 = prod S(omega_k', z_k'), X = X1 X2."""
    ctx = work_context(prec, extra=16)
    x1 = ctx.one
    x2 = ctx.one
    for w, z in zip(d.omega, d.zk):
        x1 *= double_sine(w, z, ctx.prec)
        x2 *= double_sine(w.conj(), z.conj(), ctx.prec)
    return ShintaniInvariants(to_output(x1 * x2, prec), to_output(x1, prec), to_output(x2, prec))


def _coords(z: QuadElem, w: QuadElem) -> tuple[Fraction, Fraction]:
    """Rational (x, y) with z = x w + y."""
    if w.b == 0:
        raise ValueError("omega must be irrational")
    x = z.b / w.b
    return x, z.a - x * w.a


def bridge_terms(d: DecompositionDatum, s: StarDatum):
    """Factors of the bridge products for X1 and X2.

    Each entry is (which, exponent, omega, x, y): factor T_which(omega, x omega + y)
    raised to ``exponent``.  For X2 ``omega`` is the conjugate surd whose
    real value is used, with (x, y) solved from the unconjugated identity.
    """
    br = s.bridge
    out = []
    for j in range(1, d.r * br.l + 1):
        z = d.z_at(br.S_at(j))
        x2j, x2j1 = br.xi_at(2 * j), br.xi_at(2 * j + 1)
        for w, e in ((x2j, 1), (x2j1.inverse(), -1)):
            x, y = _coords(z, w)
            out.append((1, e, w, x, y))
        for w, e in ((-x2j1.inverse(), 1), (-x2j, -1)):
            x, y = _coords(z, w)
            out.append((2, e, w.conj(), x, y))
    return out


def _eval_terms(terms, prec):
    ctx = work_context(prec, extra=16)
    x1 = ctx.one
    x2 = ctx.one
    for which, e, w, x, y in terms:
        v = (t1 if which == 1 else t2)(w, x, y, ctx.prec)
        if which == 1:
            x1 *= v if e > 0 else 1 / v
        else:
            x2 *= v if e > 0 else 1 / v
    return x1, x2


def shintani_x_bridge(d: DecompositionDatum, s: StarDatum, prec: int | None = None):
    """(X1, X2) through the plus continued fraction of the bridge."""
    if s.datum.bIdeal != d.bIdeal.scale(s.bridge.xi[1]):
        raise ValueError("star datum does not match this datum")
    x1, x2 = _eval_terms(bridge_terms(d, s), prec)
    return to_output(x1, prec), to_output(x2, prec)


def check_star_theorem(d: DecompositionDatum, s: StarDatum, prec: int | None = None):
    """(X1(C) X1(C*) - 1, X2(C)/X2(C*) - 1)."""
    ctx = work_context(prec, extra=16)
    a = shintani_x(d, ctx.prec)
    b = shintani_x(s.datum, ctx.prec)
    return to_output(a.x1 * b.x1 - 1, prec), to_output(a.x2 / b.x2 - 1, prec)


def character_sum_logX(reps, chi, which: int, prec: int | None = None):
    """sum_C chi(C)^-1 log X_which(C) over the given classes.

    ``reps`` holds one DecompositionDatum (or precomputed
    ShintaniInvariants) per class and ``chi`` the matching character values.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    chi = list(chi)
    if len(chi) != len(reps) or any(c is None for c in chi):
        raise ValueError("character table must give a value for every class")
    ctx = work_context(prec)
    total = ctx.mpc(0)
    for rep, c in zip(reps, chi):
        inv = rep if isinstance(rep, ShintaniInvariants) else shintani_x(rep, ctx.prec)
        xv = inv.x1 if which == 1 else inv.x2
        c = ctx.mpc(c)
        if abs(c) == 0:
            raise ValueError("character values must be nonzero")
        total += ctx.log(ctx.mpf(xv)) / c
    return context(resolve_prec(prec)).mpc(total)
