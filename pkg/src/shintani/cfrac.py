"""Minus and plus continued fractions of quadratic surds.

The minus expansion omega = b_0 - 1/(b_1 - 1/(...)) with b_k = ceil(omega_k)
is purely periodic exactly for reduced surds 0 < omega' < 1 < omega.  The
plus (ordinary) expansion xi = a_0 + 1/(a_1 + ...) is purely periodic for
xi > 1, -1 < xi' < 0.  ``bridge`` interleaves the two for omega_0 > 2.

All iteration is exact; periods are detected by equality of surds.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count as _count

from .qfield import FieldCtx, QuadElem, QuadIdeal

__all__ = [
    "MinusCF",
    "PlusCF",
    "BridgeData",
    "is_reduced",
    "minus_cf",
    "plus_cf",
    "omega_sequence",
    "a_sequence",
    "reduce_ideal",
    "canonical_offset",
    "bridge",
    "check_bridge_markers",
]

_MAX_STEPS = 100_000


@dataclass(frozen=True)
class MinusCF:
    period: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.period)

    def b(self, k: int) -> int:
        return self.period[k % len(self.period)]


@dataclass(frozen=True)
class PlusCF:
    period: tuple[int, ...]

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.period) // 2

    def a(self, j: int) -> int:
        return self.period[j % len(self.period)]


@dataclass(frozen=True)
class BridgeData:
    plus: PlusCF
    S: tuple[int, ...]
    T: tuple[int, ...]
    xi: tuple[QuadElem, ...]
    omegaStar: QuadElem
    cPeriod: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.cPeriod)

    @property
    def l(self) -> int:  # noqa: E743
        return self.plus.l

    @property
    def m(self) -> int:
        return self.S[-1]

    def S_at(self, j: int) -> int:
        """S_j for any j >= 0, extended by S_{j+l} = S_j + m."""
        q, r = divmod(j, self.l)
        return self.S[r] + q * self.S[-1]

    def T_at(self, j: int) -> int:
        q, r = divmod(j, self.l)
        return self.T[r] + q * self.T[-1]

    def xi_at(self, j: int) -> QuadElem:
        return self.xi[j % (2 * self.l)]


def is_reduced(omega: QuadElem) -> bool:
    w2 = omega.conj()
    return omega.b != 0 and omega.sign() > 0 and (omega - 1).sign() > 0 and w2.sign() > 0 and (
        1 - w2
    ).sign() > 0


def minus_cf(omega: QuadElem) -> MinusCF:
    if omega.b == 0:
        raise ValueError(f"minus_cf: {omega} is rational")
    w2 = omega.conj()
    if not omega > 1:
        raise ValueError(f"minus_cf: need omega > 1, got omega ~ {float(omega):.6g}")
    if not w2.sign() > 0:
        raise ValueError(f"minus_cf: need omega' > 0, got omega' ~ {float(w2):.6g}")
    if not w2 < 1:
        raise ValueError(f"minus_cf: need omega' < 1, got omega' ~ {float(w2):.6g}")
    out = []
    w = omega
    for _ in range(_MAX_STEPS):
        b = w.ceil()
        out.append(b)
        w = (b - w).inverse()
        if w == omega:
            return MinusCF(tuple(out))
    raise RuntimeError("minus_cf: period not found")  # pragma: no cover


def plus_cf(xi: QuadElem) -> PlusCF:
    if xi.b == 0:
        raise ValueError(f"plus_cf: {xi} is rational")
    x2 = xi.conj()
    if not (xi > 1 and x2.sign() < 0 and x2 > -1):
        raise ValueError(
            f"plus_cf: need xi > 1 and -1 < xi' < 0 (purely periodic), got "
            f"xi ~ {float(xi):.6g}, xi' ~ {float(x2):.6g}"
        )
    out = []
    x = xi
    for _ in range(_MAX_STEPS):
        a = x.floor()
        out.append(a)
        x = (x - a).inverse()
        if x == xi:
            if len(out) % 2:
                out = out + out
            return PlusCF(tuple(out))
    raise RuntimeError("plus_cf: period not found")  # pragma: no cover


def omega_sequence(cf: MinusCF, omega: QuadElem, count: int) -> list[QuadElem]:
    """omega_0 .. omega_{count-1} with omega_{k+1} = 1/(b_k - omega_k)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [omega]
    for k in range(count - 1):
        out.append((cf.b(k) - out[-1]).inverse())
    return out


def a_sequence(cf: MinusCF, omega: QuadElem, count: int) -> list[QuadElem]:
    """A_0 .. A_count with A_0 = 1, A_{-1} = omega_0 and A_{k+1} = A_k/omega_{k+1}.

    The three-term form A_{k+1} = b_k A_k - A_{k-1} is checked at each step.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    ws = omega_sequence(cf, omega, count + 1)
    prev, cur = omega, QuadElem(1, 0, omega.D)
    out = [cur]
    for k in range(count):
        nxt = cur / ws[k + 1]
        if nxt != cf.b(k) * cur - prev:
            raise ArithmeticError(f"A-recurrence mismatch at k={k}")
        out.append(nxt)
        prev, cur = cur, nxt
    return out


def _primitive_totally_positive(alpha: QuadElem, beta: QuadElem) -> tuple[int, int, QuadElem]:
    """Smallest coprime (m, n) (box order) with m*alpha + n*beta totally positive."""
    from math import gcd

    for h in _count(1):
        for m in range(-h, h + 1):
            for n in range(-h, h + 1):
                if max(abs(m), abs(n)) != h or gcd(m, n) != 1:
                    continue
                q = m * alpha + n * beta
                if q.sign() > 0 and q.conj().sign() > 0:
                    return m, n, q
    raise AssertionError("unreachable")  # pragma: no cover


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def canonical_offset(cf: MinusCF) -> int:
    """Index k with b_k >= 3 whose rotated period word is lexicographically least."""
    m = cf.m
    cands = [k for k in range(m) if cf.period[k] >= 3]
    if not cands:
        raise ValueError("all-2 minus period: no admissible offset")
    return min(cands, key=lambda k: (cf.period[k:] + cf.period[:k], k))


def reduce_ideal(c: QuadIdeal, ctx: FieldCtx | None = None) -> tuple[QuadElem, QuadElem]:
    """(q, omega) with q totally positive, omega reduced and c = q*<1, omega>.

    The cycle member is chosen by ``canonical_offset``, so the output is a
    function of the module c alone.
    """
    alpha, beta = c.basis()
    m, n, q = _primitive_totally_positive(alpha, beta)
    _, u, v = _ext_gcd(m, n)
    # m*v' - n*u' = 1 completes (m, n) to a unimodular basis
    beta2 = (-v) * alpha + u * beta
    tau = beta2 / q
    if tau.b < 0:
        tau = -tau
    steps = 0
    while not is_reduced(tau):
        b = tau.ceil()
        q = q * (b - tau)
        tau = (b - tau).inverse()
        steps += 1
        if steps > _MAX_STEPS:
            raise RuntimeError("reduce_ideal did not terminate")  # pragma: no cover
    cf = minus_cf(tau)
    k0 = canonical_offset(cf)
    for k in range(k0):
        tau = (cf.b(k) - tau).inverse()
        q = q / tau
    target = QuadIdeal.module(alpha, beta)
    if QuadIdeal.module(QuadElem(1, 0, tau.D), tau) == target:
        return QuadElem(1, 0, tau.D), tau
    if QuadIdeal.module(q, q * tau) != target:
        raise ArithmeticError("reduce_ideal: module equality failed")
    return q, tau


def bridge(cf: MinusCF, omega0: QuadElem) -> BridgeData:
    """Plus-CF bridge data for a reduced omega_0 > 2 with minus period ``cf``."""
    if all(b == 2 for b in cf.period):
        raise ValueError("bridge: all b_k = 2, no shift gives omega_0 > 2")
    if not omega0 > 2:
        raise ValueError("bridge: need omega_0 > 2 (shift the cycle first)")
    xi0 = omega0 - 1
    pcf = plus_cf(xi0)
    L = 2 * pcf.l
    xi = [xi0]
    for j in range(L):
        xi.append((xi[-1] - pcf.a(j)).inverse())
    if xi[L] != xi0:
        raise ArithmeticError("bridge: plus period mismatch")
    l = pcf.l
    S, T = [0], [0]
    for j in range(1, l + 1):
        S.append(S[-1] + pcf.a(2 * j - 1))
        T.append(T[-1] + pcf.a(2 * j))
    omega_star = xi[1] + 1
    cstar = minus_cf(omega_star)
    if S[-1] != cf.m:
        raise ArithmeticError(f"bridge: S_l = {S[-1]} != m = {cf.m}")
    if T[-1] != cstar.m:
        raise ArithmeticError(f"bridge: T_l = {T[-1]} != n = {cstar.m}")
    return BridgeData(pcf, tuple(S), tuple(T), tuple(xi), omega_star, cstar.period)


def check_bridge_markers(cf: MinusCF, br: BridgeData) -> bool:
    """The marker identities b_{S_j} = a_{2j}+2, c_{T_j} = a_{2j+1}+2, and 2 elsewhere."""
    cs = MinusCF(br.cPeriod)
    marks_b, marks_c = set(), set()
    for j in range(br.l):
        sj, tj = br.S[j], br.T[j]
        marks_b.add(sj % cf.m)
        marks_c.add(tj % cs.m)
        if cf.b(sj) != br.plus.a(2 * j) + 2:
            return False
        if cs.b(tj) != br.plus.a(2 * j + 1) + 2:
            return False
    if any(cf.b(k) != 2 for k in range(cf.m) if k not in marks_b):
        return False
    if any(cs.b(k) != 2 for k in range(cs.m) if k not in marks_c):
        return False
    return True

