"""Exact arithmetic in a real quadratic field K = Q(sqrt(D)).

Elements are stored over the basis (1, sqrt(D)) with rational coordinates.
Fractional ideals (more generally, rank-2 Z-lattices in K) are stored in a
canonical Hermite normal form over the integral basis (1, theta) of O_K, so
that equality and membership are decidable by integer arithmetic.

The real embedding is fixed by sending sqrt(D) to the positive root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "QuadElem",
    "QuadIdeal",
    "FieldCtx",
    "Modulus",
    "field",
    "is_fundamental_discriminant",
    "conj",
    "norm_trace",
    "is_totally_positive",
    "fundamental_unit",
    "fundamental_unit_bruteforce",
    "modulus_data",
    "congruent_one",
    "find_generator",
    "find_generator_narrow",
    "frac_angle",
    "frac_brace",
]

Number = Union[int, Fraction]


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


def frac_brace(x: Number) -> Fraction:
    """Fractional part {x} = x - floor(x), in [0, 1)."""
    x = _q(x)
    return x - math.floor(x)


def frac_angle(x: Number) -> Fraction:
    """The representative <x> = x - ceil(x) + 1, in (0, 1]."""
    x = _q(x)
    return x - math.ceil(x) + 1


def _squarefree(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def is_fundamental_discriminant(D: int) -> bool:
    """True for positive non-square fundamental discriminants."""
    if not isinstance(D, int) or D <= 1:
        return False
    if math.isqrt(D) ** 2 == D:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _check_discriminant(D: int) -> None:
    if not isinstance(D, int) or isinstance(D, bool):
        raise TypeError("D must be an integer")
    if D <= 1:
        raise ValueError(f"D={D}: a real quadratic discriminant must be > 1")
    if math.isqrt(D) ** 2 == D:
        raise ValueError(f"D={D} is a perfect square")
    if D % 4 in (2, 3):
        raise ValueError(
            f"D={D} is {D % 4} mod 4; a discriminant must be 0 or 1 mod 4"
            f" (the field Q(sqrt({D})) has discriminant {4 * D})"
        )
    if not is_fundamental_discriminant(D):
        raise ValueError(
            f"D={D} is not fundamental: "
            + ("D is not squarefree" if D % 4 == 1 else "D/4 must be squarefree and 2 or 3 mod 4")
        )


class QuadElem:
    """An element a + b*sqrt(D) of Q(sqrt(D)) with rational a, b."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a: Number, b: Number, D: int):
        object.__setattr__(self, "a", _q(a))
        object.__setattr__(self, "b", _q(b))
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    # construction helpers
    @classmethod
    def rational(cls, a: Number, D: int) -> QuadElem:
        return cls(a, 0, D)

    @classmethod
    def sqrt_d(cls, D: int) -> QuadElem:
        return cls(0, 1, D)

    def _coerce(self, other) -> QuadElem:
        if isinstance(other, QuadElem):
            if other.D != self.D:
                raise ValueError(f"mixing Q(sqrt({self.D})) and Q(sqrt({other.D}))")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.D)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(
            self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(D))")
        return QuadElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int) -> QuadElem:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QuadElem(1, 0, self.D)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison and hashing
    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.D == other.D and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(D)."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if a * a > b * b * self.D else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # field operations
    def conj(self) -> QuadElem:
        return QuadElem(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """Membership in O_K via the minimal polynomial."""
        t, n = self.trace(), self.norm()
        return t.denominator == 1 and n.denominator == 1

    def floor(self) -> int:
        """Exact floor, bracketing sqrt(D) by integer square roots."""
        p, q = self.b.numerator, self.b.denominator
        r = math.isqrt(p * p * self.D)
        # b*sqrt(D) lies in [r/q, (r+1)/q] (or its negative)
        lo = Fraction(r, q) if p >= 0 else Fraction(-r - 1, q)
        n = math.floor(self.a + lo)
        while (self - (n + 1)).sign() >= 0:
            n += 1
        while (self - n).sign() < 0:
            n -= 1
        return n

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def to_mpf(self, ctx):
        """Value in the mpmath context ``ctx`` (correct to its precision)."""
        a = ctx.mpf(self.a.numerator) / self.a.denominator
        if self.b == 0:
            return a
        return a + ctx.mpf(self.b.numerator) / self.b.denominator * ctx.sqrt(self.D)

    def conj_to_mpf(self, ctx):
        return self.conj().to_mpf(ctx)

    # coordinates over the integral basis (1, theta)
    def int_coords(self) -> tuple[Fraction, Fraction]:
        if self.D % 4 == 1:
            return self.a - self.b, 2 * self.b
        return self.a, 2 * self.b

    @classmethod
    def from_int_coords(cls, u: Number, v: Number, D: int) -> QuadElem:
        u, v = _q(u), _q(v)
        if D % 4 == 1:
            return cls(u + v / 2, v / 2, D)
        return cls(u, v / 2, D)

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, D={self.D})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sgn = "+" if self.b > 0 else "-"
        bb = abs(self.b)
        bs = "" if bb == 1 else f"{bb}*"
        return f"{self.a}{sgn}{bs}sqrt({self.D})" if self.a != 0 else (
            f"{'-' if self.b < 0 else ''}{bs}sqrt({self.D})"
        )


def conj(x: QuadElem) -> QuadElem:
    return x.conj()


def norm_trace(x: QuadElem) -> tuple[Fraction, Fraction]:
    return x.norm(), x.trace()


def is_totally_positive(x: QuadElem) -> bool:
    if x == 0:
        raise ValueError("is_totally_positive: x must be nonzero")
    return x.sign() > 0 and x.conj().sign() > 0


# ---------------------------------------------------------------------------
# lattices and ideals


def _hnf(rows: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form (A, B, C) of the Z-span of integer vectors (u, v).

    The span equals Z(A, 0) + Z(B, C) with A > 0, C > 0, 0 <= B < A.
    """
    rows = [list(r) for r in rows if r[0] != 0 or r[1] != 0]
    # eliminate the second coordinate with a gcd sweep
    while True:
        nz = [r for r in rows if r[1] != 0]
        if len(nz) <= 1:
            break
        piv = min(nz, key=lambda r: abs(r[1]))
        for r in nz:
            if r is piv:
                continue
            k = r[1] // piv[1]
            r[0] -= k * piv[0]
            r[1] -= k * piv[1]
    nz = [r for r in rows if r[1] != 0]
    if not nz:
        raise ValueError("generators do not span a rank-2 lattice")
    piv = nz[0]
    if piv[1] < 0:
        piv[0], piv[1] = -piv[0], -piv[1]
    A = 0
    for r in rows:
        if r is not piv:
            A = math.gcd(A, r[0])
    if A == 0:
        raise ValueError("generators do not span a rank-2 lattice")
    return A, piv[0] % A, piv[1]


@dataclass(frozen=True)
class QuadIdeal:
    """A rank-2 Z-lattice (1/den) * < A, B + C*theta > in K.

    The stored form is canonical: den is minimal, A, C > 0 and 0 <= B < A.
    Fractional ideals are the lattices stable under O_K.
    """

    D: int
    den: int
    A: int
    B: int
    C: int

    # construction
    @classmethod
    def from_generators(cls, gens: Iterable[QuadElem], D: Optional[int] = None) -> QuadIdeal:
        """The Z-span of ``gens`` (must have rank 2)."""
        gens = list(gens)
        if not gens:
            raise ValueError("no generators")
        D = gens[0].D if D is None else D
        coords = []
        for g in gens:
            if g.D != D:
                raise ValueError("generators from different fields")
            coords.append(g.int_coords())
        den = 1
        for u, v in coords:
            den = den * u.denominator // math.gcd(den, u.denominator)
            den = den * v.denominator // math.gcd(den, v.denominator)
        rows = [(int(u * den), int(v * den)) for u, v in coords]
        A, B, C = _hnf(rows)
        g = math.gcd(math.gcd(A, B), math.gcd(C, den))
        return cls(D, den // g, A // g, B // g, C // g)

    @classmethod
    def principal(cls, x: QuadElem) -> QuadIdeal:
        """The fractional ideal x*O_K."""
        if x == 0:
            raise ValueError("principal ideal of zero")
        theta = _theta(x.D)
        return cls.from_generators([x, x * theta], x.D)

    @classmethod
    def unit(cls, D: int) -> QuadIdeal:
        return cls(D, 1, 1, 0, 1)

    @classmethod
    def module(cls, alpha: QuadElem, beta: QuadElem) -> QuadIdeal:
        """The Z-module <alpha, beta>."""
        return cls.from_generators([alpha, beta], alpha.D)

    # structure
    def basis(self) -> tuple[QuadElem, QuadElem]:
        d = Fraction(1, self.den)
        return (
            QuadElem.from_int_coords(self.A * d, 0, self.D),
            QuadElem.from_int_coords(self.B * d, self.C * d, self.D),
        )

    def matrix(self) -> list[list[int]]:
        """Integer coordinate matrix (rows over (1, theta)); divide by ``den``."""
        return [[self.A, 0], [self.B, self.C]]

    def __contains__(self, x) -> bool:
        if isinstance(x, (int, Fraction)):
            x = QuadElem(x, 0, self.D)
        u, v = x.int_coords()
        U, V = u * self.den, v * self.den
        if U.denominator != 1 or V.denominator != 1:
            return False
        U, V = int(U), int(V)
        if V % self.C:
            return False
        k = V // self.C
        return (U - k * self.B) % self.A == 0

    def contains_ideal(self, other: QuadIdeal) -> bool:
        return all(g in self for g in other.basis())

    def index(self) -> Fraction:
        """Lattice covolume relative to O_K, i.e. [O_K : L] when L is inside O_K."""
        return Fraction(self.A * self.C, self.den * self.den)

    def is_fractional_ideal(self) -> bool:
        theta = _theta(self.D)
        return all(g * theta in self for g in self.basis())

    def is_integral(self) -> bool:
        return self.den == 1 and self.is_fractional_ideal()

    def _require_ideal(self, what: str) -> None:
        if not self.is_fractional_ideal():
            raise ValueError(f"{what}: lattice is not an O_K-module")

    def norm(self) -> Fraction:
        """Absolute norm of a fractional ideal."""
        return self.index()

    def conj(self) -> QuadIdeal:
        return QuadIdeal.from_generators([g.conj() for g in self.basis()], self.D)

    def scale(self, x: QuadElem) -> QuadIdeal:
        """The lattice x * L."""
        if x == 0:
            raise ValueError("scaling by zero")
        return QuadIdeal.from_generators([x * g for g in self.basis()], self.D)

    def __mul__(self, other):
        if isinstance(other, QuadIdeal):
            p, q = self.basis(), other.basis()
            return QuadIdeal.from_generators([a * b for a in p for b in q], self.D)
        if isinstance(other, (QuadElem, int, Fraction)):
            if not isinstance(other, QuadElem):
                other = QuadElem(other, 0, self.D)
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other: QuadIdeal) -> QuadIdeal:
        return QuadIdeal.from_generators(list(self.basis()) + list(other.basis()), self.D)

    def inverse(self) -> QuadIdeal:
        self._require_ideal("inverse")
        n = self.norm()
        return self.conj().scale(QuadElem(1 / n, 0, self.D))

    def __truediv__(self, other: QuadIdeal) -> QuadIdeal:
        return self * other.inverse()

    def is_unit_ideal(self) -> bool:
        return (self.den, self.A, self.B, self.C) == (1, 1, 0, 1)

    def coprime_to(self, other: QuadIdeal) -> bool:
        """For integral ideals: self + other == O_K."""
        return (self + other).is_unit_ideal()

    def __str__(self):
        a, b = self.basis()
        return f"<{a}, {b}>"


def _theta(D: int) -> QuadElem:
    if D % 4 == 1:
        return QuadElem(Fraction(1, 2), Fraction(1, 2), D)
    return QuadElem(0, Fraction(1, 2), D)


# ---------------------------------------------------------------------------
# units and field context


def _plus_cf_convergents(x: QuadElem) -> Iterator[tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, None, None
    a = x.floor()
    p1, q1 = a, 1
    yield p1, q1
    rest = x - a
    while True:
        x = rest.inverse()
        a = x.floor()
        rest = x - a
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def fundamental_unit(D: int) -> tuple[QuadElem, QuadElem]:
    """(eps0, eps): the fundamental unit > 1 and the totally positive one.

    Uses the convergents p/q of theta; the first with p - q*theta a unit
    gives eps0 = p - q*theta'.
    """
    _check_discriminant(D)
    theta = _theta(D)
    theta_c = theta.conj()
    for p, q in _plus_cf_convergents(theta):
        u = p - q * theta
        n = u.norm()
        if abs(n) == 1:
            eps0 = p - q * theta_c
            eps = eps0 if eps0.norm() == 1 else eps0 * eps0
            return eps0, eps
    raise AssertionError("unreachable")  # pragma: no cover


def fundamental_unit_bruteforce(D: int, height: int) -> Optional[QuadElem]:
    """Smallest unit u + v*theta > 1 with 0 < u, v <= height (test oracle)."""
    _check_discriminant(D)
    theta = _theta(D)
    best = None
    for v in range(1, height + 1):
        for u in range(-height, height + 1):
            x = u + v * theta
            if abs(x.norm()) == 1 and x > 1:
                if best is None or x < best:
                    best = x
    return best


@dataclass(frozen=True)
class FieldCtx:
    """The field Q(sqrt(D)) with its fundamental units."""

    D: int
    eps0: QuadElem
    eps: QuadElem

    @property
    def theta(self) -> QuadElem:
        return _theta(self.D)

    def elem(self, a: Number, b: Number = 0) -> QuadElem:
        return QuadElem(a, b, self.D)

    def unit_ideal(self) -> QuadIdeal:
        return QuadIdeal.unit(self.D)


def field(D: int) -> FieldCtx:
    eps0, eps = fundamental_unit(D)
    return FieldCtx(D, eps0, eps)


# ---------------------------------------------------------------------------
# moduli and congruences


@dataclass(frozen=True)
class Modulus:
    """An integral modulus f with its unit data eps_f = eps**r."""

    ideal: QuadIdeal
    norm: int
    epsF: QuadElem
    r: int


def modulus_data(f: QuadIdeal, ctx: FieldCtx) -> Modulus:
    if not f.is_integral():
        raise ValueError("modulus must be a nonzero integral ideal")
    one = QuadElem(1, 0, ctx.D)
    u, r = ctx.eps, 1
    while (u - one) not in f:
        u = u * ctx.eps
        r += 1
    return Modulus(f, int(f.norm()), u, r)


def congruent_one(lam: QuadElem, f: QuadIdeal) -> bool:
    """Multiplicative congruence lam == 1 mod* f.

    lam = 1 + t with t in f*d^-1 for an integral ideal d coprime to f,
    i.e. v_p(lam - 1) >= v_p(f) at every prime dividing f.
    """
    if lam == 0:
        return False
    t = lam - 1
    if t == 0:
        return True
    # denominator ideal of t: d^-1 = t*O_K + O_K, so d = (tO + O)^-1
    unit = QuadIdeal.unit(lam.D)
    dinv = QuadIdeal.principal(t) + unit
    d = dinv.inverse()
    if not d.coprime_to(f):
        return False
    return f.contains_ideal(d.scale(t))


def _lattice_box(
    alpha: QuadElem, beta: QuadElem, bound1: float, bound2: float
) -> Iterator[tuple[int, int]]:
    """Integer (m, n) with |m*alpha + n*beta| <= bound1, |conjugate| <= bound2.

    Bounds on m, n come from inverting the embedding matrix in floats with
    a safety margin; callers test candidates exactly.
    """
    a1, b1 = float(alpha), float(beta)
    a2, b2 = float(alpha.conj()), float(beta.conj())
    det = a1 * b2 - a2 * b1
    mmax = (abs(b2) * bound1 + abs(b1) * bound2) / abs(det)
    nmax = (abs(a2) * bound1 + abs(a1) * bound2) / abs(det)
    M = int(mmax * (1 + 1e-9)) + 1
    N = int(nmax * (1 + 1e-9)) + 1
    for m in range(-M, M + 1):
        for n in range(-N, N + 1):
            yield m, n


def find_generator(c: QuadIdeal, ctx: FieldCtx) -> Optional[QuadElem]:
    """Some generator of the fractional ideal c, or None if c is not principal.

    Any generator can be multiplied by a power of eps0 to land in the box
    |lam|, |lam'| <= eps0 * sqrt(N(c)); that box is searched exhaustively.
    """
    c._require_ideal("find_generator")
    N = c.norm()
    bound = float(ctx.eps0) * math.sqrt(float(N)) * (1 + 1e-9) + 1e-9
    alpha, beta = c.basis()
    # N(m alpha + n beta) as an integral binary quadratic form in (m, n)
    qa, qb, qc = alpha.norm(), (alpha * beta.conj()).trace(), beta.norm()
    L = math.lcm(qa.denominator, qb.denominator, qc.denominator, N.denominator)
    ia, ib, ic, iN = (int(v * L) for v in (qa, qb, qc, N))
    best = None
    for m, n in _lattice_box(alpha, beta, bound, bound):
        if m == 0 and n == 0:
            continue
        if abs(ia * m * m + ib * m * n + ic * n * n) == iN:
            lam = m * alpha + n * beta
            key = (abs(float(lam)) + abs(float(lam.conj())), m, n)
            if best is None or key < best[0]:
                best = (key, lam)
    return None if best is None else best[1]


def find_generator_narrow(c: QuadIdeal, f: Modulus, ctx: FieldCtx) -> Optional[QuadElem]:
    """A totally positive generator lam of c with lam == 1 mod* f, or None.

    Starting from any generator mu, every generator is +-mu*eps0**k, and the
    admissible ones form a coset of <eps_f>.  So it suffices to test
    k over one period of eps0 modulo eps_f and both signs.
    """
    mu = find_generator(c, ctx)
    if mu is None:
        return None
    period = f.r * (1 if ctx.eps0.norm() == 1 else 2)
    fid = f.ideal
    cand = mu
    for _ in range(period):
        for lam in (cand, -cand):
            if lam.sign() > 0 and lam.conj().sign() > 0 and congruent_one(lam, fid):
                return lam
        cand = cand * ctx.eps0
    return None
