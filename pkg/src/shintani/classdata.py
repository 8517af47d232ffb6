"""Decomposition data of narrow ray classes.

For a class C with integral representative a coprime to f we fix a reduced
omega, the module b = <1, omega> and a totally positive z with b = (z) a^-1 f.
The set z + b is then split into cones spanned by consecutive A_k, and the
rational coordinates (x_k, y_k) of z in the basis (A_{k-1}, A_k) are the datum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cfrac import (
    BridgeData,
    MinusCF,
    a_sequence,
    bridge,
    check_bridge_markers,
    is_reduced,
    minus_cf,
    omega_sequence,
    reduce_ideal,
)
from .qfield import (
    FieldCtx,
    Modulus,
    QuadElem,
    QuadIdeal,
    find_generator_narrow,
    frac_angle,
    frac_brace,
    is_totally_positive,
)

__all__ = [
    "DecompositionDatum",
    "StarDatum",
    "build_datum",
    "datum_from_parts",
    "shift_datum",
    "datum_bar",
    "find_mu",
    "datum_star",
    "check_congruences",
    "check_bridge_markers",
    "enumerate_ray_classes",
    "integral_ideals",
    "same_ray_class",
    "narrow_class_number",
    "unit_residue_count",
    "ray_class_number",
    "cone_locate",
    "solve_coords",
]


def solve_coords(w: QuadElem, p: QuadElem, q: QuadElem) -> tuple[Fraction, Fraction]:
    """Rational (u, v) with w = u*p + v*q (p, q linearly independent over Q)."""
    det = p.a * q.b - p.b * q.a
    if det == 0:
        raise ValueError("basis is degenerate")
    u = (w.a * q.b - w.b * q.a) / det
    v = (p.a * w.b - p.b * w.a) / det
    return u, v


@dataclass(frozen=True)
class DecompositionDatum:
    """Cone-decomposition datum of a narrow ray class.

    Sequences are stored for one full period k = 1..rm; the ``*_at``
    accessors extend them periodically (A_k is not periodic and is stored
    for k = -1..rm).
    """

    ctx: FieldCtx
    f: Modulus
    a: QuadIdeal
    bIdeal: QuadIdeal
    z: QuadElem
    cf: MinusCF
    r: int
    omega: tuple[QuadElem, ...]
    A: tuple[QuadElem, ...]
    xy: tuple[tuple[Fraction, Fraction], ...]
    zk: tuple[QuadElem, ...]

    @property
    def m(self) -> int:
        return self.cf.m

    @property
    def rm(self) -> int:
        return self.r * self.cf.m

    @property
    def omega0(self) -> QuadElem:
        return self.omega[-1]

    def omega_at(self, k: int) -> QuadElem:
        return self.omega[(k - 1) % self.rm]

    def b_at(self, k: int) -> int:
        return self.cf.b(k)

    def xy_at(self, k: int) -> tuple[Fraction, Fraction]:
        return self.xy[(k - 1) % self.rm]

    def z_at(self, k: int) -> QuadElem:
        return self.zk[(k - 1) % self.rm]

    def A_at(self, k: int) -> QuadElem:
        """A_k for -1 <= k <= rm."""
        if k == -1:
            return self.omega0
        return self.A[k]


@dataclass(frozen=True)
class StarDatum:
    """The datum of C* = C C_2 built through the plus-CF bridge."""

    datum: DecompositionDatum
    bridge: BridgeData
    mu2: QuadElem

    @property
    def zStar(self) -> QuadElem:
        return self.datum.z

    @property
    def xyStar(self):
        return self.datum.xy

    @property
    def zkStar(self):
        return self.datum.zk


def datum_from_parts(
    a: QuadIdeal, f: Modulus, ctx: FieldCtx, omega0: QuadElem, z: QuadElem
) -> DecompositionDatum:
    """Assemble and validate the datum for a given reduced omega_0 and z."""
    D = ctx.D
    if not is_reduced(omega0):
        raise ValueError("omega_0 is not reduced")
    if not is_totally_positive(z):
        raise ValueError("z must be totally positive")
    one = QuadElem(1, 0, D)
    b_ideal = QuadIdeal.module(one, omega0)
    if QuadIdeal.principal(z) * a.inverse() * f.ideal != b_ideal:
        raise ArithmeticError("b != (z) a^-1 f")
    cf = minus_cf(omega0)
    rm = f.r * cf.m
    ws = omega_sequence(cf, omega0, rm + 1)
    A = a_sequence(cf, omega0, rm)
    if A[rm] != f.epsF.inverse():
        raise ArithmeticError("A_rm != eps_f^-1")
    prod = one
    for w in ws[1:]:
        prod = prod * w
    if prod != f.epsF:
        raise ArithmeticError("product of omega_k != eps_f")
    xy = []
    for k in range(1, rm + 1):
        u, v = solve_coords(z, A[k - 1], A[k])
        xy.append((frac_angle(u), frac_brace(v)))
    # the recurrence x_{k+1} = <b_k x_k + y_k>, y_{k+1} = 1 - x_k
    for k in range(1, rm + 1):
        x, y = xy[k - 1]
        x2, y2 = xy[k % rm]
        if x2 != frac_angle(cf.b(k) * x + y) or y2 != 1 - x:
            raise ArithmeticError(f"coordinate recurrence fails at k={k}")
    zk = tuple(x * ws[k] + y for k, (x, y) in enumerate(xy, start=1))
    return DecompositionDatum(
        ctx=ctx,
        f=f,
        a=a,
        bIdeal=b_ideal,
        z=z,
        cf=cf,
        r=f.r,
        omega=tuple(ws[1:]),
        A=tuple(A),
        xy=tuple(xy),
        zk=zk,
    )


def shift_datum(d: DecompositionDatum, j: int) -> DecompositionDatum:
    """The same class re-anchored at omega_j: b becomes <1, omega_j> = A_j^-1 b."""
    j %= d.rm
    if j == 0:
        return d
    return datum_from_parts(d.a, d.f, d.ctx, d.omega_at(j), d.z * d.A_at(j).inverse())


def build_datum(a: QuadIdeal, f: Modulus, ctx: FieldCtx) -> DecompositionDatum:
    """Datum of the class of the integral ideal ``a`` (coprime to f)."""
    if not a.is_integral():
        raise ValueError("representative must be an integral ideal")
    if not a.coprime_to(f.ideal):
        raise ValueError("representative must be coprime to the modulus")
    c = a.inverse() * f.ideal
    q, omega = reduce_ideal(c, ctx)
    z = q.inverse()
    if not is_totally_positive(z):  # pragma: no cover - reduce_ideal guarantees it
        raise RuntimeError("reduction produced a z that is not totally positive")
    return datum_from_parts(a, f, ctx, omega, z)


def find_mu(f: Modulus, signs: tuple[int, int], ctx: FieldCtx) -> QuadElem:
    """Element of 1 + f with sign pattern ``signs`` = (sign mu, sign mu').

    Lattice points m*alpha + n*beta of f are scanned by growing square
    shells, and within a shell by (|m|+|n|, m, n).
    """
    s1, s2 = signs
    if (s1, s2) not in ((-1, 1), (1, -1)):
        raise ValueError("signs must be (-1, +1) or (+1, -1)")
    alpha, beta = f.ideal.basis()
    h = 1
    while True:
        shell = [
            (m, n)
            for m in range(-h, h + 1)
            for n in range(-h, h + 1)
            if max(abs(m), abs(n)) == h
        ]
        shell.sort(key=lambda t: (abs(t[0]) + abs(t[1]), t[0], t[1]))
        for m, n in shell:
            mu = 1 + m * alpha + n * beta
            if mu.sign() == s1 and mu.conj().sign() == s2:
                return mu
        h += 1


def datum_bar(d: DecompositionDatum) -> DecompositionDatum:
    """Datum of C-bar = C C_1 C_2, whose coset is -z + b.

    The representative is a*(nu) with nu = mu_1 mu_2 totally negative and
    nu = 1 mod f; then -z*nu is a totally positive z for it.
    """
    nu = find_mu(d.f, (-1, 1), d.ctx) * find_mu(d.f, (1, -1), d.ctx)
    out = datum_from_parts(d.a * nu, d.f, d.ctx, d.omega0, -(d.z * nu))
    expect = tuple((frac_angle(-x), frac_brace(-y)) for x, y in d.xy)
    if out.xy != expect:
        raise ArithmeticError("datum_bar: coordinates disagree with (<-x>, {-y})")
    return out


def datum_star(d: DecompositionDatum, mu2: Optional[QuadElem] = None) -> StarDatum:
    """Datum of C* = C C_2 via the plus-CF bridge (requires omega_0 > 2)."""
    br = bridge(d.cf, d.omega0)
    if mu2 is None:
        mu2 = find_mu(d.f, (1, -1), d.ctx)
    elif not (mu2.sign() > 0 > mu2.conj().sign() and (mu2 - 1) in d.f.ideal):
        raise ValueError("mu2 must lie in 1 + f with mu2 > 0 > mu2'")
    xi1 = br.xi[1]
    z_star = d.z * xi1 * mu2
    star = datum_from_parts(d.a * mu2, d.f, d.ctx, br.omegaStar, z_star)
    if star.bIdeal != d.bIdeal.scale(xi1):
        raise ArithmeticError("b* != xi_1 b")
    return StarDatum(star, br, mu2)


def _in_module(w: QuadElem, xi: QuadElem) -> bool:
    """w in the Z-module <1, xi> (xi irrational)."""
    v = w.b / xi.b
    u = w.a - v * xi.a
    return u.denominator == 1 and v.denominator == 1


def check_congruences(d: DecompositionDatum, s: StarDatum) -> bool:
    """The congruences linking z_{S_j} and z*_{T_j} for j = 1..r*l."""
    br = s.bridge
    star = s.datum
    for j in range(1, d.r * br.l + 1):
        zs = d.z_at(br.S_at(j))
        x2j, x2j1 = br.xi_at(2 * j), br.xi_at(2 * j + 1)
        if not _in_module(zs - x2j * star.z_at(br.T_at(j - 1)), x2j):
            return False
        if not _in_module(x2j1 * zs - star.z_at(br.T_at(j)), x2j1):
            return False
    return True


# ---------------------------------------------------------------------------
# ray classes


def integral_ideals(D: int, n: int) -> list[QuadIdeal]:
    """All integral ideals of norm n, in HNF order."""
    out = []
    for C in range(1, n + 1):
        if n % C:
            continue
        A = n // C
        for B in range(A):
            L = QuadIdeal(D, 1, A, B, C)
            if L.is_fractional_ideal():
                out.append(L)
    return out


def same_ray_class(a1: QuadIdeal, a2: QuadIdeal, f: Modulus, ctx: FieldCtx) -> bool:
    return find_generator_narrow(a1 * a2.inverse(), f, ctx) is not None


def enumerate_ray_classes(
    f: Modulus, ctx: FieldCtx, normBound: int, expected: Optional[int] = None
) -> list[QuadIdeal]:
    """One integral representative (smallest norm first) per narrow ray class found.

    The scan stops early once ``expected`` classes have been found.
    """
    reps: list[QuadIdeal] = []
    for n in range(1, normBound + 1):
        for a in integral_ideals(ctx.D, n):
            if not a.coprime_to(f.ideal):
                continue
            if not any(same_ray_class(a, r, f, ctx) for r in reps):
                reps.append(a)
                if expected is not None and len(reps) >= expected:
                    return reps
    return reps


def narrow_class_number(D: int) -> int:
    """Number of minus-CF cycles of reduced surds (b + sqrt D)/(2a) of discriminant D."""
    surds = set()
    for b in range(1, D + 1):
        for a in range(1, D + 1):
            num = b * b - D
            if num <= 0 or num % (4 * a):
                continue
            c = num // (4 * a)
            if b > a + c:
                surds.add(QuadElem(Fraction(b, 2 * a), Fraction(1, 2 * a), D))
    cycles = 0
    while surds:
        w0 = surds.pop()
        cycles += 1
        w = w0
        while True:
            w = (w.ceil() - w).inverse()
            if w == w0:
                break
            surds.discard(w)
    return cycles


def unit_residue_count(f: QuadIdeal) -> int:
    """|(O_K/f)^*| by enumerating residues u + v*theta, 0 <= u < A, 0 <= v < C."""
    if not f.is_integral():
        raise ValueError("modulus must be integral")
    D = f.D
    count = 0
    for u in range(f.A):
        for v in range(f.C):
            x = QuadElem.from_int_coords(u, v, D)
            if x == 0:
                if f.is_unit_ideal():
                    count += 1
                continue
            if QuadIdeal.principal(x).coprime_to(f):
                count += 1
    return count


def ray_class_number(f: Modulus, ctx: FieldCtx) -> int:
    """|Cl_K^+(f)| = h^+ * |(O/f)^*| / r."""
    n = narrow_class_number(ctx.D) * unit_residue_count(f.ideal)
    if n % f.r:
        raise ArithmeticError("class number formula gave a non-integer")
    return n // f.r


# ---------------------------------------------------------------------------
# cones


def cone_locate(beta: QuadElem, d: DecompositionDatum) -> tuple[int, int, int]:
    """The unique (k, p, q) with beta = (x_k+p) A_{k-1} + (y_k+q) A_k."""
    if (beta - d.z) not in d.bIdeal:
        raise ValueError("beta is not in z + b")
    if not is_totally_positive(beta):
        raise ValueError("beta is not totally positive")
    e = d.f.epsF.inverse()
    y = beta.b / e.b
    x = beta.a - y * e.a
    if not (x > 0 and y >= 0):
        raise ValueError("beta lies outside the fundamental domain X")
    hits = []
    for k in range(1, d.rm + 1):
        u, v = solve_coords(beta, d.A_at(k - 1), d.A_at(k))
        xk, yk = d.xy_at(k)
        p, q = u - xk, v - yk
        if p.denominator == 1 and q.denominator == 1 and p >= 0 and q >= 0:
            hits.append((k, int(p), int(q)))
    if len(hits) != 1:
        raise ArithmeticError(f"cone_locate: {len(hits)} cells contain beta")
    return hits[0]
