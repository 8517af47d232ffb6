"""The acceptance checks, shared by ``shintani check`` and the test suite.

Each ``criterion_N`` runs one numbered check and returns a CheckResult with
the measured residuals; nothing here raises on a failed comparison.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .cfrac import check_bridge_markers
from .classdata import (
    build_datum,
    check_congruences,
    cone_locate,
    datum_bar,
    datum_star,
    enumerate_ray_classes,
    ray_class_number,
)
from .limits import (
    QuadFormData,
    check_star_theorem,
    laurent_oracle,
    partial_zeta_direct,
    rho,
    rho_oracle,
    shintani_x,
    shintani_x_bridge,
    zeta0,
    zeta0_bar,
    zq_laurent,
    zq_route,
)
from .qfield import FieldCtx, Modulus, QuadElem, QuadIdeal, field, modulus_data
from .specfun.barnes import barnes_g, barnes_zeta2_at0, double_sine, t1, t2
from .specfun.elementary import lerch_log_gamma
from .specfun.precision import to_real, work_context

__all__ = ["CheckResult", "CRITERIA", "SUITES", "run_criterion", "run_suite", "setup"]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    residuals: dict = dc_field(default_factory=dict)
    seconds: float = 0.0
    budget: float = 0.0
    notes: list = dc_field(default_factory=list)

    @property
    def in_budget(self) -> bool:
        return self.seconds < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed and self.in_budget else "FAIL"
        worst = ", ".join(f"{k}={_fmt(v)}" for k, v in self.residuals.items())
        return (f"criterion {self.number:2d} [{status}] {self.name} "
                f"({self.seconds:.1f}s / {self.budget:.0f}s) {worst}")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (int, Fraction)):
        return str(v)
    try:
        return f"{float(v):.2e}"
    except (TypeError, ValueError):
        return str(v)


def setup(D: int, modulus: QuadElem | None = None) -> tuple[FieldCtx, Modulus]:
    """Field context and modulus data; ``modulus`` is a generator (None = O_K)."""
    ctx = field(D)
    f_ideal = QuadIdeal.unit(D) if modulus is None else QuadIdeal.principal(modulus)
    return ctx, modulus_data(f_ideal, ctx)


def _golden():
    ctx, f = setup(5, QuadElem(4, -1, 5))
    return build_datum(QuadIdeal.unit(5), f, ctx)


def _trivial(D: int):
    ctx, f = setup(D)
    return build_datum(QuadIdeal.unit(D), f, ctx)


def _all_classes(ctx, f, bound: int = 60):
    expected = ray_class_number(f, ctx)
    reps = enumerate_ray_classes(f, ctx, bound, expected)
    if len(reps) != expected:
        raise ArithmeticError(f"found {len(reps)} classes, expected {expected}")
    return [build_datum(a, f, ctx) for a in reps]


# ---------------------------------------------------------------------------


GOLDEN_XY = [
    (Fraction(2, 11), Fraction(1, 11)),
    (Fraction(7, 11), Fraction(9, 11)),
    (Fraction(8, 11), Fraction(4, 11)),
    (Fraction(6, 11), Fraction(3, 11)),
    (Fraction(10, 11), Fraction(5, 11)),
]


def criterion_1(prec=None) -> CheckResult:
    d = _golden()
    cycle = [d.xy_at(k) for k in range(5)]  # k = 0..4
    eps = QuadElem(Fraction(3, 2), Fraction(1, 2), 5)
    res = {
        "xy_match": cycle == GOLDEN_XY,
        "r": d.r,
        "eps_match": d.ctx.eps == eps,
        "b_all_3": all(d.b_at(k) == 3 for k in range(1, d.rm + 1)),
    }
    ok = res["xy_match"] and d.r == 5 and res["eps_match"] and res["b_all_3"]
    return CheckResult(1, "golden datum D=5, f=(4-sqrt5)", ok, res)


X_CLOSED_FORM = "0.46431261320812694733859408560177"


def x_closed_form(ctx):
    s5 = ctx.sqrt(5)
    return ((3 + s5) / 2 - ctx.sqrt((3 * s5 - 1) / 2)) / 2


def criterion_2(prec=None) -> CheckResult:
    d = _golden()
    inv = shintani_x(d, prec)
    ctx = work_context(prec)
    r2 = abs(inv.x2 - 1)
    rx = abs(inv.x - x_closed_form(ctx))
    rref = abs(inv.x - ctx.mpf(X_CLOSED_FORM))
    res = {"|X2-1|": r2, "|X-closed|": rx, "|X-ref|": rref}
    return CheckResult(2, "X2 = 1 and X closed form", max(r2, rx, rref) < 1e-8, res)


def _class_data_sets():
    out = []
    for D in (5, 8, 12, 13, 24, 40):
        ctx, f = setup(D)
        out.append((f"D={D}", True, _all_classes(ctx, f)))
    ctx, f = setup(5, QuadElem(4, -1, 5))
    out.append(("D=5 f=(4-sqrt5)", False, _all_classes(ctx, f)))
    return out


def criterion_3(prec=None) -> CheckResult:
    fails = []
    count = 0
    for label, trivial_modulus, data in _class_data_sets():
        for d in data:
            count += 1
            z0 = zeta0(d)
            star = datum_star(d)
            if trivial_modulus:
                br = star.bridge
                if z0 != Fraction(br.n - br.m, 12):
                    fails.append(f"{label}: zeta0 {z0} != (n-m)/12")
            if z0 != zeta0_bar(d) or z0 != zeta0(datum_bar(d)):
                fails.append(f"{label}: zeta0 != zeta0 of the barred class")
            if z0 + zeta0(star.datum) != 0:
                fails.append(f"{label}: zeta0(C) + zeta0(C*) != 0")
    res = {"classes": count, "failures": len(fails)}
    return CheckResult(3, "exact zeta(0) values", not fails, res, notes=fails)


# -- criterion 4 -------------------------------------------------------------

_OMEGAS = ["0.1371", "0.2843", "0.5177", "0.7329", "1.3183", "1.7741",
           "2.6458", "3.6056", "5.3852", "9.4868"]


def _identity_grid():
    """(omega, x, y) with rational x in (0, 1], y in [0, 1): 10 x 20 points."""
    xs = [Fraction(k, 7) for k in range(1, 8)]
    ys = [Fraction(k, 5) for k in range(0, 5)]
    pairs = [(x, y) for x in xs for y in ys if (x, y) != (1, 0)]
    pairs = pairs[::max(1, len(pairs) // 20)][:20]
    return [(w, x, y) for w in _OMEGAS for x, y in pairs]


def identity_residuals(omega, x, y, prec=None) -> dict:
    """Residuals of the double sine identities at z = x omega + y."""
    ctx = work_context(prec, extra=16)
    p = ctx.prec
    w = ctx.mpf(omega)
    z = to_real(ctx, x) * w + to_real(ctx, y)
    S = lambda a, b: double_sine(a, b, p)  # noqa: E731
    s0 = S(w, z)
    r = {}
    r["reflection"] = abs(s0 * S(w, 1 + w - z) - 1)
    r["inversion"] = abs(S(1 / w, z / w) / s0 - 1)
    r["shift_omega"] = abs(2 * ctx.sin(ctx.pi * z) * S(w, z + w) / s0 - 1)
    r["shift_one"] = abs(2 * ctx.sin(ctx.pi * z / w) * S(w, z + 1) / s0 - 1)
    if w > 1:
        rhs = 2 * ctx.sin(ctx.pi * z / w) * S(w - 1, z) / S(1 - 1 / w, z / w)
        r["descent"] = abs(rhs / s0 - 1)
        # z = x (w-1) + (x+y),  z/w = (1-y)(1 - 1/w) + (x+y)
        lem = t1(w - 1, x, x + y, p) / t1(1 - 1 / w, 1 - y, x + y, p)
    else:
        rhs = 2 * ctx.sin(ctx.pi * z) * S(1 / w - 1, z / w) / S(1 - w, z)
        r["descent"] = abs(rhs / s0 - 1)
        # z/w = y (1/w - 1) + (x+y),  z = -x (1-w) + (x+y)
        lem = t2(1 / w - 1, y, x + y, p) / t2(1 - w, -x, x + y, p)
    r["lemma_T"] = abs(lem / s0 - 1)
    return r


def g_identity_residuals(omega, z, prec=None) -> dict:
    ctx = work_context(prec, extra=16)
    p = ctx.prec
    w, z = ctx.mpf(omega), ctx.mpf(z)
    G = lambda a, b: barnes_g(a, b, p)  # noqa: E731
    gz = G(w, z)
    return {
        "G(w,w)-G(w,1)": abs(G(w, w) - G(w, 1) - ctx.log(w) / 2),
        "inversion": abs(G(1 / w, z / w) - gz - barnes_zeta2_at0(w, 0, z) * ctx.log(w)),
        "shift": abs(gz - G(w, z + w) - lerch_log_gamma(z, p)),
    }


def criterion_4(prec=None) -> CheckResult:
    worst: dict = {}
    npts = 0
    for w, x, y in _identity_grid():
        npts += 1
        for k, v in identity_residuals(w, x, y, prec).items():
            worst[k] = max(worst.get(k, 0), v)
    gpts = 0
    for w in _OMEGAS:
        for z in ("0.173", "0.5", "0.917", "1.41", "2.236", "3.3"):
            gpts += 1
            for k, v in g_identity_residuals(w, z, prec).items():
                worst["G " + k] = max(worst.get("G " + k, 0), v)
    ok = npts >= 200 and gpts >= 50 and max(worst.values()) < 1e-10
    res = {"S points": npts, "G points": gpts, "worst": max(worst.values())}
    res.update(worst)
    return CheckResult(4, "double sine and G identity suite", ok, res)


# -- criteria 5, 6, 10 -------------------------------------------------------

LAURENT_CASES = [
    ("2", "0.5", Fraction(1, 2), Fraction(1, 2)),
    ("2", "0.5", Fraction(1), Fraction(0)),
    ("3", "1", Fraction(1, 3), Fraction(2, 3)),
    ("2.618033988749894848", "0.381966011250105152", Fraction(1), Fraction(0)),
    ("3.732050807568877294", "0.267949192431122706", Fraction(2, 5), Fraction(1, 5)),
    ("1.7", "0.3", Fraction(1, 4), Fraction(3, 4)),
    ("5", "0.2", Fraction(3, 4), Fraction(0)),
    ("1.25", "0.8", Fraction(1, 2), Fraction(1, 10)),
    ("7.5", "2.5", Fraction(9, 10), Fraction(1, 2)),
    ("1.1", "0.05", Fraction(1, 7), Fraction(6, 7)),
]


def criterion_5(prec=None) -> CheckResult:
    ctx = work_context(prec)
    pole_err = 0
    const_err = 0
    for w, wp, x, y in LAURENT_CASES:
        q = QuadFormData(ctx.mpf(w), ctx.mpf(wp))
        lp = zq_laurent(q, x, y, prec)
        pole_err = max(pole_err, abs(lp.poleCoeff - ctx.log(ctx.mpf(w) / ctx.mpf(wp)) / 2))
        est, _ = laurent_oracle(q, x, y, prec)
        const_err = max(const_err, abs(lp.constTerm - est))
    res = {"cases": len(LAURENT_CASES), "pole": pole_err, "const": const_err}
    return CheckResult(5, "Z_Q Laurent data vs extrapolated direct sum",
                       pole_err < 1e-12 and const_err < 1e-5, res)


def criterion_6(prec=None) -> CheckResult:
    res = {}
    ok = True
    for D in (5, 12):
        d = _trivial(D)
        lp = rho(d, prec)
        ctx = work_context(prec)
        logsum = ctx.fsum(ctx.log(w.to_mpf(ctx)) for w in d.omega)
        est, _ = rho_oracle(d, prec)
        pe, ce = abs(lp.poleCoeff - logsum), abs(lp.constTerm - est)
        res[f"D={D} pole"] = pe
        res[f"D={D} const"] = ce
        ok = ok and pe < 1e-12 and ce < 1e-5
    return CheckResult(6, "limit formula vs direct-summation oracle", ok, res)


def criterion_10(prec=None, norm_bound: int = 100_000) -> CheckResult:
    res = {}
    ok = True
    for D in (5, 12):
        ctx, f = setup(D)
        for i, d in enumerate(_all_classes(ctx, f)):
            direct = partial_zeta_direct(d.a, f, ctx, 2, norm_bound, d=d)
            route = zq_route(d, 2, prec)
            err = abs(direct.value - float(route))
            res[f"D={D} class {i}"] = err
            ok = ok and err < 1e-8
    return CheckResult(10, "partial zeta at s=2: lattice sum vs Z_Q route", ok, res)


# -- criteria 7, 8 -----------------------------------------------------------


def _bridge_configs():
    out = [(f"D={D}", _trivial(D)) for D in (5, 12, 13)]
    out.append(("D=5 f=(4-sqrt5)", _golden()))
    return out


def criterion_7(prec=None) -> CheckResult:
    res = {}
    for label, d in _bridge_configs():
        star = datum_star(d)
        res[label] = check_congruences(d, star) and check_bridge_markers(d.cf, star.bridge)
    return CheckResult(7, "bridge markers and star congruences", all(res.values()), res)


def criterion_8(prec=None) -> CheckResult:
    res = {}
    ok = True
    notes = []
    for label, d in _bridge_configs():
        star = datum_star(d)
        r1, r2 = check_star_theorem(d, star, prec)
        inv = shintani_x(d, prec)
        b1, b2 = shintani_x_bridge(d, star, prec)
        route = max(abs(b1 - inv.x1), abs(b2 - inv.x2))
        res[f"{label} X1X1*-1"] = abs(r1)
        res[f"{label} X2/X2*-1"] = abs(r2)
        res[f"{label} routes"] = route
        good = max(abs(r1), abs(r2), route) < 1e-8
        if not good:
            notes.append(f"{label}: X1(C)={inv.x1}, X1(C*)X1(C)-1={r1}")
        ok = ok and good
    return CheckResult(8, "star theorem and two X routes", ok, res, notes=notes)


# -- criterion 9 -------------------------------------------------------------


def cone_points(d, bound: int = 20):
    """Elements of z + b in X with both X-coordinates in (0, bound] x [0, bound]."""
    e = d.f.epsF.inverse()
    w, z = d.omega0, d.z
    # beta = z + m + n w has Y = beta.b / e.b, independent of m
    n_lo = math.floor(min((-z.b) / w.b, (bound * e.b - z.b) / w.b)) - 1
    n_hi = math.ceil(max((-z.b) / w.b, (bound * e.b - z.b) / w.b)) + 1
    for n in range(n_lo, n_hi + 1):
        c = z + n * w
        Y = c.b / e.b
        if not 0 <= Y <= bound:
            continue
        X0 = c.a - Y * e.a
        for m in range(math.floor(-X0) + 1, math.floor(bound - X0) + 1):
            yield c + m


def criterion_9(prec=None) -> CheckResult:
    d = _golden()
    cells: dict[int, int] = {}
    npts = 0
    errors = 0
    for beta in cone_points(d, 20):
        npts += 1
        try:
            k, _, _ = cone_locate(beta, d)
        except ArithmeticError:
            errors += 1
            continue
        cells[k] = cells.get(k, 0) + 1
    res = {"points": npts, "non-unique": errors, "cells hit": len(cells)}
    return CheckResult(9, "cone decomposition is a partition", npts >= 400 and errors == 0, res)


# ---------------------------------------------------------------------------

CRITERIA: dict[int, tuple[Callable, float]] = {
    1: (criterion_1, 1),
    2: (criterion_2, 30),
    3: (criterion_3, 10),
    4: (criterion_4, 120),
    5: (criterion_5, 300),
    6: (criterion_6, 300),
    7: (criterion_7, 5),
    8: (criterion_8, 120),
    9: (criterion_9, 10),
    10: (criterion_10, 60),
}

SUITES = {
    "identities": [4],
    "datum": [1, 7, 9],
    "zeta0": [3],
    "laurent": [5, 6, 10],
    "shintani": [2, 8],
    "all": list(range(1, 11)),
}


def run_criterion(n: int, prec=None) -> CheckResult:
    fn, budget = CRITERIA[n]
    t0 = time.perf_counter()
    out = fn(prec)
    out.seconds = time.perf_counter() - t0
    out.budget = budget
    return out


def run_suite(name: str, prec=None) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [run_criterion(n, prec) for n in SUITES[name]]
