"""Command line interface: ``shintani {datum,zeta0,rho,shintani,check}``.

Elements are written ``a,b[,d]`` for (a + b sqrt D)/d.  A modulus or class
ideal is either one element (the principal ideal it generates) or two
elements ``a,b[,d];a,b[,d]`` spanning it over Z.  Output is JSON with a fixed
key order; exact rationals are "p/q" strings and reals are decimal strings
tagged with their precision.

Exit status: 0 success, 1 invalid input, 2 a --verify or check comparison failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath

from . import __version__
from .checks import SUITES, run_criterion
from .classdata import build_datum, datum_from_parts, datum_star
from .limits import (
    check_star_theorem,
    partial_zeta_direct,
    rho,
    rho_oracle,
    shintani_x,
    shintani_x_bridge,
    zeta0,
    zeta0_bar,
    zq_route,
)
from .qfield import QuadElem, QuadIdeal, field, modulus_data
from .specfun.precision import MIN_PREC

ENV_PRECISION = "SHINTANI_PRECISION_BITS"
DEFAULT_PRECISION = 64
DEFAULT_NORM_BOUND = 20000

TOL_RHO = 1e-5
TOL_ROUTE = 1e-8
TOL_X = 1e-8
TOL_PRODUCT = 1e-10


class InputError(ValueError):
    """Malformed or inconsistent command line input (exit status 1)."""


# ---------------------------------------------------------------------------
# parsing


def _int_field(text: str, where: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise InputError(f"{where}: {text.strip()!r} is not an integer") from None


def parse_element(text: str, D: int, where: str = "element") -> QuadElem:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise InputError(f"{where}: expected 'a,b' or 'a,b,d', got {text!r}")
    a = _int_field(parts[0], f"{where}, field 1")
    b = _int_field(parts[1], f"{where}, field 2")
    d = _int_field(parts[2], f"{where}, field 3") if len(parts) == 3 else 1
    if d == 0:
        raise InputError(f"{where}, field 3: denominator must be nonzero")
    return QuadElem(Fraction(a, d), Fraction(b, d), D)


def parse_ideal(text: str, D: int, where: str) -> QuadIdeal:
    pieces = text.split(";")
    if len(pieces) == 1:
        x = parse_element(pieces[0], D, f"{where}, element 1")
        if x == 0:
            raise InputError(f"{where}: the zero element generates no ideal")
        return QuadIdeal.principal(x)
    if len(pieces) == 2:
        x, y = (parse_element(p, D, f"{where}, element {i}") for i, p in enumerate(pieces, 1))
        try:
            L = QuadIdeal.module(x, y)
        except (ValueError, ArithmeticError) as exc:
            raise InputError(f"{where}: {exc}") from None
        if not L.is_fractional_ideal():
            raise InputError(f"{where}: the Z-module <{x}, {y}> is not an O_K-ideal")
        return L
    raise InputError(f"{where}: expected one element or two separated by ';'")


def _precision(args) -> int:
    if args.precision_bits is not None:
        bits = args.precision_bits
        where = "--precision-bits"
    else:
        env = os.environ.get(ENV_PRECISION)
        if env is None:
            return DEFAULT_PRECISION
        where = ENV_PRECISION
        try:
            bits = int(env)
        except ValueError:
            raise InputError(f"{where}: {env!r} is not an integer") from None
    if bits < MIN_PREC:
        raise InputError(f"{where}: precision must be at least {MIN_PREC} bits")
    return bits


# ---------------------------------------------------------------------------
# serialization


def q_str(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def elem_json(x: QuadElem) -> dict:
    return {"a": q_str(x.a), "b": q_str(x.b)}


def elem_from_json(obj, D: int, where: str) -> QuadElem:
    try:
        return QuadElem(Fraction(obj["a"]), Fraction(obj["b"]), D)
    except (KeyError, TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{where}: expected {{'a': 'p/q', 'b': 'p/q'}}") from None


def ideal_json(L: QuadIdeal) -> dict:
    theta = "(1+sqrt(D))/2" if L.D % 4 == 1 else "sqrt(D)"
    return {"denominator": L.den, "matrix": L.matrix(), "basis": f"(1, {theta})"}


def ideal_from_json(obj, D: int, where: str) -> QuadIdeal:
    try:
        den = int(obj["denominator"])
        (A, z), (B, C) = obj["matrix"]
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{where}: expected {{'denominator': d, 'matrix': [[A, 0], [B, C]]}}") from None
    if den <= 0 or z != 0 or A <= 0 or C <= 0:
        raise InputError(f"{where}: matrix is not in Hermite normal form")
    gens = [QuadElem.from_int_coords(Fraction(A, den), 0, D),
            QuadElem.from_int_coords(Fraction(B, den), Fraction(C, den), D)]
    L = QuadIdeal.from_generators(gens, D)
    if not L.is_fractional_ideal():
        raise InputError(f"{where}: not an O_K-ideal")
    return L


def real_json(v, prec: int) -> dict:
    digits = max(1, int(prec * math.log10(2)))
    return {"value": mpmath.nstr(v, digits, strip_zeros=False), "precision_bits": prec}


# ---------------------------------------------------------------------------
# jobs


def _datum_from_args(args):
    """(datum, prec) from either the flags or a datum JSON file."""
    prec = _precision(args)
    if getattr(args, "from_json", None):
        return _datum_from_file(args.from_json), prec
    if args.D is None:
        raise InputError("--D is required (or --from-json)")
    try:
        ctx = field(args.D)
    except ValueError as exc:
        raise InputError(f"--D: {exc}") from None
    f_ideal = parse_ideal(args.modulus, args.D, "--modulus")
    if not f_ideal.is_integral():
        raise InputError("--modulus: the modulus must be an integral ideal")
    a = parse_ideal(args.ideal, args.D, "--ideal")
    f = modulus_data(f_ideal, ctx)
    try:
        return build_datum(a, f, ctx), prec
    except ValueError as exc:
        raise InputError(f"--ideal: {exc}") from None


def _datum_from_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"--from-json: cannot read {path}: {exc}") from None
    try:
        D = int(obj["D"])
    except (KeyError, TypeError, ValueError):
        raise InputError("--from-json: missing integer key 'D'") from None
    ctx = field(D)
    f = modulus_data(ideal_from_json(obj.get("modulus"), D, "--from-json modulus"), ctx)
    a = ideal_from_json(obj.get("ideal"), D, "--from-json ideal")
    w = elem_from_json(obj.get("omega0"), D, "--from-json omega0")
    z = elem_from_json(obj.get("z"), D, "--from-json z")
    try:
        d = datum_from_parts(a, f, ctx, w, z)
    except (ValueError, ArithmeticError) as exc:
        raise InputError(f"--from-json: inconsistent datum: {exc}") from None
    if "xy" in obj and [[q_str(x), q_str(y)] for x, y in d.xy] != obj["xy"]:
        raise InputError("--from-json: stored xy table does not match the rebuilt datum")
    return d


def _header(d) -> dict:
    return {
        "D": d.ctx.D,
        "modulus": ideal_json(d.f.ideal),
        "ideal": ideal_json(d.a),
    }


def cmd_datum(args) -> tuple[dict, bool]:
    d, _ = _datum_from_args(args)
    out = {
        "D": d.ctx.D,
        "modulus": ideal_json(d.f.ideal),
        "r": d.r,
        "epsF": elem_json(d.f.epsF),
        "b_period": list(d.cf.period),
        "xy": [[q_str(x), q_str(y)] for x, y in d.xy],
        "ideal": ideal_json(d.a),
        "omega0": elem_json(d.omega0),
        "z": elem_json(d.z),
        "b": ideal_json(d.bIdeal),
    }
    return out, True


def cmd_zeta0(args) -> tuple[dict, bool]:
    d, _ = _datum_from_args(args)
    z0 = zeta0(d)
    out = _header(d)
    out["zeta0"] = q_str(z0)
    ok = True
    if args.verify:
        star = datum_star(d)
        checks = {
            "bar_equal": zeta0_bar(d) == z0,
            "star_sum_zero": z0 + zeta0(star.datum) == 0,
        }
        if d.f.ideal.is_unit_ideal():
            br = star.bridge
            checks["n_minus_m_over_12"] = z0 == Fraction(br.n - br.m, 12)
        ok = all(checks.values())
        out["verify"] = {**checks, "passed": ok}
    return out, ok


def cmd_rho(args) -> tuple[dict, bool]:
    d, prec = _datum_from_args(args)
    lp = rho(d, prec)
    out = _header(d)
    out["pole"] = real_json(lp.poleCoeff, prec)
    out["constant"] = real_json(lp.constTerm, prec)
    ok = True
    if args.verify:
        ctx = mpmath.MPContext()
        ctx.prec = prec + 24
        logsum = ctx.fsum(ctx.log(w.to_mpf(ctx)) for w in d.omega)
        est, spread = rho_oracle(d, prec)
        pz = partial_zeta_direct(d.a, d.f, d.ctx, 2, args.norm_bound, d=d)
        route = zq_route(d, 2, prec)
        r_pole = abs(lp.poleCoeff - logsum)
        r_const = abs(lp.constTerm - est)
        r_route = abs(pz.value - float(route))
        ok = r_pole < 1e-12 and r_const < TOL_RHO and r_route < TOL_ROUTE
        out["verify"] = {
            "oracle_constant": real_json(est, prec),
            "oracle_spread": f"{float(spread):.3e}",
            "constant_residual": f"{float(r_const):.3e}",
            "pole_residual": f"{float(r_pole):.3e}",
            "route_residual_s2": f"{r_route:.3e}",
            "norm_bound": args.norm_bound,
            "passed": ok,
        }
    return out, ok


def cmd_shintani(args) -> tuple[dict, bool]:
    d, prec = _datum_from_args(args)
    inv = shintani_x(d, prec)
    out = _header(d)
    out["x"] = real_json(inv.x, prec)
    out["x1"] = real_json(inv.x1, prec)
    out["x2"] = real_json(inv.x2, prec)
    ok = True
    if args.verify:
        star = datum_star(d)
        b1, b2 = shintani_x_bridge(d, star, prec)
        r_route = max(abs(b1 - inv.x1), abs(b2 - inv.x2))
        r_prod = abs(inv.x - inv.x1 * inv.x2)
        s1, s2 = check_star_theorem(d, star, prec)
        # with z in b every T1 argument of the bridge product is a pole of S
        applicable = d.z not in d.bIdeal
        star_ok = max(abs(s1), abs(s2)) < TOL_X
        ok = r_route < TOL_X and r_prod < TOL_PRODUCT and (star_ok or not applicable)
        out["verify"] = {
            "route_residual": f"{float(r_route):.3e}",
            "product_residual": f"{float(r_prod):.3e}",
            "star_x1_residual": f"{float(s1):.3e}",
            "star_x2_residual": f"{float(s2):.3e}",
            "star_theorem_applicable": applicable,
            "passed": ok,
        }
    return out, ok


def _run_one(args):
    n, prec = args
    return run_criterion(n, prec)


def cmd_check(args) -> tuple[dict, bool]:
    prec = _precision(args)
    numbers = SUITES[args.suite]
    jobs = [(n, prec) for n in numbers]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    rows = []
    for r in results:
        rows.append({
            "criterion": r.number,
            "name": r.name,
            "passed": bool(r.passed and r.in_budget),
            "seconds": round(r.seconds, 3),
            "budget_seconds": r.budget,
            "residuals": {k: _res_str(v) for k, v in r.residuals.items()},
            "notes": list(r.notes),
        })
    ok = all(row["passed"] for row in rows)
    return {"suite": args.suite, "precision_bits": prec, "results": rows, "passed": ok}, ok


def _res_str(v):
    if isinstance(v, (bool, int)):
        return v
    if isinstance(v, Fraction):
        return q_str(v)
    return f"{float(v):.3e}"


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # validation errors exit with status 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None,
                        help=f"working precision (default ${ENV_PRECISION} or {DEFAULT_PRECISION})")

    job = argparse.ArgumentParser(add_help=False, parents=[common])
    job.add_argument("--D", type=int, help="fundamental discriminant D > 0")
    job.add_argument("--modulus", default="1,0", help="modulus f (default O_K)")
    job.add_argument("--ideal", default="1,0", help="integral class representative (default O_K)")
    job.add_argument("--from-json", help="rebuild the datum from a 'datum' report")
    job.add_argument("--verify", action="store_true", help="also run the brute-force oracles")
    job.add_argument("--norm-bound", type=int, default=DEFAULT_NORM_BOUND,
                     help="ideal norm bound of the lattice-point oracle")

    p = _Parser(prog="shintani", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn, text in (
        ("datum", cmd_datum, "cone-decomposition datum of a ray class"),
        ("zeta0", cmd_zeta0, "exact zeta(0, C)"),
        ("rho", cmd_rho, "Laurent data of zeta(s, C) at s = 1"),
        ("shintani", cmd_shintani, "the invariants X, X1, X2"),
    ):
        sp = sub.add_parser(name, parents=[job], help=text)
        sp.set_defaults(func=fn)
    sc = sub.add_parser("check", parents=[common], help="run acceptance suites")
    sc.add_argument("suite", choices=list(SUITES))
    sc.add_argument("--jobs", type=int, default=1, help="run criteria in parallel processes")
    sc.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, ok = args.func(args)
    except InputError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    except ValueError as exc:  # domain errors raised by the library
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    print(json.dumps(report, indent=2, ensure_ascii=False))
    return 0 if ok else 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
