from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import pytest

from conftest import make_datum
from shintani.classdata import (
    build_datum,
    datum_bar,
    datum_star,
    enumerate_ray_classes,
    find_mu,
    ray_class_number,
    same_ray_class,
    shift_datum,
)
from shintani.limits import (
    QuadFormData,
    ShintaniInvariants,
    _eval_terms,
    bridge_terms,
    character_sum_logX,
    check_star_theorem,
    laurent_oracle,
    p_function,
    partial_zeta_direct,
    rho,
    richardson,
    shintani_x,
    shintani_x_bridge,
    zeta0,
    zeta0_bar,
    zq_direct,
    zq_integral,
    zq_laurent,
    zq_route,
)
from shintani.qfield import QuadElem, QuadIdeal, field, modulus_data

F = Fraction


def mpf(v):
    return mpmath.mpf(v)


class TestZetaAtZero:
    def test_examples(self, golden, trivial5, trivial12):
        assert zeta0(golden) == 0
        assert zeta0(trivial12) == F(1, 12)
        assert zeta0(trivial5) == 0

    @pytest.mark.parametrize("D", [5, 8, 12, 13, 24, 40])
    def test_bar_and_star(self, D):
        d = make_datum(D)
        z = zeta0(d)
        assert zeta0_bar(d) == z == zeta0(datum_bar(d))
        s = datum_star(d)
        assert z + zeta0(s.datum) == 0
        assert z == F(s.bridge.n - s.bridge.m, 12)


class TestLaurent:
    def test_pole(self):
        lp = zq_laurent(QuadFormData(2, F(1, 2)), F(1, 2), F(1, 2))
        assert abs(lp.poleCoeff - mpmath.log(2)) < 1e-15
        lp = zq_laurent(QuadFormData(mpf("1.0000001"), 1), 1, 1)
        assert abs(lp.poleCoeff) < 1e-7

    def test_constant_vs_oracle(self):
        q = QuadFormData(2, F(1, 2))
        est, spread = laurent_oracle(q, F(1, 2), F(1, 2))
        c = p_function(2, F(1, 2), F(1, 2), F(1, 2))
        assert abs(c - est) < 1e-6 and spread < 1e-6

    def test_domain(self):
        with pytest.raises(ValueError):
            zq_laurent(QuadFormData(F(1, 2), 2), 1, 1)
        with pytest.raises(ValueError):
            zq_direct(QuadFormData(2, F(1, 2)), 1, 1, 1)

    def test_direct_positive_and_decreasing(self):
        q = QuadFormData(2, F(1, 2))
        v2, v3 = zq_direct(q, 1, 1, 2), zq_direct(q, 1, 1, 3)
        assert 0 < v3 < v2

    @pytest.mark.parametrize("s", ["2", "1.0625"])
    def test_direct_vs_integral_representation(self, s):
        q = QuadFormData(QuadElem(F(3, 2), F(1, 2), 5), QuadElem(F(3, 2), F(-1, 2), 5))
        a = zq_direct(q, F(2, 11), F(1, 11), mpf(s))
        b = zq_integral(q, F(2, 11), F(1, 11), mpf(s))
        assert abs(a - b) < 1e-12 * abs(a)

    def test_richardson_exact_on_cubics(self):
        hs = [F(1, 2 ** j) for j in range(3, 9)]
        vals = [7 + 3 * h - 2 * h ** 2 + h ** 3 for h in hs]
        est, spread = richardson(hs, vals, 3)
        assert est == 7 and spread == 0
        with pytest.raises(ValueError):
            richardson(hs[:3], vals[:3], 3)


class TestPartialZeta:
    def test_route_equality_golden(self, golden):
        pz = partial_zeta_direct(golden.a, golden.f, golden.ctx, 2, 20000, d=golden)
        assert abs(pz.value - float(zq_route(golden, 2))) < 1e-8
        assert pz.errorEstimate < 1e-8

    def test_monotone_in_s(self, trivial12):
        d = trivial12
        v2 = partial_zeta_direct(d.a, d.f, d.ctx, 2, 5000, d=d).value
        v3 = partial_zeta_direct(d.a, d.f, d.ctx, 3, 5000, d=d).value
        assert 0 < v3 < v2
        with pytest.raises(ValueError):
            partial_zeta_direct(d.a, d.f, d.ctx, 1, 100, d=d)

    def _classes(self, D):
        ctx = field(D)
        f = modulus_data(QuadIdeal.unit(D), ctx)
        reps = enumerate_ray_classes(f, ctx, 30, ray_class_number(f, ctx))
        return [build_datum(a, f, ctx) for a in reps]

    @staticmethod
    def _l2(chi, q):
        return sum(chi(a) * mpmath.zeta(2, mpf(a) / q) for a in range(1, q)) / q ** 2

    def test_d12_classes_sum_to_dedekind_zeta(self):
        ds = self._classes(12)
        vals = [partial_zeta_direct(d.a, d.f, d.ctx, 2, 20000, d=d).value for d in ds]
        chi12 = lambda n: {1: 1, 11: 1, 5: -1, 7: -1}.get(n % 12, 0)  # noqa: E731
        assert abs(sum(vals) - mpmath.zeta(2) * self._l2(chi12, 12)) < 1e-6
        # the genus character splits the class difference as L(2, chi_-3) L(2, chi_-4)
        chi3 = lambda n: (0, 1, -1)[n % 3]  # noqa: E731
        chi4 = lambda n: (0, 1, 0, -1)[n % 4]  # noqa: E731
        diff = abs(vals[0] - vals[1])
        assert abs(diff - self._l2(chi3, 3) * self._l2(chi4, 4)) < 1e-6


class TestRho:
    def test_pole_is_log_epsf(self, golden, trivial12):
        for d in (golden, trivial12):
            lp = rho(d)
            assert abs(lp.poleCoeff - mpmath.log(mpf(float(d.f.epsF)))) < 1e-12

    def test_shift_invariance(self, golden):
        base = rho(golden)
        for j in (1, 3):
            lp = rho(shift_datum(golden, j))
            assert abs(lp.constTerm - base.constTerm) < 1e-10
            assert abs(lp.poleCoeff - base.poleCoeff) < 1e-12

    def test_shift_invariance_multi_period(self):
        d = make_datum(13, QuadElem(3, 0, 13))
        base, inv = rho(d), shintani_x(d)
        s = shift_datum(d, 2)
        assert abs(rho(s).constTerm - base.constTerm) < 1e-10
        assert abs(shintani_x(s).x - inv.x) < 1e-10


class TestShintani:
    def test_golden_closed_form(self, golden):
        inv = shintani_x(golden)
        s5 = mpmath.sqrt(5)
        closed = ((3 + s5) / 2 - mpmath.sqrt((3 * s5 - 1) / 2)) / 2
        assert abs(inv.x - closed) < 1e-16
        assert abs(inv.x2 - 1) < 1e-16
        assert abs(inv.x - inv.x1 * inv.x2) < 1e-18

    @pytest.mark.parametrize("D", [5, 12, 13])
    def test_trivial_ray_x_is_one(self, D):
        inv = shintani_x(make_datum(D))
        assert abs(inv.x - 1) < 1e-15

    def test_two_routes(self, golden, trivial12):
        for d in (golden, trivial12):
            inv = shintani_x(d)
            b1, b2 = shintani_x_bridge(d, datum_star(d))
            assert abs(b1 - inv.x1) < 1e-12 and abs(b2 - inv.x2) < 1e-12
        b1, b2 = shintani_x_bridge(trivial12, datum_star(trivial12))
        assert abs(b1 * b2 - 1) < 1e-12

    def test_bridge_negative_control(self, golden):
        terms = bridge_terms(golden, datum_star(golden))
        which, e, w, x, y = terms[0]
        terms[0] = (which, e, w, x, y + F(1, 7))
        x1, _ = _eval_terms(terms, None)
        assert abs(x1 - shintani_x(golden).x1) > 1e-3

    def test_star_theorem_golden(self, golden):
        r1, r2 = check_star_theorem(golden, datum_star(golden))
        assert abs(r1) < 1e-12 and abs(r2) < 1e-12

    def test_star_theorem_second_class(self):
        # the other class of modulus (4 - sqrt5)
        ctx = field(5)
        f = modulus_data(QuadIdeal.principal(QuadElem(4, -1, 5)), ctx)
        reps = enumerate_ray_classes(f, ctx, 30, 2)
        d = build_datum(reps[1], f, ctx)
        r1, r2 = check_star_theorem(d, datum_star(d))
        assert abs(r1) < 1e-12 and abs(r2) < 1e-12

    def test_trivial_ray_sits_on_poles(self, trivial12):
        # z in b puts every X1 factor at a pole of the double sine, and the
        # product X1(C) X1(C*) comes out as 1/eps rather than 1
        d = trivial12
        assert d.z in d.bIdeal
        r1, r2 = check_star_theorem(d, datum_star(d))
        assert abs(r2) < 1e-12
        assert abs((r1 + 1) - 1 / mpf(float(d.ctx.eps))) < 1e-12


class TestCharacterSums:
    @pytest.fixture(scope="class")
    @classmethod
    def group13(cls):
        """Classes of Q(sqrt13) modulo (3) with their invariants and multiplication."""
        ctx = field(13)
        f = modulus_data(QuadIdeal.principal(QuadElem(3, 0, 13)), ctx)
        reps = enumerate_ray_classes(f, ctx, 40, ray_class_number(f, ctx))
        n = len(reps)

        def index(a):
            return next(i for i, r in enumerate(reps) if same_ray_class(a, r, f, ctx))

        table = [[index(reps[i] * reps[j]) for j in range(n)] for i in range(n)]
        mu1 = find_mu(f, (-1, 1), ctx)
        mu2 = find_mu(f, (1, -1), ctx)
        c1, c2 = index(QuadIdeal.principal(mu1)), index(QuadIdeal.principal(mu2))
        ds = [build_datum(a, f, ctx) for a in reps]
        shifted = [build_datum(a * mu1, f, ctx) for a in reps]
        inv = [shintani_x(d) for d in ds]
        inv1 = [shintani_x(d) for d in shifted]
        chars = []
        roots = [1, 1j, -1, -1j]
        for vals in itertools.product(roots, repeat=n):
            if all(abs(vals[table[i][j]] - vals[i] * vals[j]) < 1e-12 for i in range(n) for j in range(n)):
                chars.append(vals)
        return dict(n=n, c1=c1, c2=c2, inv=inv, inv1=inv1, chars=chars, ds=ds)

    def test_group_structure(self, group13):
        assert group13["n"] == 4 and len(group13["chars"]) == 4
        assert group13["c1"] != 0  # C1 is not the identity here

    def test_invariance_under_c1(self, group13):
        g = group13
        signed = [c for c in g["chars"] if abs(c[g["c1"]] + 1) < 1e-12 and abs(c[g["c2"]] - 1) < 1e-12]
        assert signed
        for chi in signed:
            a = character_sum_logX(g["inv"], chi, 1)
            b = character_sum_logX(g["inv1"], chi, 1)
            assert abs(a - b) < 1e-12

    def test_conjugate_character(self, group13):
        g = group13
        for chi in g["chars"]:
            a = character_sum_logX(g["inv"], chi, 1)
            b = character_sum_logX(g["inv"], [complex(c).conjugate() for c in chi], 1)
            assert abs(a - mpmath.conj(b)) < 1e-15

    def test_accepts_datums(self, group13):
        g = group13
        chi = g["chars"][1]
        a = character_sum_logX(g["ds"], chi, 2)
        b = character_sum_logX(g["inv"], chi, 2)
        assert abs(a - b) < 1e-15

    def test_trivial_character_d5(self, trivial5):
        # one class with X = 1; the factors are X1 = eps^-1/2 and X2 = eps^1/2
        s1 = character_sum_logX([trivial5], [1], 1)
        s2 = character_sum_logX([trivial5], [1], 2)
        assert abs(s1 + s2) < 1e-15
        assert abs(s1 + mpmath.log(mpf(float(trivial5.ctx.eps))) / 2) < 1e-15

    def test_incomplete_table(self, trivial5):
        with pytest.raises(ValueError):
            character_sum_logX([trivial5, trivial5], [1], 1)
        with pytest.raises(ValueError):
            character_sum_logX([trivial5], [None], 1)
        with pytest.raises(ValueError):
            character_sum_logX([trivial5], [1], 3)
        inv = ShintaniInvariants(1, 1, 1)
        assert character_sum_logX([inv], [1], 2) == 0
