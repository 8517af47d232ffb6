from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shintani.specfun import (
    QuadratureError,
    barnes_g,
    barnes_zeta2_at0,
    bernoulli1,
    bernoulli2,
    bernoulli_poly,
    digamma,
    dilog,
    double_sine,
    exp_sinh,
    f_cap,
    f_inner,
    hurwitz_zeta,
    hurwitz_zeta0,
    lerch_log_gamma,
    t1,
    t2,
    tanh_sinh,
    work_context,
)
from shintani.qfield import QuadElem

F = Fraction
mp = mpmath.mp
PHI = QuadElem(F(3, 2), F(1, 2), 5)


def close(a, b, tol):
    return abs(mpmath.mpf(a) - mpmath.mpf(b)) < tol


@pytest.fixture(autouse=True)
def _mp_precision():
    with mpmath.workprec(128):
        yield


class TestElementary:
    def test_digamma(self):
        g = mpmath.euler
        assert close(digamma(1), -g, 1e-18)
        assert close(digamma(F(1, 2)), -g - 2 * mpmath.log(2), 1e-18)
        assert close(digamma(2), 1 - g, 1e-18)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 60))
    def test_digamma_vs_mpmath(self, x):
        assert close(digamma(x), mpmath.digamma(x), 1e-16 * (1 + abs(mpmath.digamma(x))))

    def test_dilog(self):
        assert close(dilog(1), mpmath.pi ** 2 / 6, 1e-18)
        assert dilog(0) == 0
        assert close(dilog(-1), -mpmath.pi ** 2 / 12, 1e-18)
        with pytest.raises(ValueError):
            dilog(F(3, 2))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-1, 1))
    def test_dilog_vs_mpmath(self, x):
        assert close(dilog(x), mpmath.polylog(2, x), 1e-17)

    def test_hurwitz(self):
        assert hurwitz_zeta0(1) == F(-1, 2)
        assert hurwitz_zeta0(F(2, 11)) == F(7, 22)
        assert close(hurwitz_zeta(2, 1), mpmath.pi ** 2 / 6, 1e-12)
        assert close(hurwitz_zeta(3, F(1, 2)), 7 * mpmath.zeta(3), 1e-17)
        assert close(hurwitz_zeta(F(3, 2), F(2, 7)), mpmath.zeta(1.5, mpmath.mpf(2) / 7), 1e-16)

    def test_lerch(self):
        l2p = mpmath.log(2 * mpmath.pi)
        assert close(lerch_log_gamma(1), -l2p / 2, 1e-18)
        assert close(lerch_log_gamma(F(1, 2)), -mpmath.log(2) / 2, 1e-18)
        assert close(lerch_log_gamma(2), -l2p / 2, 1e-18)

    @settings(max_examples=50, deadline=None)
    @given(st.fractions(-5, 5, max_denominator=50))
    def test_bernoulli_identities(self, x):
        assert bernoulli2(x) == bernoulli2(1 - x)
        y = x if x > 0 else 1 - x
        assert hurwitz_zeta0(y) == -bernoulli1(y)
        assert bernoulli_poly(2, x) == bernoulli2(x)
        assert bernoulli_poly(1, x) == bernoulli1(x)

    def test_precision_argument(self):
        v = digamma(F(1, 3), prec=200)
        assert v.context.prec == 200
        with mpmath.workprec(220):
            assert abs(v - mpmath.digamma(mpmath.mpf(1) / 3)) < mpmath.mpf(2) ** -195


class TestQuadrature:
    def test_finite_interval(self):
        ctx = work_context(64)
        v = tanh_sinh(lambda t: ctx.log(t) * ctx.sqrt(1 - t), 0, 1, ctx)
        exact = mpmath.mpf(4) * (mpmath.log(2) - mpmath.mpf(4) / 3) / 3
        assert close(v, exact, 1e-17)

    def test_half_line(self):
        ctx = work_context(64)
        v = exp_sinh(lambda t: ctx.exp(-t) / ctx.sqrt(t), 0, ctx)
        assert close(v, mpmath.sqrt(mpmath.pi), 1e-17)

    def test_failure_is_reported(self):
        ctx = work_context(64)
        with pytest.raises(QuadratureError):
            tanh_sinh(lambda t: ctx.sin(1 / t) / t, 0, 1, ctx)


class TestBarnes:
    def test_zeta2_at0_exact(self):
        w = PHI
        assert barnes_zeta2_at0(w, 1, 0) == w / 12 - F(1, 4) + w.inverse() / 12
        assert barnes_zeta2_at0(1, F(1, 2), F(1, 2)) == F(-1, 12)
        for x, y in [(F(2, 11), F(1, 11)), (F(1, 3), F(3, 4))]:
            # symmetry z <-> 1 + omega - z
            assert barnes_zeta2_at0(w, x, y) == barnes_zeta2_at0(w, 1 - x, 1 - y)

    @pytest.mark.parametrize("w", [0.3, 1.0, F(7, 3), 9.5])
    def test_g_difference_identities(self, w):
        w = mpmath.mpf(w) if not isinstance(w, F) else w
        wr = mpmath.mpf(w.numerator) / w.denominator if isinstance(w, F) else w
        assert close(barnes_g(w, w) - barnes_g(w, 1), mpmath.log(wr) / 2, 1e-14)
        z = mpmath.mpf("0.7")
        zeta2 = barnes_zeta2_at0(wr, z / wr, 0)
        assert close(barnes_g(1 / wr, z / wr) - barnes_g(wr, z), zeta2 * mpmath.log(wr), 1e-14)
        assert close(barnes_g(wr, z) - barnes_g(wr, z + wr), lerch_log_gamma(z), 1e-14)

    def test_g_against_mpmath(self):
        # zeta_2(s, 1, z) = zeta(s-1, z) + (1-z) zeta(s, z)
        z = mpmath.mpf("1.6")
        ref = mpmath.diff(lambda s: mpmath.zeta(s - 1, z) + (1 - z) * mpmath.zeta(s, z), 0)
        assert close(barnes_g(1, z), ref, 1e-14)

    def test_double_sine_examples(self):
        assert close(double_sine(2, 1), mpmath.sqrt(2), 1e-17)
        assert close(double_sine(2, 2), 1 / mpmath.sqrt(2), 1e-17)
        for w in (mpmath.mpf("0.4"), mpmath.mpf(3)):
            assert close(double_sine(w, (1 + w) / 2), 1, 1e-17)

    def test_double_sine_shift(self):
        w, z = mpmath.mpf("1.7"), mpmath.mpf("0.45")
        lhs = double_sine(w, z)
        assert close(lhs, 2 * mpmath.sin(mpmath.pi * z) * double_sine(w, z + w), 1e-15)
        assert close(lhs, 2 * mpmath.sin(mpmath.pi * z / w) * double_sine(w, z + 1), 1e-15)

    def test_double_sine_rejects(self):
        with pytest.raises(ValueError):
            double_sine(-1, 1)
        with pytest.raises(ValueError):
            double_sine(2, 3)  # the pole 1 + omega
        with pytest.raises(ValueError):
            barnes_g(1, 0)

    def test_t_functions(self):
        w = mpmath.sqrt(5)
        assert close(t2(w, 1, 0), mpmath.sqrt(w), 1e-17)
        assert close(t1(w, F(7, 3), F(1, 5)), t1(w, F(4, 3), F(1, 5)), 1e-17)
        assert close(t1(w, 1, 0), double_sine(w, w), 1e-17)
        with pytest.raises(ValueError, match="irrational"):
            t1(F(3, 2), F(1, 3), F(1, 3))


class TestIntegrals:
    def test_f_inner_tail(self):
        assert abs(f_inner(20, 1)) < 1e-8
        for w, x in [(0.01, 0.3), (1, 1), (5, 2)]:
            assert f_inner(w, x) < 0

    @pytest.mark.parametrize("w,x", [(1, 1), (0.2, 0.5), (1.4, 3), (2.5, 0.1)])
    def test_f_inner_vs_mpmath(self, w, x):
        ref = -mpmath.quad(lambda u: mpmath.exp(-x * u) / -mpmath.expm1(-u), [w, w + 5, mpmath.inf])
        assert close(f_inner(w, x), ref, 1e-16)

    def test_f_inner_rejects(self):
        with pytest.raises(ValueError):
            f_inner(1, 0)

    def test_f_cap_split(self):
        for w, x, y in [(2, 0.5, 0.5), (0.3, 1, 0), (7, 0.2, 0.9)]:
            assert close(f_cap(w, x, y), f_cap(w, x, y, split=1), 1e-15)

    def test_f_cap_vs_mpmath(self):
        w, x, y = mpmath.mpf(2), mpmath.mpf("0.5"), mpmath.mpf("0.25")

        def fi(u):
            return -mpmath.quad(lambda v: mpmath.exp(-x * v) / -mpmath.expm1(-v), [u, mpmath.inf])

        def integrand(t):
            return (mpmath.exp(-y * t) / -mpmath.expm1(-t) - 1 / t) * fi(w * t)

        with mpmath.workprec(80):
            ref = mpmath.quad(integrand, [0, 0.5, 2, mpmath.inf])
        assert close(f_cap(w, x, y), ref, 1e-12)

    def test_f_cap_large_omega_asymptotics(self):
        # F(w, x, y) ~ -sum_n B_n(1-y) zeta(n+1, x) / (n w^n)
        w, x, y = 50, F(1, 2), F(1, 2)
        asym = -sum(
            bernoulli_poly(n, 1 - y) * mpmath.zeta(n + 1, 0.5) / (n * mpmath.mpf(w) ** n)
            for n in range(1, 7)
        )
        v = f_cap(w, x, y)
        assert close(v, asym, 1e-11)
        assert 1.3e-4 < v < 1.5e-4

    def test_f_cap_rejects(self):
        with pytest.raises(ValueError):
            f_cap(1, 0, 1)
        with pytest.raises(ValueError):
            f_cap(1, 1, -1)
