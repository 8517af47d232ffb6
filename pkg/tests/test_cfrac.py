from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shintani.cfrac import (
    a_sequence,
    bridge,
    check_bridge_markers,
    is_reduced,
    minus_cf,
    omega_sequence,
    plus_cf,
    reduce_ideal,
)
from shintani.qfield import QuadElem, QuadIdeal, field, is_totally_positive


def E(a, b, D, d=1):
    return QuadElem(Fraction(a, d), Fraction(b, d), D)


GOLD = E(3, 1, 5, 2)          # (3 + sqrt5)/2
W12 = E(4, 1, 12, 2)          # 2 + sqrt3
W13 = E(5, 1, 13, 2)          # (5 + sqrt13)/2


def test_minus_cf_examples():
    assert minus_cf(GOLD).period == (3,)
    assert minus_cf(W12).period == (4,)
    cf = minus_cf(W13)
    assert cf.period == (5, 2, 2) and cf.m == 3
    assert 4 - W12.inverse() == W12


def test_minus_cf_rejects_unreduced():
    with pytest.raises(ValueError, match="omega' < 1"):
        minus_cf(E(4, 1, 5))
    with pytest.raises(ValueError, match="rational"):
        minus_cf(E(3, 0, 5))


def test_plus_cf_examples():
    assert plus_cf(E(1, 1, 5, 2)).period == (1, 1)
    pc = plus_cf(E(2, 1, 12, 2))  # 1 + sqrt3
    assert pc.period == (2, 1) and pc.l == 1
    assert plus_cf(E(2, 1, 8, 2)).period == (2, 2)  # 1 + sqrt2


def test_omega_sequence():
    assert omega_sequence(minus_cf(GOLD), GOLD, 3) == [GOLD] * 3
    seq = omega_sequence(minus_cf(W13), W13, 4)
    assert seq[:3] == [W13, E(5, 1, 13, 6), E(7, 1, 13, 6)]
    assert seq[3] == seq[0]


@pytest.mark.parametrize("w,A1", [(GOLD, E(3, -1, 5, 2)), (W12, E(4, -1, 12, 2))])
def test_a_sequence(w, A1):
    cf = minus_cf(w)
    A = a_sequence(cf, w, 3)
    assert A[0] == 1 and A[1] == A1
    assert A[cf.m] == field(w.D).eps.inverse()


def test_a_sequence_chain_of_modules():
    cf = minus_cf(W13)
    A = a_sequence(cf, W13, 6)
    base = QuadIdeal.module(E(1, 0, 13), W13)
    for k in range(1, 6):
        assert QuadIdeal.module(A[k], A[k - 1]) == base


def test_reduce_ideal_examples():
    ctx = field(5)
    q, w = reduce_ideal(QuadIdeal.module(E(1, 0, 5), GOLD), ctx)
    assert q == 1 and w == GOLD
    for c in (QuadIdeal.unit(5), QuadIdeal.principal(E(4, -1, 5)).inverse()):
        q, w = reduce_ideal(c, ctx)
        assert is_totally_positive(q) and is_reduced(w)
        assert QuadIdeal.module(q, q * w) == c


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 8, 12, 13, 24, 40]), st.integers(-9, 9), st.integers(-9, 9))
def test_reduce_ideal_postcondition(D, a, b):
    x = E(a, b, D)
    if x == 0:
        return
    c = QuadIdeal.principal(x) * QuadIdeal.from_generators([E(3, 0, D), E(1, 1, D)], D)
    q, w = reduce_ideal(c, field(D))
    assert is_totally_positive(q) and is_reduced(w)
    assert QuadIdeal.module(q, q * w) == c
    assert w > 2


def test_bridge_examples():
    br = bridge(minus_cf(GOLD), GOLD)
    assert br.plus.period == (1, 1) and br.S == (0, 1) and br.T == (0, 1)
    assert br.cPeriod == (3,) and br.n == 1
    br = bridge(minus_cf(W12), W12)
    assert br.plus.period == (2, 1) and br.S == (0, 1) and br.T == (0, 2)
    assert br.cPeriod == (3, 2) and br.n == 2


@pytest.mark.parametrize("D", [5, 8, 12, 13, 24, 40, 21, 33])
def test_bridge_consistency(D):
    _, w = reduce_ideal(QuadIdeal.unit(D), field(D))
    cf = minus_cf(w)
    br = bridge(cf, w)
    assert check_bridge_markers(cf, br)
    a = br.plus.period
    assert sum(a[1::2]) == cf.m and sum(a[0::2]) == br.n
    assert br.omegaStar == br.xi[1] + 1
    assert minus_cf(br.omegaStar).period == br.cPeriod


def test_bridge_rejects_small_omega():
    w = E(5, 1, 13, 6)  # cycle member below 2
    with pytest.raises(ValueError):
        bridge(minus_cf(w), w)
