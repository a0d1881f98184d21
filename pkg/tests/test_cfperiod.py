import math

import pytest
from hypothesis import given, strategies as st
from sympy.ntheory.continued_fraction import continued_fraction_periodic

from cfstats.cfperiod import (
    SurdState, isqrt, partial_quotients, period_length, period_range,
)
from cfstats.errors import WidthError

from .oracles import period_by_repeat


@pytest.mark.parametrize("n, r", [(0, 0), (16, 4), (10**18, 10**9), (15, 3), (2**64 - 1, 2**32 - 1)])
def test_isqrt(n, r):
    assert isqrt(n) == r


def test_isqrt_rejects():
    with pytest.raises(ValueError):
        isqrt(-1)
    with pytest.raises(WidthError):
        isqrt(2**64)


@pytest.mark.parametrize("d, period", [(4, 0), (2, 1), (3, 2), (13, 5), (1, 0), (7, 4)])
def test_period_examples(d, period):
    res = period_length(d)
    assert res.period == period
    assert res.is_square == (period == 0)


def test_period_13_by_expansion():
    # 20 partial quotients of sqrt(13), then find the first repeated block
    pq = partial_quotients(13, 20)
    assert pq[:6] == [3, 1, 1, 1, 1, 6]
    assert pq[1:6] == pq[6:11] == pq[11:16]
    assert period_by_repeat(13) == 5


def test_width_guard():
    with pytest.raises(WidthError):
        period_length(2**40 + 1)
    with pytest.raises(ValueError):
        period_length(0)
    assert period_length(2**40).period == 0


def test_against_sympy():
    for d in range(1, 201):
        cf = continued_fraction_periodic(0, 1, d)
        expected = len(cf[-1]) if isinstance(cf[-1], list) else 0
        assert period_length(d).period == expected, d


def test_range_kernel_matches_python():
    T = period_range(0, 5000)
    assert [period_length(d).period for d in range(1, 5001)] == T.tolist()
    assert [period_by_repeat(d) for d in range(1, 5001)] == T.tolist()
    assert period_range(4990, 5000).tolist() == T[4990:].tolist()


def test_large_d_kernel():
    d0 = 2**40 - 50
    T = period_range(d0, d0 + 20)
    assert T.tolist() == [period_length(d).period for d in range(d0 + 1, d0 + 21)]


@pytest.mark.parametrize("d, limit, expected", [(2, 4, [1, 2, 2, 2]), (7, 5, [2, 1, 1, 1, 4])])
def test_partial_quotients(d, limit, expected):
    assert partial_quotients(d, limit) == expected


def test_partial_quotients_rejects_square():
    with pytest.raises(ValueError):
        partial_quotients(9, 3)


@given(st.integers(min_value=2, max_value=10**6))
def test_state_invariants_and_recurrence(d):
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        return
    T = period_length(d).period
    s = SurdState(d, a0, 0, 1)
    states = []
    for k in range(T + 2):
        if k >= 1:
            assert 0 <= s.m <= a0 and 1 <= s.q <= 2 * a0 + 1
            assert (d - s.m * s.m) % s.q == 0
            assert (s.q == 1) == (k == T) or k > T
        states.append((s.m, s.q))
        s = s.next()
    assert states[1 + T] == states[1]
    assert 1 <= T <= 2 * d


def test_last_quotient_is_twice_a0():
    T = period_range(0, 10**5)
    for d in range(2, 10**5 + 1, 97):
        if T[d - 1]:
            pq = partial_quotients(d, int(T[d - 1]) + 1)
            assert pq[-1] == 2 * pq[0]


def test_last_quotient_all_d_vectorised():
    # a_T = 2 a0 holds for every non-square d <= 1e5; checked through the state at step T
    for d in range(2, 10**5 + 1):
        a0 = math.isqrt(d)
        if a0 * a0 == d:
            continue
        m, q = a0, d - a0 * a0
        while q != 1:
            a = (a0 + m) // q
            m = a * q - m
            q = (d - m * m) // q
        assert (a0 + m) // q == 2 * a0


def test_small_periods_families():
    for m in range(1, 301):
        assert period_length(m * m + 1).period == 1
        for a in range(1, 2 * m):
            if (2 * m) % a:
                continue
            d = m * m + 2 * m // a
            T = period_length(d).period
            assert T in (1, 2)
            if math.isqrt(d - 1) ** 2 != d - 1:
                assert T == 2
