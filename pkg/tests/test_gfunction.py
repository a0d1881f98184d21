import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfstats.cfperiod import period_range
from cfstats.errors import ResourceGuardError, WidthError
from cfstats.gfunction import GWitness, g_point, g_range, g_tabulate, g_witnesses

from .oracles import g_brute


@pytest.mark.parametrize("d, g", [(1, 0), (2, 1), (3, 2), (4, 0), (5, 2), (10, 4)])
def test_g_point_examples(d, g):
    assert g_point(d) == g


def test_g_point_matches_definition():
    for d in range(1, 400):
        assert g_point(d) == g_brute(d), d


def test_witness_examples():
    assert g_witnesses(3) == [GWitness(1, 1, 2), GWitness(1, 2, 1)]
    assert g_witnesses(4) == []
    assert g_witnesses(2) == [GWitness(1, 1, 1)]


@given(st.integers(min_value=1, max_value=200_000))
def test_witness_soundness(d):
    ws = g_witnesses(d)
    assert len(ws) == g_point(d)
    assert all(w.witnesses(d) for w in ws)
    assert ws == sorted(ws, key=lambda w: (w.m, w.q))
    assert len({(w.m, w.q) for w in ws}) == len(ws)


def test_tabulate_small():
    t = g_tabulate(10, chunk_size=3, shards=1)
    assert t.total() == 18
    assert (t[7], t[8], t[9]) == (4, 3, 0)
    assert g_tabulate(1).values.tolist() == [0, 0]


def test_tabulate_matches_point_oracle():
    t = g_tabulate(10**4, chunk_size=10**4, shards=1)
    assert t.values[1:].tolist() == [g_point(d) for d in range(1, 10**4 + 1)]


def test_rechunking_is_deterministic():
    a = g_tabulate(10**4, chunk_size=512, shards=4)
    b = g_tabulate(10**4, chunk_size=10**4, shards=1)
    assert np.array_equal(a.values, b.values)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5000), st.integers(1, 3000), st.integers(1, 700), st.integers(1, 4))
def test_subrange_sieve(lo, width, chunk, shards):
    hi = lo + width
    full = g_tabulate(hi, chunk_size=1 << 16, shards=1).values
    assert np.array_equal(g_range(lo, hi, chunk, shards), full[lo + 1:hi + 1])


def test_squares_follow_definition():
    # g counts triples for square d as well; only small squares happen to vanish
    t = g_tabulate(10**4)
    assert t[1] == t[4] == t[9] == 0
    assert GWitness(2, 3, 4) in g_witnesses(16)
    assert all(t[k * k] == g_brute(k * k) for k in range(1, 41))


def test_guards():
    with pytest.raises(ResourceGuardError):
        g_tabulate(10, chunk_size=1 << 30)
    with pytest.raises(WidthError):
        g_point(2**41)
    with pytest.raises(ValueError):
        g_tabulate(0)


def test_growth_and_domination():
    x = 10**5
    g = g_tabulate(x).values[1:].astype(np.int64)
    T = period_range(0, x)
    assert (T <= g).all()
    d = np.arange(1, x + 1)
    ratio = (g / np.sqrt(d)).max()
    assert np.isfinite(ratio) and 1 < ratio < 20
