"""Hickerson's counting function g(d), pointwise and tabulated.

g(d) counts pairs (m, q) with m < sqrt(d), |q - sqrt(d)| < m and q | d - m^2.
Writing d = m^2 + k q, the same pairs are the triples (m, q, k) with
q - 2m < k < q + 2m, which is what the sieve enumerates.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .cfperiod import MAX_D, _isqrt64
from .errors import InternalError, ResourceGuardError, WidthError

MAX_CHUNK = 1 << 26
DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class GWitness:
    m: int
    q: int
    k: int

    def witnesses(self, d: int) -> bool:
        m, q, k = self.m, self.q, self.k
        return (
            m >= 1 and q >= 1 and k >= 1
            and d == m * m + k * q
            and q - 2 * m < k < q + 2 * m
            and m * m < d
        )


@dataclass
class GTable:
    """g(d) for 1 <= d <= x; ``values[0]`` is an unused zero slot."""

    x: int
    values: np.ndarray

    def __getitem__(self, d: int) -> int:
        if not 1 <= d <= self.x:
            raise IndexError(d)
        return int(self.values[d])

    def total(self) -> int:
        return int(self.values.sum(dtype=np.int64))


def _check_d(d: int) -> None:
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if d > MAX_D:
        raise WidthError(f"d={d} exceeds supported width 2**40")


def _window(d: int, m: int, s: int, s1: int) -> tuple[int, int]:
    # q range with sqrt(d) < q + m and q - m < sqrt(d); s = isqrt(d), s1 = isqrt(d - 1)
    return max(1, s + 1 - m), m + s1


def _in_window(d: int, m: int, q: int) -> bool:
    return d < (q + m) ** 2 and (q <= m or (q - m) ** 2 < d)


def _pairs(d: int):
    _check_d(d)
    s = math.isqrt(d)
    s1 = math.isqrt(d - 1)
    m = 1
    while m * m < d:
        n = d - m * m
        lo, hi = _window(d, m, s, s1)
        r = math.isqrt(n)
        if hi - lo + 1 < 2 * r:
            for q in range(lo, hi + 1):
                if n % q == 0:
                    yield m, q, n // q
        else:
            qs = []
            for t in range(1, r + 1):
                if n % t == 0:
                    qs.append(t)
                    if t * t != n:
                        qs.append(n // t)
            for q in sorted(qs):
                if _in_window(d, m, q):
                    yield m, q, n // q
        m += 1


def g_point(d: int) -> int:
    """g(d) by direct enumeration over m and the divisors of d - m^2."""
    return sum(1 for _ in _pairs(d))


def g_witnesses(d: int) -> list[GWitness]:
    """All triples (m, q, k) of G(d), sorted by (m, q)."""
    return [GWitness(m, q, k) for m, q, k in _pairs(d)]


@numba.njit(cache=True, nogil=True)
def _sieve_block(lo, hi, xmax, counts):
    # counts[i] += #{(m,q,k): m^2 + k q = lo + 1 + i}, for d in (lo, hi]
    root = _isqrt64(xmax - 1) if xmax > 1 else 0
    m = 1
    while m * m < hi:
        base = m * m
        qmax = m + root
        for q in range(1, qmax + 1):
            kmin = q - 2 * m + 1
            if kmin < 1:
                kmin = 1
            # m^2 + k q > lo
            klo = (lo - base) // q + 1
            if klo > kmin:
                kmin = klo
            kmax = q + 2 * m - 1
            khi = (hi - base) // q
            if khi < kmax:
                kmax = khi
            if kmin > kmax:
                if q > 2 * m and base + q * (q - 2 * m + 1) > hi:
                    break
                continue
            idx = base + kmin * q - lo - 1
            for _ in range(kmin, kmax + 1):
                counts[idx] += 1
                idx += q
        m += 1


def _blocks(lo: int, hi: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(a, min(a + chunk_size, hi)) for a in range(lo, hi, chunk_size)]


def g_range(lo: int, hi: int, chunk_size: int = DEFAULT_CHUNK, shards: int = 1) -> np.ndarray:
    """g(d) for d in (lo, hi] as uint32, sieved block by block.

    Each block is sieved independently into its own slice of the output, so
    the result does not depend on ``chunk_size`` or ``shards``.
    """
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range ({lo}, {hi}]")
    if hi > MAX_D:
        raise WidthError(f"d={hi} exceeds supported width 2**40")
    if chunk_size < 1 or shards < 1:
        raise ValueError("chunk_size and shards must be positive")
    if chunk_size > MAX_CHUNK:
        raise ResourceGuardError(f"chunk_size {chunk_size} exceeds budget {MAX_CHUNK}")
    out = np.zeros(hi - lo, dtype=np.uint32)
    if hi == lo:
        return out

    def work(block):
        a, b = block
        counts = np.zeros(b - a, dtype=np.int64)
        _sieve_block(a, b, hi, counts)
        if counts.size and counts.max() >= 1 << 32:
            raise InternalError("g(d) overflowed 32 bits")
        out[a - lo:b - lo] = counts

    blocks = _blocks(lo, hi, chunk_size)
    if shards == 1 or len(blocks) == 1:
        for block in blocks:
            work(block)
    else:
        with ThreadPoolExecutor(max_workers=shards) as pool:
            list(pool.map(work, blocks))
    return out


def g_tabulate(x: int, chunk_size: int = DEFAULT_CHUNK, shards: int | None = None) -> GTable:
    """Tabulate g(d) for all d <= x via the triple sieve."""
    if x < 1:
        raise ValueError(f"x must be positive, got {x}")
    if shards is None:
        shards = os.cpu_count() or 1
    values = np.zeros(x + 1, dtype=np.uint32)
    values[1:] = g_range(0, x, chunk_size, shards)
    return GTable(x, values)
