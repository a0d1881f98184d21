"""Period length of the continued fraction of sqrt(d).

All arithmetic is on integers. The radicand is capped at ``MAX_D`` so every
intermediate of the surd recurrence fits comfortably in a signed 64-bit word,
which is what the compiled range kernel relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InternalError, WidthError

MAX_D = 1 << 40
MAX_ISQRT_ARG = (1 << 64) - 1


@dataclass(frozen=True)
class SurdState:
    """State ``(m, q)`` of sqrt(d) expansion: the complete quotient is (sqrt(d)+m)/q."""

    d: int
    a0: int
    m: int
    q: int

    def next(self) -> SurdState:
        a = (self.a0 + self.m) // self.q
        m = a * self.q - self.m
        q = (self.d - m * m) // self.q
        return SurdState(self.d, self.a0, m, q)

    @property
    def partial_quotient(self) -> int:
        return (self.a0 + self.m) // self.q


@dataclass(frozen=True)
class PeriodResult:
    d: int
    period: int
    is_square: bool


def isqrt(n: int) -> int:
    """Exact floor square root of ``0 <= n < 2**64``."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    if n > MAX_ISQRT_ARG:
        raise WidthError(f"isqrt argument {n} exceeds 64-bit width")
    return math.isqrt(n)


def _check_d(d: int) -> None:
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if d > MAX_D:
        raise WidthError(f"d={d} exceeds supported width 2**40")


def period_length(d: int) -> PeriodResult:
    """Return T(d), the minimal period of the continued fraction of sqrt(d).

    The period ends at the first step k >= 1 with q_k = 1. As a safety net the
    first post-initial state is remembered; seeing it again before q hits 1
    means the termination criterion was missed.
    """
    _check_d(d)
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        return PeriodResult(d, 0, True)
    m, q = a0, d - a0 * a0
    first = (m, q)
    k = 1
    while q != 1:
        a = (a0 + m) // q
        m = a * q - m
        q = (d - m * m) // q
        k += 1
        if (m, q) == first or k > 2 * d:
            raise InternalError(f"surd recurrence for d={d} failed to terminate")
    return PeriodResult(d, k, False)


def partial_quotients(d: int, limit: int) -> list[int]:
    """First ``limit`` partial quotients a_0, a_1, ... of sqrt(d)."""
    _check_d(d)
    if limit < 1:
        raise ValueError("limit must be positive")
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ValueError(f"d={d} is a perfect square")
    state = SurdState(d, a0, 0, 1)
    out = []
    for _ in range(limit):
        out.append(state.partial_quotient)
        state = state.next()
    return out


@numba.njit(cache=True, nogil=True)
def _isqrt64(n):
    # float seed, then exact integer correction
    r = np.int64(math.sqrt(np.float64(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@numba.njit(cache=True, nogil=True)
def _period_kernel(lo, hi, out):
    # out[i] = T(lo + 1 + i) for d in (lo, hi]; returns -1 on internal failure
    for i in range(hi - lo):
        d = lo + 1 + i
        a0 = _isqrt64(d)
        if a0 * a0 == d:
            out[i] = 0
            continue
        m = a0
        q = d - a0 * a0
        m1 = m
        q1 = q
        k = 1
        while q != 1:
            a = (a0 + m) // q
            m = a * q - m
            q = (d - m * m) // q
            k += 1
            if (m == m1 and q == q1) or k > 2 * d:
                return -1
        out[i] = k
    return 0


def period_range(lo: int, hi: int) -> np.ndarray:
    """Array of T(d) for d in (lo, hi], as int64."""
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range ({lo}, {hi}]")
    if hi > MAX_D:
        raise WidthError(f"d={hi} exceeds supported width 2**40")
    out = np.zeros(hi - lo, dtype=np.int64)
    if _period_kernel(lo, hi, out) != 0:
        raise InternalError(f"surd recurrence failed in range ({lo}, {hi}]")
    return out
