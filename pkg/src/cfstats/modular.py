"""Square-congruence indicator and the multiplicative pair count c(D).

c(D) * D is the number of pairs (m1, m2) mod D with m1^2 = m2^2 (mod D).
Values are returned as ``fractions.Fraction`` since c(p^k) is not integral
for odd p.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import WidthError

BRUTE_CAP = 5000
NAIVE_CAP = 300
MAX_FACTOR = 1 << 62


def chi(D: int, m1: int, m2: int) -> int:
    """1 if m1^2 = m2^2 (mod D), else 0."""
    if D < 1:
        raise ValueError(f"D must be positive, got {D}")
    return int((m1 * m1 - m2 * m2) % D == 0)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division over a 2,3,5 wheel."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    if n > MAX_FACTOR:
        raise WidthError(f"{n} too large for trial division")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    p, i = 7, 0
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += steps[i]
        i = (i + 1) % 8
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def c_prime_power(p: int, k: int) -> Fraction:
    if p == 2:
        return Fraction(k)
    return Fraction(1 + k) - Fraction(k, p)


def c_closed(D: int) -> Fraction:
    """c(D) from its values on prime powers."""
    out = Fraction(1)
    for p, k in factorize(D).items():
        out *= c_prime_power(p, k)
    return out


def c_brute(D: int, naive: bool = False, cap: int = BRUTE_CAP) -> Fraction:
    """c(D) by counting pairs of residues with equal squares.

    The default path tallies how many residues share each square and sums the
    squared tallies. ``naive=True`` runs the full double loop instead.
    """
    if D < 1:
        raise ValueError(f"D must be positive, got {D}")
    if naive:
        if D > NAIVE_CAP:
            raise ValueError(f"D={D} exceeds naive oracle cap {NAIVE_CAP}")
        count = sum(chi(D, a, b) for a in range(D) for b in range(D))
        return Fraction(count, D)
    if D > cap:
        raise ValueError(f"D={D} exceeds oracle cap {cap}")
    m = np.arange(D, dtype=np.int64)
    tally = np.bincount(m * m % D, minlength=D)
    count = int((tally * tally).sum())
    return Fraction(count, D)
