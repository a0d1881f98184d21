"""Moment sums, large-deviation counts and bound checks for T(d) and g(d)."""
from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import analytic
from .cfperiod import period_range
from .errors import ResourceGuardError
from .gfunction import DEFAULT_CHUNK, _blocks, g_range

MAX_R = 4
MAX_SIEVE = 1 << 32
SAMPLE_SIZE = 32
LOG_POINTS = 64

_RATIONAL = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


def as_rational(alpha) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a positive Fraction; floats are refused."""
    if isinstance(alpha, float):
        raise TypeError("alpha must be exact (int, Fraction or 'p/q'), not float")
    if isinstance(alpha, str):
        mt = _RATIONAL.match(alpha)
        if not mt:
            raise ValueError(f"alpha must look like 'p' or 'p/q', got {alpha!r}")
        alpha = Fraction(int(mt.group(1)), int(mt.group(2) or 1))
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return alpha


def prime_sieve(n: int) -> np.ndarray:
    """Boolean primality table of length n + 1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > MAX_SIEVE:
        raise ResourceGuardError(f"prime sieve of size {n} exceeds budget")
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return is_prime


def _power_sums(values: np.ndarray, rs) -> dict[int, int]:
    # exact: tally each distinct value, then weight by Python-int powers
    if values.size == 0:
        return {r: 0 for r in rs}
    tally = np.bincount(values.astype(np.int64))
    nz = np.flatnonzero(tally)
    return {r: sum(int(tally[v]) * int(v) ** r for v in nz) for r in rs}


@dataclass
class MomentAccumulator:
    """Exact power sums of T and g over d in (x_lo, x_hi]."""

    x_lo: int
    x_hi: int
    count: int
    sums_T: dict[int, int]
    sums_g: dict[int, int]
    prime_count: int | None = None
    prime_sums_T: dict[int, int] | None = None
    prime_sums_g: dict[int, int] | None = None

    @property
    def has_primes(self) -> bool:
        return self.prime_count is not None

    def merge(self, other: MomentAccumulator) -> MomentAccumulator:
        """Combine accumulators over adjacent disjoint ranges."""
        a, b = (self, other) if self.x_lo <= other.x_lo else (other, self)
        if a.x_hi != b.x_lo:
            raise ValueError(f"ranges ({a.x_lo},{a.x_hi}] and ({b.x_lo},{b.x_hi}] are not adjacent")
        if set(a.sums_T) != set(b.sums_T) or a.has_primes != b.has_primes:
            raise ValueError("accumulators track different statistics")

        def add(u, v):
            return {r: u[r] + v[r] for r in u}

        return MomentAccumulator(
            a.x_lo, b.x_hi, a.count + b.count,
            add(a.sums_T, b.sums_T), add(a.sums_g, b.sums_g),
            a.prime_count + b.prime_count if a.has_primes else None,
            add(a.prime_sums_T, b.prime_sums_T) if a.has_primes else None,
            add(a.prime_sums_g, b.prime_sums_g) if a.has_primes else None,
        )

    __add__ = merge


def _check_rs(rs) -> list[int]:
    rs = sorted(set(int(r) for r in rs))
    if not rs:
        raise ValueError("rs must be non-empty")
    if rs[0] < 1 or rs[-1] > MAX_R:
        raise ValueError(f"moment orders must lie in 1..{MAX_R}")
    return rs


def tabulate_range(lo: int, hi: int, chunk_size: int = DEFAULT_CHUNK,
                   shards: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Return (T, g) arrays for d in (lo, hi]."""
    shards = shards or os.cpu_count() or 1
    g = g_range(lo, hi, chunk_size, shards)
    T = np.zeros(hi - lo, dtype=np.int64)

    def work(block):
        a, b = block
        T[a - lo:b - lo] = period_range(a, b)

    blocks = _blocks(lo, hi, chunk_size)
    if shards == 1 or len(blocks) == 1:
        for block in blocks:
            work(block)
    else:
        with ThreadPoolExecutor(max_workers=shards) as pool:
            list(pool.map(work, blocks))
    return T, g


def accumulate(x_lo: int, x_hi: int, rs=(1, 2), include_primes: bool = False,
               chunk_size: int = DEFAULT_CHUNK, shards: int | None = None) -> MomentAccumulator:
    if not 0 <= x_lo < x_hi:
        raise ValueError(f"need 0 <= x_lo < x_hi, got ({x_lo}, {x_hi}]")
    rs = _check_rs(rs)
    T, g = tabulate_range(x_lo, x_hi, chunk_size, shards)
    acc = MomentAccumulator(x_lo, x_hi, x_hi - x_lo, _power_sums(T, rs), _power_sums(g, rs))
    if include_primes:
        mask = prime_sieve(max(x_hi, 2))[x_lo + 1:x_hi + 1]
        acc.prime_count = int(mask.sum())
        acc.prime_sums_T = _power_sums(T[mask], rs)
        acc.prime_sums_g = _power_sums(g[mask], rs)
    return acc


# -- large deviations --------------------------------------------------------

@dataclass
class DeviationReport:
    x: int
    alpha: Fraction
    count: int
    bound_first: float
    bound_second: float
    members_sample: list[int] = field(default_factory=list)


def _exceeds(T: np.ndarray, d: np.ndarray, alpha: Fraction) -> np.ndarray:
    # T > alpha sqrt(d)  <=>  q^2 T^2 > p^2 d, in exact integers
    p2, q2 = alpha.numerator ** 2, alpha.denominator ** 2
    tmax = int(T.max()) if T.size else 0
    dmax = int(d.max()) if d.size else 0
    if q2 * tmax * tmax < 1 << 62 and p2 * dmax < 1 << 62:
        return q2 * T * T > p2 * d
    return np.array([q2 * int(t) ** 2 > p2 * int(v) for t, v in zip(T, d)], dtype=bool)


def deviation_count(x: int, alpha, T: np.ndarray | None = None,
                    sample: int = SAMPLE_SIZE) -> DeviationReport:
    """Count d in (x, 2x] with T(d) > alpha sqrt(d).

    ``T`` may carry precomputed periods for (x, 2x].
    """
    if x < 1:
        raise ValueError("x must be positive")
    alpha = as_rational(alpha)
    if T is None:
        T = period_range(x, 2 * x)
    d = np.arange(x + 1, 2 * x + 1, dtype=np.int64)
    hits = _exceeds(T, d, alpha)
    first, second = analytic.rhs_corollaries(x, alpha)
    members = [int(v) for v in d[hits][:sample]]
    return DeviationReport(x, alpha, int(hits.sum()), first, second, members)


# -- bound verification ------------------------------------------------------

@dataclass
class CheckRow:
    check: str
    x: int
    measured: float
    lower: float | None
    upper: float | None
    passed: bool
    informational: bool = False


@dataclass
class VerificationReport:
    x: int
    sum_g: int
    theta_empirical: float
    eq2A_pass: bool
    sum_g2: int
    eq3A_pass: bool
    corollary_rows: list[CheckRow] = field(default_factory=list)

    def rows(self) -> list[CheckRow]:
        env = analytic.envelope_eq2A(self.x)
        base = [
            CheckRow("eq2A_sum_g", self.x, self.sum_g, env.lower, env.upper,
                     env.contains(self.sum_g)),
            CheckRow("eq2A_theta", self.x, self.theta_empirical, 0.0, 1.0, self.eq2A_pass),
            CheckRow("eq3A_sum_g2", self.x, self.sum_g2, 0.0, analytic.rhs_eq3A(self.x),
                     self.eq3A_pass),
        ]
        return base + self.corollary_rows

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows() if not r.informational)


def verify_theorem1(x: int, g: np.ndarray | None = None, chunk_size: int = DEFAULT_CHUNK,
                    shards: int | None = None) -> VerificationReport:
    """Check the first-moment envelope and second-moment bound for g at x.

    ``g`` may carry precomputed values for d in (0, x].
    """
    if x < 2:
        raise ValueError("x must be at least 2")
    if g is None:
        g = g_range(0, x, chunk_size, shards or os.cpu_count() or 1)
    sums = _power_sums(g, (1, 2))
    theta = analytic.theta_eq2A(x, sums[1])
    return VerificationReport(
        x, sums[1], theta, 0.0 <= theta <= 1.0,
        sums[2], sums[2] <= analytic.rhs_eq3A(x),
    )


def verify_corollaries(x: int, alphas, T: np.ndarray | None = None) -> list[CheckRow]:
    """Corollary 1 rows at x, then one large-deviation row per alpha.

    ``T`` may carry periods for d in (0, 2x]. The deviation rows are flagged
    informational: their bounds only hold up to o(1) terms.
    """
    if x < 2:
        raise ValueError("x must be at least 2")
    if T is None:
        T = period_range(0, 2 * x)
    sums = _power_sums(T[:x], (1, 2))
    rows = [
        CheckRow("cor1_sum_T", x, sums[1], 0.0, analytic.rhs_corollary1(x),
                 sums[1] <= analytic.rhs_corollary1(x)),
        CheckRow("cor1_sum_T2", x, sums[2], 0.0, analytic.rhs_eq3A(x),
                 sums[2] <= analytic.rhs_eq3A(x)),
    ]
    for alpha in alphas:
        rep = deviation_count(x, alpha, T=T[x:2 * x])
        bound = min(rep.bound_first, rep.bound_second)
        rows.append(CheckRow(f"cor2_alpha={rep.alpha}", x, rep.count, 0.0, bound,
                             rep.count <= bound, informational=True))
    return rows


# -- figure series -----------------------------------------------------------

def sample_points(x_max: int, step: int) -> list[int]:
    if step > 0:
        return list(range(step, x_max + 1, step))
    pts = np.unique(np.round(np.geomspace(100, x_max, LOG_POINTS)).astype(np.int64))
    return [int(p) for p in pts]


def figure_series(x_max: int, step: int, which: str = "fig1",
                  T: np.ndarray | None = None) -> list[tuple[int, float, float]]:
    """Normalised mean and second-moment curves of T.

    fig1: (mean T)/(sqrt(x)/log(x)^0.6) and (mean T^2)/(x/log(x)^0.8).
    fig2: means over prime d <= x, divided by sqrt(x) and x.
    ``T`` may carry periods for d in (0, x_max].
    """
    if x_max < 100:
        raise ValueError("x_max must be at least 100")
    if step < 0:
        raise ValueError("step must be non-negative")
    if which not in ("fig1", "fig2"):
        raise ValueError(f"unknown figure {which!r}")
    if T is None:
        T = period_range(0, x_max)
    T = T[:x_max]
    if which == "fig2":
        T = np.where(prime_sieve(x_max)[1:], T, 0)
        npr = np.cumsum(prime_sieve(x_max)[1:], dtype=np.int64)
    s1 = np.cumsum(T, dtype=np.int64)
    s2 = np.cumsum(T * T, dtype=np.int64)
    out = []
    for x in sample_points(x_max, step):
        lx = math.log(x)
        if which == "fig1":
            mean = s1[x - 1] / x / (math.sqrt(x) / lx ** 0.6)
            second = s2[x - 1] / x / (x / lx ** 0.8)
        else:
            n = int(npr[x - 1])
            mean = s1[x - 1] / n / math.sqrt(x)
            second = s2[x - 1] / n / x
        out.append((x, float(mean), float(second)))
    return out
