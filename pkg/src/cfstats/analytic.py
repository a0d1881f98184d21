"""Explicit constants and bounds attached to the moments of g and T.

Everything here is double precision except the harmonic tail, which is summed
exactly and rounded once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

LOG2 = math.log(2.0)
C1 = 4.0 / 3.0 * LOG2
C2 = (8.0 * math.sqrt(2.0) - 4.0) / 3.0 * LOG2

# B_2j / (2j)! for j = 1..8
_BERNOULLI_OVER_FACT = [
    Fraction(1, 6) / math.factorial(2),
    Fraction(-1, 30) / math.factorial(4),
    Fraction(1, 42) / math.factorial(6),
    Fraction(-1, 30) / math.factorial(8),
    Fraction(5, 66) / math.factorial(10),
    Fraction(-691, 2730) / math.factorial(12),
    Fraction(7, 6) / math.factorial(14),
    Fraction(-3617, 510) / math.factorial(16),
]


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundEnvelope:
    x: int
    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class ConstantsReport:
    c1: float
    c2: float
    F2: float
    Htilde1: float
    A: float
    B: float
    C: float
    zeta2: float
    zeta3: float
    zeta4: float


# -- Lemma-type quantities ---------------------------------------------------

def harmonic_tail_sum(y: int) -> Fraction:
    """Exact value of 1/(y+1) + ... + 1/(2y)."""
    if y < 1:
        raise ValueError(f"y must be a positive integer, got {y}")
    return sum((Fraction(1, q) for q in range(y + 1, 2 * y + 1)), Fraction(0))


def _theta(y: int, s: Fraction) -> float:
    return (1.0 / (LOG2 - float(s)) - 4 * y) / 2.0


def harmonic_tail(y: int) -> tuple[Fraction, float]:
    """Return the exact tail sum and theta with sum = log 2 - 1/(4y + 2 theta)."""
    s = harmonic_tail_sum(y)
    return s, _theta(y, s)


def harmonic_tails(ymax: int) -> Iterator[tuple[int, Fraction, float]]:
    """Yield (y, sum, theta) for y = 1..ymax, updating the sum incrementally."""
    s = Fraction(1, 2)
    for y in range(1, ymax + 1):
        if y > 1:
            s += Fraction(1, 2 * y - 1) + Fraction(1, 2 * y) - Fraction(1, y)
        yield y, s, _theta(y, s)


def bernoulli3_frac(x):
    """Periodic B_3 evaluated at the fractional part of x (scalar or array)."""
    f = np.asarray(x, dtype=float) % 1.0
    out = f * (f * (f - 1.5) + 0.5)
    return float(out) if out.ndim == 0 else out


# -- zeta and Dirichlet series -----------------------------------------------

def zeta(s: float, n_terms: int = 16) -> float:
    """Riemann zeta for real s > 1 by direct summation plus Euler-Maclaurin tail."""
    if not s > 1:
        raise ValueError(f"zeta needs s > 1, got {s}")
    N = n_terms
    head = math.fsum(n ** -s for n in range(1, N))
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    # derivative factor s(s+1)...(s+2j-2) * N^(-s-2j+1)
    rising = s
    for j, coef in enumerate(_BERNOULLI_OVER_FACT, start=1):
        tail += float(coef) * rising * N ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


def dirichlet_F(s: float) -> float:
    """Sum of c(n) n^-s in closed form."""
    if not s > 1:
        raise ValueError(f"F(s) needs s > 1, got {s}")
    return (4 ** s - 2 ** s + 1) / (4 ** s - 2 ** (s - 1)) * zeta(s) ** 2 / zeta(s + 1)


def dirichlet_F2_alt() -> float:
    return 13.0 / 14.0 * zeta(2) ** 2 / zeta(3)


def htilde(s: float) -> float:
    return (4 ** (s + 1) + 2) / (4 ** (s + 1) - 1) * zeta(s + 1) / zeta(2 * s + 2)


def htilde_at_1() -> tuple[float, float]:
    """Return (Htilde(1), Htilde(1)/2)."""
    h = htilde(1.0)
    return h, h / 2.0


# -- the three unit-square integrals ----------------------------------------

def _ratio_min(a, b):
    return np.minimum((1 - a) / b, (1 - b) / a)


def _integrand_A(a, b):
    return np.minimum(0.5, 1 - a) * np.minimum(0.5, 1 - b) * _ratio_min(a, b)


def _integrand_B(a, b):
    return (np.minimum(0.5, 1 - a) + np.minimum(0.5, 1 - b)) * _ratio_min(a, b)


def _integrand_C(a, b):
    return _ratio_min(a, b)


INTEGRANDS: dict[str, Callable] = {"A": _integrand_A, "B": _integrand_B, "C": _integrand_C}

CLOSED_FORMS = {
    "A": 7.0 / 6.0 * LOG2 - 37.0 / 72.0,
    "B": 19.0 / 6.0 * LOG2 - 11.0 / 12.0,
    "C": 2.0 * LOG2,
}

# The kink lines a=b, a+b=1, a=1/2, b=1/2 all meet at the centre, cutting the
# square into eight triangles (corner, edge midpoint, centre) on which each
# integrand is smooth. Each triangle is collapsed onto its corner.
_CORNERS = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
_TRIANGLES = []
for cx, cy in _CORNERS:
    for mx, my in ((0.5, cy), (cx, 0.5)):
        _TRIANGLES.append(((cx, cy), (mx, my), (0.5, 0.5)))

_GL_ORDER = 12
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
MAX_DEPTH = 40


def _duffy_rule(f, tri, u0, u1, v0, v1):
    (x0, y0), (x1, y1), (x2, y2) = tri
    det = abs((x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1))
    u = 0.5 * (u1 - u0) * _GL_X + 0.5 * (u1 + u0)
    v = 0.5 * (v1 - v0) * _GL_X + 0.5 * (v1 + v0)
    U, V = np.meshgrid(u, v, indexing="ij")
    a = x0 + U * ((x1 - x0) + V * (x2 - x1))
    b = y0 + U * ((y1 - y0) + V * (y2 - y1))
    w = np.outer(_GL_W, _GL_W) * 0.25 * (u1 - u0) * (v1 - v0)
    return float((w * f(a, b) * U).sum()) * det


def _adaptive(f, tri, u0, u1, v0, v1, coarse, tol, depth):
    um, vm = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
    cells = [(u0, um, v0, vm), (um, u1, v0, vm), (u0, um, vm, v1), (um, u1, vm, v1)]
    parts = [_duffy_rule(f, tri, *c) for c in cells]
    fine = sum(parts)
    if abs(fine - coarse) <= tol:
        return fine
    if depth >= MAX_DEPTH:
        raise QuadratureError("refinement depth exceeded")
    return sum(_adaptive(f, tri, *c, p, tol / 4, depth + 1) for c, p in zip(cells, parts))


def integral_ABC(which: str, tol: float = 1e-10) -> tuple[float, float]:
    """Return (numeric, closed form) for one of the integrals A, B, C over (0,1]^2."""
    if which not in INTEGRANDS:
        raise ValueError(f"unknown integral {which!r}")
    if tol < 1e-10:
        raise ValueError("tol must be at least 1e-10")
    f = INTEGRANDS[which]
    tri_tol = tol / (4 * len(_TRIANGLES))
    total = 0.0
    for tri in _TRIANGLES:
        coarse = _duffy_rule(f, tri, 0.0, 1.0, 0.0, 1.0)
        total += _adaptive(f, tri, 0.0, 1.0, 0.0, 1.0, coarse, tri_tol, 0)
    return total, CLOSED_FORMS[which]


# -- bound right-hand sides --------------------------------------------------

def envelope_eq2A(x: int) -> BoundEnvelope:
    """Envelope for the sum of g(d) over d <= x, with theta ranging over [0, 1]."""
    if x < 2:
        raise ValueError("x must be at least 2")
    r = math.sqrt(x)
    lower = C1 * x * r - 2 * x - 2 * r
    return BoundEnvelope(x, lower, lower + x + 4 * r)


def theta_eq2A(x: int, total: int) -> float:
    """Solve total = lower + theta (x + 4 sqrt(x)) for theta."""
    env = envelope_eq2A(x)
    return (total - env.lower) / (x + 4 * math.sqrt(x))


def rhs_eq3A(x: int) -> float:
    """Upper bound for the sum of g(d)^2 over d <= x."""
    if x < 1:
        raise ValueError("x must be positive")
    return 11.9 * x * x + 5 * x ** 1.5 * math.log(4 * math.e ** 4 * x) ** 2


def rhs_corollary1(x: int) -> float:
    return C1 * x ** 1.5


def rhs_corollaries(x: int, alpha) -> tuple[float, float]:
    """Return (c2 x / alpha, 47 x / alpha^2), the two large-deviation bounds."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return C2 * x / alpha, 47.0 * x / alpha ** 2


def constants_report(tol: float = 1e-10) -> ConstantsReport:
    return ConstantsReport(
        c1=C1,
        c2=C2,
        F2=dirichlet_F(2.0),
        Htilde1=htilde_at_1()[0],
        A=integral_ABC("A", tol)[0],
        B=integral_ABC("B", tol)[0],
        C=integral_ABC("C", tol)[0],
        zeta2=zeta(2.0),
        zeta3=zeta(3.0),
        zeta4=zeta(4.0),
    )
