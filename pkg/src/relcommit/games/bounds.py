"""Closed-form bounds on game values and tail probabilities (64-bit floats)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class BoundSeries:
    q: int
    terms: tuple[float, ...]  # terms[i] bounds the (i+1)-player value
    formula: str

    def __getitem__(self, m: int) -> float:
        if not 1 <= m <= len(self.terms):
            raise IndexError(f"bound defined for m in 1..{len(self.terms)}")
        return self.terms[m - 1]

    @property
    def last(self) -> float:
        return self.terms[-1]


def rational_le_float(r: Fraction, f: float) -> bool:
    """``r <= f`` after rounding ``f`` one ulp upward, so a true inequality is never rejected."""
    if math.isinf(f):
        return f > 0
    return Fraction(r) <= Fraction(math.nextafter(f, math.inf))


def cauchy_schwarz_bound(m: int, c: float) -> float:
    """Upper bound on the average probability of m events whose pairwise
    intersections sum to c."""
    if m < 1 or c < 0:
        raise ValueError("need m >= 1 and c >= 0")
    return (1 + math.sqrt(1 + 4 * c)) / (2 * m)


RECURSIVE_FORMULA = "c_1 = 1/q; c_m = (1 + sqrt(1 + 4 q (q-1) c_{m-1})) / (2q)"
SIMPLIFIED_FORMULA = "c_1 = 2^-n; c_m = 2^-(n+1) + sqrt(c_{m-1})"


def recursive_bound(q: int, m: int) -> BoundSeries:
    """Upper bounds on the m-player product game value over F_q.

    Evaluated as 1/(2q) + sqrt(1/(4q^2) + (1 - 1/q) c) which equals the
    textbook recursion but does not overflow for q = 2^512.
    """
    if q < 2 or m < 1:
        raise ValueError("need q >= 2 and m >= 1")
    inv_q = 1 / q
    c = inv_q
    terms = [c]
    for _ in range(m - 1):
        c = inv_q / 2 + math.sqrt(inv_q * inv_q / 4 + (1 - inv_q) * c)
        terms.append(c)
    return BoundSeries(q, tuple(terms), RECURSIVE_FORMULA)


def simplified_bound(n: int, m: int) -> BoundSeries:
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    c = math.ldexp(1.0, -n)
    half = math.ldexp(1.0, -(n + 1))
    terms = [c]
    for _ in range(m - 1):
        c = half + math.sqrt(c)
        terms.append(c)
    return BoundSeries(1 << n, tuple(terms), SIMPLIFIED_FORMULA)


def chernoff_tail(mu: float, s: float) -> float:
    """Upper bound exp(-(sqrt(mu) - s/sqrt(mu))^2 / 2) on Pr[X < s] for a sum of
    independent bits with mean mu."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    if s < 0 or s > mu:
        raise ValueError(f"threshold s={s} outside [0, mu={mu}]; the tail bound does not apply")
    r = math.sqrt(mu)
    return math.exp(-((r - s / r) ** 2) / 2)


@dataclass(frozen=True)
class ChshnBounds:
    n: int
    classical: float
    quantum: float

    @property
    def classical_epsilon(self) -> float:
        """Binding parameter p0 + p1 - 1 = 2 (omega - 1/2)."""
        return math.ldexp(1.0, -self.n)

    @property
    def quantum_epsilon(self) -> float:
        # 2^((1-n)/2), kept exact in the exponent
        if self.n % 2 == 0:
            return math.ldexp(math.sqrt(2.0), -(self.n // 2))
        return math.ldexp(1.0, -((self.n - 1) // 2))


def chshn_bounds(n: int) -> ChshnBounds:
    if n < 1:
        raise ValueError("n must be positive")
    classical = 0.5 + math.ldexp(1.0, -(n + 1))
    quantum = 0.5 + 2.0 ** (-(n + 1) / 2)
    return ChshnBounds(n, classical, quantum)
