"""Arithmetic in GF(2^n) with an explicit reduction polynomial.

Elements are integers whose bit j is the coefficient of X^j. The default
modulus for each supported degree comes from a fixed table of low-weight
irreducible polynomials (smallest trinomial X^n + X^k + 1 when one exists,
otherwise the lexicographically smallest pentanomial), so serialized payloads
are reproducible across implementations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from relcommit.bits import BitString

# degree -> middle exponents (the X^n and 1 terms are implicit)
LOW_WEIGHT_TABLE: dict[int, tuple[int, ...]] = {
    1: (), 2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (4, 3, 1),
    9: (1,), 10: (3,), 11: (2,), 12: (3,), 13: (4, 3, 1), 14: (5,), 15: (1,),
    16: (5, 3, 1), 17: (3,), 18: (3,), 19: (5, 2, 1), 20: (3,), 21: (2,),
    22: (1,), 23: (5,), 24: (4, 3, 1), 25: (3,), 26: (4, 3, 1), 27: (5, 2, 1),
    28: (1,), 29: (2,), 30: (1,), 31: (3,), 32: (7, 3, 2), 33: (10,), 34: (7,),
    35: (2,), 36: (9,), 37: (6, 4, 1), 38: (6, 5, 1), 39: (4,), 40: (5, 4, 3),
    41: (3,), 42: (7,), 43: (6, 4, 3), 44: (5,), 45: (4, 3, 1), 46: (1,),
    47: (5,), 48: (5, 3, 2), 49: (9,), 50: (4, 3, 2), 51: (6, 3, 1), 52: (3,),
    53: (6, 2, 1), 54: (9,), 55: (7,), 56: (7, 4, 2), 57: (4,), 58: (19,),
    59: (7, 4, 2), 60: (1,), 61: (5, 2, 1), 62: (29,), 63: (1,), 64: (4, 3, 1),
    128: (7, 2, 1), 256: (10, 5, 2), 512: (8, 5, 2),
}


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[X] polynomials."""
    if a.bit_count() < b.bit_count():
        a, b = b, a
    r = 0
    while b:
        low = b & -b
        r ^= a << (low.bit_length() - 1)
        b ^= low
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for a polynomial given as an integer."""
    n = f.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not f & 1:
        return False

    def frobenius(k: int) -> int:
        x = 2
        for _ in range(k):
            x = poly_mod(clmul(x, x), f)
        return x

    if frobenius(n) != 2:
        return False
    return all(poly_gcd(frobenius(n // p) ^ 2, f) == 1 for p in _prime_factors(n))


@dataclass(frozen=True)
class ReductionPolynomial:
    """Sparse modulus, exponents listed in descending order (including n and 0)."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(sorted(set(self.exponents), reverse=True))
        if exps != tuple(self.exponents):
            object.__setattr__(self, "exponents", exps)
        if len(exps) < 2 or exps[-1] != 0 or exps[0] < 1:
            raise ValueError(f"malformed reduction polynomial {self.exponents!r}")
        if LOW_WEIGHT_TABLE.get(exps[0]) != exps[1:-1] and not is_irreducible(self.mask):
            raise ValueError(f"{self} is reducible over GF(2)")

    @classmethod
    def for_degree(cls, n: int) -> "ReductionPolynomial":
        return _table_poly(n)

    @classmethod
    def from_int(cls, f: int) -> "ReductionPolynomial":
        return cls(tuple(j for j in range(f.bit_length() - 1, -1, -1) if f >> j & 1))

    @property
    def degree(self) -> int:
        return self.exponents[0]

    @property
    def mask(self) -> int:
        return sum(1 << e for e in self.exponents)

    def reduce(self, a: int) -> int:
        n = self.degree
        low = self.exponents[1:]
        full = (1 << n) - 1
        while a >> n:
            h = a >> n
            a &= full
            for e in low:
                a ^= h << e
        return a

    def __str__(self) -> str:
        terms = ["1" if e == 0 else "X" if e == 1 else f"X^{e}" for e in self.exponents]
        return " + ".join(terms)


@lru_cache(maxsize=None)
def _table_poly(n: int) -> ReductionPolynomial:
    if n not in LOW_WEIGHT_TABLE:
        raise ValueError(f"no built-in reduction polynomial for degree {n}")
    return ReductionPolynomial((n, *LOW_WEIGHT_TABLE[n], 0))


@dataclass(frozen=True)
class FieldElement:
    value: int
    poly: ReductionPolynomial

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.poly.degree):
            raise ValueError(f"value {self.value} is not a degree-{self.poly.degree} field element")

    @property
    def n(self) -> int:
        return self.poly.degree

    def is_zero(self) -> bool:
        return self.value == 0

    def hex(self) -> str:
        return format(self.value, f"0{(self.n + 3) // 4}x")

    def to_bits(self) -> BitString:
        return BitString(self.value, self.n)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        _check_same_field(self.poly, other.poly)
        return FieldElement(self.value ^ other.value, self.poly)

    __xor__ = __add__
    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return gf_mul(self, other)

    def inverse(self) -> "FieldElement":
        return gf_inv(self)


def _check_same_field(p: ReductionPolynomial, q: ReductionPolynomial) -> None:
    if p != q:
        raise ValueError(f"degree mismatch: elements of GF(2^{p.degree}) mod {p} and GF(2^{q.degree}) mod {q}")


def gf_mul(a: FieldElement, b: FieldElement, p: ReductionPolynomial | None = None) -> FieldElement:
    p = p or a.poly
    _check_same_field(a.poly, p)
    _check_same_field(b.poly, p)
    return FieldElement(p.reduce(clmul(a.value, b.value)), p)


def gf_inv(a: FieldElement, p: ReductionPolynomial | None = None) -> FieldElement:
    """Multiplicative inverse via the extended Euclidean algorithm in GF(2)[X]."""
    p = p or a.poly
    _check_same_field(a.poly, p)
    if a.value == 0:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    r0, r1 = p.mask, a.value
    s0, s1 = 0, 1
    while r1:
        q = 0
        while r0.bit_length() >= r1.bit_length() and r0:
            shift = r0.bit_length() - r1.bit_length()
            q ^= 1 << shift
            r0 ^= r1 << shift
        r0, r1 = r1, r0
        s0, s1 = s1, s0 ^ clmul(q, s1)
    # r0 is now the gcd, 1 for an irreducible modulus
    return FieldElement(p.reduce(s0), p)


class Field:
    """Convenience handle on GF(2^n)."""

    def __init__(self, n: int | None = None, poly: ReductionPolynomial | None = None):
        if poly is None:
            if n is None:
                raise ValueError("give a degree or a reduction polynomial")
            poly = ReductionPolynomial.for_degree(n)
        elif n is not None and n != poly.degree:
            raise ValueError(f"degree {n} does not match polynomial {poly}")
        self.poly = poly

    @property
    def n(self) -> int:
        return self.poly.degree

    @property
    def order(self) -> int:
        return 1 << self.n

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value, self.poly)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self.poly)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self.poly)

    def from_hex(self, s: str) -> FieldElement:
        return FieldElement(int(s, 16), self.poly)

    def elements(self) -> Iterator[FieldElement]:
        for v in range(self.order):
            yield FieldElement(v, self.poly)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.poly == self.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __repr__(self) -> str:
        return f"Field(GF(2^{self.n}) mod {self.poly})"
