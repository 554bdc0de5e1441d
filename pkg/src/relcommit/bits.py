"""Fixed-length bit strings.

A ``BitString`` is stored as an ``n``-bit integer. Bit ``j`` of the integer is
the coefficient of X^j when the same string is read as a field element, and
the text form is the usual binary literal (most significant bit first), so
``BitString.from_str("0110").value == 6``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True, order=True)
class BitString:
    value: int
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"bit string length must be a positive integer, got {self.n!r}")
        if not 0 <= self.value < (1 << self.n):
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(0, n)

    @classmethod
    def from_str(cls, s: str) -> "BitString":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return cls(int(s, 2), len(s))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        """Build from bits listed most significant first (text order)."""
        bits = list(bits)
        return cls.from_str("".join("1" if b else "0" for b in bits))

    @classmethod
    def from_hex(cls, s: str, n: int) -> "BitString":
        return cls(int(s, 16) if s else 0, n)

    def bit(self, j: int) -> int:
        """Coefficient of X^j."""
        if not 0 <= j < self.n:
            raise IndexError(j)
        return (self.value >> j) & 1

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in str(self))

    def weight(self) -> int:
        return bin(self.value).count("1")

    def hex(self) -> str:
        return format(self.value, f"0{(self.n + 3) // 4}x")

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")

    def __xor__(self, other: "BitString") -> "BitString":
        return xor(self, other)

    def __len__(self) -> int:
        return self.n


def _check_same_length(a: BitString, b: BitString) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")


def xor(a: BitString, b: BitString) -> BitString:
    _check_same_length(a, b)
    return BitString(a.value ^ b.value, a.n)


def select(d: int, x: BitString) -> BitString:
    """The bit-by-string product d·x: 0^n for d = 0, x for d = 1."""
    if d not in (0, 1):
        raise ValueError(f"d must be a bit, got {d!r}")
    return x if d else BitString.zeros(x.n)


def wham(x: BitString) -> Fraction:
    """Fractional Hamming weight."""
    return Fraction(x.weight(), x.n)


def dham(x: BitString, y: BitString) -> Fraction:
    """Fractional Hamming distance."""
    return wham(xor(x, y))
