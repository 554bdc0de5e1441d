import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcommit.bits import BitString, dham, select, wham, xor
from relcommit.gf2n import (
    LOW_WEIGHT_TABLE, Field, FieldElement, ReductionPolynomial, clmul, gf_inv, gf_mul, is_irreducible,
)


def B(s):
    return BitString.from_str(s)


# -- oracles -----------------------------------------------------------------

def schoolbook_mul(a: int, b: int, modulus: int) -> int:
    """Multiply coefficient lists, then long-divide; no shared code with gf2n."""
    n = modulus.bit_length() - 1
    ca = [(a >> i) & 1 for i in range(n)]
    cb = [(b >> i) & 1 for i in range(n)]
    prod = [0] * (2 * n)
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] ^= x & y
    cm = [(modulus >> i) & 1 for i in range(n + 1)]
    for deg in range(2 * n - 1, n - 1, -1):
        if prod[deg]:
            for i, c in enumerate(cm):
                prod[deg - n + i] ^= c
    return sum(bit << i for i, bit in enumerate(prod[:n]))


def trial_division_irreducible(f: int) -> bool:
    n = f.bit_length() - 1
    for g in range(2, 1 << (n // 2 + 1)):
        if g.bit_length() - 1 > n // 2:
            break
        # polynomial remainder
        r = f
        while r.bit_length() >= g.bit_length():
            r ^= g << (r.bit_length() - g.bit_length())
        if r == 0:
            return False
    return n >= 1


# -- bit strings --------------------------------------------------------------

def test_xor_examples():
    assert xor(B("0110"), B("0110")) == B("0000")
    assert xor(B("1010"), B("0110")) == B("1100")
    x = B("1011")
    assert xor(x, BitString.zeros(4)) == x


def test_xor_length_mismatch():
    with pytest.raises(ValueError):
        xor(B("01"), B("011"))
    with pytest.raises(ValueError):
        dham(B("01"), B("011"))


def test_select_branches():
    assert select(0, B("1011")) == B("0000")
    assert select(1, B("1011")) == B("1011")
    assert select(0, BitString.zeros(3)) == BitString.zeros(3)


def test_weight_and_distance_examples():
    assert wham(B("0110")) == Fraction(1, 2)
    assert dham(B("1010"), B("0110")) == Fraction(1, 2)
    assert dham(B("111"), B("111")) == 0


def test_hex_is_msb_nibble_first():
    assert B("000111101").hex() == "03d"
    assert BitString.from_hex("03d", 9) == B("000111101")
    assert B("0110").bit(1) == 1 and B("0110").bit(0) == 0


def test_invalid_construction():
    with pytest.raises(ValueError):
        BitString(4, 2)
    with pytest.raises(ValueError):
        BitString.from_str("012")


strings = st.integers(1, 40).flatmap(
    lambda n: st.tuples(*(st.integers(0, (1 << n) - 1).map(lambda v, n=n: BitString(v, n)) for _ in range(3))))


@given(strings)
def test_distance_properties(xyz):
    x, y, z = xyz
    assert 0 <= wham(x) <= 1
    assert dham(x, BitString.zeros(x.n)) == wham(x)
    assert wham(xor(x, y)) == dham(x, y)
    assert dham(x, z) <= dham(x, y) + dham(y, z)
    assert str(BitString.from_str(str(x))) == str(x)


# -- field arithmetic -----------------------------------------------------------

def test_gf8_examples():
    F = Field(3)
    assert str(F.poly) == "X^3 + X + 1"
    assert F(0b110) * F(0b111) == F(0b100)
    assert gf_inv(F(0b010)) == F(0b101)
    assert gf_inv(F.one) == F.one


def test_inverse_of_zero_is_a_domain_error():
    with pytest.raises(ZeroDivisionError):
        gf_inv(Field(4).zero)


def test_degree_mismatch():
    with pytest.raises(ValueError):
        gf_mul(Field(3)(1), Field(4)(1))


def test_inv_matches_exhaustive_search_gf8():
    F = Field(3)
    for a in range(1, 8):
        brute = next(b for b in range(1, 8) if schoolbook_mul(a, b, F.poly.mask) == 1)
        assert gf_inv(F(a)).value == brute


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_field_axioms_exhaustive(n):
    F = Field(n)
    els = list(F.elements())
    one, zero = F.one, F.zero
    for a in els:
        assert a * one == a and a * zero == zero and a + zero == a and a + a == zero
        if not a.is_zero():
            assert a * gf_inv(a) == one
    for a, b in itertools.product(els, repeat=2):
        assert (a * b).value == schoolbook_mul(a.value, b.value, F.poly.mask)
        assert a * b == b * a and a + b == b + a
    for a, b, c in itertools.product(els, repeat=3):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("n", sorted(LOW_WEIGHT_TABLE))
def test_table_polynomials_irreducible(n):
    p = ReductionPolynomial.for_degree(n)
    assert p.degree == n
    assert is_irreducible(p.mask)
    if n <= 20:
        assert trial_division_irreducible(p.mask)


def test_table_entries_are_minimal_low_weight():
    for n in [k for k in LOW_WEIGHT_TABLE if 2 <= k <= 64]:
        tri = [k for k in range(1, n) if is_irreducible((1 << n) | (1 << k) | 1)]
        if tri:
            assert LOW_WEIGHT_TABLE[n] == (tri[0],)
        else:
            assert len(LOW_WEIGHT_TABLE[n]) == 3


def test_degree_512_pentanomial():
    assert str(ReductionPolynomial.for_degree(512)) == "X^512 + X^8 + X^5 + X^2 + 1"


def test_user_polynomials_checked():
    assert ReductionPolynomial((4, 3, 0)).degree == 4
    with pytest.raises(ValueError):
        ReductionPolynomial((4, 2, 0))          # (X^2 + X + 1)^2
    assert ReductionPolynomial.from_int(0b11).degree == 1
    with pytest.raises(ValueError):             # X^2 + 1 = (X + 1)^2
        ReductionPolynomial.from_int(0b101)


@pytest.mark.parametrize("n", [8, 13, 64, 128, 256, 512])
def test_random_field_properties(n):
    rng = random.Random(n)
    F = Field(n)
    samples = 10_000 if n <= 64 else 2_000
    for _ in range(samples):
        a, b, c = (F(rng.getrandbits(n)) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == F.one


@settings(max_examples=300)
@given(st.integers(0, (1 << 16) - 1), st.integers(0, (1 << 16) - 1))
def test_mul_against_schoolbook_gf2_16(a, b):
    F = Field(16)
    assert (F(a) * F(b)).value == schoolbook_mul(a, b, F.poly.mask)


def test_clmul_small():
    assert clmul(0b11, 0b11) == 0b101
    assert clmul(0, 12345) == 0


def test_field_element_bounds():
    with pytest.raises(ValueError):
        FieldElement(8, ReductionPolynomial.for_degree(3))
    assert Field(8).from_hex("ff").value == 255
    assert Field(9)(5).hex() == "005"
