import random

import pytest
from hypothesis import given, settings, strategies as st

from mobs.semiring import (
    BitMatrix,
    Bitstring,
    bs_and,
    bs_or,
    mat_identity,
    mat_mul,
    mat_zero,
    random_matrix,
)
from oracles import scalar_mat_mul

WIDTH = 37


def bitstrings(width=WIDTH):
    return st.integers(0, (1 << width) - 1).map(lambda v: Bitstring(width, v))


def test_or_examples():
    x = Bitstring.from_bits("0110")
    assert bs_or(Bitstring.zeros(4), x) == x
    assert bs_or(Bitstring.from_bits("1100"), Bitstring.from_bits("1010")) == Bitstring.from_bits("1110")
    assert bs_or(Bitstring.ones(4), x) == Bitstring.ones(4)


def test_and_examples():
    x = Bitstring.from_bits("0110")
    assert bs_and(Bitstring.ones(4), x) == x
    assert bs_and(Bitstring.from_bits("1100"), Bitstring.from_bits("1010")) == Bitstring.from_bits("1000")
    assert bs_and(Bitstring.zeros(4), x) == Bitstring.zeros(4)


def test_operators_match_functions():
    a, b = Bitstring.from_bits("1100"), Bitstring.from_bits("1010")
    assert a | b == bs_or(a, b)
    assert a & b == bs_and(a, b)


@pytest.mark.parametrize("op", [bs_or, bs_and])
def test_width_mismatch_rejected(op):
    with pytest.raises(ValueError, match="width"):
        op(Bitstring(4, 1), Bitstring(5, 1))


def test_construction_rejects_bad_values():
    with pytest.raises(ValueError):
        Bitstring(0, 0)
    with pytest.raises(ValueError):
        Bitstring(3, 8)  # bit 3 is past the width
    with pytest.raises(ValueError):
        Bitstring(3, -1)
    with pytest.raises(ValueError):
        BitMatrix(0, 3, ())
    with pytest.raises(ValueError):
        BitMatrix(2, 3, ((1, 2), (3,)))


@settings(max_examples=1000)
@given(bitstrings(), bitstrings(), bitstrings())
def test_semiring_laws(a, b, c):
    assert (a | b) | c == a | (b | c)
    assert (a & b) & c == a & (b & c)
    assert a | b == b | a
    assert a & b == b & a
    assert a & (b | c) == (a & b) | (a & c)
    assert a | Bitstring.zeros(WIDTH) == a
    assert a & Bitstring.ones(WIDTH) == a
    assert a & Bitstring.zeros(WIDTH) == Bitstring.zeros(WIDTH)


def test_bits_round_trip():
    x = Bitstring.from_bits("1101000001")
    assert x.bits() == "1101000001"
    assert [x.bit(i) for i in range(10)] == [1, 1, 0, 1, 0, 0, 0, 0, 0, 1]


def test_mat_mul_worked_example():
    A = BitMatrix.from_bits([["11", "00"], ["01", "10"]])
    B = BitMatrix.from_bits([["10", "01"], ["11", "00"]])
    expected = BitMatrix.from_bits([["10", "01"], ["10", "01"]])
    assert scalar_mat_mul(A, B) == expected
    assert mat_mul(A, B) == expected
    assert A @ B == expected


def test_mat_mul_matches_scalar_oracle(rng):
    for _ in range(300):
        n, k = rng.randint(1, 3), rng.randint(1, 8)
        x, y = random_matrix(n, k, rng), random_matrix(n, k, rng)
        assert mat_mul(x, y) == scalar_mat_mul(x, y)


def test_identity_and_zero(rng):
    assert mat_identity(1, 3) == BitMatrix.from_bits([["111"]])
    for _ in range(50):
        x = random_matrix(2, 2, rng)
        assert mat_mul(mat_identity(2, 2), x) == x
        assert mat_mul(x, mat_identity(2, 2)) == x
        assert mat_mul(mat_zero(2, 2), x) == mat_zero(2, 2)


def test_mat_mul_associative(rng):
    for _ in range(200):
        x, y, z = (random_matrix(3, 16, rng) for _ in range(3))
        assert mat_mul(mat_mul(x, y), z) == mat_mul(x, mat_mul(y, z))


def test_mat_mul_shape_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        mat_mul(mat_identity(2, 3), mat_identity(3, 3))
    with pytest.raises(ValueError, match="width"):
        mat_mul(mat_identity(2, 3), mat_identity(2, 4))


def test_random_matrix_determinism():
    a = random_matrix(3, 20, random.Random(5))
    b = random_matrix(3, 20, random.Random(5))
    assert a == b
    others = {random_matrix(3, 20, random.Random(s)) for s in range(10)}
    assert len(others) > 1
    tiny = {random_matrix(1, 1, random.Random(s)) for s in range(40)}
    assert tiny == {BitMatrix(1, 1, ((0,),)), BitMatrix(1, 1, ((1,),))}


def test_pad_bits_stay_zero_under_fuzz(rng):
    for _ in range(100):
        k = rng.randint(1, 70)
        m = random_matrix(3, k, rng)
        for _ in range(5):
            m = mat_mul(m, random_matrix(3, k, rng))
            assert all(v >> k == 0 for v in m.flat())
            assert all(len(h) == 2 * ((k + 7) // 8) for row in m.to_hex() for h in row)


def test_hex_fixed_vectors():
    x = Bitstring(10, 1 << 9)
    assert x.to_hex() == "0002"
    assert Bitstring.from_bits("1").to_hex() == "01"
    assert Bitstring.from_bits("00000000" "1").to_hex() == "0001"
    assert Bitstring(16, 0xABCD).to_hex() == "cdab"
    assert Bitstring.from_hex("0002", 10) == x


def test_hex_rejects_bad_input():
    with pytest.raises(ValueError, match="pad"):
        Bitstring.from_hex("0004", 10)  # bit 10 set
    with pytest.raises(ValueError, match="bytes"):
        Bitstring.from_hex("00", 10)
    with pytest.raises(ValueError):
        Bitstring.from_hex("zz", 8)


@given(st.integers(1, 200).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, (1 << k) - 1))))
def test_hex_round_trip(case):
    k, v = case
    x = Bitstring(k, v)
    assert Bitstring.from_hex(x.to_hex(), k) == x


def test_matrix_hex_round_trip(rng):
    m = random_matrix(3, 45, rng)
    assert BitMatrix.from_hex(m.to_hex(), 45) == m
