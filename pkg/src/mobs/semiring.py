"""Bitstrings of fixed width under OR/AND, and square matrices over them.

A bitstring of width ``k`` is stored as a Python ``int`` whose bit ``i`` is
position ``i`` (LSB-first). CPython ints are arrays of machine digits, so OR
and AND run word-parallel without any manual packing. Values never carry
bits at or above position ``k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from operator import and_, or_
from typing import Sequence


@dataclass(frozen=True, slots=True)
class Bitstring:
    """Element of the semiring of width-``k`` bitstrings (OR is +, AND is *)."""

    width: int
    value: int = 0

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"bitstring width must be >= 1, got {self.width}")
        if self.value < 0 or self.value >> self.width:
            raise ValueError(f"value {self.value:#x} does not fit in {self.width} bits")

    @classmethod
    def zeros(cls, width: int) -> Bitstring:
        return cls(width, 0)

    @classmethod
    def ones(cls, width: int) -> Bitstring:
        return cls(width, (1 << width) - 1)

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> Bitstring:
        """Build from position-ordered bits: ``"110"`` has bits 0 and 1 set."""
        value = 0
        for i, b in enumerate(bits):
            if b in (1, "1"):
                value |= 1 << i
            elif b not in (0, "0"):
                raise ValueError(f"not a bit: {b!r}")
        return cls(len(bits), value)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError(i)
        return (self.value >> i) & 1

    def bits(self) -> str:
        return "".join(str((self.value >> i) & 1) for i in range(self.width))

    def to_hex(self) -> str:
        return int_to_hex(self.value, self.width)

    @classmethod
    def from_hex(cls, text: str, width: int) -> Bitstring:
        return cls(width, hex_to_int(text, width))

    def __or__(self, other: Bitstring) -> Bitstring:
        return bs_or(self, other)

    def __and__(self, other: Bitstring) -> Bitstring:
        return bs_and(self, other)

    def __repr__(self):
        return f"Bitstring({self.bits()!r})"


def _check_width(a: Bitstring, b: Bitstring):
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")


def bs_or(a: Bitstring, b: Bitstring) -> Bitstring:
    _check_width(a, b)
    return Bitstring(a.width, a.value | b.value)


def bs_and(a: Bitstring, b: Bitstring) -> Bitstring:
    _check_width(a, b)
    return Bitstring(a.width, a.value & b.value)


def int_to_hex(value: int, width: int) -> str:
    """Hex of ``ceil(width/8)`` bytes; bit ``i`` is bit ``i % 8`` of byte ``i // 8``."""
    return value.to_bytes((width + 7) // 8, "little").hex()


def hex_to_int(text: str, width: int) -> int:
    nbytes = (width + 7) // 8
    try:
        raw = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"bad hex bitstring {text!r}") from exc
    if len(raw) != nbytes:
        raise ValueError(f"expected {nbytes} bytes for width {width}, got {len(raw)}")
    value = int.from_bytes(raw, "little")
    if value >> width:
        raise ValueError(f"nonzero pad bits in {text!r} for width {width}")
    return value


@dataclass(frozen=True, slots=True)
class BitMatrix:
    """An ``n x n`` matrix over width-``k`` bitstrings.

    Entries are kept as raw ints in ``rows`` so the matrix product stays in
    native integer operations; :meth:`entry` hands out :class:`Bitstring`.
    """

    n: int
    width: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"matrix dimension must be >= 1, got {self.n}")
        if self.width < 1:
            raise ValueError(f"entry width must be >= 1, got {self.width}")
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise ValueError(f"rows do not form a {self.n}x{self.n} grid")
        limit = 1 << self.width
        for row in self.rows:
            for v in row:
                if not 0 <= v < limit:
                    raise ValueError(f"entry {v:#x} does not fit in {self.width} bits")

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[Bitstring]]) -> BitMatrix:
        n = len(entries)
        if n == 0:
            raise ValueError("empty matrix")
        width = entries[0][0].width
        for row in entries:
            for e in row:
                if e.width != width:
                    raise ValueError(f"width mismatch: {e.width} vs {width}")
        return cls(n, width, tuple(tuple(e.value for e in row) for row in entries))

    @classmethod
    def from_bits(cls, rows: Sequence[Sequence[str]]) -> BitMatrix:
        return cls.from_entries([[Bitstring.from_bits(s) for s in row] for row in rows])

    def entry(self, i: int, j: int) -> Bitstring:
        return Bitstring(self.width, self.rows[i][j])

    @property
    def entries(self) -> tuple[tuple[Bitstring, ...], ...]:
        return tuple(tuple(Bitstring(self.width, v) for v in row) for row in self.rows)

    def flat(self) -> tuple[int, ...]:
        return tuple(v for row in self.rows for v in row)

    def masked(self, mask: int) -> BitMatrix:
        """Keep only the bit positions set in ``mask`` in every entry."""
        return BitMatrix(self.n, self.width, tuple(tuple(v & mask for v in row) for row in self.rows))

    def to_hex(self) -> list[list[str]]:
        return [[int_to_hex(v, self.width) for v in row] for row in self.rows]

    @classmethod
    def from_hex(cls, rows: Sequence[Sequence[str]], width: int) -> BitMatrix:
        if not isinstance(rows, (list, tuple)) or not rows:
            raise ValueError("matrix must be a non-empty list of rows")
        return cls(len(rows), width, tuple(tuple(hex_to_int(h, width) for h in row) for row in rows))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(self.entry(i, j).bits() for j in range(self.n)) + "]"
                         for i in range(self.n))
        return f"BitMatrix([{body}])"


def _check_shape(x: BitMatrix, y: BitMatrix):
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: {x.n} vs {y.n}")
    if x.width != y.width:
        raise ValueError(f"width mismatch: {x.width} vs {y.width}")


def mat_mul(x: BitMatrix, y: BitMatrix) -> BitMatrix:
    """Matrix product with OR as sum and AND as product."""
    _check_shape(x, y)
    cols = tuple(zip(*y.rows))
    rows = tuple(
        tuple(reduce(or_, map(and_, row, col), 0) for col in cols)
        for row in x.rows
    )
    return BitMatrix(x.n, x.width, rows)


def mat_identity(n: int, k: int) -> BitMatrix:
    ones = (1 << k) - 1
    return BitMatrix(n, k, tuple(tuple(ones if i == j else 0 for j in range(n)) for i in range(n)))


def mat_zero(n: int, k: int) -> BitMatrix:
    return BitMatrix(n, k, tuple((0,) * n for _ in range(n)))


def random_matrix(n: int, k: int, rng: random.Random) -> BitMatrix:
    """Every one of the ``n*n*k`` bits is an independent fair coin from ``rng``."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    return BitMatrix(n, k, tuple(tuple(rng.getrandbits(k) for _ in range(n)) for _ in range(n)))


def matrices_agree_on(x: BitMatrix, y: BitMatrix, mask: int) -> bool:
    """True if every entry of ``x`` and ``y`` matches on the positions in ``mask``."""
    _check_shape(x, y)
    return not any((a ^ b) & mask for a, b in zip(x.flat(), y.flat()))

