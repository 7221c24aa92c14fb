"""Permutations of bit positions and their action on bitstrings and matrices.

Conventions, fixed once for the whole package:

* ``compose(s, t)(i) == s(t(i))`` (apply ``t`` first);
* the action moves bit ``i`` to position ``s(i)``, so ``apply(compose(s, t), x)
  == apply(s, apply(t, x))``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .semiring import BitMatrix, Bitstring


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``{0, ..., k-1}`` given by its image list ``images[i] == s(i)``."""

    images: tuple[int, ...]

    def __init__(self, images: Sequence[int]):
        images = tuple(map(int, images))
        k = len(images)
        if not k:
            raise ValueError("permutation degree must be >= 1")
        if len(set(images)) != k or min(images) < 0 or max(images) >= k:
            raise ValueError(f"not a permutation of 0..{k - 1}: {list(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _unchecked(cls, images: tuple[int, ...]) -> Permutation:
        # for results that are bijections by construction (composition, powers)
        self = object.__new__(cls)
        object.__setattr__(self, "images", images)
        return self

    @classmethod
    def identity(cls, k: int) -> Permutation:
        return cls(range(k))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], k: int) -> Permutation:
        images = list(range(k))
        seen = set()
        for cycle in cycles:
            for p in cycle:
                if p in seen or not 0 <= p < k:
                    raise ValueError(f"cycles overlap or leave 0..{k - 1}: {cycles}")
                seen.add(p)
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self):
        return len(self.images)

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.images))

    @cached_property
    def decomposition(self) -> CycleDecomposition:
        return cycle_decomposition(self)

    @cached_property
    def order(self) -> int:
        return order(self.decomposition)

    @cached_property
    def _inverse_index(self) -> np.ndarray:
        inv = np.empty(self.degree, dtype=np.intp)
        inv[np.asarray(self.images, dtype=np.intp)] = np.arange(self.degree, dtype=np.intp)
        return inv

    def __repr__(self):
        return f"Permutation({list(self.images)})"


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles (length >= 2, canonical order) plus the fixed points."""

    cycles: tuple[tuple[int, ...], ...]
    fixed_points: frozenset[int]
    degree: int

    def __post_init__(self):
        covered = [p for c in self.cycles for p in c]
        if any(len(c) < 2 for c in self.cycles):
            raise ValueError("cycles must have length >= 2")
        if len(set(covered)) != len(covered) or set(covered) & self.fixed_points:
            raise ValueError("cycles and fixed points must be disjoint")
        if set(covered) | self.fixed_points != set(range(self.degree)):
            raise ValueError(f"decomposition does not cover 0..{self.degree - 1}")

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def lift(self, j: int) -> Permutation:
        """The ``j``-th cycle as a full permutation of the same degree."""
        return Permutation.from_cycles([self.cycles[j]], self.degree)

    def orbit_mask(self, j: int) -> int:
        mask = 0
        for p in self.cycles[j]:
            mask |= 1 << p
        return mask

    def recompose(self) -> Permutation:
        return Permutation.from_cycles(self.cycles, self.degree)


def _check_degree(s: Permutation, t: Permutation):
    if s.degree != t.degree:
        raise ValueError(f"degree mismatch: {s.degree} vs {t.degree}")


def compose(s: Permutation, t: Permutation) -> Permutation:
    """``s`` after ``t``."""
    _check_degree(s, t)
    si = s.images
    return Permutation._unchecked(tuple([si[x] for x in t.images]))


def inverse(s: Permutation) -> Permutation:
    return Permutation._unchecked(tuple(s._inverse_index.tolist()))


def perm_pow(s: Permutation, e: int) -> Permutation:
    """``s`` composed with itself ``e`` times, in O(k) for any size of ``e``.

    Each cycle is shifted by ``e`` reduced modulo its own length.
    """
    if e < 0:
        raise ValueError(f"exponent must be >= 0, got {e}")
    images = list(range(s.degree))
    for cycle in s.decomposition.cycles:
        L = len(cycle)
        shift = e % L
        for idx, p in enumerate(cycle):
            images[p] = cycle[(idx + shift) % L]
    return Permutation._unchecked(tuple(images))


def cycle_decomposition(s: Permutation) -> CycleDecomposition:
    """Canonical disjoint cycles: each starts at its smallest point, sorted by it."""
    seen = bytearray(s.degree)
    cycles = []
    fixed = []
    for start in range(s.degree):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = 1
        p = s.images[start]
        while p != start:
            cycle.append(p)
            seen[p] = 1
            p = s.images[p]
        if len(cycle) == 1:
            fixed.append(start)
        else:
            cycles.append(tuple(cycle))
    return CycleDecomposition(tuple(cycles), frozenset(fixed), s.degree)


def order(d: CycleDecomposition) -> int:
    return math.lcm(*d.lengths) if d.cycles else 1


def random_with_cycle_type(lengths: Sequence[int], k: int, rng: random.Random) -> Permutation:
    """Uniform permutation of degree ``k`` with nontrivial cycle lengths ``lengths``.

    Positions are shuffled and cut into consecutive runs; every permutation of
    the requested type comes out of the same number of shuffles.
    """
    if any(L < 2 for L in lengths):
        raise ValueError(f"cycle lengths must be >= 2: {list(lengths)}")
    if sum(lengths) > k:
        raise ValueError(f"cycle lengths sum to {sum(lengths)} > degree {k}")
    points = list(range(k))
    rng.shuffle(points)
    cycles, pos = [], 0
    for L in lengths:
        cycles.append(points[pos:pos + L])
        pos += L
    return Permutation.from_cycles(cycles, k)


def _permute_ints(s: Permutation, values: Sequence[int], width: int) -> list[int]:
    if s.degree != width:
        raise ValueError(f"permutation degree {s.degree} does not match width {width}")
    nbytes = (width + 7) // 8
    buf = b"".join(v.to_bytes(nbytes, "little") for v in values)
    arr = np.frombuffer(buf, dtype=np.uint8).reshape(len(values), nbytes)
    bits = np.unpackbits(arr, axis=1, count=width, bitorder="little")
    # result position p reads source position s^-1(p)
    moved = bits[:, s._inverse_index]
    packed = np.packbits(moved, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def apply_to_bitstring(s: Permutation, x: Bitstring) -> Bitstring:
    (value,) = _permute_ints(s, [x.value], x.width)
    return Bitstring(x.width, value)


def apply_to_matrix(s: Permutation, m: BitMatrix) -> BitMatrix:
    """Apply the bit permutation to every entry; an automorphism of the matrix semigroup."""
    flat = _permute_ints(s, m.flat(), m.width)
    n = m.n
    return BitMatrix(n, m.width, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))
