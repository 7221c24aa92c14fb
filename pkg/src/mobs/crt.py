"""Chinese remainder combination for moduli that need not be coprime."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class CongruenceSystem:
    """Pairs ``(residue, modulus)`` meaning ``x = residue (mod modulus)``."""

    entries: tuple[tuple[int, int], ...]

    def __init__(self, entries: Iterable[tuple[int, int]]):
        entries = tuple((int(r), int(m)) for r, m in entries)
        for r, m in entries:
            if m < 1:
                raise ValueError(f"modulus must be positive, got {m}")
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for modulus {m}")
        object.__setattr__(self, "entries", entries)

    @property
    def lcm(self) -> int:
        return math.lcm(*(m for _, m in self.entries)) if self.entries else 1

    @property
    def moduli_product(self) -> int:
        return math.prod(m for _, m in self.entries)

    def __len__(self):
        return len(self.entries)


def merge(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple[int, int]]:
    """Combine two congruences; ``None`` when they contradict each other."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    if m2 // g == 1:
        return r1 % lcm, lcm
    # solve r1 + m1*u = r2 (mod m2) for u
    u = (r2 - r1) // g * pow(m1 // g, -1, m2 // g) % (m2 // g)
    return (r1 + m1 * u) % lcm, lcm


def crt_combine(system: CongruenceSystem) -> Optional[tuple[int, int]]:
    """Least non-negative ``alpha`` satisfying every congruence, and the lcm.

    Returns ``None`` if the congruences are incompatible.
    """
    if not len(system):
        raise ValueError("empty congruence system")
    r, m = 0, 1
    for ri, mi in system.entries:
        merged = merge(r, m, ri, mi)
        if merged is None:
            return None
        r, m = merged
    return r, m
