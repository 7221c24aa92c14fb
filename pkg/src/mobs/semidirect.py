"""The semidirect product of the matrix semigroup by bit permutations."""
from __future__ import annotations

from dataclasses import dataclass

from .permutation import Permutation, apply_to_matrix, compose, perm_pow
from .semiring import BitMatrix, mat_mul


@dataclass(frozen=True)
class SemidirectElement:
    mat: BitMatrix
    perm: Permutation

    def __post_init__(self):
        if self.perm.degree != self.mat.width:
            raise ValueError(
                f"permutation degree {self.perm.degree} does not match entry width {self.mat.width}")

    def __mul__(self, other: SemidirectElement) -> SemidirectElement:
        return sd_mul(self, other)

    def __pow__(self, e: int) -> SemidirectElement:
        return sd_pow(self, e)


def sd_mul(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement:
    """``(g1, p1)(g2, p2) = (p2(g1) g2, p1 then p2)``.

    The permutation part is ``compose(p2, p1)``: with the left action used
    here that is the only order that keeps the product associative.
    """
    mat = mat_mul(apply_to_matrix(y.perm, x.mat), y.mat)
    return SemidirectElement(mat, compose(y.perm, x.perm))


def sd_pow(x: SemidirectElement, e: int) -> SemidirectElement:
    """``x**e`` by left-to-right square-and-multiply (O(log e) products)."""
    if e < 1:
        raise ValueError(f"exponent must be >= 1 (no identity in a semigroup), got {e}")
    result = x
    for bit in bin(e)[3:]:
        result = sd_mul(result, result)
        if bit == "1":
            result = sd_mul(result, x)
    return result


def sd_pow_iterative(g: BitMatrix, phi: Permutation, a: int) -> BitMatrix:
    """Literal ``phi^(a-1)(g) ... phi(g) g``, evaluated left to right. Reference only."""
    if a < 1:
        raise ValueError(f"exponent must be >= 1, got {a}")
    acc = apply_to_matrix(perm_pow(phi, a - 1), g)
    for j in range(a - 2, -1, -1):
        acc = mat_mul(acc, apply_to_matrix(perm_pow(phi, j), g))
    return acc
