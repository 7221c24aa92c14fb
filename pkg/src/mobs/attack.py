"""Shared-key recovery from a MOBS transcript.

Given public ``g``, ``phi``, ``A`` and ``B``, find an exponent ``alpha`` with
``phi^alpha(g) A == phi(A) g``. Each nontrivial cycle of ``phi`` only moves the
bits in its own orbit, and the matrix product works bit position by bit
position, so ``alpha`` can be found one cycle at a time (modulo that cycle's
length) and the pieces glued with the CRT. Any such ``alpha`` gives
``phi^alpha(B) A == K``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Optional, Sequence

from .crt import CongruenceSystem, crt_combine, merge
from .permutation import (
    CycleDecomposition,
    Permutation,
    apply_to_matrix,
    compose,
    perm_pow,
)
from .semiring import BitMatrix, mat_mul, matrices_agree_on


class AttackFailure(Exception):
    """The input is not an honest MOBS transcript."""


@dataclass(frozen=True)
class AttackResult:
    success: bool
    alpha: Optional[int]
    modulus: Optional[int]
    residues: CongruenceSystem
    recovered_key: Optional[BitMatrix]
    products_evaluated: int
    permutation_ops: int = 0
    residue_sets: tuple[frozenset[int], ...] = ()
    fixed_points_consistent: bool = True
    reason: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "alpha": None if self.alpha is None else str(self.alpha),
            "modulus": None if self.modulus is None else str(self.modulus),
            "residues": [[r, m] for r, m in self.residues.entries],
            "products_evaluated": self.products_evaluated,
            "success": self.success,
            "recovered_K": None if self.recovered_key is None else self.recovered_key.to_hex(),
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any], width: int) -> AttackResult:
        key = obj.get("recovered_K")
        alpha, modulus = obj.get("alpha"), obj.get("modulus")
        return cls(
            success=bool(obj["success"]),
            alpha=None if alpha is None else int(alpha),
            modulus=None if modulus is None else int(modulus),
            residues=CongruenceSystem((r, m) for r, m in obj["residues"]),
            recovered_key=None if key is None else BitMatrix.from_hex(key, width),
            products_evaluated=int(obj["products_evaluated"]),
        )


def attack_target(g: BitMatrix, phi: Permutation, A: BitMatrix) -> BitMatrix:
    """``phi(A) g``, the value ``phi^alpha(g) A`` has to hit."""
    return mat_mul(apply_to_matrix(phi, A), g)


@dataclass
class _Scan:
    residues: frozenset[int]
    products: int = 0
    perm_ops: int = 0


def _mask_of(orbit: int | Iterable[int]) -> int:
    if isinstance(orbit, int):
        return orbit
    mask = 0
    for p in orbit:
        mask |= 1 << p
    return mask


def _scan_cycle(cycle: Permutation, mask: int, g: BitMatrix, A: BitMatrix,
                target: BitMatrix, restrict: bool = False) -> _Scan:
    length = bin(mask).count("1")
    if length < 2:
        raise ValueError("orbit must contain at least two positions")
    if restrict:
        g, A = g.masked(mask), A.masked(mask)
    found = []
    scan = _Scan(frozenset())
    current = g
    for alpha in range(length):
        if alpha:
            current = apply_to_matrix(cycle, current)
            scan.perm_ops += 1
        scan.products += 1
        if matrices_agree_on(mat_mul(current, A), target, mask):
            found.append(alpha)
    scan.residues = frozenset(found)
    return scan


def find_cycle_residues(cycle: Permutation, orbit: int | Iterable[int], g: BitMatrix,
                        A: BitMatrix, target: BitMatrix, restrict: bool = False) -> frozenset[int]:
    """All ``r`` in ``[0, |cycle|)`` with ``cycle^r(g) A`` matching ``target`` on ``orbit``.

    Brute force over ``g A, cycle(g) A, cycle^2(g) A, ...``: exactly ``|cycle|``
    candidate products. An empty result means the transcript is not honest.
    ``orbit`` is a bit mask or an iterable of positions.
    """
    return _scan_cycle(cycle, _mask_of(orbit), g, A, target, restrict).residues


def _choices(sets: Sequence[frozenset[int]], moduli: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Depth-first over one residue per cycle, pruning as soon as the CRT fails."""
    chosen: list[int] = []

    def walk(j: int, r: int, m: int):
        if j == len(sets):
            yield tuple(chosen)
            return
        for cand in sorted(sets[j]):
            merged = merge(r, m, cand, moduli[j])
            if merged is None:
                continue
            chosen.append(cand)
            yield from walk(j + 1, *merged)
            chosen.pop()

    yield from walk(0, 0, 1)


def _scan_all(d: CycleDecomposition, g: BitMatrix, A: BitMatrix, target: BitMatrix,
              restrict: bool, max_workers: Optional[int]) -> list[_Scan]:
    def job(j):
        return _scan_cycle(d.lift(j), d.orbit_mask(j), g, A, target, restrict)

    if max_workers and max_workers > 1 and len(d.cycles) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(job, range(len(d.cycles))))
    return [job(j) for j in range(len(d.cycles))]


def _fixed_mask(d: CycleDecomposition) -> int:
    mask = 0
    for p in d.fixed_points:
        mask |= 1 << p
    return mask


def recover_key(g: BitMatrix, phi: Permutation, A: BitMatrix, B: BitMatrix, *,
                restrict_to_orbit: bool = False, max_workers: Optional[int] = None) -> AttackResult:
    """Recover the shared key from public data only.

    Per-cycle residue sets are collected in full and a CRT-compatible choice is
    found by backtracking, so non-coprime cycle lengths are handled too. The
    combined exponent is always checked against the target before a key is
    returned; failures come back as ``success=False``, never as exceptions.
    """
    for m, name in ((A, "A"), (B, "B")):
        if m.n != g.n or m.width != g.width:
            raise ValueError(f"{name} does not have the shape of g")
    if phi.degree != g.width:
        raise ValueError(f"phi degree {phi.degree} does not match width {g.width}")

    d = phi.decomposition
    target = attack_target(g, phi, A)
    scans = _scan_all(d, g, A, target, restrict_to_orbit, max_workers)
    sets = tuple(s.residues for s in scans)
    products = sum(s.products for s in scans)
    perm_ops = sum(s.perm_ops for s in scans)
    fixed_ok = matrices_agree_on(mat_mul(g, A), target, _fixed_mask(d))

    def fail(reason, system=CongruenceSystem(())):
        return AttackResult(False, None, None, system, None, products, perm_ops, sets, fixed_ok, reason)

    empty = [j for j, s in enumerate(sets) if not s]
    if empty:
        return fail(f"no matching exponent for cycle(s) {empty}")

    moduli = d.lengths
    choice = next(_choices(sets, moduli), None)
    if choice is None:
        return fail("no CRT-compatible choice of residues")
    system = CongruenceSystem(zip(choice, moduli))
    alpha, modulus = crt_combine(system) if len(system) else (0, 1)

    phi_alpha = perm_pow(phi, alpha)
    if mat_mul(apply_to_matrix(phi_alpha, g), A) != target:
        return fail("combined exponent does not satisfy the matching condition", system)
    key = mat_mul(apply_to_matrix(phi_alpha, B), A)
    return AttackResult(True, alpha, modulus, system, key, products, perm_ops, sets, fixed_ok)


def recover_key_direct(g: BitMatrix, phi: Permutation, A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Same key, built from ``psi = prod_j cycle_j^(r_j)`` without any CRT.

    ``psi`` commutes with ``phi`` because the cycles are disjoint, which is all
    the key-recovery argument needs.
    """
    d = phi.decomposition
    target = attack_target(g, phi, A)
    psi = Permutation.identity(phi.degree)
    for j in range(len(d.cycles)):
        residues = find_cycle_residues(d.lift(j), d.orbit_mask(j), g, A, target)
        if not residues:
            raise AttackFailure(f"no matching exponent for cycle {j}")
        psi = compose(perm_pow(d.lift(j), min(residues)), psi)
    if mat_mul(apply_to_matrix(psi, g), A) != target:
        raise AttackFailure("psi(g) A != phi(A) g")
    return mat_mul(apply_to_matrix(psi, B), A)


def matching_exponents(g: BitMatrix, phi: Permutation, A: BitMatrix) -> list[int]:
    """Every ``alpha`` in ``[0, order(phi))`` with ``phi^alpha(g) A == phi(A) g``."""
    target = attack_target(g, phi, A)
    out = []
    current = g
    for alpha in range(phi.order):
        if alpha:
            current = apply_to_matrix(phi, current)
        if mat_mul(current, A) == target:
            out.append(alpha)
    return out


def brute_force_recover(g: BitMatrix, phi: Permutation, A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Scan ``alpha = 0, 1, ...`` up to the order of ``phi``. Test oracle only."""
    target = attack_target(g, phi, A)
    current = g
    for alpha in range(phi.order):
        if alpha:
            current = apply_to_matrix(phi, current)
        if mat_mul(current, A) == target:
            return mat_mul(apply_to_matrix(perm_pow(phi, alpha), B), A)
    raise AttackFailure("no exponent satisfies the matching condition")
