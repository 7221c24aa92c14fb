"""Honest-party MOBS key exchange and its transcripts."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from itertools import count
from typing import Any, Optional, Sequence

from .permutation import Permutation, apply_to_matrix, perm_pow, random_with_cycle_type
from .semidirect import SemidirectElement, sd_pow, sd_pow_iterative
from .semiring import BitMatrix, mat_mul, random_matrix

DEFAULT_EXPONENT_BITS = 128


class ProtocolError(Exception):
    """The two parties derived different keys; always an implementation bug."""


def first_primes(t: int) -> list[int]:
    primes: list[int] = []
    for c in count(2):
        if len(primes) == t:
            return primes
        if all(c % p for p in primes if p * p <= c):
            primes.append(c)


@dataclass(frozen=True)
class Params:
    k: int
    n: int
    g: BitMatrix
    phi: Permutation
    cycle_lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cycle_lengths", tuple(sorted(self.cycle_lengths)))
        if not (self.phi.degree == self.k == self.g.width):
            raise ValueError(
                f"inconsistent widths: k={self.k}, phi degree={self.phi.degree}, g width={self.g.width}")
        if self.g.n != self.n:
            raise ValueError(f"g is {self.g.n}x{self.g.n}, expected n={self.n}")
        actual = sorted(self.phi.decomposition.lengths)
        if actual != list(self.cycle_lengths):
            raise ValueError(f"phi has cycle type {actual}, expected {list(self.cycle_lengths)}")

    @property
    def t(self) -> int:
        return len(self.cycle_lengths)

    @property
    def base(self) -> SemidirectElement:
        return SemidirectElement(self.g, self.phi)


def make_params(cycle_lengths: Sequence[int], k: int, n: int, rng: random.Random) -> Params:
    phi = random_with_cycle_type(cycle_lengths, k, rng)
    g = random_matrix(n, k, rng)
    return Params(k, n, g, phi, tuple(cycle_lengths))


def gen_params(t: int, n: int, rng: random.Random) -> Params:
    """Public parameters whose permutation has the first ``t`` primes as cycle type.

    ``k`` is the sum of those primes, so the permutation has no fixed points.
    """
    if t < 1 or n < 1:
        raise ValueError(f"need t >= 1 and n >= 1, got t={t}, n={n}")
    lengths = first_primes(t)
    return make_params(lengths, sum(lengths), n, rng)


def derive_public(params: Params, x: int) -> BitMatrix:
    """Matrix part of ``(g, phi)**x``; the permutation part is never sent."""
    if x < 1:
        raise ValueError(f"private exponent must be >= 1, got {x}")
    return sd_pow(params.base, x).mat


def derive_shared(params: Params, x: int, peer_public: BitMatrix, own_public: BitMatrix) -> BitMatrix:
    if x < 1:
        raise ValueError(f"private exponent must be >= 1, got {x}")
    return mat_mul(apply_to_matrix(perm_pow(params.phi, x), peer_public), own_public)


@dataclass(frozen=True)
class Transcript:
    params: Params
    A: Optional[BitMatrix] = None
    B: Optional[BitMatrix] = None
    a: Optional[int] = None
    b: Optional[int] = None
    K: Optional[BitMatrix] = None
    seed: str = ""
    exponent_bits: Optional[int] = None

    @property
    def complete(self) -> bool:
        return self.A is not None and self.B is not None

    def check(self):
        """Re-derive what the private exponents determine and compare."""
        p = self.params
        if self.a is not None and self.A is not None and derive_public(p, self.a) != self.A:
            raise ProtocolError("A does not match (g, phi)**a")
        if self.b is not None and self.B is not None and derive_public(p, self.b) != self.B:
            raise ProtocolError("B does not match (g, phi)**b")
        if self.a is not None and self.b is not None and self.complete:
            ka = derive_shared(p, self.a, self.B, self.A)
            kb = derive_shared(p, self.b, self.A, self.B)
            if ka != kb or (self.K is not None and self.K != ka):
                raise ProtocolError("shared keys disagree")

    def to_json(self) -> dict[str, Any]:
        p = self.params

        def mat(m):
            return None if m is None else m.to_hex()

        return {
            "k": p.k,
            "n": p.n,
            "t": p.t,
            "phi": list(p.phi.images),
            "g": p.g.to_hex(),
            "A": mat(self.A),
            "B": mat(self.B),
            "a": None if self.a is None else str(self.a),
            "b": None if self.b is None else str(self.b),
            "K": mat(self.K),
            "seed": self.seed,
            "exponent_bits": self.exponent_bits,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> Transcript:
        try:
            k, n, t = int(obj["k"]), int(obj["n"]), int(obj["t"])
            phi = Permutation(obj["phi"])
            g = BitMatrix.from_hex(obj["g"], k)
            lengths = phi.decomposition.lengths
            if len(lengths) != t:
                raise ValueError(f"phi has {len(lengths)} cycles but t={t}")
            params = Params(k, n, g, phi, lengths)

            def mat(key):
                v = obj.get(key)
                if v is None:
                    return None
                m = BitMatrix.from_hex(v, k)
                if m.n != n:
                    raise ValueError(f"{key} is {m.n}x{m.n}, expected n={n}")
                return m

            def exp(key):
                v = obj.get(key)
                return None if v is None else int(str(v))

            bits = obj.get("exponent_bits")
            return cls(params, mat("A"), mat("B"), exp("a"), exp("b"), mat("K"),
                       str(obj.get("seed", "")), None if bits is None else int(bits))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed transcript: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> Transcript:
        return cls.from_json(json.loads(text))


def run_exchange(params: Params, a: int, b: int) -> tuple[BitMatrix, BitMatrix, BitMatrix]:
    """Both parties' computations; returns ``(A, B, K)``."""
    A = derive_public(params, a)
    B = derive_public(params, b)
    ka = derive_shared(params, a, B, A)
    kb = derive_shared(params, b, A, B)
    if ka != kb:
        raise ProtocolError(f"K_A != K_B for a={a}, b={b}")
    return A, B, ka


def sample_exponent(rng: random.Random, exponent_bits: int) -> int:
    """Uniform in ``[2, 2**exponent_bits)``."""
    if exponent_bits < 2:
        raise ValueError(f"exponent_bits must be >= 2, got {exponent_bits}")
    return rng.randrange(2, 1 << exponent_bits)


def complete_exchange(skeleton: Transcript, exponent_bits: int, rng: random.Random,
                      seed: str = "") -> Transcript:
    a = sample_exponent(rng, exponent_bits)
    b = sample_exponent(rng, exponent_bits)
    A, B, K = run_exchange(skeleton.params, a, b)
    return replace(skeleton, A=A, B=B, a=a, b=b, K=K, seed=seed, exponent_bits=exponent_bits)


def simulate_exchange(t: int, n: int, exponent_bits: int = DEFAULT_EXPONENT_BITS,
                      seed: int | str = 0) -> Transcript:
    """One full seeded run: parameters, both private exponents, A, B and K."""
    rng = random.Random(str(seed))
    params = gen_params(t, n, rng)
    return complete_exchange(Transcript(params), exponent_bits, rng, str(seed))


def simulate_with_cycle_type(cycle_lengths: Sequence[int], k: int, n: int,
                             exponent_bits: int = DEFAULT_EXPONENT_BITS,
                             seed: int | str = 0) -> Transcript:
    """Like :func:`simulate_exchange` but for an arbitrary cycle type and degree."""
    rng = random.Random(str(seed))
    params = make_params(cycle_lengths, k, n, rng)
    return complete_exchange(Transcript(params), exponent_bits, rng, str(seed))


def closed_form_key(params: Params, a: int, b: int) -> BitMatrix:
    """``phi^(a+b-1)(g) ... phi(g) g`` by direct evaluation; small exponents only."""
    return sd_pow_iterative(params.g, params.phi, a + b)

