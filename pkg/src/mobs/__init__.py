"""MOBS key exchange over bitstring-semiring matrices, and a polynomial-time key recovery."""
from .attack import (
    AttackFailure,
    AttackResult,
    attack_target,
    brute_force_recover,
    find_cycle_residues,
    recover_key,
    recover_key_direct,
)
from .crt import CongruenceSystem, crt_combine
from .permutation import (
    CycleDecomposition,
    Permutation,
    apply_to_bitstring,
    apply_to_matrix,
    compose,
    cycle_decomposition,
    inverse,
    order,
    perm_pow,
    random_with_cycle_type,
)
from .protocol import (
    Params,
    ProtocolError,
    Transcript,
    derive_public,
    derive_shared,
    gen_params,
    simulate_exchange,
)
from .semidirect import SemidirectElement, sd_mul, sd_pow, sd_pow_iterative
from .semiring import BitMatrix, Bitstring, bs_and, bs_or, mat_identity, mat_mul, random_matrix

__version__ = "0.1.0"

__all__ = [
    "AttackFailure", "AttackResult", "BitMatrix", "Bitstring", "CongruenceSystem",
    "CycleDecomposition", "Params", "Permutation", "ProtocolError", "SemidirectElement",
    "Transcript", "apply_to_bitstring", "apply_to_matrix", "attack_target", "brute_force_recover",
    "bs_and", "bs_or", "compose", "crt_combine", "cycle_decomposition", "derive_public",
    "derive_shared", "find_cycle_residues", "gen_params", "inverse", "mat_identity", "mat_mul",
    "order", "perm_pow", "random_matrix", "random_with_cycle_type", "recover_key",
    "recover_key_direct", "sd_mul", "sd_pow", "sd_pow_iterative", "simulate_exchange",
]
