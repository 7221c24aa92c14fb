"""Timing harness: average key-recovery time per instance shape."""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from statistics import fmean
from typing import Iterable, Optional, Sequence

from .attack import recover_key
from .protocol import DEFAULT_EXPONENT_BITS, first_primes, simulate_exchange

CSV_HEADER = ("k", "n", "t", "trials", "avg_attack_seconds", "avg_exchange_seconds",
              "success_rate", "products_mean")

# k -> average seconds per recovered key, i7 @ 3.10GHz, n=3, 20 keys each
PAPER_TIMINGS = {100: 0.0878, 197: 0.2374, 381: 0.5325, 791: 1.7000}


@dataclass(frozen=True)
class BenchRow:
    k: int
    n: int
    t: int
    trials: int
    avg_attack_seconds: float
    avg_exchange_seconds: float
    success_rate: float
    products_mean: float

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.success_rate <= 1.0:
            raise ValueError(f"success_rate out of range: {self.success_rate}")
        if self.avg_attack_seconds < 0 or self.avg_exchange_seconds < 0:
            raise ValueError("timings must be non-negative")


@dataclass(frozen=True)
class TrialResult:
    exchange_seconds: float
    attack_seconds: float
    success: bool
    products: int


def trial_seed(seed: int | str, t: int, i: int) -> str:
    return f"{seed}:{t}:{i}"


def run_trial(t: int, n: int, seed: str, exponent_bits: int = DEFAULT_EXPONENT_BITS,
              restrict_to_orbit: bool = False) -> TrialResult:
    start = time.perf_counter()
    tr = simulate_exchange(t, n, exponent_bits, seed)
    mid = time.perf_counter()
    p = tr.params
    result = recover_key(p.g, p.phi, tr.A, tr.B, restrict_to_orbit=restrict_to_orbit)
    end = time.perf_counter()
    ok = result.success and result.recovered_key == tr.K
    return TrialResult(mid - start, end - mid, ok, result.products_evaluated)


def _run_trial_args(args):
    return run_trial(*args)


def bench_harness(t_list: Sequence[int], n: int, trials: int, seed: int | str = 0, *,
                  exponent_bits: int = DEFAULT_EXPONENT_BITS, restrict_to_orbit: bool = False,
                  jobs: int = 1, progress=None) -> list[BenchRow]:
    """One :class:`BenchRow` per ``t``; only ``recover_key`` counts toward attack time.

    With ``jobs > 1`` whole trials run in separate processes; each trial has its
    own derived seed so the instances are the same either way.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for t in t_list:
            args = [(t, n, trial_seed(seed, t, i), exponent_bits, restrict_to_orbit)
                    for i in range(trials)]
            results = list(pool.map(_run_trial_args, args)) if pool else [_run_trial_args(a) for a in args]
            k = sum(first_primes(t))
            row = BenchRow(
                k=k, n=n, t=t, trials=trials,
                avg_attack_seconds=fmean(r.attack_seconds for r in results),
                avg_exchange_seconds=fmean(r.exchange_seconds for r in results),
                success_rate=sum(r.success for r in results) / trials,
                products_mean=fmean(r.products for r in results),
            )
            rows.append(row)
            if progress:
                progress(row)
    finally:
        if pool:
            pool.shutdown()
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in astuple(row)])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[BenchRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    types = {f.name: f.type for f in fields(BenchRow)}
    return [BenchRow(**{name: (int if types[name] in (int, "int") else float)(rec[name])
                        for name in CSV_HEADER})
            for rec in reader]


def paper_ratio(row: BenchRow) -> Optional[float]:
    """Measured over published time, if the paper reports this ``k``."""
    ref = PAPER_TIMINGS.get(row.k)
    return None if ref is None else row.avg_attack_seconds / ref
