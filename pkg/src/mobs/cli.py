"""Command-line driver: ``mobs gen | exchange | attack | bench``."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .attack import recover_key
from .bench import bench_harness, paper_ratio, rows_to_csv
from .protocol import DEFAULT_EXPONENT_BITS, Transcript, complete_exchange, gen_params

EXIT_OK = 0
EXIT_ATTACK_FAILED = 1
EXIT_BAD_INPUT = 2


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate public parameters (g, phi)")
    p.add_argument("--t", type=_positive, required=True, help="number of cycles (first t primes)")
    p.add_argument("--n", type=_positive, default=3, help="matrix dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output transcript JSON (default: stdout)")

    p = sub.add_parser("exchange", help="run both parties on a parameter file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--exponent-bits", type=int, default=DEFAULT_EXPONENT_BITS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output transcript JSON (default: stdout)")

    p = sub.add_parser("attack", help="recover the shared key from a transcript")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="attack report JSON")
    p.add_argument("--restrict-to-orbit", action="store_true",
                   help="evaluate candidate products on orbit bits only")
    p.add_argument("--workers", type=_positive, default=1, help="threads for per-cycle search")

    p = sub.add_parser("bench", help="time the attack over several instance shapes")
    p.add_argument("--t-list", type=_int_list, default=[9, 12, 16, 22])
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exponent-bits", type=int, default=DEFAULT_EXPONENT_BITS)
    p.add_argument("--restrict-to-orbit", action="store_true")
    p.add_argument("--jobs", type=_positive, default=1,
                   help="run trials in parallel processes (timings then contend for cores)")
    p.add_argument("--csv", help="CSV output path (default: stdout)")
    return parser


def _write(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_transcript(path: str) -> Transcript:
    with open(path) as fh:
        return Transcript.loads(fh.read())


def cmd_gen(args) -> int:
    rng = random.Random(str(args.seed))
    params = gen_params(args.t, args.n, rng)
    _write(Transcript(params, seed=str(args.seed)).dumps(), args.out)
    return EXIT_OK


def cmd_exchange(args) -> int:
    skeleton = _load_transcript(args.infile)
    rng = random.Random(str(args.seed))
    done = complete_exchange(skeleton, args.exponent_bits, rng, seed=str(args.seed))
    _write(done.dumps(), args.out)
    return EXIT_OK


def cmd_attack(args) -> int:
    tr = _load_transcript(args.infile)
    if not tr.complete:
        raise ValueError("transcript has no A/B; run `mobs exchange` first")
    p = tr.params
    start = time.perf_counter()
    result = recover_key(p.g, p.phi, tr.A, tr.B, restrict_to_orbit=args.restrict_to_orbit,
                         max_workers=args.workers)
    elapsed = time.perf_counter() - start
    if args.out:
        _write(json.dumps(result.to_json(), indent=2), args.out)
    line = f"success={result.success} time={elapsed:.6f}s k={p.k} products={result.products_evaluated}"
    if result.success:
        line += f" alpha={result.alpha} modulus={result.modulus}"
    else:
        line += f" reason={result.reason!r}"
    ok = result.success
    if ok and tr.K is not None:
        matches = result.recovered_key == tr.K
        line += f" matches_K={matches}"
        ok = matches
    print(line)
    return EXIT_OK if ok else EXIT_ATTACK_FAILED


def cmd_bench(args) -> int:
    def progress(row):
        ratio = paper_ratio(row)
        extra = "" if ratio is None else f" ({ratio:.3g}x paper)"
        print(f"k={row.k} t={row.t}: {row.avg_attack_seconds:.4f}s/attack{extra}, "
              f"success={row.success_rate:.2f}", file=sys.stderr)

    rows = bench_harness(args.t_list, args.n, args.trials, args.seed,
                         exponent_bits=args.exponent_bits,
                         restrict_to_orbit=args.restrict_to_orbit,
                         jobs=args.jobs, progress=progress)
    _write(rows_to_csv(rows), args.csv)
    return EXIT_OK if all(r.success_rate == 1.0 for r in rows) else EXIT_ATTACK_FAILED


COMMANDS = {"gen": cmd_gen, "exchange": cmd_exchange, "attack": cmd_attack, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"mobs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
