import json
import subprocess
import sys

import pytest

from mobs.attack import recover_key
from mobs.bench import BenchRow, CSV_HEADER, bench_harness, paper_ratio, rows_from_csv, rows_to_csv
from mobs.cli import EXIT_ATTACK_FAILED, EXIT_BAD_INPUT, EXIT_OK, main
from mobs.protocol import Transcript
from mobs.semiring import BitMatrix


@pytest.fixture
def transcript_file(tmp_path):
    params = tmp_path / "params.json"
    full = tmp_path / "transcript.json"
    assert main(["gen", "--t", "9", "--n", "3", "--seed", "4", "--out", str(params)]) == EXIT_OK
    assert main(["exchange", "--in", str(params), "--exponent-bits", "128", "--seed", "5",
                 "--out", str(full)]) == EXIT_OK
    return full


def test_gen_smallest(tmp_path):
    out = tmp_path / "p.json"
    assert main(["gen", "--t", "1", "--n", "1", "--seed", "0", "--out", str(out)]) == EXIT_OK
    obj = json.loads(out.read_text())
    assert obj["k"] == 2 and obj["n"] == 1 and obj["phi"] == [1, 0]
    assert obj["A"] is None and obj["a"] is None


def test_gen_to_stdout_is_deterministic(capsys):
    main(["gen", "--t", "3", "--n", "2", "--seed", "9"])
    first = capsys.readouterr().out
    main(["gen", "--t", "3", "--n", "2", "--seed", "9"])
    assert capsys.readouterr().out == first


def test_exchange_and_attack(transcript_file, tmp_path, capsys):
    tr = Transcript.loads(transcript_file.read_text())
    tr.check()
    assert tr.params.k == 100 and tr.exponent_bits == 128
    report = tmp_path / "report.json"
    assert main(["attack", "--in", str(transcript_file), "--out", str(report)]) == EXIT_OK
    line = capsys.readouterr().out
    assert "success=True" in line and "matches_K=True" in line
    obj = json.loads(report.read_text())
    assert obj["success"] is True and obj["products_evaluated"] <= 100
    assert BitMatrix.from_hex(obj["recovered_K"], 100) == tr.K


def test_attack_without_private_data(transcript_file, tmp_path, capsys):
    obj = json.loads(transcript_file.read_text())
    obj["a"] = obj["b"] = obj["K"] = None
    public = tmp_path / "public.json"
    public.write_text(json.dumps(obj))
    assert main(["attack", "--in", str(public), "--restrict-to-orbit", "--workers", "2"]) == EXIT_OK
    assert "matches_K" not in capsys.readouterr().out


def test_attack_on_flipped_bit_fails(transcript_file, tmp_path, capsys):
    obj = json.loads(transcript_file.read_text())
    tr = Transcript.from_json(obj)
    # find a single-bit corruption of A that the attack's own verification rejects
    for p in range(tr.params.k):
        rows = [list(r) for r in tr.A.rows]
        rows[0][0] ^= 1 << p
        bad = BitMatrix(3, tr.params.k, tuple(map(tuple, rows)))
        if not recover_key(tr.params.g, tr.params.phi, bad, tr.B).success:
            break
    else:
        pytest.fail("no rejected flip")
    obj["A"] = bad.to_hex()
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    report = tmp_path / "bad_report.json"
    assert main(["attack", "--in", str(path), "--out", str(report)]) == EXIT_ATTACK_FAILED
    assert "success=False" in capsys.readouterr().out
    assert json.loads(report.read_text())["success"] is False


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert main(["attack", "--in", str(path)]) == EXIT_BAD_INPUT
    path.write_text(json.dumps({"k": 4}))
    assert main(["exchange", "--in", str(path)]) == EXIT_BAD_INPUT
    assert main(["attack", "--in", str(tmp_path / "missing.json")]) == EXIT_BAD_INPUT
    assert "error" in capsys.readouterr().err


def test_width_mismatch_in_file(transcript_file, tmp_path):
    obj = json.loads(transcript_file.read_text())
    obj["B"][0][0] = obj["B"][0][0] + "00"
    path = tmp_path / "w.json"
    path.write_text(json.dumps(obj))
    assert main(["attack", "--in", str(path)]) == EXIT_BAD_INPUT


def test_attack_needs_exchange(tmp_path):
    out = tmp_path / "p.json"
    main(["gen", "--t", "2", "--n", "2", "--out", str(out)])
    assert main(["attack", "--in", str(out)]) == EXIT_BAD_INPUT


def test_unknown_flag():
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--bogus"])
    assert exc.value.code != 0


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--t-list", "2,4", "--n", "2", "--trials", "3", "--seed", "1",
                 "--csv", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    rows = rows_from_csv(text)
    assert [(r.k, r.t, r.trials, r.success_rate) for r in rows] == [(5, 2, 3, 1.0), (17, 4, 3, 1.0)]


def test_module_entry_point(tmp_path):
    out = tmp_path / "p.json"
    proc = subprocess.run([sys.executable, "-m", "mobs.cli", "gen", "--t", "2", "--n", "2",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["k"] == 5


def test_bench_rows_round_trip():
    rows = bench_harness([1, 3], 2, 2, seed=3, exponent_bits=32)
    assert all(r.success_rate == 1.0 and r.products_mean <= r.k for r in rows)
    assert rows_from_csv(rows_to_csv(rows)) == rows


def test_bench_single_trial_and_parallel():
    (row,) = bench_harness([3], 2, 1, seed=0)
    assert row.success_rate in (0.0, 1.0)
    par = bench_harness([3, 4], 2, 4, seed=0, jobs=2)
    seq = bench_harness([3, 4], 2, 4, seed=0)
    assert [(r.k, r.success_rate, r.products_mean) for r in par] == \
           [(r.k, r.success_rate, r.products_mean) for r in seq]


def test_bench_row_validation():
    with pytest.raises(ValueError):
        BenchRow(5, 2, 2, 0, 0.1, 0.1, 1.0, 5.0)
    with pytest.raises(ValueError):
        BenchRow(5, 2, 2, 1, 0.1, 0.1, 1.5, 5.0)
    assert paper_ratio(BenchRow(100, 3, 9, 1, 0.0878, 0.0, 1.0, 100.0)) == pytest.approx(1.0)
    assert paper_ratio(BenchRow(5, 3, 2, 1, 0.1, 0.0, 1.0, 5.0)) is None
