"""Command-line interface: exit codes, files, and messages."""

import numpy as np
import pytest

import qpa.cli as cli
from conftest import random_bitvector
from qpa import (
    ROLE_FINAL,
    ROLE_RAW,
    ROLE_SEED,
    BitVector,
    PrecisionError,
    ToeplitzSeed,
    generate_seed,
    read_bits,
    write_bits,
)
from qpa.oracle import hash_direct

SECRET = "ab" * 32


@pytest.fixture
def raw_file(tmp_path):
    rng = np.random.default_rng(70)
    x = random_bitvector(rng, 256)
    path = tmp_path / "raw.qpa1"
    write_bits(x, path, ROLE_RAW)
    return path, x


def test_run_distills_and_reports(raw_file, tmp_path, capsys):
    raw_path, x = raw_file
    out_path = tmp_path / "final.qpa1"
    code = cli.main([
        "run", "--input", str(raw_path), "--output", str(out_path),
        "--master-secret", SECRET, "--final-bits", "100",
    ])
    assert code == 0
    seed = generate_seed(bytes.fromhex(SECRET), 256)
    final = read_bits(out_path, expected_length=100, expected_role=ROLE_FINAL)
    assert final == hash_direct(x, seed, 100)
    assert "distilled 100 bits from 256" in capsys.readouterr().out


def test_run_modes_produce_identical_files(raw_file, tmp_path):
    raw_path, _ = raw_file
    outs = {}
    for mode in ("A", "B"):
        out_path = tmp_path / ("final_%s.qpa1" % mode)
        code = cli.main([
            "run", "--input", str(raw_path), "--output", str(out_path),
            "--master-secret", SECRET, "--final-bits", "99", "--mode", mode,
        ])
        assert code == 0
        outs[mode] = out_path.read_bytes()
    assert outs["A"] == outs["B"]


def test_run_derives_r_from_security_terms(raw_file, tmp_path):
    raw_path, _ = raw_file
    out_path = tmp_path / "final.qpa1"
    code = cli.main([
        "run", "--input", str(raw_path), "--output", str(out_path),
        "--master-secret", SECRET, "--leaked-bits", "28", "--security-bits", "100",
    ])
    assert code == 0
    assert read_bits(out_path).length == 256 - 28 - 100


def test_run_parameter_mixups(raw_file, tmp_path):
    raw_path, _ = raw_file
    out = str(tmp_path / "final.qpa1")
    base = ["run", "--input", str(raw_path), "--output", out,
            "--master-secret", SECRET]
    assert cli.main(base + ["--final-bits", "100", "--leaked-bits", "28"]) == 3
    assert cli.main(base + ["--final-bits", "100", "--security-bits", "9"]) == 3
    assert cli.main(base) == 3
    assert cli.main(base + ["--leaked-bits", "28"]) == 3
    assert cli.main(base + ["--final-bits", "0"]) == 3
    assert cli.main(base + ["--final-bits", "100", "--tile", "3"]) == 3


def test_run_appends_manifest(raw_file, tmp_path):
    raw_path, _ = raw_file
    out_path = tmp_path / "final.qpa1"
    manifest = tmp_path / "runs.txt"
    for _ in range(2):
        code = cli.main([
            "run", "--input", str(raw_path), "--output", str(out_path),
            "--master-secret", SECRET, "--leaked-bits", "28",
            "--security-bits", "100", "--mode", "B",
            "--manifest", str(manifest),
        ])
        assert code == 0
    body = manifest.read_text()
    assert body.count("[run ") == 2
    assert "n=256" in body
    assert "r=128" in body
    assert "s=100" in body
    assert "mode=B" in body
    assert "transposes=2" in body
    assert "residual=" in body
    assert "seconds_total=" in body


def test_run_file_errors(tmp_path):
    out = str(tmp_path / "final.qpa1")
    args = ["--output", out, "--master-secret", SECRET, "--final-bits", "10"]
    # missing input
    assert cli.main(["run", "--input", str(tmp_path / "no.qpa1")] + args) == 2
    # wrong role
    seed_path = tmp_path / "seed.qpa1"
    write_bits(BitVector.zeros(255), seed_path, ROLE_SEED)
    assert cli.main(["run", "--input", str(seed_path)] + args) == 2
    # corrupt magic
    bad_path = tmp_path / "bad.qpa1"
    bad_path.write_bytes(b"XXXX" + bytes(20))
    assert cli.main(["run", "--input", str(bad_path)] + args) == 2


def test_run_unsupported_length_is_a_parameter_error(tmp_path):
    rng = np.random.default_rng(71)
    raw_path = tmp_path / "raw128.qpa1"
    write_bits(random_bitvector(rng, 128), raw_path, ROLE_RAW)
    code = cli.main([
        "run", "--input", str(raw_path), "--output", str(tmp_path / "f.qpa1"),
        "--master-secret", SECRET, "--final-bits", "10",
    ])
    assert code == 3


def test_precision_failure_exit_code(raw_file, tmp_path, monkeypatch):
    raw_path, _ = raw_file

    def explode(*args, **kwargs):
        raise PrecisionError("residual out of range")

    monkeypatch.setattr(cli, "privacy_amplify", explode)
    code = cli.main([
        "run", "--input", str(raw_path), "--output", str(tmp_path / "f.qpa1"),
        "--master-secret", SECRET, "--final-bits", "10",
    ])
    assert code == 4


def test_seed_source_is_exclusive(raw_file, tmp_path):
    raw_path, _ = raw_file
    with pytest.raises(SystemExit):
        cli.main([
            "run", "--input", str(raw_path), "--output", str(tmp_path / "f.qpa1"),
            "--master-secret", SECRET, "--seed-file", "also.qpa1",
            "--final-bits", "10",
        ])


# --------------------------------------------------------------------------
# gen-seed


def test_gen_seed_round_trip(tmp_path):
    seed_path = tmp_path / "seed.qpa1"
    code = cli.main(["gen-seed", "--n", "256", "--master-secret", SECRET,
                     "--output", str(seed_path)])
    assert code == 0
    bits = read_bits(seed_path, expected_length=255, expected_role=ROLE_SEED)
    assert ToeplitzSeed(bits) == generate_seed(bytes.fromhex(SECRET), 256)


def test_gen_seed_validation(tmp_path):
    out = str(tmp_path / "seed.qpa1")
    assert cli.main(["gen-seed", "--n", "100", "--master-secret", SECRET,
                     "--output", out]) == 3
    assert cli.main(["gen-seed", "--n", "256", "--master-secret", "zz",
                     "--output", out]) == 3
    assert cli.main(["gen-seed", "--n", "256", "--master-secret", "abcd",
                     "--output", out]) == 3


def test_run_accepts_seed_file(raw_file, tmp_path):
    raw_path, _ = raw_file
    seed_path = tmp_path / "seed.qpa1"
    assert cli.main(["gen-seed", "--n", "256", "--master-secret", SECRET,
                     "--output", str(seed_path)]) == 0
    a = tmp_path / "a.qpa1"
    b = tmp_path / "b.qpa1"
    assert cli.main(["run", "--input", str(raw_path), "--output", str(a),
                     "--seed-file", str(seed_path), "--final-bits", "64"]) == 0
    assert cli.main(["run", "--input", str(raw_path), "--output", str(b),
                     "--master-secret", SECRET, "--final-bits", "64"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_rejects_wrong_seed_length(raw_file, tmp_path):
    raw_path, _ = raw_file
    seed_path = tmp_path / "seed.qpa1"
    assert cli.main(["gen-seed", "--n", "1024", "--master-secret", SECRET,
                     "--output", str(seed_path)]) == 0
    code = cli.main(["run", "--input", str(raw_path),
                     "--output", str(tmp_path / "f.qpa1"),
                     "--seed-file", str(seed_path), "--final-bits", "10"])
    assert code == 2  # 1023 seed bits cannot serve a 256-bit input


# --------------------------------------------------------------------------
# verify


def _distill(tmp_path, raw_path, r=100):
    out_path = tmp_path / "final.qpa1"
    assert cli.main([
        "run", "--input", str(raw_path), "--output", str(out_path),
        "--master-secret", SECRET, "--final-bits", str(r),
    ]) == 0
    return out_path


def test_verify_full_compare(raw_file, tmp_path, capsys):
    raw_path, _ = raw_file
    final_path = _distill(tmp_path, raw_path)
    code = cli.main(["verify", "--input", str(raw_path), "--final", str(final_path),
                     "--master-secret", SECRET])
    assert code == 0
    assert "all 100 bits match" in capsys.readouterr().out


def test_verify_catches_tampering(raw_file, tmp_path, capsys):
    raw_path, _ = raw_file
    final_path = _distill(tmp_path, raw_path)
    final = read_bits(final_path)
    flipped = final ^ BitVector.from_bits(
        np.eye(1, final.length, 42, dtype=np.uint8)[0]
    )
    write_bits(flipped, final_path, ROLE_FINAL)
    code = cli.main(["verify", "--input", str(raw_path), "--final", str(final_path),
                     "--master-secret", SECRET])
    assert code == 5
    assert "mismatch at bit 42" in capsys.readouterr().out


def test_verify_sampled_mode(raw_file, tmp_path, capsys):
    raw_path, _ = raw_file
    final_path = _distill(tmp_path, raw_path)
    code = cli.main(["verify", "--input", str(raw_path), "--final", str(final_path),
                     "--master-secret", SECRET,
                     "--full-compare-limit", "64", "--samples", "32"])
    assert code == 0
    assert "32 sampled rows of 100" in capsys.readouterr().out


def test_verify_sampled_mode_catches_gross_tampering(raw_file, tmp_path, capsys):
    raw_path, _ = raw_file
    final_path = _distill(tmp_path, raw_path)
    final = read_bits(final_path)
    inverted = final ^ BitVector.from_bits(np.ones(final.length, dtype=np.uint8))
    write_bits(inverted, final_path, ROLE_FINAL)
    code = cli.main(["verify", "--input", str(raw_path), "--final", str(final_path),
                     "--master-secret", SECRET,
                     "--full-compare-limit", "64", "--samples", "16"])
    assert code == 5
    assert "mismatch at bit" in capsys.readouterr().out


def test_verify_rejects_oversized_final(raw_file, tmp_path):
    raw_path, x = raw_file
    final_path = tmp_path / "final.qpa1"
    write_bits(x, final_path, ROLE_FINAL)  # r == n is impossible
    code = cli.main(["verify", "--input", str(raw_path), "--final", str(final_path),
                     "--master-secret", SECRET])
    assert code == 2


# --------------------------------------------------------------------------
# params


def test_params_table(capsys):
    code = cli.main(["params", "--n", "1048576", "--leaked-bits", "524288",
                     "--s-min", "64", "--s-max", "128", "--s-step", "64"])
    assert code == 0
    out = capsys.readouterr().out
    assert "524224" in out  # r at s = 64
    assert "524160" in out  # r at s = 128
    assert "margin s" in out


def test_params_notes_non_transform_lengths(capsys):
    assert cli.main(["params", "--n", "100", "--leaked-bits", "10"]) == 0
    assert "arithmetic only" in capsys.readouterr().out


def test_params_infeasible(capsys):
    assert cli.main(["params", "--n", "64", "--leaked-bits", "60"]) == 3
    assert cli.main(["params", "--n", "64", "--leaked-bits", "-1"]) == 3


# --------------------------------------------------------------------------
# bench


def test_bench_smoke(tmp_path, capsys):
    out_path = tmp_path / "bench.txt"
    code = cli.main(["bench", "--n", "64", "--repetitions", "1",
                     "--output", str(out_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "transpose bench: k=8" in out
    assert "modeled row spans naive" in out
    assert "mode A:" in out and "mode B:" in out
    assert "speedup" in out
    for stage in ("build", "pack", "forward", "unpack", "multiply", "inverse"):
        assert out.count("%s " % stage) >= 2  # one row per stage per mode
    body = out_path.read_text()
    assert "mode_A_seconds=" in body
    assert "mode_B_transposes=2" in body
    assert "naive_row_spans=72" in body  # 8 + 8*8


def test_help_exits_cleanly():
    with pytest.raises(SystemExit) as exc:
        cli.main(["--help"])
    assert exc.value.code == 0
