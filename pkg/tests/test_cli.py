import io
import json

import pandas as pd
import pytest

from klnorm.main import build_parser, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_json(capsys):
    code, out, _ = run_cli(capsys, "normalize", "--algo", "linear_window", "-M", "16", "--counts", "22 4 4 4 4 4 4 4 4")
    assert code == 0
    rec = json.loads(out)
    assert rec["freqs"] == [8] + [1] * 8
    assert rec["certificate_ok"] is True
    assert rec["M"] == 16 and rec["N"] == 54 and rec["r"] == 9
    assert "kl_bits" not in rec
    assert set(rec["op_counts"]) >= {"tickets_emitted", "decrements_applied"}


def test_normalize_giesen_reports_pre_fixup(capsys):
    code, out, _ = run_cli(capsys, "normalize", "--algo", "giesen", "--target", "256", "--counts", "1000 1 1")
    assert code == 0
    rec = json.loads(out)
    assert rec["pre_fixup_freqs"] == [255, 0, 1]
    assert rec["freqs"] == [254, 1, 1]


def test_normalize_bits(capsys):
    code, out, _ = run_cli(capsys, "normalize", "--algo", "bottom_up", "-M", "8", "--counts", "10 3 3", "--bits")
    rec = json.loads(out)
    assert code == 0
    assert rec["kl_bits"] == pytest.approx(rec["kl_nats"] / 0.6931471805599453)


def test_normalize_plain_and_csv(capsys):
    code, out, _ = run_cli(capsys, "normalize", "--algo", "fse_fast", "-M", "8", "--counts", "10 3 3", "--format", "plain")
    assert code == 0
    assert "freqs: 4 2 2" in out
    assert "fallback taken: False" in out

    code, out, _ = run_cli(capsys, "normalize", "--algo", "smart_collet", "-M", "16", "--dist", "uniform", "--r", "4", "--N", "10", "--format", "csv")
    assert code == 0
    df = pd.read_csv(io.StringIO(out))
    assert df.loc[0, "freqs"] == "7 3 3 3"
    assert "op_downgrades" in df.columns


def test_normalize_exact_mode_on_counts_file(capsys, tmp_path):
    path = tmp_path / "counts.txt"
    path.write_text("3046 2582\n4294\n")
    code, out, _ = run_cli(capsys, "normalize", "--algo", "threshold_window", "-M", "8", "--counts-file", str(path), "--mode", "exact")
    assert code == 0
    assert json.loads(out)["freqs"] == [2, 2, 4]


def test_normalize_bytes_file(capsys, tmp_path):
    path = tmp_path / "data.bin"
    path.write_bytes(b"abracadabra" * 50)
    code, out, _ = run_cli(capsys, "normalize", "--algo", "window_auto", "-M", "64", "--bytes-file", str(path))
    rec = json.loads(out)
    assert code == 0
    assert len(rec["freqs"]) == 256
    assert sum(rec["freqs"]) == 64
    assert rec["r"] == 5


def test_infeasible_target(capsys):
    code, out, err = run_cli(capsys, "normalize", "--algo", "bottom_up", "--target", "2", "--counts", "1 1 1")
    assert code == 1
    assert out == ""
    assert "no finite-KL solution" in err


def test_bad_counts_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 two 3")
    code, _, err = run_cli(capsys, "normalize", "--algo", "linear_window", "-M", "8", "--counts-file", str(path))
    assert code == 1
    assert err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "normalize", "--algo", "linear_window", "-M", "8", "--bytes-file", str(tmp_path / "nope"))
    assert code == 1


def test_fse_needs_power_of_two(capsys):
    code, _, err = run_cli(capsys, "normalize", "--algo", "fse_m2", "-M", "10", "--counts", "5 5")
    assert code == 1
    assert "power of two" in err


def test_usage_error_exits_with_input_code():
    with pytest.raises(SystemExit) as exc:
        main(["normalize", "--algo", "nope", "-M", "8", "--counts", "1"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["normalize", "--algo", "giesen", "-M", "8", "--counts", "1", "--dist", "uniform"])
    assert exc.value.code == 1


def test_gen(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "gen", "--dist", "uniform", "--r", "4", "--N", "10")
    assert code == 0
    assert out.strip() == "4 2 2 2"

    path = tmp_path / "zipf.txt"
    code, out, _ = run_cli(capsys, "gen", "--dist", "zipf", "--s", "1.0", "--r", "16", "--N", "1e4", "-o", str(path))
    assert code == 0
    assert out == ""
    assert sum(int(x) for x in path.read_text().split()) == 10_000


def test_gen_rejects_small_N(capsys):
    code, _, err = run_cli(capsys, "gen", "--dist", "uniform", "--r", "8", "--N", "4")
    assert code == 1
    assert "N=4 < r=8" in err


def test_gen_rejects_missing_family_parameter(capsys):
    code, _, err = run_cli(capsys, "gen", "--dist", "geometric", "--r", "8", "--N", "100")
    assert code == 1
    assert "geometric needs 0 < p < 1" in err


def test_redundancy_witness_rows(capsys):
    code, out, _ = run_cli(capsys, "redundancy", "--witness")
    assert code == 0
    df = pd.read_csv(io.StringIO(out))
    assert list(df["label"]) == ["(3046,2582,4294)/8", "(22,4x8)/16", "(10,3,3)/8", "(3,2)/256"]
    assert {"gap_giesen", "gap_bloom_onedir", "gap_fse_fast", "gap_collet_ceiling"} <= set(df.columns)
    assert (df[["gap_giesen", "gap_bloom_onedir", "gap_collet_ceiling"]] > -1e-12).all().all()


def test_redundancy_sweep_json_in_bits(capsys):
    code, out, _ = run_cli(capsys, "redundancy", "--sweep", "--r", "8", "--N", "1000", "--M", "64", "--format", "json", "--bits", "--workers", "1")
    assert code == 0
    rows = json.loads(out)
    assert [row["dist"] for row in rows] == ["uniform", "geom0.7", "geom0.95", "zipf1.0", "zipf1.5", "gaussian", "sparse"]
    assert all(row["label"].endswith("(max)") for row in rows)


def test_redundancy_needs_a_mode():
    with pytest.raises(SystemExit) as exc:
        main(["redundancy"])
    assert exc.value.code == 1


def test_small_validate_run(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "--cases", "20", "--no-exhaustive",
        "--sweep-r", "8", "--sweep-n", "1000", "--sweep-m", "64", "--lemma-cases", "5",
    )
    assert code == 0
    assert "[pass] witnesses" in out
    assert "validation passed" in out


def test_small_validate_json(capsys):
    code, out, _ = run_cli(
        capsys, "validate", "--cases", "5", "--no-exhaustive", "--seed", "7",
        "--sweep-r", "4", "--sweep-n", "100", "--sweep-m", "16", "--lemma-cases", "3", "--format", "json",
    )
    rec = json.loads(out)
    assert code == 0
    assert rec["seed"] == 7
    assert [c["name"] for c in rec["checks"]] == ["witnesses", "sweep", "oracle", "exchange_lemma", "comparators"]


def test_small_bench(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--algos", "linear_window,threshold_window", "--r", "16,64",
        "--dist", "uniform,zipf1.0", "--M", "1024", "--N", "10000", "--repeats", "2", "--warmups", "0",
    )
    assert code == 0
    df = pd.read_csv(io.StringIO(out))
    assert len(df) == 8
    assert any(c.startswith("op_") for c in df.columns)
    assert (df["best_seconds"] > 0).all()


def test_bench_unknown_distribution(capsys):
    code, _, err = run_cli(capsys, "bench", "--dist", "cauchy", "--r", "8", "--repeats", "1")
    assert code == 1
    assert "unknown distribution" in err


def test_parser_lists_every_command():
    parser = build_parser()
    for cmd in ("normalize", "validate", "redundancy", "bench", "gen"):
        assert parser.parse_args([cmd] + {
            "normalize": ["--algo", "giesen", "-M", "8", "--counts", "1"],
            "validate": [],
            "redundancy": ["--witness"],
            "bench": [],
            "gen": ["--dist", "uniform", "--r", "1", "--N", "1"],
        }[cmd]).command == cmd
