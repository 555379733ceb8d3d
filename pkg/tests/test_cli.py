import csv
import io
import json
import subprocess
import sys

import pytest

from pslopt import cli
from pslopt.cli import BENCH_COLUMNS, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main, resolve_seed

from .conftest import BARKER13


def _json_out(capsys, argv):
    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_optimize_two_elements(capsys):
    report = _json_out(capsys, ["optimize", "--length", "2", "--budget", "0.3", "--quiet", "--instances", "1"])
    assert report["best_psl"] == 1
    assert report["schema_version"] == "pslopt.run-report/1"


def test_optimize_round_trip_with_analyze(tmp_path, capsys):
    seq_path, trace_path = tmp_path / "best.txt", tmp_path / "trace.csv"
    report = _json_out(
        capsys,
        [
            "optimize", "--length", "64", "--budget", "30", "--target-psl", "7",
            "--seed", "1", "--instances", "2", "--quiet",
            "--sequence-out", str(seq_path), "--trace", str(trace_path),
        ],
    )
    assert report["best_psl"] <= 7 and report["stop_reason"] == "target"
    analysed = _json_out(capsys, ["analyze", str(seq_path), "--format", "json"])
    assert analysed["psl"] == report["best_psl"]
    assert analysed["fitness"] == report["best_fitness"]
    rows = list(csv.reader(trace_path.read_text().splitlines()))
    assert rows[0] == ["elapsed_seconds", "psl"]
    assert [int(r[1]) for r in rows[1:]] == [e["psl"] for e in report["improvement_trace"]]


def test_optimize_output_file_and_formats(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["optimize", "--length", "20", "--max-iterations", "50", "--seed", "2",
                 "--instances", "1", "--quiet", "--output", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["n"] == 20
    assert main(["optimize", "--length", "20", "--max-iterations", "50", "--seed", "2",
                 "--instances", "1", "--quiet", "--format", "csv"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 and rows[0]["n"] == "20"
    assert main(["optimize", "--length", "20", "--max-iterations", "50", "--seed", "2",
                 "--instances", "1", "--quiet", "--format", "text"]) == EXIT_OK
    assert "best_psl=" in capsys.readouterr().out


def test_progress_goes_to_stderr(capsys):
    assert main(["optimize", "--length", "30", "--max-iterations", "20", "--seed", "0", "--instances", "1"]) == 0
    captured = capsys.readouterr()
    assert "best PSL" in captured.err
    json.loads(captured.out)


@pytest.mark.parametrize(
    "argv",
    [
        ["optimize"],
        ["optimize", "--length", "1"],
        ["optimize", "--length", "10", "--budget", "0"],
        ["optimize", "--length", "10", "--init", "legendre"],
        ["optimize", "--length", "10", "--init", "mseq"],
        ["optimize", "--length", "10", "--init", "rudin-shapiro"],
        ["optimize", "--length", "10", "--init", "gold"],
        ["optimize", "--length", "10", "--format", "xml"],
        ["optimize", "--length", "10", "--instances", "0"],
        ["bench"],
        ["bench", "--lengths", ""],
        ["bench", "--lengths", "1,10"],
        ["generate", "--family", "mseq"],
        ["generate", "--family", "mseq", "--degree", "40"],
        ["exhaustive", "--length", "30"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_missing_init_file_is_runtime_error(tmp_path, capsys):
    code = main(["optimize", "--length", "10", "--init", f"file:{tmp_path / 'nope.txt'}", "--quiet"])
    assert code == EXIT_RUNTIME


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_RUNTIME, EXIT_USAGE}) == 3


def test_analyze_examples(tmp_path, capsys):
    b13 = tmp_path / "b13.txt"
    b13.write_text(BARKER13 + "\n")
    info = _json_out(capsys, ["analyze", str(b13), "--format", "json", "--sidelobes"])
    assert (info["n"], info["psl"], info["fitness"]) == (13, 1, 6)
    assert len(info["sidelobes"]) == 12
    ones = tmp_path / "ones.txt"
    ones.write_text("1" * 8)
    assert main(["analyze", str(ones)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "psl 7" in out.splitlines()


def test_analyze_parse_error_names_position(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("+?+")
    assert main(["analyze", str(bad)]) == EXIT_RUNTIME
    assert "position 2" in capsys.readouterr().err


def test_generate(capsys):
    assert main(["generate", "--family", "legendre", "--length", "7"]) == EXIT_OK
    assert capsys.readouterr().out == "+++-+--\n"
    assert main(["generate", "--family", "mseq", "--degree", "5"]) == EXIT_OK
    assert len(capsys.readouterr().out.strip()) == 31


def test_generate_rotation(capsys):
    assert main(["generate", "--family", "rudin-shapiro", "--length", "8", "--rotate", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "++-++-++\n"
    assert main(["generate", "--family", "mseq", "--degree", "3", "--best-rotation"]) == EXIT_OK
    from pslopt import parse_sequence, psl_direct

    seq = parse_sequence(capsys.readouterr().out)
    assert psl_direct(seq) == 1


def test_bench_csv_schema(capsys):
    assert main(["bench", "--lengths", "31,36", "--budget", "1", "--instances", "1",
                 "--seed", "0", "--quiet", "--stop-below-sqrt", "--mseq-rotations"]) == EXIT_OK
    text = capsys.readouterr().out
    header, *rows = list(csv.reader(io.StringIO(text)))
    assert tuple(header) == BENCH_COLUMNS
    rows = [dict(zip(header, r)) for r in rows]
    assert [r["length"] for r in rows] == ["31", "36"]
    assert rows[0]["mseq_degree"] == "5" and rows[0]["mseq_psl"] != ""
    assert int(rows[0]["mseq_rotation_psl"]) <= int(rows[0]["mseq_psl"])
    assert rows[1]["mseq_degree"] == ""
    assert all(r["schema_version"] == "pslopt.bench/1" for r in rows)
    assert all(r["below_sqrt_n"] == "True" for r in rows)


def test_bench_square_grid_and_json(capsys):
    assert main(["bench", "--squares", "18:19", "--budget", "0.5", "--instances", "1",
                 "--seed", "0", "--quiet", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert [r["length"] for r in data["rows"]] == [324, 361]
    assert data["schema_version"] == "pslopt.bench/1"


def test_bench_row_reference_columns():
    row = cli.bench_row(8191, 0.5, 1, 0)
    assert row["mseq_degree"] == 13
    assert (row["reference_mseq_psl"], row["reference_optimizer_psl"]) == (85, 77)


def test_exhaustive_hidden_command(capsys):
    assert main(["exhaustive", "--length", "13", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["psl"] == 1
    main(["--help"])
    assert "exhaustive" not in capsys.readouterr().out


def test_seed_precedence():
    assert resolve_seed(5, {"PSLOPT_SEED": "9"}) == 5
    assert resolve_seed(None, {"PSLOPT_SEED": "9"}) == 9
    assert isinstance(resolve_seed(None, {}), int)
    with pytest.raises(cli.UsageError):
        resolve_seed(None, {"PSLOPT_SEED": "x"})


def test_env_seed_used_by_optimize(monkeypatch, capsys):
    monkeypatch.setenv("PSLOPT_SEED", "77")
    report = _json_out(capsys, ["optimize", "--length", "12", "--max-iterations", "5", "--instances", "1", "--quiet"])
    assert report["seed"] == 77


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pslopt", "optimize", "--length", "2", "--budget", "0.2", "--quiet",
         "--instances", "1", "--format", "text"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "best_psl=1" in proc.stdout
