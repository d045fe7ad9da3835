"""Command-line interface: solve, model, reproduce, exit codes, outputs."""

import copy
import csv
import json

import numpy as np
import pytest

from maxeig import reference
from maxeig.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_tridiagonal_example(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "bd_squares", "--n", "7",
                               "--method", "rqi-tridiag")
        assert code == 0
        assert "0.525268" in out
        assert "stabilized at iteration 1" in out

    def test_negative_entries_example(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "negative3", "--method", "alg2")
        assert code == 0
        assert "17.5124" in out

    def test_pitfall_run_is_flagged(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "bd_squares", "--n", "7",
                               "--method", "rqi-general", "--z0", "rayleigh",
                               "--v0", "uniform")
        assert code == 0
        assert "5.91867" in out
        assert "WARNING: non-maximal capture" in out

    def test_json_record_round_trips(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--model", "bd_squares", "--n", "5",
                               "--method", "rqi-tridiag", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["method"] == "rqi-tridiag"
        assert doc["version"]
        assert doc["result"]["stabilized_at"] <= 2
        assert len(doc["trace"]) >= 3
        assert json.loads(json.dumps(doc)) == doc

    def test_trace_csv_figure_shape(self, capsys, tmp_path):
        # fast initial drop, then a long plateau: still unconverged at 1000
        path = tmp_path / "power.csv"
        code, out, _ = run_cli(capsys, "solve", "--model", "bd_squares", "--n", "7",
                               "--method", "power", "--steps", "1000",
                               "--trace-out", str(path))
        assert code == 0
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == 1001
        lam = 0.525268
        err0 = abs(float(rows[0]["z"]) - lam)
        err10 = abs(float(rows[10]["z"]) - lam)
        err1000 = abs(float(rows[1000]["z"]) - lam)
        assert err10 < min(0.5, err0 / 3.0)
        assert err1000 > 10 * 1e-10

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "m.txt"
        code, out, _ = run_cli(capsys, "model", "--name", "bd_squares", "--n", "1",
                               "--emit", str(path), "--format", "coord")
        assert code == 0
        code, out, _ = run_cli(capsys, "solve", "--input", str(path),
                               "--method", "rqi-tridiag")
        assert code == 0
        assert "0.763932" in out

    def test_spec_file_input(self, capsys, tmp_path):
        spath = tmp_path / "spec.json"
        spath.write_text('{"name": "bd_squares", "size": 7, "params": {}}')
        code, out, _ = run_cli(capsys, "solve", "--spec", str(spath),
                               "--method", "rqi-tridiag")
        assert code == 0
        assert "0.525268" in out

    def test_complex_routes_to_alg1(self, capsys):
        code, out, err = run_cli(capsys, "solve", "--model", "complex3", "--method", "alg2")
        assert code == 0
        assert "complex input routes to alg1" in err
        assert "2.99997" in out


class TestExitCodes:
    def test_parse_error_is_2(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--input", "/nonexistent/file.txt")
        assert code == 2
        code, _, err = run_cli(capsys, "solve", "--method", "alg2")  # no input selected
        assert code == 2

    def test_convergence_failure_is_3(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--model", "bd_squares", "--n", "30",
                               "--method", "rqi-tridiag", "--z0", "rayleigh",
                               "--max-iter", "1")
        assert code == 3

    def test_domain_error_is_4(self, capsys, tmp_path):
        p = tmp_path / "conservative.txt"
        p.write_text("TRIDIAG 2\n1.0 1.0\n1.0 1.0\n0.0 0.0 0.0\n")
        code, _, err = run_cli(capsys, "solve", "--input", str(p), "--method", "rqi-tridiag")
        assert code == 4

    def test_bad_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--model", "mystery"])
        assert exc.value.code == 2


class TestModelCommand:
    def test_emit_and_spec(self, capsys, tmp_path):
        mpath = tmp_path / "toeplitz.txt"
        spath = tmp_path / "toeplitz.json"
        code, out, _ = run_cli(capsys, "model", "--name", "toeplitz", "--n", "4",
                               "--emit", str(mpath), "--spec-out", str(spath))
        assert code == 0
        from maxeig.matrixio import read_matrix
        from maxeig.models import ModelSpec

        A = read_matrix(mpath)
        spec = ModelSpec.from_json(spath.read_text())
        assert np.array_equal(A, spec.render())

    def test_complex_round_trip(self, capsys, tmp_path):
        from maxeig.matrixio import read_matrix
        from maxeig.models import complex3

        path = tmp_path / "c3.txt"
        code, _, _ = run_cli(capsys, "model", "--name", "complex3", "--emit", str(path))
        assert code == 0
        assert np.array_equal(read_matrix(path), complex3())


class TestReproduce:
    def test_gated_table_passes(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce", "t6")
        assert code == 0
        assert out.count("PASS") == 5
        assert "FAIL" not in out
        assert "gated cells: 5 passed, 0 failed" in out

    def test_report_is_deterministic(self, capsys):
        _, out1, _ = run_cli(capsys, "reproduce", "e12")
        _, out2, _ = run_cli(capsys, "reproduce", "e12")
        assert out1 == out2

    def test_pitfall_table(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce", "e13")
        assert code == 0
        assert "non_maximal_flagged" in out

    def test_gated_failure_exits_1(self, capsys, monkeypatch):
        doc = copy.deepcopy(reference.load_reference())
        doc["tables"]["t6"]["rows"][0]["cells"][0]["value"] = 99.0
        monkeypatch.setattr(reference, "_reference_cache", doc)
        code, out, _ = run_cli(capsys, "reproduce", "t6")
        assert code == 1
        assert "FAIL" in out

    def test_max_size_limits_rows(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce", "t1", "--max-size", "8")
        assert code == 0
        assert "size=8" in out and "size=100" not in out
