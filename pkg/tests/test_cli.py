import json

import numpy as np
import pytest

from frankmick import CheckerboardDensity
from frankmick.cli import cli_main


def run(capsys, *argv):
    code = cli_main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFrankCommands:
    def test_tau(self, capsys):
        code, out, _ = run(capsys, "frank", "tau", "--theta", "3")
        assert code == 0
        assert out.strip() == "0.307"

    def test_theta(self, capsys):
        code, out, _ = run(capsys, "frank", "theta", "--tau", "0.307")
        assert code == 0
        assert float(out) == pytest.approx(3.0, abs=0.01)

    def test_eval_cdf_default_and_pdf(self, capsys):
        code, out, _ = run(
            capsys, "frank", "eval", "--theta", "3", "--u", "0.7", "--v", "1"
        )
        assert code == 0
        assert float(out) == pytest.approx(0.7, abs=1e-10)
        code, out, _ = run(
            capsys, "frank", "eval", "--theta", "3", "--u", "0.5", "--v", "0.5",
            "--pdf",
        )
        assert code == 0
        assert float(out) > 1.0  # positive dependence peaks on the diagonal

    def test_checkerboard_json_and_csv(self, capsys, tmp_path):
        jpath = tmp_path / "board.json"
        code, out, _ = run(
            capsys, "frank", "checkerboard", "--theta", "3", "--n", "8",
            "--out", str(jpath),
        )
        assert code == 0
        obj = json.loads(jpath.read_text())
        assert obj["n"] == 8 and len(obj["masses"]) == 64
        assert obj["meta"]["theta"] == 3.0

        cpath = tmp_path / "board.csv"
        code, out, _ = run(
            capsys, "frank", "checkerboard", "--theta", "3", "--n", "8",
            "--out", str(cpath),
        )
        assert code == 0
        board = CheckerboardDensity.from_csv(cpath.read_text())
        np.testing.assert_array_equal(
            board.masses.ravel(), np.array(obj["masses"])
        )

    def test_sample(self, capsys, tmp_path):
        path = tmp_path / "pairs.csv"
        code, _, _ = run(
            capsys, "frank", "sample", "--theta", "3", "--count", "100",
            "--seed", "7", "--out", str(path),
        )
        assert code == 0
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "u,v"
        assert len(lines) == 101


class TestMickCommands:
    def test_solve_zero_tau(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run(
            capsys, "mick", "solve", "--tau", "0", "--n", "8", "--out", str(path)
        )
        assert code == 0
        obj = json.loads(path.read_text())
        masses = np.array(obj["density"]["masses"])
        assert np.max(np.abs(masses - 1 / 64)) <= 1e-9
        assert obj["converged"] is True
        assert obj["config"]["n"] == 8

    def test_solve_and_compare(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "mick", "solve", "--tau", "0.307", "--n", "8",
            "--out", str(path),
        )
        assert code == 0
        code, out, _ = run(
            capsys, "mick", "compare", "--report", str(path), "--theta", "3"
        )
        assert code == 0
        assert 0.0 < float(out) < 0.01

    def test_sweep(self, capsys, tmp_path):
        csv_path = tmp_path / "sweep.csv"
        svg_path = tmp_path / "sweep.svg"
        code, _, _ = run(
            capsys, "mick", "sweep", "--tau", "0.307", "--grids", "4,8,16",
            "--out", str(csv_path), "--svg", str(svg_path),
        )
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "n,sup_error,achieved_tau,implied_theta,converged"
        errs = [float(line.split(",")[1]) for line in lines[1:]]
        assert errs[0] > errs[1] > errs[2]
        assert svg_path.read_text().startswith("<svg")


class TestVerifyCommands:
    def test_identity(self, capsys):
        code, out, _ = run(capsys, "verify", "identity", "--theta", "3")
        assert code == 0
        assert float(out) <= 1e-12

    def test_liouville(self, capsys):
        code, out, _ = run(
            capsys, "verify", "liouville", "--theta", "3", "--n", "32"
        )
        assert code == 0
        assert "ratio" in out


class TestErrorHandling:
    def test_usage_error_exit_2(self, capsys):
        assert run(capsys, "frank")[0] == 2
        assert run(capsys, "nonsense")[0] == 2
        assert run(capsys, "frank", "tau")[0] == 2  # missing --theta

    def test_numeric_error_exit_1_with_json(self, capsys):
        code, _, err = run(capsys, "frank", "tau", "--theta", "0")
        assert code == 1
        diag = json.loads(err.strip().splitlines()[-1])
        assert diag["error"] == "ValueError"

    def test_zero_tau_inversion_error(self, capsys):
        code, _, err = run(capsys, "frank", "theta", "--tau", "0")
        assert code == 1
        diag = json.loads(err.strip().splitlines()[-1])
        assert diag["error"] == "ZeroTau"

    def test_infeasible_solve(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "mick", "solve", "--tau", "0.9", "--n", "2",
            "--out", str(tmp_path / "x.json"),
        )
        assert code == 1
        diag = json.loads(err.strip().splitlines()[-1])
        assert diag["error"] == "TauInfeasible"
