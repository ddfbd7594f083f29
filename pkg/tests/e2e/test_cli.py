import json
import math

import numpy as np
import pytest

from main import cli

F_ORIGIN = 12.0 * math.pi**2


def run_json(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


class TestSo3Commands:
    """Test cases for the so3 command group"""

    def test_crit_json(self, runner):
        # Act
        document = run_json(runner, ["so3", "crit", "--M", "diag:5,2,1"])

        # Assert
        assert document["route"] == "eigen"
        np.testing.assert_allclose([row["value"] for row in document["critical"]], [8.0, 2.0, -4.0, -6.0], atol=1e-12)
        assert [row["morse_index"] for row in document["critical"]] == [3, 2, 1, 0]

    def test_crit_csv(self, runner):
        # Act
        result = runner.invoke(cli, ["--format", "csv", "so3", "crit", "--M", "diag:5,2,1"])

        # Assert
        assert result.exit_code == 0
        lines = result.stdout.strip().splitlines()
        assert lines[0].startswith("value,")
        assert len(lines) == 5

    def test_bad_matrix_exits_two(self, runner):
        # Act
        result = runner.invoke(cli, ["so3", "crit", "--M", "1 2 3"])

        # Assert
        assert result.exit_code == 2
        assert "M needs 9 values" in result.stderr

    def test_category_hypothesis_failure(self, runner):
        # Act
        result = runner.invoke(cli, ["so3", "category", "--M", "diag:3,2,1.5"])

        # Assert
        assert result.exit_code == 1
        assert "hypothesis failure" in result.stderr

    def test_descent_seeded(self, runner):
        """Test the same --seed gives byte-identical output"""
        # Arrange
        args = ["--seed", "17", "so3", "descent", "--M", "diag:3,2,-1", "--starts", "40"]

        # Act
        first = runner.invoke(cli, args)
        second = runner.invoke(cli, args)

        # Assert
        assert first.exit_code == 0
        assert first.stdout == second.stdout


class TestGlobalFlags:
    """Test cases for the global options and error reporting"""

    def test_bad_quadrature_order(self, runner):
        # Act
        result = runner.invoke(cli, ["--quad-radial", "1", "so3", "crit", "--M", "eye"])

        # Assert
        assert result.exit_code == 2
        assert "quad_radial" in result.stderr

    def test_error_document_with_json_format(self, runner):
        # Act
        result = runner.invoke(cli, ["--format", "json", "so3", "category", "--M", "diag:5,2,1", "--eta", "8"])

        # Assert
        assert result.exit_code == 1
        document = json.loads(result.stderr.strip().splitlines()[-1])
        assert document["error"] == "EmptySublevelSet"
        assert document["exit_code"] == 1
        assert result.stdout == ""

    def test_out_file(self, runner, tmp_path):
        # Arrange
        path = tmp_path / "results" / "crit.json"

        # Act
        result = runner.invoke(cli, ["--out", str(path), "so3", "crit", "--M", "eye"])

        # Assert
        assert result.exit_code == 0
        assert result.stdout == ""
        assert json.loads(path.read_text(encoding="utf-8"))["critical"][0]["value"] == pytest.approx(3.0)


class TestFieldAndBoundaryCommands:
    """Test cases for field and synth"""

    def test_field_at_origin(self, runner):
        """Test alpha_0(x) = x on the regular branch"""
        # Act
        document = run_json(runner, ["field", "--p", "0,0,0,0", "--x", "0.1,0.2,0.3,0.4"])

        # Assert
        assert document["branch"] == "regular"
        np.testing.assert_allclose(document["alpha"], [0.1, 0.2, 0.3, 0.4])

    def test_field_without_fallback(self, runner):
        # Act
        result = runner.invoke(cli, ["field", "--p", "0.0001,0,0,0", "--x", "0.1,0,0,0", "--no-fallback"])

        # Assert
        assert result.exit_code == 1
        assert "small parameter" in result.stderr

    def test_synth_at_origin(self, runner):
        # Act
        document = run_json(runner, ["synth", "--target", "diag:3,2,1", "--p0", "0,0,0,0"])

        # Assert
        np.testing.assert_allclose(document["A"], np.diag([3.0, 2.0, 1.0]) / (2.0 * math.pi**2), atol=1e-15)
        np.testing.assert_allclose(document["M"], np.diag([3.0, 2.0, 1.0]), atol=1e-12)


class TestReduceCommands:
    """Test cases for the reduce command group"""

    def test_window(self, runner, spec_file):
        # Arrange
        path = spec_file(np.diag([5.0, 2.0, 1.0]) / (2.0 * math.pi**2))

        # Act
        document = run_json(runner, ["reduce", "window", "--spec", path, "--c0", "0.1", "--d0", "0.5", "--grid", "3"])

        # Assert
        assert document["C4"] == pytest.approx(8.0)
        assert document["D2"] == pytest.approx(16.0 / F_ORIGIN, rel=1e-8)

    def test_missing_spec_file(self, runner, tmp_path):
        # Act
        result = runner.invoke(cli, ["reduce", "window", "--spec", str(tmp_path / "absent.json")])

        # Assert
        assert result.exit_code == 2
        assert "boundary data file not found" in result.stderr

    @pytest.mark.slow
    def test_hypotheses(self, runner, spec_file):
        # Arrange
        path = spec_file(np.diag([5.0, 2.0, 1.0]) / (2.0 * math.pi**2))

        # Act
        result = runner.invoke(cli, ["--format", "csv", "reduce", "hypotheses", "--spec", path, "--p0", "0,0,0,0"])

        # Assert
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "statement,case,holds,function,detail"


class TestVerifyCommand:
    """Test cases for verify"""

    def test_list(self, runner):
        # Act
        result = runner.invoke(cli, ["--format", "text", "verify", "--list"])

        # Assert
        assert result.exit_code == 0
        assert "so3_tables" in result.stdout

    def test_only_so3_tables(self, runner):
        # Act
        document = run_json(runner, ["verify", "--only", "so3_tables"])

        # Assert
        assert [c["name"] for c in document["checks"]] == ["so3_tables"]
        assert document["checks"][0]["passed"]

    def test_unknown_check(self, runner):
        # Act
        result = runner.invoke(cli, ["verify", "--only", "nope"])

        # Assert
        assert result.exit_code == 2
        assert "unknown check" in result.stderr

    @pytest.mark.slow
    def test_mc_samples_flag_reaches_check(self, runner):
        """Test --mc-samples sets the sample count of the Monte Carlo check"""
        # Act
        document = run_json(runner, ["--mc-samples", "5000", "verify", "--only", "monte_carlo"])

        # Assert
        check = document["checks"][0]
        assert check["name"] == "monte_carlo"
        assert check["passed"]
        assert check["detail"].startswith("5000 samples")
