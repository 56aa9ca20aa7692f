"""Tests for main CLI module."""

import json
from unittest.mock import MagicMock, patch

import pytest
from click.testing import CliRunner

from packcover.main import main

TREE_TEXT = """\
node t0 e d1 : uniform 1
node t1 d1 g : uniform 1
edge t0 t1 d1
root t0 e
"""


@pytest.fixture
def tree_file(tmp_path):
    """Write a two-node pair-tree file for testing."""
    path = tmp_path / "tree.txt"
    path.write_text(TREE_TEXT)
    return str(path)


@pytest.fixture
def pair_file(tmp_path):
    """Write a pair of parallel elements for testing."""
    path = tmp_path / "pair.txt"
    path.write_text("ground e f\nM uniform 1\n")
    return str(path)


def test_main_help():
    """Test CLI help output."""
    runner = CliRunner()
    result = runner.invoke(main, ["--help"])

    assert result.exit_code == 0
    assert "Packing/Covering" in result.output
    for command in ("verify", "solve-game", "assemble", "packing-covering"):
        assert command in result.output


def test_verify_help_lists_suites():
    """Test the suite names appear as choices."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "--help"])

    assert result.exit_code == 0
    assert "lemma27" in result.output
    assert "--workers" in result.output


def test_verify_blockstr():
    """Test a passing suite exits cleanly."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "blockstr"])

    assert result.exit_code == 0
    assert "blockstr: PASS" in result.output
    assert "checked: 4096" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["game", "--n", "3", "--nodes", "2", "--trials", "2"],
        ["roundtrip", "--trials", "0"],
        ["roundtrip", "--n", "3", "--nodes", "2", "--trials", "2", "--seed", "5"],
        ["tom-minor", "--n", "3", "--nodes", "2", "--trials", "3"],
        ["lemma27", "--n", "2"],
        ["lemma17", "--n", "2"],
        ["lemma27", "--n", "5", "--trials", "2"],
        ["runchains", "--n", "2"],
        ["chains", "--n", "3", "--trials", "4"],
        ["tacticians", "--n", "2"],
        ["lem5-minus"],
        ["lem4-minus"],
    ],
)
def test_verify_suites_pass(args):
    """Test each suite runs to completion on a small spec."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", *args])

    assert result.exit_code == 0, result.output
    assert f"{args[0]}: PASS" in result.output


def test_verify_json_and_output(tmp_path):
    """Test JSON on stdout matches the written report."""
    report_path = tmp_path / "report.json"
    runner = CliRunner()
    result = runner.invoke(
        main, ["verify", "blockstr", "--emit", "json", "-o", str(report_path)]
    )

    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["passed"] == 1
    assert "wall_time" not in data
    assert json.loads(report_path.read_text()) == data


def test_verify_timing():
    """Test --timing adds the wall time to JSON."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "blockstr", "--emit", "json", "--timing"])

    assert result.exit_code == 0
    assert "wall_time" in json.loads(result.output)


def test_verify_unknown_suite():
    """Test an unknown suite is a usage error."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "lemma99"])

    assert result.exit_code == 2


def test_verify_bad_sizes():
    """Test invalid sizes are reported as errors."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "5sets", "--n", "6-5"])

    assert result.exit_code == 1
    assert "Error: Invalid range" in result.output


def test_verify_bad_seed():
    """Test a seed outside 64 bits is rejected."""
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "5sets", "--seed", "-1"])

    assert result.exit_code == 1
    assert "64-bit" in result.output


@patch("packcover.main.run_suite")
def test_verify_failure_exit_code(mock_run_suite):
    """Test a failing report exits with status 1."""
    report = MagicMock()
    report.ok = False
    report.to_text.return_value = "broken: FAIL"
    mock_run_suite.return_value = report

    runner = CliRunner()
    result = runner.invoke(main, ["verify", "5sets", "--n", "3,5", "--trials", "7"])

    assert result.exit_code == 1
    assert "broken: FAIL" in result.output
    spec = mock_run_suite.call_args[0][0]
    assert spec.sizes == (3, 5)
    assert spec.trials == 7


@patch("packcover.main.run_suite")
def test_verify_verbose_output_path(mock_run_suite, tmp_path):
    """Test verbose mode names the written report."""
    report = MagicMock()
    report.ok = True
    report.to_text.return_value = "5sets: PASS"
    report.to_json.return_value = "{}"
    mock_run_suite.return_value = report

    report_path = tmp_path / "out.json"
    runner = CliRunner()
    result = runner.invoke(main, ["verify", "5sets", "-v", "-o", str(report_path)])

    assert result.exit_code == 0
    assert f"Report written to {report_path}" in result.output
    assert report_path.read_text() == "{}\n"


def test_solve_game_packer_wins(tree_file):
    """Test the text output of a won Packing game."""
    runner = CliRunner()
    result = runner.invoke(main, ["solve-game", tree_file, "--promise", "M-"])

    assert result.exit_code == 0
    assert "Packing game from M- at e" in result.output
    assert "Winner: Packer" in result.output
    assert "  t0: bot, M-, N-" in result.output
    assert "  t0 [M-]: d1=M-; wave ({d1,e}, {d1}, {e})" in result.output


def test_solve_game_trace(tree_file):
    """Test the replayed play of a lost game."""
    runner = CliRunner()
    result = runner.invoke(main, ["solve-game", tree_file, "-p", "top", "--trace"])

    assert result.exit_code == 0
    assert "Winner: Coverina" in result.output
    assert "Coverina challenges d1 (M/N-strong)" in result.output
    assert "Packer is stuck; Coverina wins" in result.output


def test_solve_game_covering_json(tree_file):
    """Test a starred promise plays the Covering game."""
    runner = CliRunner()
    result = runner.invoke(
        main, ["solve-game", tree_file, "-p", "M-*", "--trace", "--emit", "json"]
    )

    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["game"] == "covering"
    assert data["winner"] == "Coverina"
    assert data["strategy"]["player"] == "Coverina"
    assert data["trace"]["winner"] == "Coverina"


def test_solve_game_bad_promise(tree_file):
    """Test an unknown promise is reported."""
    runner = CliRunner()
    result = runner.invoke(main, ["solve-game", tree_file, "-p", "M0"])

    assert result.exit_code == 1
    assert "Error: Unknown promise" in result.output


def test_solve_game_nonexistent_file():
    """Test a missing tree file."""
    runner = CliRunner()
    result = runner.invoke(main, ["solve-game", "/nonexistent/tree.txt", "-p", "M-"])

    assert result.exit_code != 0


def test_assemble(tree_file):
    """Test the assembled pair is printed in the pair format."""
    runner = CliRunner()
    result = runner.invoke(main, ["assemble", tree_file])

    assert result.exit_code == 0
    assert result.output == "ground e g\nM uniform 1\n"


def test_assemble_json(tree_file):
    """Test JSON output carries the fingerprint."""
    runner = CliRunner()
    result = runner.invoke(main, ["assemble", tree_file, "--emit", "json"])

    data = json.loads(result.output)
    assert data["pair"] == "ground e g\nM uniform 1\n"
    assert len(data["fingerprint"]) == 64


def test_assemble_parse_error(tmp_path):
    """Test a malformed tree file reports its position."""
    path = tmp_path / "bad.txt"
    path.write_text("node t0 e : uniform x\nroot t0 e\n")
    runner = CliRunner()
    result = runner.invoke(main, ["assemble", str(path)])

    assert result.exit_code == 1
    assert "Error: line 1, column" in result.output


def test_packing_covering(pair_file):
    """Test the partition of two parallel elements."""
    runner = CliRunner()
    result = runner.invoke(main, ["packing-covering", pair_file])

    assert result.exit_code == 0
    assert "P: {e,f}" in result.output
    assert "Q: {}" in result.output


def test_packing_covering_json(pair_file):
    """Test the partition as JSON."""
    runner = CliRunner()
    result = runner.invoke(main, ["packing-covering", pair_file, "--emit", "json"])

    data = json.loads(result.output)
    assert data["P"] == ["e", "f"]
    assert data["covering"] == {"I_M": [], "I_N": []}
