"""End-to-end tests for the elect.py command line."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from elect import Config, build_parser, main
from multiwinner.election_io import read_election

ROOT = Path(__file__).parent.parent
DATA = ROOT / "data"
EXAMPLE = str(DATA / "example1.elec")
COUNTEREXAMPLE = str(DATA / "cc-counterexample.elec")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParser:
    """Test global flag handling."""

    def test_global_flags_before_command(self):
        args = build_parser().parse_args(["--json", "--seed", "4", "analyze-g", "0,1"])
        assert args.json and args.seed == 4

    def test_global_flags_after_command(self):
        args = build_parser().parse_args(["analyze-g", "0,1", "--json", "--threads", "2"])
        assert args.json and args.threads == 2 and args.seed == 0

    def test_config_limits(self):
        config = Config("winners", False, False, 0, 3, 100, False)
        assert config.limits.workers == 3
        assert config.limits.enumeration_cap == 100


class TestWinnersCommand:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "winners", EXAMPLE, "--rule", "bloc")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "{e,f}"
        assert "score: 6" in lines
        assert "ties: 1" in lines

    def test_json(self, capsys):
        code, out, _ = run(capsys, "winners", EXAMPLE, "--rule", "cc-alpha", "--json")
        data = json.loads(out)
        assert code == 0
        assert data["schema_version"] == 1
        assert data["command"] == "winners"
        assert data["input_fingerprint"].startswith("sha256:")
        assert data["result"]["winners"] == [["e", "f"]]
        assert data["result"]["best_score"] == "6"

    def test_counting_function(self, capsys):
        code, out, _ = run(capsys, "winners", EXAMPLE, "--g", "0,0,1")
        assert code == 0
        assert out.splitlines()[0] == "{a,f}"

    def test_greedy_not_exact(self, capsys):
        code, out, _ = run(capsys, "winners", EXAMPLE, "--rule", "cc-alpha", "--algorithm", "greedy")
        assert code == 0
        assert "exact: false" in out.splitlines()

    def test_decimal(self, capsys):
        code, out, _ = run(capsys, "--decimal", "winners", EXAMPLE, "--g", "0,1/3,1/2")
        assert code == 0
        assert any(line.startswith("score: ") and "/" not in line for line in out.splitlines())


class TestScoreCommand:
    def test_perfectionist(self, capsys):
        code, out, _ = run(capsys, "score", EXAMPLE, "--rule", "perfectionist", "--committee", "a,f")
        assert code == 0
        assert out.strip() == "{a,f} score: 2"

    def test_size_mismatch(self, capsys):
        code, _, err = run(capsys, "score", EXAMPLE, "--rule", "bloc", "--k", "3", "--committee", "a,f")
        assert code == 2
        assert err.startswith("ERROR:")


class TestAnalyzeCommand:
    def test_concave(self, capsys):
        code, out, _ = run(capsys, "analyze-g", "0,1,1")
        lines = out.splitlines()
        assert code == 0
        assert "singularity: 2" in lines
        assert "fixed-majority: no (violation at k1=0 k2=1: 0 < 1)" in lines
        assert "corollary: concave-nonlinear" in lines

    def test_json(self, capsys):
        code, out, _ = run(capsys, "analyze-g", "0,1,1,2", "--json")
        result = json.loads(out)["result"]
        assert code == 0
        assert result["fixed_majority"]["satisfies"] is True
        assert result["convex"] is False
        assert result["corollary"] == "other"

    def test_malformed(self, capsys):
        code, _, err = run(capsys, "analyze-g", "0,x")
        assert code == 2
        assert "ERROR:" in err


class TestCheckFmCommand:
    def test_cc_fails(self, capsys):
        code, out, _ = run(capsys, "check-fm", COUNTEREXAMPLE, "--rule", "cc-alpha")
        assert code == 0
        assert out.splitlines()[0] == "verdict: FAIL"

    def test_bloc_passes(self, capsys):
        code, out, _ = run(capsys, "check-fm", COUNTEREXAMPLE, "--rule", "bloc")
        assert code == 0
        assert out.splitlines()[0] == "verdict: PASS"

    def test_not_applicable(self, capsys):
        code, out, _ = run(capsys, "check-fm", EXAMPLE, "--rule", "bloc")
        assert out.splitlines() == ["verdict: NOT-APPLICABLE"]


class TestWitnessCommand:
    def test_counting_witness(self, capsys, tmp_path):
        code, out, _ = run(capsys, "witness", "--g", "0,1,1", "--m", "4", "--out-dir", str(tmp_path))
        assert code == 0
        assert "verification: PASS" in out.splitlines()
        election, k = read_election(tmp_path / "witness.elec")
        assert (election.n, k) == (3, 2)
        sidecar = json.loads((tmp_path / "witness.json").read_text())
        assert sidecar["beating_committee"] == ["a", "d"]

    def test_general_witness(self, capsys, tmp_path):
        code, out, _ = run(capsys, "witness", "--rule", "beta-cc", "--k", "2", "--m", "4", "--out-dir", str(tmp_path))
        assert code == 0
        assert "verification: PASS" in out.splitlines()
        assert json.loads((tmp_path / "witness.json").read_text())["t"] == 1

    def test_no_witness(self, capsys, tmp_path):
        code, out, _ = run(capsys, "witness", "--rule", "bloc", "--k", "2", "--m", "4", "--out-dir", str(tmp_path))
        assert code == 0
        assert out.startswith("no witness")
        assert not (tmp_path / "witness.elec").exists()

    def test_too_few_candidates(self, capsys, tmp_path):
        code, _, err = run(capsys, "witness", "--g", "0,1,1", "--m", "3", "--out-dir", str(tmp_path))
        assert code == 3
        assert "Precondition" in err


class TestGenCommand:
    def test_x3c(self, capsys, tmp_path):
        out_file = tmp_path / "x3c.elec"
        code, out, _ = run(capsys, "gen", "x3c", "--input", str(DATA / "x3c-yes.x3c"), "--out", str(out_file))
        assert code == 0
        assert "target: 6" in out.splitlines()
        election, k = read_election(out_file)
        assert (election.m, election.n, k) == (15, 6, 2)

    def test_impartial_to_stdout(self, capsys, tmp_path):
        code, out, _ = run(capsys, "--seed", "9", "gen", "impartial", "--m", "4", "--n", "3", "--k", "2")
        assert code == 0
        path = tmp_path / "ic.elec"
        path.write_text(out)
        election, k = read_election(path)
        assert (election.m, election.n, k) == (4, 3, 2)

    def test_fixed_majority_json(self, capsys):
        code, out, _ = run(capsys, "gen", "fixed-majority", "--m", "6", "--n", "5", "--k", "2", "--json")
        result = json.loads(out)["result"]
        assert code == 0
        assert len(result["planted_committee"]) == 2
        assert result["election"].startswith("6 5 2")

    def test_clique_needs_parameters(self, capsys):
        code, _, _ = run(capsys, "gen", "clique", "--input", str(DATA / "triangle.graph"))
        assert code == 2


class TestBenchCommand:
    def test_csv_to_stdout(self, capsys):
        code, out, _ = run(capsys, "bench", "brute", "--sizes", "5,6")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "suite,size,algorithm,seconds,status"
        assert len(lines) == 3

    def test_csv_to_file(self, capsys, tmp_path):
        path = tmp_path / "bench.csv"
        code, _, _ = run(capsys, "bench", "greedy", "--sizes", "6", "--out", str(path))
        assert code == 0
        assert len(path.read_text().splitlines()) == 3


class TestExitCodes:
    """Test failures map to stable exit codes."""

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "winners", "no-such-file.elec", "--rule", "bloc")
        assert code == 1
        assert err.startswith("ERROR:")

    def test_malformed_election(self, capsys, tmp_path):
        path = tmp_path / "bad.elec"
        path.write_text("3 x 1\n")
        code, _, err = run(capsys, "winners", str(path), "--rule", "bloc")
        assert code == 2
        assert "line 1" in err

    def test_precondition(self, capsys):
        code, _, _ = run(capsys, "winners", EXAMPLE, "--rule", "bloc-perfectionist", "--algorithm", "greedy")
        assert code == 3

    def test_cap_exceeded(self, capsys):
        code, _, err = run(capsys, "--cap", "1", "winners", EXAMPLE, "--rule", "beta-cc", "--algorithm", "brute")
        assert code == 4
        assert "Cap exceeded" in err

    def test_missing_rule(self, capsys):
        code, _, _ = run(capsys, "winners", EXAMPLE)
        assert code == 2


@pytest.mark.integration
class TestSubprocess:
    """Run the script as a separate process."""

    def test_script(self):
        result = subprocess.run(
            [sys.executable, str(ROOT / "elect.py"), "winners", EXAMPLE, "--rule", "sntv", "--json"],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert result.returncode == 0, result.stderr
        assert json.loads(result.stdout)["result"]["winners"] == [["a", "b"]]

    def test_script_exit_code(self):
        result = subprocess.run(
            [sys.executable, str(ROOT / "elect.py"), "analyze-g", "1,2"],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert result.returncode == 2
        assert result.stderr.startswith("ERROR:")
