import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from scgpart import cli
from scgpart.io import cost_from_json, cost_to_json, parse_cost_option, rat
from scgpart.game import CostFunction


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    return code, json.loads(out)


FIG2B = ["analyze", "--n", "7", "--m", "3", "--partition", "[[0,1,2],[3,4],[5,6]]"]


class TestAnalyze:
    def test_unbalanced_hat_c_optimal(self, capsys):
        code, rep = run_json(FIG2B, capsys)
        assert code == cli.EXIT_OK
        res = rep["result"]
        assert res["balanced"] is False
        assert res["hat_c_optimal"] is True
        assert res["bar_c_optimal"] is False
        assert [c["class"] for c in res["coalitions"]] == ["divisible", "remainder", "remainder"]
        assert res["coalitions"][2]["g"] == {"1": "8/3", "2": "11/3"}
        assert sum(Fraction(s["probability"]) for s in res["support"]) == 1

    def test_grand_divisible(self, capsys):
        code, rep = run_json(["analyze", "--n", "6", "--m", "3", "--partition", "[[0,1,2,3,4,5]]"], capsys)
        assert code == 0
        res = rep["result"]
        assert res["balanced"] and res["bar_c_optimal"] and res["hat_c_optimal"]

    def test_no_equilibrium(self, capsys):
        code, out, err = run(["analyze", "--n", "3", "--m", "2", "--partition", "[[0,1,2]]"], capsys)
        assert code == cli.EXIT_NO_EQUILIBRIUM == 3
        assert json.loads(out)["result"]["no_equilibrium_coalition"] == [0, 1, 2]
        assert "[0, 1, 2]" in err

    def test_oracle_path_same_result(self, capsys):
        _, a = run_json(FIG2B, capsys)
        _, b = run_json(FIG2B + ["--oracle"], capsys)
        assert a["result"] == b["result"]

    def test_game_file(self, tmp_path, capsys):
        game = tmp_path / "game.json"
        game.write_text(json.dumps({"n": 7, "m": 3, "cost": {"kind": "linear"}}))
        part = tmp_path / "p.json"
        part.write_text("[[0,1,2],[3,4],[5,6]]")
        _, a = run_json(["analyze", "--game", str(game), "--partition", str(part)], capsys)
        _, b = run_json(FIG2B, capsys)
        assert a["result"] == b["result"]


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["analyze", "--n", "3", "--m", "2", "--partition", "[[0,1],[1,2]]"],
            ["analyze", "--n", "3", "--m", "2", "--partition", "[[0]]"],
            ["analyze", "--n", "3", "--m", "2", "--cost", "table:1,3,4", "--partition", "[[0,1,2]]"],
            ["analyze", "--n", "3", "--m", "2", "--partition", "missing-file.json"],
            ["analyze", "--m", "2", "--partition", "[[0]]"],
            ["mnp", "--weights", "0,1", "--m", "2"],
        ],
    )
    def test_input_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == cli.EXIT_INPUT == 2
        assert "invalid input" in err

    def test_cap(self, capsys):
        argv = ["mnp", "--weights", "1,1,1,1,1,1,1,1,1,1", "--m", "3", "--cap", "100"]
        code, _, err = run(argv, capsys)
        assert code == cli.EXIT_CAP == 4
        assert "exceeds" in err

    def test_cap_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SCG_CAP", "50")
        code, _, _ = run(["mnp", "--weights", "1,1,1,1", "--m", "3"], capsys)
        assert code == 4

    def test_cap_flag_does_not_leak(self, capsys, monkeypatch):
        monkeypatch.delenv("SCG_CAP", raising=False)
        run(["mnp", "--weights", "1,1", "--m", "2", "--cap", "10"], capsys)
        assert "SCG_CAP" not in os.environ

    def test_bad_env_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("SCG_CAP", "-3")
        code, _, _ = run(["mnp", "--weights", "1,1", "--m", "2"], capsys)
        assert code == 2


class TestVerify:
    def test_partition_sweep(self, capsys):
        code, rep = run_json(["verify", "theorem1", "--n", "7", "--m", "3", "--cost", "linear"], capsys)
        assert code == 0 and rep["result"]["pass"]

    def test_lattice_witnesses(self, capsys):
        code, rep = run_json(["verify", "prop2", "--size", "4", "--m", "2"], capsys)
        assert code == 0 and rep["result"]["pass"]
        assert rep["result"]["counterexamples"] == []
        regions = {w["region"] for w in rep["result"]["witnesses"]}
        assert "covering & credible & envy-free" in regions

    def test_even_outcomes(self, capsys):
        code, rep = run_json(["verify", "lemma1", "--n", "7", "--m", "3"], capsys)
        assert code == 0 and rep["result"]["pass"]

    def test_weighted_counter_example(self, capsys):
        code, rep = run_json(["verify", "weighted", "--weights", "1,2,3", "--m", "2"], capsys)
        assert rep["result"]["message"] == "no ĉ-optimal partition exists"
        assert code == 0

    def test_all_partitions_bound(self, capsys):
        code, _, _ = run(["verify", "theorem1", "--n", "7", "--m", "3", "--all-partitions"], capsys)
        assert code == 2


class TestMnp:
    def test_min_var(self, capsys):
        _, rep = run_json(["mnp", "--weights", "5,3,2,2,1", "--m", "4", "--objective", "min_var"], capsys)
        assert rep["result"]["loads"] == [5, 3, 3, 2]

    def test_minimax(self, capsys):
        _, rep = run_json(["mnp", "--weights", "1,2,3", "--m", "2", "--objective", "minimax"], capsys)
        assert rep["result"]["value"] == 3

    def test_single_bin(self, capsys):
        _, rep = run_json(["mnp", "--weights", "4", "--m", "1"], capsys)
        assert rep["result"]["loads"] == [4]

    def test_all_argmin(self, capsys):
        _, rep = run_json(["mnp", "--weights", "5,3,2,2,1", "--m", "4", "--all", "--bnb"], capsys)
        assert [5, 4, 2, 2] in rep["result"]["argmin"]


class TestFormats:
    def test_csv(self, capsys):
        code, out, _ = run(FIG2B + ["--format", "csv"], capsys)
        lines = out.splitlines()
        assert lines[0] == "loads,probability"
        assert len(lines) == 7

    def test_table(self, capsys):
        code, out, _ = run(["verify", "prop2", "--size", "4", "--m", "2", "--format", "table"], capsys)
        assert code == 0
        assert "covering & credible & envy-free" in out

    def test_table_no_equilibrium(self, capsys):
        code, out, _ = run(
            ["analyze", "--n", "3", "--m", "2", "--partition", "[[0,1,2]]", "--format", "table"], capsys
        )
        assert code == 3 and "False" in out

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "r.json"
        run(FIG2B + ["-o", str(target)], capsys)
        assert json.loads(target.read_text())["command"] == "analyze"


class TestDeterminismAndCheck:
    @pytest.mark.parametrize(
        "argv",
        [
            FIG2B,
            ["verify", "prop2", "--size", "3", "--m", "2"],
            ["weighted", "--weights", "2,2,2,2", "--m", "2"],
            ["mnp", "--weights", "5,3,2,2,1", "--m", "4", "--all"],
        ],
    )
    def test_round_trip(self, argv, tmp_path, capsys):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        run(argv + ["-o", str(first)], capsys)
        run(argv + ["-o", str(second)], capsys)
        assert first.read_bytes() == second.read_bytes()
        code, out, _ = run(["--check", str(first)], capsys)
        assert code == 0 and out.endswith("ok\n")

    def test_check_detects_tampering(self, tmp_path, capsys):
        path = tmp_path / "a.json"
        run(FIG2B + ["-o", str(path)], capsys)
        rep = json.loads(path.read_text())
        rep["result"]["balanced"] = True
        path.write_text(json.dumps(rep))
        code, _, _ = run(["--check", str(path)], capsys)
        assert code == 2

    def test_subprocess_byte_identical(self):
        cmd = [sys.executable, "-m", "scgpart.cli", *FIG2B]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b


class TestIo:
    def test_rat(self):
        assert rat(3) == "3/1"
        assert rat(Fraction(2, 4)) == "1/2"

    @pytest.mark.parametrize("text", ["linear", "linear:2,1", "quadratic", "poly:1,0,1", "exp", "exp:3,2", "table:1,2,4,8"])
    def test_cost_round_trip(self, text):
        f = cost_from_json(parse_cost_option(text), 4)
        assert cost_from_json(cost_to_json(f), 4) == f

    def test_unknown_cost(self):
        with pytest.raises(ValueError):
            parse_cost_option("cubic")

    def test_float_strings_are_exact(self):
        f = cost_from_json(parse_cost_option("linear:1.1"), 3)
        assert f(3) == CostFunction.linear(3, "11/10")(3)
