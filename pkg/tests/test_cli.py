import json
import os

import pytest

from ncgame import SolverConfig, solve_wardrop
from ncgame.analysis import DemandPath, price_of_anarchy
from ncgame.cli import build_parser, parse_demand, run
from ncgame.game import Game
from ncgame.harness import scale_poa

HERE = os.path.dirname(__file__)
DATA = os.path.join(HERE, "data")
GOLDEN = os.path.join(HERE, "golden")


def data(name):
    return os.path.join(DATA, name)


def golden(name):
    with open(os.path.join(GOLDEN, name)) as fh:
        return fh.read()


def test_validate_ok(capsys):
    assert run(["validate", data("pigou.json")]) == 0
    assert capsys.readouterr().out.strip() == "pass"


def test_validate_free_strategy(capsys):
    assert run(["validate", data("bad_free_strategy.json")]) == 1
    assert "free strategy" in capsys.readouterr().out


def test_poa_golden(capsys):
    assert run(["poa", data("pigou.json"), "--demand", "1:1"]) == 0
    out = capsys.readouterr().out
    assert out == golden("poa_pigou.txt")
    assert "poa = 1.333333333" in out


def test_poa_json_matches_library(capsys):
    assert run(["poa", data("pigou.json"), "--demand", "1:4", "--json"]) == 0
    got = json.loads(capsys.readouterr().out)
    lib = price_of_anarchy(Game.load(data("pigou.json")), {"1": 4})
    assert got["poa"] == lib.poa and got["C_ne"] == lib.C_ne


def test_solve_golden_and_library(capsys, tmp_path):
    args = ["solve", data("double_limits.json"), "--demand", "upper:10,lower:3", "--tol", "1e-12"]
    assert run(args) == 0
    out = capsys.readouterr().out
    assert out == golden("solve_double_limits.json")
    lib = solve_wardrop(Game.load(data("double_limits.json")), {"upper": 10, "lower": 3}, SolverConfig(tol=1e-12))
    assert list(json.loads(out)["profile"].values()) == lib.profile.tolist()


def test_solve_so_from_demand_file(tmp_path, capsys):
    demand = tmp_path / "d.json"
    demand.write_text(json.dumps({"1": 1}))
    out = tmp_path / "so.json"
    assert run(["solve", "--mode", "so", data("pigou.json"), "--demand", f"@{demand}", "-o", str(out)]) == 0
    res = json.loads(out.read_text())
    assert res["mode"] == "so" and res["total_cost"] == pytest.approx(0.75)


def test_analyze_golden(capsys):
    assert run(["analyze", data("double_limits.json"), "--path", data("nsq_n.json")]) == 0
    out = capsys.readouterr().out
    assert out == golden("analyze_double_limits.txt")
    assert "K_0  upper" in out and "K_1  lower" in out and "negligible" in out


def test_analyze_alternating_golden(capsys):
    assert run(["analyze", data("double_limits.json"), "--path", data("alternating.json")]) == 0
    assert capsys.readouterr().out == golden("analyze_alternating.txt")


def test_analyze_json(capsys):
    assert run(["analyze", data("double_limits.json"), "--path", data("nsq_n.json"), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mdg_components"] == [["upper"], ["lower"]]
    assert out["decomposition"]["phases"][0]["levels"][1]["verdict"] == "negligible"


def test_scale_golden_and_library(capsys, tmp_path):
    args = ["scale", data("pigou.json"), "--path", data("linear_1.json"), "--grid", "1:64:geometric", "--no-timing"]
    assert run(args) == 0
    out = capsys.readouterr().out
    assert out == golden("scale_pigou.csv")
    lib = scale_poa(Game.load(data("pigou.json")), DemandPath.load(data("linear_1.json")), [1, 2, 4, 8, 16, 32, 64], record_time=False)
    assert out == lib.to_csv()


def test_scale_writes_files_and_report(capsys, tmp_path):
    csv_path, json_path = tmp_path / "r.csv", tmp_path / "r.json"
    args = [
        "scale", data("pigou.json"), "--path", data("linear_1.json"), "--grid", "1:256:geometric",
        "--csv", str(csv_path), "--json", str(json_path), "--report", "--workers", "2",
    ]
    assert run(args) == 0
    assert csv_path.read_text().startswith("phase,n,T,C_ne,C_so,poa,gap_ne,gap_so,eps_so,ms")
    assert len(json.loads(json_path.read_text())["records"]) == 9
    assert "phase 0:" in capsys.readouterr().err


def test_ingest(tmp_path, capsys):
    out = tmp_path / "toy.json"
    args = ["ingest", "--net", data("toy_net.tntp"), "--trips", data("toy_trips.tntp"), "--k", "3", "-o", str(out)]
    assert run(args) == 0
    game = Game.load(out)
    demand = json.loads((tmp_path / "toy.demand.json").read_text())
    assert game.group_ids == ["1-2", "1-4", "2-4"] and demand == {"1-2": 10.0, "1-4": 100.0, "2-4": 20.0}
    assert "validation: pass" in capsys.readouterr().out


def test_corpus(tmp_path):
    out = tmp_path / "r.json"
    assert run(["corpus", "random", "--seed", "7", "-o", str(out)]) == 0
    first = out.read_text()
    assert run(["corpus", "random", "--seed", "7", "-o", str(out)]) == 0
    assert out.read_text() == first
    assert run(["corpus", "pigou(4)", "-o", str(out)]) == 0
    assert Game.load(out).n_strategies == 2


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["solve", "x.json"],
    ["solve", "x.json", "--demand", "bogus"],
    ["poa", "x.json", "--demand", "1:1", "--tol", "0"],
    ["ingest", "--net", "a", "--trips", "b", "--k", "0", "-o", "c"],
    ["validate", "--frobnicate", "x.json"],
])
def test_usage_errors_exit_2(argv, capsys):
    if argv and argv[0] == "poa":
        argv[1] = data("pigou.json")
    assert run(argv) == 2


@pytest.mark.parametrize("argv", [
    ["validate", "missing.json"],
    ["solve", data("pigou.json"), "--demand", "zz:1"],
    ["corpus", "unknown_game"],
    ["ingest", "--net", "missing_net.tntp", "--trips", "missing_trips.tntp", "-o", "x.json"],
    ["validate", data("toy_net.tntp")],
])
def test_input_failures_exit_1(argv, capsys):
    assert run(argv) == 1
    assert "error" in capsys.readouterr().err


def test_solve_non_convergence_exits_1(tmp_path, capsys):
    assert run(["corpus", "pigou(3)", "-o", str(tmp_path / "p3.json")]) == 0
    argv = ["solve", "--mode", "so", str(tmp_path / "p3.json"), "--demand", "1:7", "--tol", "1e-15", "--max-iter", "1"]
    assert run(argv) == 1


def test_help_for_every_subcommand(capsys):
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert set(sub.choices) == {"validate", "solve", "poa", "scale", "analyze", "ingest", "corpus"}
    for name in sub.choices:
        assert run([name, "--help"]) == 0
        assert "usage:" in capsys.readouterr().out


def test_parse_demand():
    assert parse_demand("1:10, 2:5") == {"1": 10.0, "2": 5.0}
    assert parse_demand("a:b:3") == {"a:b": 3.0}
