import json
import subprocess
import sys

import pytest

from openshop_games.cli import main
from openshop_games.generate import gen_instance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(gen_instance(3, 2, 5).to_json())
    return str(path)


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "--n", "6", "--m", "4")
    data = json.loads(out)
    assert code == 0 and data["total_cost"] == 32
    assert data["gantt"].splitlines()[2] == "m2 | 2 1 4 3 6 5"
    code, out, _ = run(capsys, "solve", "--n", "6", "--m", "4", "--format", "table")
    assert "total completion time: 32" in out


def test_solve_instance_keeps_machine_order(capsys, instance_file):
    code, out, _ = run(capsys, "solve", "--instance", instance_file, "--j", "2")
    assert code == 0 and json.loads(out)["total_cost"] == 2 * (1 + 1 + 2)


def test_value_game_alloc_core(capsys, instance_file, tmp_path):
    code, out, _ = run(capsys, "value", "--instance", instance_file, "--coalition", "1,3", "--regime", "as4", "--witness")
    data = json.loads(out)
    assert code == 0 and {"value", "min_cost", "witness"} <= set(data)

    code, out, _ = run(capsys, "game", "--instance", instance_file, "--regime", "as4")
    assert code == 0
    game = tmp_path / "g.json"
    game.write_text(out)
    code, out, _ = run(capsys, "alloc", "--instance", instance_file, "--rule", "mu_bar")
    alloc = tmp_path / "a.json"
    alloc.write_text(out)
    code, out, _ = run(capsys, "core", "--game", str(game), "--allocation", str(alloc))
    assert code == 0 and json.loads(out)["member"] is True
    code, out, _ = run(capsys, "core", "--game", str(game))
    assert code == 0 and json.loads(out)["nonempty"] is True


def test_alloc_mu_j_requires_machine(capsys, instance_file):
    code, _, err = run(capsys, "alloc", "--instance", instance_file, "--rule", "mu_j")
    assert code == 2 and "--j" in err
    code, out, _ = run(capsys, "alloc", "--instance", instance_file, "--rule", "mu_j", "--j", "1")
    assert code == 0 and len(json.loads(out)["x"]) == 3


def test_invalid_inputs(capsys, instance_file, tmp_path):
    assert run(capsys, "value", "--instance", str(tmp_path / "missing.json"), "--coalition", "1", "--regime", "as4")[0] == 2
    assert run(capsys, "value", "--instance", instance_file, "--coalition", "1", "--regime", "as7")[0] == 2
    assert run(capsys, "value", "--instance", instance_file, "--coalition", "9", "--regime", "as4")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "m": 1, "s0": [[0], [0]]}')
    assert run(capsys, "value", "--instance", str(bad), "--coalition", "1", "--regime", "as4")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["solve", "--format", "xml"])
    assert info.value.code == 2


def test_node_limit_exit_code(capsys, tmp_path, monkeypatch):
    path = tmp_path / "big.json"
    path.write_text(gen_instance(4, 3, 11).to_json())
    code, out, _ = run(capsys, "value", "--instance", str(path), "--coalition", "1,2,3,4", "--regime", "bar2", "--node-limit", "1")
    assert code == 4 and json.loads(out)["status"] == "lower-bound-only"
    monkeypatch.setenv("OPENSHOP_NODE_LIMIT", "1")
    code, _, _ = run(capsys, "game", "--instance", str(path), "--regime", "bar2")
    assert code == 4


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples", "--filter", "ex3")
    assert code == 0 and all(c["status"] == "pass" for c in json.loads(out)["ex3"])
    assert run(capsys, "examples", "--filter", "ex5", "--node-limit", "50")[0] == 4
    assert run(capsys, "examples", "--filter", "nope")[0] == 2


def test_gen_and_gantt_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--n", "4", "--m", "3", "--seed", "2")
    assert code == 0
    inst = tmp_path / "i.json"
    inst.write_text(out)
    code, table, _ = run(capsys, "gantt", "--input", str(inst), "--format", "table")
    text = tmp_path / "t.txt"
    text.write_text(table)
    code, out, _ = run(capsys, "gantt", "--parse", str(text))
    assert code == 0 and json.loads(out)["schedule"] == json.loads(inst.read_text())["s0"]


def test_deterministic_output(capsys):
    first = run(capsys, "gen", "--n", "4", "--m", "2", "--seed", "8", "--style", "permuted-blocks")
    assert first == run(capsys, "gen", "--n", "4", "--m", "2", "--seed", "8", "--style", "permuted-blocks")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "openshop_games", "solve", "--n", "2", "--m", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["total_cost"] == 4
