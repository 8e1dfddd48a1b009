import json
import subprocess
import sys

import pytest

from tgfactor import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_cycle(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:cycle:3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["trees"] == 9
    nonzero = {tuple(r["W"]): r["m"] for r in data["multiplicities"] if r["m"]}
    assert nonzero == {("1", "2"): 1, ("1", "3"): 1, ("2", "3"): 1, ("1", "2", "3"): 1}


def test_analyze_complete_four(capsys):
    code, out, _ = run(capsys, "analyze", "--builtin", "complete:4", "--format", "json")
    assert code == 0
    for row in json.loads(out)["multiplicities"]:
        k = len(row["W"])
        assert row["m"] == ((k - 1) * 3 ** (3 - k) if k < 4 else 1)


def test_not_strongly_connected(tmp_path, capsys):
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"vertices": ["a", "b", "c"],
                                "edges": [{"s": 0, "t": 1}, {"s": 1, "t": 2}]}))
    code, _, err = run(capsys, "analyze", "--input", str(path))
    assert code == 2 and "not strongly connected" in err
    code, out, _ = run(capsys, "count", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["rooted_trees"] == {"a": 0, "b": 0, "c": 1}


def test_parse_error_names_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": ["a"], "edges": [{"s": 0}]}')
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "edges[0].t" in err
    path.write_text('{"vertices": ["a"],\n "edges": [}')
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "line 2" in err


def test_missing_file(capsys):
    assert run(capsys, "analyze", "/nonexistent/g.json")[0] == 2


@pytest.mark.parametrize("name, trees, edges", [("cycle:3", 9, 18), ("complete:3", 9, 18)])
def test_treegraph(capsys, tmp_path, name, trees, edges):
    out_file = tmp_path / "tg.json"
    code, _, _ = run(capsys, "treegraph", "--builtin", name, "--format", "json", "--out", str(out_file))
    data = json.loads(out_file.read_text())
    assert code == 0
    assert len(data["tree_graph"]["vertices"]) == trees and len(data["tree_graph"]["edges"]) == edges
    assert data["eulerian"]["ok"] and data["cycle_partition"]["ok"]


def test_treegraph_dot(capsys):
    code, out, _ = run(capsys, "treegraph", "builtin:cycle:3", "--format", "dot")
    assert code == 0 and out.startswith("digraph TG {") and out.count("->") == 18


def test_guard_exit(capsys):
    code, _, err = run(capsys, "treegraph", "--builtin", "complete:6")
    assert code == 3 and "7776" in err
    assert run(capsys, "analyze", "builtin:complete:4", "--max-trees", "10")[0] == 3


@pytest.mark.parametrize("name", ["cycle:4", "complete:4"])
def test_verify_passes(capsys, name):
    code, out, _ = run(capsys, "verify", f"builtin:{name}")
    assert code == 0 and "all checks pass" in out


def test_verify_hypercube_reports_stanley(capsys):
    code, out, _ = run(capsys, "verify", "builtin:hypercube:2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    count = next(c for c in data["examples"] if "rooted tree count" in c["name"])
    assert count["details"]["matrix_tree"] == 16


def test_verify_multigraph(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"multi": True, "vertices": ["1", "2"],
                                "edges": [{"s": 0, "t": 1}, {"s": 0, "t": 1}, {"s": 1, "t": 0}]}))
    code, out, _ = run(capsys, "verify", str(path), "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert [r["trees"] for r in data["multigraph"]["roots"]] == [1, 2]


def test_identity_failure_dumps_seed(monkeypatch, capsys):
    real = cli.verify_all

    def broken(*args, **kw):
        reports = real(*args, **kw)
        reports[0].trials[1].ok = False
        return reports

    monkeypatch.setattr(cli, "verify_all", broken)
    code, _, err = run(capsys, "verify", "builtin:cycle:3", "--seed", "42")
    assert code == 1
    assert "--seed 42" in err and '"assignment"' in err and '"trial": 1' in err


def test_byte_identical_json(capsys):
    first = run(capsys, "verify", "builtin:cycle:3", "--format", "json", "--seed", "9")[1]
    second = run(capsys, "verify", "builtin:cycle:3", "--format", "json", "--seed", "9")[1]
    assert first == second


@pytest.mark.parametrize("argv", [["verify", "builtin:cycle:3", "--trials", "0"],
                                  ["verify", "builtin:cycle:3", "--seed", "-1"],
                                  ["analyze", "builtin:wheel:3"],
                                  ["analyze"],
                                  ["count", "builtin:cycle:3", "--format", "dot"]])
def test_config_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tgfactor", "count", "builtin:cycle:3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "total: 9" in proc.stdout
