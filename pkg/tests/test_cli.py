import json
import subprocess
import sys

import pytest

from regnet import graph6
from regnet.cli import main
from regnet.graph import complete_bipartite, complete_graph, cycle_graph, hypercube, petersen_graph
from regnet.symmetry import is_isomorphic


def _write(tmp_path, name, graphs):
    p = tmp_path / name
    p.write_text("".join(graph6.encode(g) + "\n" for g in graphs))
    return str(p)


def test_bounds(capsys):
    assert main(["bounds", "16", "3"]) == 0
    out = capsys.readouterr().out
    assert "d_min=3" in out and "mpl_min=2.2000 (11/5)" in out
    assert main(["bounds", "32", "4"]) == 0
    assert "mpl_min=2.3548 (73/31)" in capsys.readouterr().out


def test_exit_codes(capsys):
    assert main(["enumerate", "5", "3"]) == 3
    assert main(["optimize", "7", "3"]) == 3
    assert main(["optimize", "4", "5"]) == 2
    assert main(["bounds", "10", "2"]) == 0
    assert main(["bounds", "3", "3"]) == 2
    assert main(["enumerate", "4", "4"]) == 2
    capsys.readouterr()


def test_enumerate(tmp_path, capsys):
    assert main(["enumerate", "10", "3", "--count-only"]) == 0
    assert capsys.readouterr().out.strip() == "19"
    out = tmp_path / "g.g6"
    assert main(["enumerate", "8", "3", "--out", str(out)]) == 0
    assert len(out.read_text().split()) == 5


def test_metrics_bisect_aut(tmp_path, capsys):
    f = _write(tmp_path, "p.g6", [petersen_graph(), hypercube(3)])
    assert main(["metrics", f]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "diameter=2 mpl=1.6667 (5/3)" in lines[0]
    assert "mpl=1.7143 (12/7)" in lines[1]
    assert main(["bisect", f]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("width=5 exact=true") and out[1].startswith("width=4")
    assert main(["bisect", f, "--heuristic", "--restarts", "8", "--seed", "3"]) == 0
    assert "exact=false" in capsys.readouterr().out
    assert main(["aut", f]) == 0
    recs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [r["order"] for r in recs] == [120, 48]
    assert recs[0]["vertex_transitive"] and recs[0]["edge_transitive"]


def test_optimize_formats(tmp_path, capsys):
    assert main(["optimize", "10", "3", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["tie_count"] == 1 and d["optimal"][0]["aut_order"] == 120
    out = tmp_path / "r.csv"
    assert main(["optimize", "6", "3", "--format", "csv", "--out", str(out)]) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[:10] == "6,3,2,1.4000,5,72,1,true,true,7/5".split(",")
    assert is_isomorphic(graph6.decode(row[10]), complete_bipartite(3, 3))
    assert main(["optimize", "8", "3", "--jobs", "2", "--split-depth", "2"]) == 0
    assert "(8,3) optimal graphs: 1" in capsys.readouterr().out


def test_evaluate(tmp_path, capsys):
    f = _write(tmp_path, "c.g6", [hypercube(3)])
    assert main(["evaluate", f]) == 0
    out = capsys.readouterr().out
    assert "diameter=3*" in out and "mpl=1.7143*" in out
    mixed = _write(tmp_path, "m.g6", [complete_graph(4), petersen_graph()])
    assert main(["evaluate", mixed]) == 2
    f = _write(tmp_path, "k.g6", [complete_bipartite(3, 3)])
    assert main(["evaluate", f, "--format", "csv"]) == 0
    assert "6,3,2,1.4000,5,72,1,true,true" in capsys.readouterr().out
    empty = tmp_path / "e.g6"
    empty.write_text("")
    assert main(["evaluate", str(empty)]) == 2


def test_product(tmp_path, capsys):
    a = _write(tmp_path, "a.g6", [complete_graph(2)])
    b = _write(tmp_path, "b.g6", [complete_graph(2), cycle_graph(4)])
    out = tmp_path / "prod.g6"
    assert main(["product", a, b, "--out", str(out)]) == 0
    gs = list(graph6.read_file(open(out)))
    assert [g.n for g in gs] == [4, 8]
    assert main(["aut", str(out)]) == 0
    assert [json.loads(x)["order"] for x in capsys.readouterr().out.splitlines()] == [8, 48]


def test_bad_graph6(tmp_path, capsys):
    p = tmp_path / "bad.g6"
    p.write_text("C\n")
    assert main(["metrics", str(p)]) == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "regnet", "enumerate", "5", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 3
    r = subprocess.run([sys.executable, "-m", "regnet", "bounds", "21", "4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "mpl_min=2.0000" in r.stdout


def test_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(graph6.encode(petersen_graph()) + "\n"))
    assert main(["metrics", "-"]) == 0
    assert "diameter=2" in capsys.readouterr().out


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
