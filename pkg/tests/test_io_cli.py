import json
import subprocess
import sys

import numpy as np
import pytest

from topocoarse.cli import main
from topocoarse.generators import gen_annulus
from topocoarse.graph import GraphValidationError, SpatialGraph
from topocoarse.io import (
    GraphParseError,
    dumps_json,
    load_csv,
    load_diagram,
    load_graph,
    loads_json,
    save_csv,
    save_graph,
)
from topocoarse.persistence import PersistenceDiagram

TWO_NODES = '{"dim": 2, "nodes": [{"id": "a", "pos": [0, 0]}, {"id": "b", "pos": [3, 4]}], "edges": [{"u": "a", "v": "b"}]}'


def test_two_node_json():
    g = loads_json(TWO_NODES)
    assert g.n_nodes == 2 and g.n_edges == 1
    assert list(g.node_ids) == ["a", "b"]
    assert g.custom_weights is None


def test_malformed_json_reports_line():
    with pytest.raises(GraphParseError, match=r"g\.json:3"):
        loads_json('{\n "nodes": [],\n "edges": [,]\n}', "g.json")


def test_duplicate_edge_rows():
    doc = json.loads(TWO_NODES)
    doc["edges"].append({"u": "a", "v": "b"})
    with pytest.raises(GraphValidationError, match="duplicate edge"):
        loads_json(json.dumps(doc))


def test_reversed_edge_is_merged(caplog):
    doc = json.loads(TWO_NODES)
    doc["edges"].append({"u": "b", "v": "a"})
    assert loads_json(json.dumps(doc)).n_edges == 1
    assert "both directions" in caplog.text


def test_partial_weights_rejected():
    doc = {"nodes": [{"id": i, "pos": [i, 0]} for i in range(3)], "edges": [{"u": 0, "v": 1, "weight": 2}, {"u": 1, "v": 2}]}
    with pytest.raises(GraphParseError, match="some edges only"):
        loads_json(json.dumps(doc))


def test_unknown_node_and_self_loop():
    doc = json.loads(TWO_NODES)
    doc["edges"] = [{"u": "a", "v": "z"}]
    with pytest.raises(GraphParseError, match="unknown node"):
        loads_json(json.dumps(doc))
    doc["edges"] = [{"u": "a", "v": "a"}]
    with pytest.raises(GraphValidationError, match="self-loop"):
        loads_json(json.dumps(doc))


def test_json_round_trip_is_bit_exact(rng, tmp_path):
    pos = rng.standard_normal((20, 3)) * 1e3
    edges = np.array([[i, i + 1] for i in range(19)])
    g = SpatialGraph(pos, edges, rng.random(19) + 1e-300, ids=[f"n{i}" for i in range(20)])
    save_graph(g, tmp_path / "g.json")
    h = load_graph(tmp_path / "g.json")
    np.testing.assert_array_equal(h.positions, g.positions)
    np.testing.assert_array_equal(h.custom_weights, g.custom_weights)
    np.testing.assert_array_equal(h.edges, g.edges)
    assert list(h.node_ids) == list(g.node_ids)
    assert dumps_json(h) == dumps_json(g)


def test_csv_round_trip(tmp_path):
    g = gen_annulus(15, seed=2)
    save_csv(g, tmp_path / "n.csv", tmp_path / "e.csv")
    assert (tmp_path / "n.csv").read_text().startswith("id,x,y\n")
    assert (tmp_path / "e.csv").read_text().startswith("u,v\n")
    h = load_csv(tmp_path / "n.csv", tmp_path / "e.csv")
    np.testing.assert_array_equal(h.positions, g.positions)
    np.testing.assert_array_equal(h.edges, g.edges)
    h2 = load_graph(tmp_path / "n.csv", edges_path=tmp_path / "e.csv")
    np.testing.assert_array_equal(h2.positions, g.positions)


def test_csv_bad_row_line_number(tmp_path):
    (tmp_path / "n.csv").write_text("id,x,y\n0,0,0\n1,1\n")
    (tmp_path / "e.csv").write_text("u,v\n0,1\n")
    with pytest.raises(GraphParseError, match=r"n\.csv:3"):
        load_csv(tmp_path / "n.csv", tmp_path / "e.csv")


def test_gen_annulus_rules():
    g = gen_annulus(30, p_frac=1.0, seed=4)
    assert g.n_edges == 30 * 29 // 2
    a, b = gen_annulus(30, seed=9), gen_annulus(30, seed=9)
    np.testing.assert_array_equal(a.positions, b.positions)
    np.testing.assert_array_equal(a.edges, b.edges)
    r = np.linalg.norm(gen_annulus(200, seed=1).positions, axis=1)
    assert r.min() >= 0.7 and r.max() <= 1.0
    assert gen_annulus(100).n_edges == 495
    with pytest.raises(ValueError):
        gen_annulus(10, inner=1.0, outer=0.5)


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_then_select_writes_four_files(tmp_path, capsys):
    g = tmp_path / "g.json"
    assert run("gen", "annulus", "--n", 100, "--p", 0.1, "--seed", 7, "--out", g) == 0
    assert run("select", "--input", g, "--out-prefix", tmp_path / "run") == 0
    for suffix in ("coarse.json", "scores.csv", "pd_orig.csv", "pd_reduced.csv"):
        assert (tmp_path / f"run.{suffix}").exists()
    assert "theta_star=" in capsys.readouterr().out
    assert load_graph(tmp_path / "run.coarse.json").n_nodes < 100
    lines = (tmp_path / "run.scores.csv").read_text().splitlines()
    assert lines[0] == "theta,alpha,edge_ratio,bottleneck,score" and lines[-1].startswith("# lambda=")


def test_select_is_deterministic(tmp_path, monkeypatch):
    g = tmp_path / "g.json"
    run("gen", "annulus", "--n", 40, "--seed", 1, "--out", g)
    outputs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("TOPOCOARSE_THREADS", threads)
        run("select", "--input", g, "--out-prefix", tmp_path / threads)
        outputs.append([(tmp_path / f"{threads}.{s}").read_bytes() for s in ("coarse.json", "scores.csv", "pd_reduced.csv")])
    assert outputs[0] == outputs[1]


def test_bottleneck_same_file_prints_zero(tmp_path, capsys):
    d = tmp_path / "d.csv"
    d.write_text(PersistenceDiagram.from_points([(0, 0, float("inf")), (1, 1, 2)]).to_csv())
    assert run("bottleneck", "--a", d, "--b", d, "--dim", 1) == 0
    assert capsys.readouterr().out.strip() == "0.0"


def test_select_one_edge(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(TWO_NODES)
    assert run("select", "--input", g, "--out-prefix", tmp_path / "r") == 0
    rows = (tmp_path / "r.scores.csv").read_text().splitlines()
    assert len(rows) == 3
    assert load_graph(tmp_path / "r.coarse.json").n_nodes == 1


def test_pd_and_coarsen_and_features(tmp_path, capsys):
    g = tmp_path / "g.json"
    run("gen", "random", "--n", 12, "--p", 0.4, "--seed", 3, "--out", g)
    assert run("pd", "--input", g, "--out", tmp_path / "pd.csv", "--dump-filtration", tmp_path / "f.csv") == 0
    pd = load_diagram(tmp_path / "pd.csv")
    assert pd.essential_count_dim0 >= 1
    assert (tmp_path / "f.csv").read_text().startswith("time,dim,v0,v1,v2\n")
    assert run("coarsen", "--input", g, "--theta", 0.3, "--out", tmp_path / "c.json", "--partition-out", tmp_path / "p.csv") == 0
    assert (tmp_path / "p.csv").read_text().startswith("node,block\n")
    assert run("features", g, "--reduced") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("graph,n_components") and out[1].startswith("g,")


def test_transform(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(TWO_NODES)
    assert run("transform", "--input", g, "--rotate", 90, "--scale", 2, "--out", tmp_path / "t.json") == 0
    pos = load_graph(tmp_path / "t.json").positions
    np.testing.assert_allclose(pos, [[0, 0], [-8, 6]], atol=1e-12)
    assert run("transform", "--input", g, "--seed", 5, "--out", tmp_path / "r.json") == 0


def test_exit_codes(tmp_path, capsys):
    assert run("select", "--input", tmp_path / "missing.json", "--out-prefix", tmp_path / "x") == 2
    with pytest.raises(SystemExit) as exc:
        run("select", "--bogus")
    assert exc.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("pd", "--input", bad) == 1
    assert "bad.json:1" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "topocoarse", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "select" in proc.stdout
