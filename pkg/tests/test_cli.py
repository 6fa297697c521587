import io
import json
import subprocess
import sys

import pytest

from scottkit.cli import run
from scottkit.core import linear_order


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}

    def put(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        paths[name] = str(p)
        return str(p)

    put("one-node.json", [[]])
    put("two-chain-order.json", linear_order(2).to_json())
    put("p3.json", {"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2]]})
    put("spec.json", {"0": [2], "1": [0, 1], "2": [0]})
    return put, paths


def test_embed_one_node_tree(files):
    _, p = files
    code, out = call("embed", "tree-graph", p["one-node.json"])
    assert code == 0 and len(json.loads(out)["universe"]) == 12


def test_scott_rank_two_chain(files):
    _, p = files
    code, out = call("scott-rank", p["two-chain-order.json"])
    assert code == 0 and json.loads(out)["structure_rank"] == 2


def test_sweep_iso_tree_graph():
    code, out = call("sweep", "iso", "--embedding", "tree-graph", "--max-size", "5")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["seed"] == 0


@pytest.mark.parametrize("emb", ["graph-field", "graph-order"])
def test_embed_decode_round_trip(files, tmp_path, emb):
    put, p = files
    code, out = call("embed", emb, p["p3.json"])
    assert code == 0
    img = put("img.json", json.loads(out))
    code, out = call("decode", emb, img)
    G = json.loads(out)
    assert code == 0 and sorted(map(sorted, G["relations"]["E"])) == [[0, 1], [0, 1], [1, 2], [1, 2]]


def test_tree_round_trip_and_rank(files):
    put, p = files
    code, out = call("gen", "tree", "--spec", p["spec.json"], "--k", "2", "--depth", "2")
    assert code == 0
    tree = put("tree.json", json.loads(out))
    code, out = call("tree-rank", tree, "--node", "")
    assert json.loads(out)["rank"] == 2
    code, out = call("embed", "tree-graph", tree)
    img = put("img.json", json.loads(out))
    code, out = call("decode", "tree-graph", img)
    assert code == 0 and len(json.loads(out)) == 9


def test_orbits_command(files):
    _, p = files
    code, out = call("orbits", p["p3.json"], "--k", "1")
    assert code == 0 and json.loads(out)["orbits"] == [[[0], [2]], [[1]]]


def test_dot_format(files):
    _, p = files
    code, out = call("embed", "tree-graph", p["one-node.json"], "--format", "dot")
    assert code == 0 and out.startswith("graph")


def test_usage_errors_name_the_flag(files, capsys):
    _, p = files
    assert call("sweep", "iso", "--embedding", "nope")[0] == 2
    assert "nope" in capsys.readouterr().err
    assert call("sweep", "iso", "--embedding", "tree-graph", "--max-size", "-1")[0] == 2
    assert "--max-size" in capsys.readouterr().err
    assert call("decode", "tree-graph", p["p3.json"])[0] == 2
    assert call("frobnicate")[0] == 2


def test_target_signature_checked(files):
    put, _ = files
    bad = put("bad-target.json", {"vertices": [0, 1], "edges": [[0, 1]]})
    code, _ = call("sweep", "transfer", "--embedding", "tree-graph", "--max-size", "3", "--target", bad)
    assert code == 2


def test_property_failure_exits_one(monkeypatch):
    from scottkit import cli
    from scottkit.harness import SweepReport

    def failing(E, family, budgets=None):
        rep = SweepReport(E.name, "iso-preservation", instances=len(family))
        rep.fail({"kind": "pair", "instances": [0, 1]})
        return rep

    monkeypatch.setattr(cli, "check_iso_preservation", failing)
    code, out = call("sweep", "iso", "--embedding", "tree-graph", "--max-size", "2")
    assert code == 1 and json.loads(out)["counterexample"]["kind"] == "pair"


def test_output_is_deterministic(files):
    _, p = files
    a = call("gen", "graph", "--max-size", "6", "--seed", "7")
    b = call("gen", "graph", "--max-size", "6", "--seed", "7")
    assert a == b
    c = call("gen", "tree", "--max-size", "6", "--seed", "3")
    assert c == call("gen", "tree", "--max-size", "6", "--seed", "3")


def test_console_script_entry_point(files):
    _, p = files
    out = subprocess.run([sys.executable, "-m", "scottkit.cli", "scott-rank", p["two-chain-order.json"]],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["structure_rank"] == 2
