import json
import subprocess
import sys

import pytest

from cayley_cantor.antoine import LEAF, chain, standard_chain_tree, tree_to_json
from cayley_cantor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, json.loads(out.out), out.err


def leaves(m):
    return chain([LEAF] * m)


@pytest.mark.parametrize(
    "rank,radius,vertices,edges",
    [(2, 3, 53, 52), (3, 2, 37, 36), (2, 0, 1, 0)],
)
def test_graph_counts(capsys, rank, radius, vertices, edges):
    code, doc, err = run(capsys, "graph", "--rank", str(rank), "--radius", str(radius))
    assert code == 0
    assert doc["vertices"] == vertices == doc["vertices_expected"]
    assert doc["edges"] == edges
    assert str(vertices) in err


def test_graph_writes_files(capsys, tmp_path):
    code, doc, _ = run(
        capsys, "graph", "--rank", "2", "--radius", "2", "--json", str(tmp_path / "g.json"), "--svg", str(tmp_path / "g.svg")
    )
    assert code == 0
    assert len(json.loads((tmp_path / "g.json").read_text())["vertices"]) == 17
    assert (tmp_path / "g.svg").read_text().startswith("<svg")


def test_graph_write_error(capsys, tmp_path):
    code, doc, _ = run(capsys, "graph", "--rank", "2", "--radius", "1", "--svg", str(tmp_path / "no" / "g.svg"))
    assert code == 2 and doc["error"] == "write"


def test_scaffold_full_pipeline(capsys, tmp_path):
    obj = tmp_path / "out.obj"
    code, doc, _ = run(capsys, "scaffold", "--rank", "2", "--radius", "2", "--obj", str(obj), "--json", str(tmp_path / "s.json"))
    assert code == 0 and doc["passed"]
    assert doc["violations"] == {"disjointness": [], "containment": [], "linking": []}
    names = [line for line in obj.read_text().splitlines() if line.startswith("o ")]
    assert len(names) == 17 + 16 + 17 + 16 * 3  # balls, tubes, vertex tori, chain tori
    assert json.loads((tmp_path / "s.json").read_text())["version"] == 1


def test_scaffold_infeasible_ball_radius(capsys):
    code, doc, _ = run(capsys, "scaffold", "--rank", "2", "--radius", "2", "--ball-radius", "0.3")
    assert code == 2
    assert doc["error"] == "infeasible-parameters" and "1/5" in doc["inequality"]


def test_scaffold_line_case(capsys):
    code, doc, _ = run(capsys, "scaffold", "--rank", "1", "--radius", "3")
    assert code == 0 and doc["passed"]


def test_check_all_suites_deterministic(capsys):
    first = main(["check", "--rank", "2", "--seed", "7"])
    out1 = capsys.readouterr().out
    second = main(["check", "--rank", "2", "--seed", "7"])
    out2 = capsys.readouterr().out
    assert first == second == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["passed"] and len(doc["suites"]) == 5


def test_check_single_suite(capsys):
    code, doc, err = run(capsys, "check", "--rank", "3", "--seed", "7", "--suite", "sher-oracle")
    assert code == 0
    assert [s["name"] for s in doc["suites"]] == ["sher-oracle"]
    assert err.startswith("PASS sher-oracle")


def test_equiv(capsys, tmp_path):
    def save(name, tree):
        p = tmp_path / name
        p.write_text(json.dumps(tree_to_json(tree)))
        return str(p)

    four = save("four.json", standard_chain_tree(4, 2))
    five = save("five.json", chain([leaves(4)] * 5))
    a = save("a.json", chain([leaves(4), leaves(4), leaves(5), leaves(4)]))
    b = save("b.json", chain([leaves(4), leaves(5), leaves(4), leaves(4)]))

    code, doc, _ = run(capsys, "equiv", four, four)
    assert code == 0 and doc["verdict"] == "equivalent"
    code, doc, _ = run(capsys, "equiv", four, five)
    assert code == 0 and doc["verdict"] == "inequivalent"
    assert doc["mismatch"]["stage"] == 1 and doc["mismatch"]["kind"] == "link count"
    code, doc, _ = run(capsys, "equiv", a, b)
    assert doc["verdict"] == "equivalent"


def test_equiv_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"links": 4, "children": ["leaf", "leaf", 7, "leaf"]}))
    code, doc, _ = run(capsys, "equiv", str(bad), str(bad))
    assert code == 2 and doc["error"] == "schema" and doc["path"] == "$.children[2]"
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    code, doc, _ = run(capsys, "equiv", str(broken), str(bad))
    assert code == 2 and doc["path"] == "$"
    code, doc, _ = run(capsys, "equiv", str(tmp_path / "absent.json"), str(bad))
    assert code == 2 and doc["error"] == "schema"


@pytest.mark.parametrize(
    "argv",
    [[], ["graph", "--rank", "0", "--radius", "1"], ["graph", "--rank", "2"], ["check", "--suite", "nope"]],
)
def test_usage_errors_exit_2(capsys, argv):
    code, doc, _ = run(capsys, *argv)
    assert code == 2 and doc["error"] == "usage"


def test_resource_cap_is_reported(capsys):
    code, doc, _ = run(capsys, "graph", "--rank", "3", "--radius", "9")
    assert code == 2 and doc["error"] == "invalid-input"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cayley_cantor", "graph", "--rank", "2", "--radius", "3"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["vertices"] == 53
