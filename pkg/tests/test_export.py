import copy
import json
import re
from collections import Counter

import numpy as np
import pytest

from cayley_cantor.cayley import build_graph
from cayley_cantor.errors import ExportError, SchemaError, UnsupportedVersionError
from cayley_cantor.scaffold.build import build_scaffold
from cayley_cantor.scaffold.export import (
    SCAFFOLD_JSON_VERSION,
    cylinder_mesh,
    export_json,
    export_obj,
    import_json,
    obj_text,
    scaffold_from_json,
    scaffold_to_json,
    sphere_mesh,
    torus_mesh,
)


@pytest.fixture(scope="module")
def s21():
    return build_scaffold(build_graph(2, 1))


def closed_and_oriented(faces):
    """Every directed edge appears once and its reverse once: a closed, consistently oriented surface."""
    directed = Counter()
    for a, b, c in faces:
        directed.update([(a, b), (b, c), (c, a)])
    return all(n == 1 for n in directed.values()) and all((b, a) in directed for a, b in directed)


def euler(verts, faces):
    edges = {frozenset(p) for a, b, c in faces for p in ((a, b), (b, c), (c, a))}
    return len(verts) - len(edges) + len(faces)


def parse_obj(text):
    """Split an OBJ file into {name: (vertices, faces)} with faces re-based to the object."""
    objects, name, verts, faces = {}, None, [], []
    total = 0
    for line in text.splitlines():
        tag, *rest = line.split() or [""]
        if tag == "o":
            if name is not None:
                objects[name] = (verts, faces)
                total += len(verts)
            name, verts, faces = rest[0], [], []
        elif tag == "v":
            verts.append(tuple(map(float, rest)))
        elif tag == "f":
            assert len(rest) == 3
            faces.append(tuple(int(x) - 1 - total for x in rest))
    if name is not None:
        objects[name] = (verts, faces)
    return objects


# -- meshes --------------------------------------------------------------------


def test_torus_mesh(s21):
    t = s21.chain_tori[0][1]
    verts, faces = torus_mesh(t, 32, 16)
    assert len(verts) == 512 and len(faces) == 1024
    assert closed_and_oriented(faces) and euler(verts, faces) == 0


def test_sphere_and_cylinder_meshes():
    verts, faces = sphere_mesh((1, 2, 0), 0.2, 32, 16)
    assert len(verts) == 32 * 15 + 2
    assert np.allclose(np.linalg.norm(verts - np.array([1, 2, 0]), axis=1), 0.2)
    assert closed_and_oriented(faces) and euler(verts, faces) == 2
    verts, faces = cylinder_mesh((0, 0, 0), (1, 0, 0), 0.05, 32)
    assert len(verts) == 66
    assert closed_and_oriented(faces) and euler(verts, faces) == 2


def test_obj_objects(s21):
    objs = parse_obj(obj_text(s21))
    assert len(objs) == 26
    kinds = Counter(re.match(r"[a-z]+", n).group() for n in objs)
    assert kinds == {"ball": 5, "tube": 4, "torus": 17}
    for name, (verts, faces) in objs.items():
        assert closed_and_oriented(faces), name
        assert min(min(f) for f in faces) >= 0 and max(max(f) for f in faces) < len(verts)


def test_obj_radius_zero():
    assert len(parse_obj(obj_text(build_scaffold(build_graph(2, 0))))) == 2


def test_obj_file_and_write_error(s21, tmp_path):
    path = export_obj(s21, tmp_path / "s.obj", 8, 6)
    assert len(parse_obj(path.read_text())) == 26
    with pytest.raises(ExportError) as info:
        export_obj(s21, tmp_path / "missing" / "s.obj")
    assert "missing" in str(info.value.path)


# -- JSON ----------------------------------------------------------------------


def test_json_round_trip(tmp_path):
    s = build_scaffold(build_graph(2, 2))
    assert scaffold_from_json(scaffold_to_json(s)) == s
    assert import_json(export_json(s, tmp_path / "s.json")) == s
    data = json.loads((tmp_path / "s.json").read_text())
    assert data["version"] == SCAFFOLD_JSON_VERSION
    assert {"owner", "center", "normal", "rho", "tau"} <= set(data["tori"][0])


def test_json_version_mismatch(s21):
    data = scaffold_to_json(s21)
    data["version"] = SCAFFOLD_JSON_VERSION + 1
    with pytest.raises(UnsupportedVersionError) as info:
        scaffold_from_json(data)
    assert info.value.path == "$.version"


def test_json_torus_invariant(s21):
    data = copy.deepcopy(scaffold_to_json(s21))
    data["tori"][3]["tau"] = data["tori"][3]["rho"]
    with pytest.raises(SchemaError) as info:
        scaffold_from_json(data)
    assert info.value.path == "$.tori[3].tau"


@pytest.mark.parametrize(
    "mutate,path",
    [
        (lambda d: d["balls"][2].pop("center"), "$.balls[2]"),
        (lambda d: d["tori"][5].__setitem__("rho", "big"), "$.tori[5].rho"),
        (lambda d: d["tubes"][1].__setitem__("source_word", "a9"), "$.tubes[1].source_word"),
        (lambda d: d["tori"].pop(), "$.tori"),
    ],
)
def test_json_errors_carry_path(s21, mutate, path):
    data = copy.deepcopy(scaffold_to_json(s21))
    mutate(data)
    with pytest.raises(SchemaError) as info:
        scaffold_from_json(data)
    assert info.value.path == path
