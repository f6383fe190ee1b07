"""OBJ meshes and a versioned JSON form for scaffolds."""

from __future__ import annotations

import io
import json
import math
from pathlib import Path
from typing import Iterable

import jsonschema
import numpy as np

from ..errors import ExportError, SchemaError, UnsupportedVersionError
from ..words import format_word, letter_text, parse_letter, parse_word
from .build import Ball3, Scaffold, ScaffoldParams, Tube3
from .geometry import TorusPlacement, _local_stadium, _to_world

SCAFFOLD_JSON_VERSION = 1


# -- meshes ----------------------------------------------------------------


def _perp_frame(axis) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    helper = np.array([0.0, 0.0, 1.0]) if abs(a[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(a, helper)
    u /= np.linalg.norm(u)
    return u, np.cross(a, u)


def torus_mesh(t: TorusPlacement, major: int, minor: int) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """``major * minor`` vertices; the quad grid wraps in both directions."""
    s = np.arange(major) * (t.perimeter / major)
    pts, _, nor = _local_stadium(s, t.rho, t.stretch)
    core = _to_world(t, pts)
    radial = _to_world(t, nor, vectors=True)
    n = t.frame()[2]
    phi = np.arange(minor) * (2 * math.pi / minor)
    ring = np.cos(phi)[None, :, None] * radial[:, None, :] + np.sin(phi)[None, :, None] * n
    verts = (core[:, None, :] + t.tau * ring).reshape(-1, 3)
    faces = []
    for i in range(major):
        i2 = (i + 1) % major
        for j in range(minor):
            j2 = (j + 1) % minor
            a, b, c, d = i * minor + j, i2 * minor + j, i2 * minor + j2, i * minor + j2
            faces += [(a, b, c), (a, c, d)]
    return verts, faces


def sphere_mesh(center, radius: float, major: int, minor: int) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """UV sphere: ``minor - 1`` latitude rings of ``major`` vertices plus two poles."""
    c = np.asarray(center, dtype=float)
    verts = [c + (0.0, 0.0, radius)]
    for r in range(1, minor):
        th = math.pi * r / minor
        for k in range(major):
            ph = 2 * math.pi * k / major
            verts.append(c + radius * np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]))
    verts.append(c - (0.0, 0.0, radius))
    south = len(verts) - 1
    faces = []
    for k in range(major):
        faces.append((0, 1 + k, 1 + (k + 1) % major))
    for r in range(minor - 2):
        base = 1 + r * major
        for k in range(major):
            k2 = (k + 1) % major
            a, b = base + k, base + k2
            faces += [(a, a + major, b + major), (a, b + major, b)]
    last = 1 + (minor - 2) * major
    for k in range(major):
        faces.append((last + k, south, last + (k + 1) % major))
    return np.array(verts), faces


def cylinder_mesh(start, end, radius: float, major: int) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Capped cylinder: two rings of ``major`` vertices and two cap centers."""
    p, q = np.asarray(start, dtype=float), np.asarray(end, dtype=float)
    u, w = _perp_frame(q - p)
    ang = np.arange(major) * (2 * math.pi / major)
    ring = radius * (np.cos(ang)[:, None] * u + np.sin(ang)[:, None] * w)
    verts = np.vstack([p + ring, q + ring, p, q])
    cp, cq = 2 * major, 2 * major + 1
    faces = []
    for k in range(major):
        k2 = (k + 1) % major
        faces += [(k, k2, major + k2), (k, major + k2, major + k)]
        faces.append((cp, k2, k))
        faces.append((cq, major + k, major + k2))
    return verts, faces


def _mesh_objects(s: Scaffold, major: int, minor: int) -> Iterable[tuple[str, np.ndarray, list]]:
    for b in s.balls:
        yield f"ball_{format_word(b.word)}", *sphere_mesh(b.center, b.radius, major, minor)
    for t in s.tubes:
        name = f"tube_{format_word(t.source)}_{letter_text(s.rank, t.generator)}"
        yield name, *cylinder_mesh(t.start, t.end, t.radius, major)
    for t in s.tori():
        yield "torus_" + t.owner.replace(":", "_"), *torus_mesh(t, major, minor)


def obj_text(s: Scaffold, major_segments: int = 32, minor_segments: int = 16) -> str:
    if major_segments < 3 or minor_segments < 3:
        raise ValueError("tessellation needs at least 3 segments in each direction")
    buf = io.StringIO()
    buf.write(f"# scaffold rank {s.rank} radius {s.radius}\n")
    offset = 1
    for name, verts, faces in _mesh_objects(s, major_segments, minor_segments):
        buf.write(f"o {name}\n")
        for v in verts:
            buf.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for a, b, c in faces:
            buf.write(f"f {a + offset} {b + offset} {c + offset}\n")
        offset += len(verts)
    return buf.getvalue()


def export_obj(s: Scaffold, path, major_segments: int = 32, minor_segments: int = 16) -> Path:
    path = Path(path)
    text = obj_text(s, major_segments, minor_segments)
    _write(path, text)
    return path


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise ExportError(str(path), exc.strerror or str(exc)) from exc


# -- JSON ------------------------------------------------------------------

_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_NUM = {"type": "number"}
_STR = {"type": "string"}

SCAFFOLD_SCHEMA = {
    "type": "object",
    "required": ["version", "rank", "radius", "params", "balls", "tubes", "tori", "declared_links"],
    "properties": {
        "version": {"type": "integer"},
        "rank": {"type": "integer", "minimum": 1},
        "radius": {"type": "integer", "minimum": 0},
        "params": {
            "type": "object",
            "required": ["ball_radius", "tube_radius", "torus_core_radius", "torus_tube_radius"],
            "properties": {k: _NUM for k in ("ball_radius", "tube_radius", "torus_core_radius", "torus_tube_radius")},
            "additionalProperties": False,
        },
        "balls": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["word", "center", "radius"],
                "properties": {"word": _STR, "center": _VEC3, "radius": _NUM},
                "additionalProperties": False,
            },
        },
        "tubes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source_word", "generator", "target_word", "start", "end", "radius"],
                "properties": {
                    "source_word": _STR,
                    "generator": _STR,
                    "target_word": _STR,
                    "start": _VEC3,
                    "end": _VEC3,
                    "radius": _NUM,
                },
                "additionalProperties": False,
            },
        },
        "tori": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["owner", "center", "normal", "rho", "tau"],
                "properties": {
                    "owner": _STR,
                    "center": _VEC3,
                    "normal": _VEC3,
                    "axis": _VEC3,
                    "rho": _NUM,
                    "tau": _NUM,
                    "stretch": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "declared_links": {
            "type": "array",
            "items": {"type": "array", "items": _STR, "minItems": 2, "maxItems": 2},
        },
    },
    "additionalProperties": False,
}


def _torus_json(t: TorusPlacement) -> dict:
    return {
        "owner": t.owner,
        "center": list(t.center),
        "normal": list(t.normal),
        "axis": list(t.axis),
        "rho": t.rho,
        "tau": t.tau,
        "stretch": t.stretch,
    }


def scaffold_to_json(s: Scaffold) -> dict:
    """Tori are listed vertex tori first, then three per tube in tube order."""
    p = s.params
    return {
        "version": SCAFFOLD_JSON_VERSION,
        "rank": s.rank,
        "radius": s.radius,
        "params": {
            "ball_radius": p.ball_radius,
            "tube_radius": p.tube_radius,
            "torus_core_radius": p.torus_core_radius,
            "torus_tube_radius": p.torus_tube_radius,
        },
        "balls": [{"word": format_word(b.word), "center": list(b.center), "radius": b.radius} for b in s.balls],
        "tubes": [
            {
                "source_word": format_word(t.source),
                "generator": letter_text(s.rank, t.generator),
                "target_word": format_word(t.target),
                "start": list(t.start),
                "end": list(t.end),
                "radius": t.radius,
            }
            for t in s.tubes
        ],
        "tori": [_torus_json(t) for t in s.tori()],
        "declared_links": [list(pair) for pair in s.declared_links],
    }


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _vec(v) -> tuple[float, float, float]:
    return tuple(float(x) for x in v)


def scaffold_from_json(data: dict) -> Scaffold:
    if isinstance(data, dict) and "version" in data and data["version"] != SCAFFOLD_JSON_VERSION:
        raise UnsupportedVersionError(
            "$.version", f"unsupported scaffold version {data['version']!r}; this reader handles {SCAFFOLD_JSON_VERSION}"
        )
    try:
        jsonschema.validate(data, SCAFFOLD_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(_json_path(exc.absolute_path), exc.message) from None

    rank = data["rank"]

    def word(text: str, path: str):
        try:
            return parse_word(rank, text)
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from None

    params = ScaffoldParams(**data["params"])
    balls = []
    for i, b in enumerate(data["balls"]):
        try:
            balls.append(Ball3(word(b["word"], f"$.balls[{i}].word"), _vec(b["center"]), float(b["radius"])))
        except ValueError as exc:
            raise SchemaError(f"$.balls[{i}].radius", str(exc)) from None
    tubes = []
    for i, t in enumerate(data["tubes"]):
        try:
            gen = parse_letter(rank, t["generator"])
        except ValueError as exc:
            raise SchemaError(f"$.tubes[{i}].generator", str(exc)) from None
        tubes.append(
            Tube3(
                word(t["source_word"], f"$.tubes[{i}].source_word"),
                gen,
                word(t["target_word"], f"$.tubes[{i}].target_word"),
                _vec(t["start"]),
                _vec(t["end"]),
                float(t["radius"]),
            )
        )
    tori = []
    for i, t in enumerate(data["tori"]):
        rho, tau = float(t["rho"]), float(t["tau"])
        if not 0 < tau < rho:
            raise SchemaError(
                f"$.tori[{i}].tau", f"solid torus invariant 0 < tau < rho violated (tau={tau}, rho={rho})"
            )
        tori.append(
            TorusPlacement(
                t["owner"],
                _vec(t["center"]),
                _vec(t["normal"]),
                rho,
                tau,
                _vec(t.get("axis", (1.0, 0.0, 0.0))),
                float(t.get("stretch", 0.0)),
            )
        )
    nv = len(balls)
    if len(tori) != nv + 3 * len(tubes):
        raise SchemaError("$.tori", f"expected {nv + 3 * len(tubes)} tori (one per ball, three per tube), got {len(tori)}")
    chains = tuple(tuple(tori[nv + 3 * e : nv + 3 * e + 3]) for e in range(len(tubes)))
    return Scaffold(
        rank=rank,
        radius=data["radius"],
        params=params,
        balls=tuple(balls),
        tubes=tuple(tubes),
        vertex_tori=tuple(tori[:nv]),
        chain_tori=chains,
        declared_links=tuple(tuple(p) for p in data["declared_links"]),
    )


def export_json(s: Scaffold, path) -> Path:
    path = Path(path)
    _write(path, json.dumps(scaffold_to_json(s), indent=1) + "\n")
    return path


def import_json(path) -> Scaffold:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return scaffold_from_json(data)
