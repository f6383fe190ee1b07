"""Balls, tubes and linked tori placed along the planar Cayley graph.

Every vertex gets a ball and a horizontal round torus; every edge gets a
straight tube and a chain of three stadium tori in alternating vertical and
horizontal planes through the edge axis.  The chain runs from the endpoint at
which the edge reads as a positive generator ``a_j``: slot 1 links that
endpoint's vertex torus, slot 3 links the other one.

Sizes are local.  A vertex's ball radius is capped by the spacing of its
shell, and a tube's radius by the angular gaps between edges at both ends.
Every size depends only on the vertex or edge and its neighbors in the
infinite graph, so a placement does not change when the radius grows.  The
chain on an edge is one template, written in edge coordinates (x along the
axis, z up), carried into place by that edge's rigid frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from ..cayley import TruncatedCayleyGraph, build_graph, child_labels, word_position
from ..errors import InfeasibleParametersError
from ..labels import EdgeCantor, VertexCantor, canonical_label
from ..words import ReducedWord, involution, word_count
from .geometry import TorusPlacement, Vec3

MAX_BALL_RADIUS = 0.2
#: Ball radius as a fraction of the distance to the nearest other vertex.
BALL_SPACING = 0.4
#: Tube radius is at most ``ball * sin(gap / 2) / ANGLE_SAFETY`` at each end.
ANGLE_SAFETY = 1.5
#: Chain torus core and tube radii as fractions of the edge's tube radius.
CHAIN_CORE = 0.75
CHAIN_TUBE = 0.12
#: Vertex torus tube radius is at most this fraction of the thinnest incident tube.
VERTEX_TUBE_CAP = 0.35


@dataclass(frozen=True)
class ScaffoldParams:
    ball_radius: float = 0.2
    tube_radius: float = 0.04
    torus_core_radius: float = 0.1
    torus_tube_radius: float = 0.02

    def check(self) -> None:
        """Raise :class:`InfeasibleParametersError` naming the first violated inequality."""
        b, t, c, tt = self.ball_radius, self.tube_radius, self.torus_core_radius, self.torus_tube_radius
        if not b > 0:
            raise InfeasibleParametersError("ball_radius > 0", f"ball_radius={b}")
        if b > MAX_BALL_RADIUS:
            raise InfeasibleParametersError(
                "ball_radius <= 1/5", f"ball_radius={b}; each ball must fit in a ball of radius 1/5"
            )
        if not 0 < t < b:
            raise InfeasibleParametersError("0 < tube_radius < ball_radius", f"tube_radius={t}, ball_radius={b}")
        if not 0 < tt < c:
            raise InfeasibleParametersError(
                "0 < torus_tube_radius < torus_core_radius", f"torus_tube_radius={tt}, torus_core_radius={c}"
            )
        if not c + tt < b:
            raise InfeasibleParametersError(
                "torus_core_radius + torus_tube_radius < ball_radius", f"{c} + {tt} >= {b}"
            )
        if not (CHAIN_CORE + CHAIN_TUBE) * t < c / 2:
            raise InfeasibleParametersError(
                f"{CHAIN_CORE + CHAIN_TUBE:g} * tube_radius < torus_core_radius / 2",
                f"chain tori of tube_radius={t} would reach the center of a vertex torus of radius {c}",
            )


@dataclass(frozen=True)
class Ball3:
    word: ReducedWord
    center: Vec3
    radius: float

    def __post_init__(self) -> None:
        if not 0 < self.radius <= MAX_BALL_RADIUS:
            raise ValueError(f"ball radius {self.radius} outside (0, 1/5]")


@dataclass(frozen=True)
class Tube3:
    """Tube around the straight segment between the two ball boundary spheres.

    ``source``/``generator``/``target`` name the edge in outward form;
    ``start`` and ``end`` are where the axis leaves the source and target balls.
    """

    source: ReducedWord
    generator: int
    target: ReducedWord
    start: Vec3
    end: Vec3
    radius: float

    @property
    def positive_source(self) -> ReducedWord:
        """Endpoint from which this edge reads as a positive generator."""
        return self.source if self.generator <= self.source.rank else self.target


@dataclass(frozen=True)
class Scaffold:
    rank: int
    radius: int
    params: ScaffoldParams
    balls: tuple[Ball3, ...]
    tubes: tuple[Tube3, ...]
    vertex_tori: tuple[TorusPlacement, ...]
    chain_tori: tuple[tuple[TorusPlacement, TorusPlacement, TorusPlacement], ...]
    declared_links: tuple[tuple[str, str], ...]
    graph: TruncatedCayleyGraph | None = field(default=None, compare=False, repr=False)

    def get_graph(self) -> TruncatedCayleyGraph:
        if self.graph is None:
            object.__setattr__(self, "graph", build_graph(self.rank, self.radius))
        return self.graph

    def tori(self) -> list[TorusPlacement]:
        return list(self.vertex_tori) + [t for ch in self.chain_tori for t in ch]

    def ball_of(self, word: ReducedWord) -> Ball3:
        return self._balls_by_word[word]

    def vertex_torus_of(self, word: ReducedWord) -> TorusPlacement:
        return self.vertex_tori[self._ball_index[word]]

    @cached_property
    def _balls_by_word(self) -> dict:
        return {b.word: b for b in self.balls}

    @cached_property
    def _ball_index(self) -> dict:
        return {b.word: i for i, b in enumerate(self.balls)}

    def edge_chain(self, e: int) -> list[TorusPlacement]:
        """Vertex torus, three chain tori, vertex torus, from the positive source."""
        tube = self.tubes[e]
        p = tube.positive_source
        q = tube.target if p == tube.source else tube.source
        return [self.vertex_torus_of(p), *self.chain_tori[e], self.vertex_torus_of(q)]

    def census(self) -> dict:
        return {
            "balls": len(self.balls),
            "tubes": len(self.tubes),
            "vertex_tori": len(self.vertex_tori),
            "chain_tori": 3 * len(self.chain_tori),
            "declared_links": len(self.declared_links),
        }


# -- local sizing ----------------------------------------------------------


def neighbor_words(w: ReducedWord) -> list[ReducedWord]:
    """All ``2N`` neighbors of ``w`` in the untruncated graph."""
    rank = w.rank
    out = []
    if w.letters:
        out.append(ReducedWord._trusted(rank, w.letters[:-1]))
    for b in child_labels(rank, w.letters[-1] if w.letters else None):
        out.append(ReducedWord._trusted(rank, w.letters + (b,)))
    return out


def shell_spacing(rank: int, n: int) -> float:
    """Distance from a shell-``n`` vertex to the nearest other vertex."""
    if n == 0:
        return 1.0
    return min(1.0, 2 * n * math.sin(math.pi / word_count(rank, n)))


@dataclass(frozen=True)
class VertexSize:
    position: tuple[float, float]
    ball: float
    scale: float
    min_gap: float  # smallest angle between incident edge directions


@lru_cache(maxsize=None)
def _vertex_size(w: ReducedWord, params: ScaffoldParams) -> VertexSize:
    x, y = word_position(w)
    ball = min(params.ball_radius, BALL_SPACING * shell_spacing(w.rank, len(w)))
    angles = sorted(
        math.atan2(py - y, px - x) for px, py in (word_position(v) for v in neighbor_words(w))
    )
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    return VertexSize((x, y), ball, ball / params.ball_radius, min(gaps))


def edge_tube_radius(p: ReducedWord, q: ReducedWord, params: ScaffoldParams) -> float:
    sp, sq = _vertex_size(p, params), _vertex_size(q, params)
    return min(
        params.tube_radius * min(sp.scale, sq.scale),
        sp.ball * math.sin(sp.min_gap / 2) / ANGLE_SAFETY,
        sq.ball * math.sin(sq.min_gap / 2) / ANGLE_SAFETY,
    )


def vertex_torus_radii(w: ReducedWord, params: ScaffoldParams) -> tuple[float, float]:
    s = _vertex_size(w, params)
    thinnest = min(edge_tube_radius(w, v, params) for v in neighbor_words(w))
    return params.torus_core_radius * s.scale, min(params.torus_tube_radius * s.scale, VERTEX_TUBE_CAP * thinnest)


# -- edge template ---------------------------------------------------------


@dataclass(frozen=True)
class ChainSlot:
    """One chain torus in edge coordinates."""

    center_x: float
    plane: str  # "vertical" (normal +y) or "horizontal" (normal +z)
    rho: float
    tau: float
    stretch: float


def edge_template(length: float, rho_p: float, rho_q: float, tube: float) -> list[ChainSlot]:
    """Three stadium tori along the x axis from 0 (positive source) to ``length``.

    Slot 1 is centered across the source torus core at x = ``rho_p``, slot 3
    across the target core at ``length - rho_q``; consecutive stadia overlap
    by one cap radius so each passes through the other's cap center.
    """
    rc, tc = CHAIN_CORE * tube, CHAIN_TUBE * tube
    start = rho_p - rc
    stop = length - rho_q + rc
    run = (stop - start + 2 * rc) / 3
    if run - 2 * rc < 2 * rc:
        raise InfeasibleParametersError(
            "chain run length >= 4 * chain core radius",
            f"edge of length {length:.4g} is too short for chain tori of radius {rc:.4g}",
        )
    out = []
    a = start
    for plane in ("vertical", "horizontal", "vertical"):
        out.append(ChainSlot(a + run / 2, plane, rc, tc, (run - 2 * rc) / 2))
        a = a + run - rc
    return out


@dataclass(frozen=True)
class EdgeFrame:
    origin: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    length: float

    @classmethod
    def between(cls, p, q) -> "EdgeFrame":
        p = np.array([p[0], p[1], 0.0])
        q = np.array([q[0], q[1], 0.0])
        d = q - p
        length = float(np.linalg.norm(d))
        x = d / length
        z = np.array([0.0, 0.0, 1.0])
        return cls(p, x, np.cross(z, x), z, length)

    def point(self, local) -> Vec3:
        v = self.origin + local[0] * self.x + local[1] * self.y + local[2] * self.z
        return tuple(float(c) for c in v)

    def vector(self, local) -> Vec3:
        v = local[0] * self.x + local[1] * self.y + local[2] * self.z
        return tuple(float(c) for c in v)

    def to_local(self, world) -> np.ndarray:
        d = np.asarray(world, dtype=float) - self.origin
        return np.array([d @ self.x, d @ self.y, d @ self.z])

    def to_local_vector(self, world) -> np.ndarray:
        d = np.asarray(world, dtype=float)
        return np.array([d @ self.x, d @ self.y, d @ self.z])


def place_slot(frame: EdgeFrame, slot: ChainSlot, owner: str) -> TorusPlacement:
    normal = (0.0, 1.0, 0.0) if slot.plane == "vertical" else (0.0, 0.0, 1.0)
    return TorusPlacement(
        owner=owner,
        center=frame.point((slot.center_x, 0.0, 0.0)),
        normal=frame.vector(normal),
        rho=slot.rho,
        tau=slot.tau,
        axis=frame.vector((1.0, 0.0, 0.0)),
        stretch=slot.stretch,
    )


# -- build -----------------------------------------------------------------


def _v3(p) -> Vec3:
    return (float(p[0]), float(p[1]), 0.0)


def build_scaffold(graph: TruncatedCayleyGraph, params: ScaffoldParams | None = None) -> Scaffold:
    params = params or ScaffoldParams()
    params.check()
    rank = graph.rank
    balls = []
    vertex_tori = []
    for w in graph.words():
        s = _vertex_size(w, params)
        rho, tau = vertex_torus_radii(w, params)
        balls.append(Ball3(w, _v3(s.position), s.ball))
        vertex_tori.append(TorusPlacement(str(VertexCantor(w)), _v3(s.position), (0.0, 0.0, 1.0), rho, tau))

    tubes = []
    chains = []
    links = []
    for e in graph.edges():
        p, q = (e.source, e.target) if e.generator <= rank else (e.target, e.source)
        k = e.generator if e.generator <= rank else involution(rank, e.generator)
        sp, sq = _vertex_size(p, params), _vertex_size(q, params)
        frame = EdgeFrame.between(sp.position, sq.position)
        r = edge_tube_radius(p, q, params)
        rho_p = vertex_torus_radii(p, params)[0]
        rho_q = vertex_torus_radii(q, params)[0]
        slots = edge_template(frame.length, rho_p, rho_q, r)
        owners = [str(canonical_label(EdgeCantor(p, k, i))) for i in (1, 2, 3)]
        chain = tuple(place_slot(frame, sl, o) for sl, o in zip(slots, owners))
        a = frame.point((sp.ball, 0.0, 0.0))
        b = frame.point((frame.length - sq.ball, 0.0, 0.0))
        start, end = (a, b) if p == e.source else (b, a)
        tubes.append(Tube3(e.source, e.generator, e.target, start, end, r))
        chains.append(chain)
        vp, vq = str(VertexCantor(p)), str(VertexCantor(q))
        links += [(vp, owners[0]), (owners[0], owners[1]), (owners[1], owners[2]), (owners[2], vq)]

    return Scaffold(
        rank=rank,
        radius=graph.radius,
        params=params,
        balls=tuple(balls),
        tubes=tuple(tubes),
        vertex_tori=tuple(vertex_tori),
        chain_tori=tuple(chains),
        declared_links=tuple(links),
        graph=graph,
    )


def edge_frame_of(s: Scaffold, e: int) -> EdgeFrame:
    tube = s.tubes[e]
    p = tube.positive_source
    q = tube.target if p == tube.source else tube.source
    return EdgeFrame.between(s.ball_of(p).center, s.ball_of(q).center)
