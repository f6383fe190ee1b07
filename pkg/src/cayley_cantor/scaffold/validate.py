"""Certification of a built scaffold: disjointness, containment, linking.

Distance checks between solid tori compare sampled core curves.  Samples are
equally spaced in arclength with spacing ``h``, so every core point lies
within ``h / 2`` of a sample and the true core distance is at least the
sampled distance minus ``(h1 + h2) / 2``.  A pair passes only if that lower
bound exceeds ``(1 + margin)`` times the sum of tube radii.  A pair whose
sampled distance (an upper bound) is already below the tube sum is reported
as ``overlap``; any other failure is ``unverified``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.spatial import cKDTree

from ..errors import LinkingPrecisionError
from .build import MAX_BALL_RADIUS, Scaffold
from .geometry import (
    DEFAULT_LINKING_SAMPLES,
    TorusPlacement,
    core_points,
    core_quadrature,
    linking_from_quadrature,
    point_segment_distance,
    sampled_min_distance,
    segment_distance,
    surface_points,
)

DEFAULT_MARGIN = 0.1
#: Core sample spacing as a fraction of the torus tube radius.
SAMPLE_SPACING = 0.5
MIN_CORE_SAMPLES = 64
MAX_CORE_SAMPLES = 200_000
#: Surface grid for containment checks (2048 points per torus).
CONTAINMENT_GRID = (64, 32)
LINKING_TOLERANCE = 0.1


@dataclass(frozen=True)
class Violation:
    kind: str
    subjects: tuple[str, ...]
    status: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.kind}/{self.status}] {' & '.join(self.subjects)}: {self.detail}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "subjects": list(self.subjects), "status": self.status, "detail": self.detail}


def _status(upper: float, lower: float, need: float, margin: float) -> str | None:
    if upper < need:
        return "overlap"
    if lower < (1 + margin) * need:
        return "unverified"
    return None


def _tube_segment(s: Scaffold, e: int) -> tuple[np.ndarray, np.ndarray]:
    """Axis segment that contains the part of the tube outside both balls."""
    t = s.tubes[e]
    bs, bt = s.ball_of(t.source), s.ball_of(t.target)
    cs, ct = np.asarray(bs.center), np.asarray(bt.center)
    d = ct - cs
    length = np.linalg.norm(d)
    u = d / length
    a = math.sqrt(max(bs.radius**2 - t.radius**2, 0.0))
    b = math.sqrt(max(bt.radius**2 - t.radius**2, 0.0))
    return cs + a * u, ct - b * u


def _torus_samples(t: TorusPlacement) -> tuple[np.ndarray, float]:
    count = int(min(max(math.ceil(t.perimeter / (SAMPLE_SPACING * t.tau)), MIN_CORE_SAMPLES), MAX_CORE_SAMPLES))
    return core_points(t, count), t.perimeter / count


def validate_disjointness(s: Scaffold, margin: float = DEFAULT_MARGIN) -> list[Violation]:
    out: list[Violation] = []

    # Balls.
    centers = np.array([b.center for b in s.balls])
    radii = np.array([b.radius for b in s.balls])
    names = [f"ball {b.word}" for b in s.balls]
    if len(s.balls) > 1:
        for i, j in sorted(cKDTree(centers).query_pairs(2 * radii.max() * (1 + margin))):
            d = float(np.linalg.norm(centers[i] - centers[j]))
            st = _status(d, d, radii[i] + radii[j], margin)
            if st:
                out.append(Violation("ball-ball", (names[i], names[j]), st, f"center distance {d:.6g}, radii {radii[i]:.6g} + {radii[j]:.6g}"))

    # Tubes against tubes and against balls they do not end in.
    segs = [_tube_segment(s, e) for e in range(len(s.tubes))]
    tnames = [f"tube {t.source}-{t.target}" for t in s.tubes]
    if segs:
        mids = np.array([(a + b) / 2 for a, b in segs])
        reach = np.array([np.linalg.norm(b - a) / 2 + t.radius for (a, b), t in zip(segs, s.tubes)])
        tree = cKDTree(mids)
        for i, j in sorted(tree.query_pairs(2 * reach.max() * (1 + margin))):
            ti, tj = s.tubes[i], s.tubes[j]
            d = segment_distance(*segs[i], *segs[j])
            st = _status(d, d, ti.radius + tj.radius, margin)
            if st:
                out.append(Violation("tube-tube", (tnames[i], tnames[j]), st, f"axis distance {d:.6g}, radii {ti.radius:.6g} + {tj.radius:.6g}"))
        ball_tree = cKDTree(centers)
        for i, t in enumerate(s.tubes):
            for j in ball_tree.query_ball_point(mids[i], reach[i] + radii.max() * (1 + margin)):
                if s.balls[j].word in (t.source, t.target):
                    continue
                d = point_segment_distance(centers[j], *segs[i])
                st = _status(d, d, radii[j] + t.radius, margin)
                if st:
                    out.append(Violation("tube-ball", (tnames[i], names[j]), st, f"distance {d:.6g}, radii {t.radius:.6g} + {radii[j]:.6g}"))

    # Solid tori, pruned by the capsules around their spines.
    tori = s.tori()
    spines = [t.spine() for t in tori]
    mids = np.array([(a + b) / 2 for a, b in spines])
    reach = np.array([t.stretch + t.rho + t.tau for t in tori])
    samples: dict[int, tuple[np.ndarray, float]] = {}
    for i, j in sorted(cKDTree(mids).query_pairs(2 * reach.max())):
        a, b = tori[i], tori[j]
        if segment_distance(*spines[i], *spines[j]) > (a.rho + a.tau + b.rho + b.tau) * (1 + margin):
            continue
        for k in (i, j):
            if k not in samples:
                samples[k] = _torus_samples(tori[k])
        (pa, ha), (pb, hb) = samples[i], samples[j]
        d = sampled_min_distance(pa, pb)
        st = _status(d, d - (ha + hb) / 2, a.tau + b.tau, margin)
        if st:
            out.append(Violation("torus-torus", (a.owner, b.owner), st, f"sampled core distance {d:.6g}, tube radii {a.tau:.6g} + {b.tau:.6g}"))
    return out


def _inside_union(points: np.ndarray, c1, r1, c2, r2, tube_r) -> np.ndarray:
    c1, c2 = np.asarray(c1, dtype=float), np.asarray(c2, dtype=float)
    in1 = np.linalg.norm(points - c1, axis=1) <= r1
    in2 = np.linalg.norm(points - c2, axis=1) <= r2
    d = c2 - c1
    length = np.linalg.norm(d)
    u = d / length
    x = (points - c1) @ u
    perp = np.linalg.norm((points - c1) - np.outer(x, u), axis=1)
    in_tube = (x >= 0) & (x <= length) & (perp <= tube_r)
    return in1 | in2 | in_tube


def validate_containment(s: Scaffold, grid: tuple[int, int] = CONTAINMENT_GRID) -> list[Violation]:
    """Balls within the 1/5 bound, vertex tori in their balls, chain tori in ball-tube-ball."""
    out: list[Violation] = []
    for b, t in zip(s.balls, s.vertex_tori):
        if b.radius > MAX_BALL_RADIUS:
            out.append(Violation("ball-radius", (f"ball {b.word}",), "outside", f"radius {b.radius} > 1/5"))
        reach = float(np.linalg.norm(np.subtract(t.center, b.center))) + t.stretch + t.rho + t.tau
        if reach > b.radius:
            out.append(Violation("vertex-torus", (t.owner,), "outside", f"reaches {reach:.6g} from center of ball of radius {b.radius:.6g}"))
    for tube, chain in zip(s.tubes, s.chain_tori):
        bs, bt = s.ball_of(tube.source), s.ball_of(tube.target)
        if not tube.radius < min(bs.radius, bt.radius):
            out.append(Violation("tube-radius", (f"tube {tube.source}-{tube.target}",), "outside", "tube radius must be below both ball radii"))
        for t in chain:
            pts = surface_points(t, *grid)
            ok = _inside_union(pts, bs.center, bs.radius, bt.center, bt.radius, tube.radius)
            if not ok.all():
                out.append(Violation("chain-torus", (t.owner,), "outside", f"{int((~ok).sum())} of {len(pts)} surface samples outside ball-tube-ball"))
    return out


@dataclass(frozen=True)
class LinkMeasurement:
    edge: int
    first: str
    second: str
    declared: bool
    value: float | None  # None when the quadrature could not certify precision
    note: str = ""


def linking_census(s: Scaffold, samples: int = DEFAULT_LINKING_SAMPLES) -> list[LinkMeasurement]:
    """Gauss estimates for all pairs among the five tori along each edge."""
    declared = {frozenset(p) for p in s.declared_links}
    vertex_quad = {}
    out = []
    for e in range(len(s.tubes)):
        chain = s.edge_chain(e)
        quad = []
        for t in chain:
            if t.owner.startswith("V:"):
                if t.owner not in vertex_quad:
                    vertex_quad[t.owner] = core_quadrature(t, samples)
                quad.append(vertex_quad[t.owner])
            else:
                quad.append(core_quadrature(t, samples))
        for (i, a), (j, b) in combinations(enumerate(chain), 2):
            is_declared = frozenset((a.owner, b.owner)) in declared
            try:
                value = linking_from_quadrature(quad[i], quad[j], samples, names=(a.owner, b.owner))
                out.append(LinkMeasurement(e, a.owner, b.owner, is_declared, value))
            except LinkingPrecisionError as exc:
                out.append(LinkMeasurement(e, a.owner, b.owner, is_declared, None, str(exc)))
    return out


def validate_linking(
    s: Scaffold, samples: int = DEFAULT_LINKING_SAMPLES, tolerance: float = LINKING_TOLERANCE
) -> list[Violation]:
    """Declared pairs must measure within ``tolerance`` of +-1, other same-edge pairs of 0."""
    out = []
    expected = set()
    for e in range(len(s.tubes)):
        ch = [t.owner for t in s.edge_chain(e)]
        expected |= {frozenset(p) for p in zip(ch, ch[1:])}
    if expected != {frozenset(p) for p in s.declared_links}:
        out.append(Violation("declared-links", (), "inconsistent", "declared links do not match the edge chains"))
    for m in linking_census(s, samples):
        if m.value is None:
            out.append(Violation("linking", (m.first, m.second), "unverified", m.note))
        elif m.declared and abs(abs(m.value) - 1) > tolerance:
            out.append(Violation("linking", (m.first, m.second), "declared-unlinked", f"Gauss estimate {m.value:.4f}, expected +-1"))
        elif not m.declared and abs(m.value) > tolerance:
            out.append(Violation("linking", (m.first, m.second), "undeclared-linked", f"Gauss estimate {m.value:.4f}, expected 0"))
    return out
