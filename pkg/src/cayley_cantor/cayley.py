"""Planar embedding of the Cayley graph of F_N, truncated at a word-length radius.

Vertices of word length ``n`` sit on the circle of radius ``n`` at angles
``pi (2k - 1) / sigma(n)`` for slots ``k = 1..sigma(n)``, where ``sigma`` is
:func:`~cayley_cantor.words.word_count`.  Slot ``k`` of shell ``n`` is joined to
the consecutive block of ``2N - 1`` slots ``(k-1)(2N-1)+1 .. k(2N-1)`` of shell
``n + 1`` (the root is joined to all ``2N`` first-shell slots).

Edge labels follow the counterclockwise rule: at ``v(g)`` with last letter
``beta_k`` the edge back to the parent carries germ label ``j = inv(k)`` and the
children, taken by increasing angle, carry ``beta_(j+1), ..., beta_(j+2N-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import ResourceLimitError, SlotError, TruncationError
from .words import (
    ReducedWord,
    format_word,
    involution,
    letter_text,
    multiply,
    parse_letter,
    parse_word,
    word_count,
)

MAX_VERTICES = 10**6


def angle_fraction(rank: int, n: int, k: int) -> Fraction:
    """Angle of slot ``k`` on shell ``n`` as an exact multiple of pi."""
    sigma = word_count(rank, n)
    if n == 0:
        if k != 1:
            raise SlotError(f"shell 0 has a single slot, got {k}")
        return Fraction(0)
    if not 1 <= k <= sigma:
        raise SlotError(f"slot {k} outside 1..{sigma} on shell {n}")
    return Fraction(2 * k - 1, sigma)


def vertex_position(rank: int, n: int, k: int) -> tuple[float, float]:
    theta = math.pi * angle_fraction(rank, n, k)
    if n == 0:
        return (0.0, 0.0)
    return (n * math.cos(theta), n * math.sin(theta))


def children_slots(rank: int, n: int, k: int) -> range:
    """Slots on shell ``n + 1`` joined to slot ``k`` of shell ``n``."""
    angle_fraction(rank, n, k)  # validates the slot
    if n == 0:
        return range(1, 2 * rank + 1)
    b = 2 * rank - 1
    return range((k - 1) * b + 1, k * b + 1)


def child_labels(rank: int, last_letter: int | None) -> list[int]:
    """Generator labels of the outward edges in increasing angular order."""
    top = 2 * rank
    if last_letter is None:
        return list(range(1, top + 1))
    j = involution(rank, last_letter)
    return [(j + i - 1) % top + 1 for i in range(1, top)]


def slot_of_word(w: ReducedWord) -> tuple[int, int]:
    """(shell, slot) of a word in the infinite embedding, without building a graph."""
    rank = w.rank
    k = 1
    prev: int | None = None
    for n, letter in enumerate(w.letters):
        labels = child_labels(rank, prev)
        k = children_slots(rank, n, k)[labels.index(letter)]
        prev = letter
    return len(w), k


def word_at_slot(rank: int, n: int, k: int) -> ReducedWord:
    """Inverse of :func:`slot_of_word`."""
    angle_fraction(rank, n, k)
    if n == 0:
        return ReducedWord.identity(rank)
    b = 2 * rank - 1
    # Slot ancestry: shell-1 slot, then the offset inside each child block.
    offsets = []
    kk = k
    for _ in range(n - 1):
        offsets.append((kk - 1) % b)
        kk = (kk - 1) // b + 1
    letters = [kk]
    for off in reversed(offsets):
        letters.append(child_labels(rank, letters[-1])[off])
    return ReducedWord._trusted(rank, tuple(letters))


def word_position(w: ReducedWord) -> tuple[float, float]:
    return vertex_position(w.rank, *slot_of_word(w))


@dataclass(frozen=True)
class PlanarVertex:
    word: ReducedWord
    shell: int
    slot: int
    angle: Fraction  # multiple of pi

    @property
    def position(self) -> tuple[float, float]:
        if self.shell == 0:
            return (0.0, 0.0)
        theta = math.pi * self.angle
        return (self.shell * math.cos(theta), self.shell * math.sin(theta))


@dataclass(frozen=True)
class LabeledEdge:
    """Edge from ``source`` along generator ``generator`` to ``target``."""

    source: ReducedWord
    generator: int
    target: ReducedWord

    def reversed(self) -> "LabeledEdge":
        return LabeledEdge(self.target, involution(self.source.rank, self.generator), self.source)

    def canonical(self) -> "LabeledEdge":
        """The outward representative (source is the shorter word)."""
        return self if len(self.source) < len(self.target) else self.reversed()


def edge(source: ReducedWord, generator: int) -> LabeledEdge:
    return LabeledEdge(source, generator, multiply(source, ReducedWord._trusted(source.rank, (generator,))))


class TruncatedCayleyGraph:
    """Cayley graph of F_N restricted to words of length at most ``radius``.

    Vertex ``i`` is stored in shell-then-slot order.  Per-vertex arrays:
    ``shell``, ``slot``, ``parent`` (index, -1 for the root) and ``label`` (the
    generator of the edge from the parent).  ``neighbors[i, j-1]`` is the vertex
    reached from ``i`` along ``beta_j``, or -1 when it lies outside the
    truncation.  The graph is treated as immutable once built.
    """

    def __init__(
        self,
        rank: int,
        radius: int,
        words: list[tuple[int, ...]],
        shell: np.ndarray,
        slot: np.ndarray,
        parent: np.ndarray,
        label: np.ndarray,
        edges: list[LabeledEdge] | None = None,
    ):
        self.rank = rank
        self.radius = radius
        self._words = words
        self.shell = shell
        self.slot = slot
        self.parent = parent
        self.label = label
        self._index = {w: i for i, w in enumerate(words)}
        self._edges = edges
        nbr = np.full((len(words), 2 * rank), -1, dtype=np.int32)
        child = np.nonzero(parent >= 0)[0]
        nbr[parent[child], label[child] - 1] = child
        inv = (label[child] + rank - 1) % (2 * rank)  # zero-based involution
        nbr[child, inv] = parent[child]
        self.neighbors = nbr
        self.shell_offsets = np.searchsorted(shell, np.arange(radius + 2))
        for a in (shell, slot, parent, label, nbr):
            a.setflags(write=False)

    # -- vertices ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._words)

    @property
    def vertex_count(self) -> int:
        return len(self._words)

    def word(self, i: int) -> ReducedWord:
        return ReducedWord._trusted(self.rank, self._words[i])

    def words(self) -> Iterator[ReducedWord]:
        for w in self._words:
            yield ReducedWord._trusted(self.rank, w)

    def vertex(self, i: int) -> PlanarVertex:
        n = int(self.shell[i])
        k = int(self.slot[i])
        return PlanarVertex(self.word(i), n, k, angle_fraction(self.rank, n, k))

    def vertices(self) -> Iterator[PlanarVertex]:
        for i in range(len(self)):
            yield self.vertex(i)

    def index_of(self, w: ReducedWord) -> int:
        if w.rank != self.rank:
            raise TruncationError(f"word of rank {w.rank} in a rank-{self.rank} graph")
        try:
            return self._index[w.letters]
        except KeyError:
            raise TruncationError(
                f"word {format_word(w)} (length {len(w)}) outside radius {self.radius}"
            ) from None

    def vertex_of_word(self, w: ReducedWord) -> PlanarVertex:
        return self.vertex(self.index_of(w))

    def contains(self, w: ReducedWord) -> bool:
        return w.rank == self.rank and w.letters in self._index

    def positions(self) -> np.ndarray:
        n = self.shell.astype(float)
        theta = np.pi * (2 * self.slot - 1) / np.array(
            [word_count(self.rank, int(s)) for s in range(self.radius + 1)], dtype=float
        )[self.shell]
        pos = np.column_stack((n * np.cos(theta), n * np.sin(theta)))
        pos[self.shell == 0] = 0.0
        return pos

    def shell_range(self, n: int) -> range:
        return range(int(self.shell_offsets[n]), int(self.shell_offsets[n + 1]))

    # -- edges -------------------------------------------------------------

    def edges(self) -> list[LabeledEdge]:
        """Edges in canonical (outward) form, one per non-root vertex."""
        if self._edges is None:
            self._edges = [
                LabeledEdge(self.word(int(self.parent[i])), int(self.label[i]), self.word(i))
                for i in range(1, len(self))
            ]
        return list(self._edges)

    @property
    def edge_count(self) -> int:
        return len(self) - 1 if self._edges is None else len(self._edges)

    def with_edges(self, edges: Iterable[LabeledEdge]) -> "TruncatedCayleyGraph":
        """Copy sharing the vertex layout but carrying an explicit edge list.

        Only :func:`check_label_coherence` reads the explicit list; this exists
        so that corrupted labelings can be audited.
        """
        g = TruncatedCayleyGraph.__new__(TruncatedCayleyGraph)
        g.__dict__.update(self.__dict__)
        g._edges = list(edges)
        return g


def build_graph(rank: int, radius: int, max_vertices: int = MAX_VERTICES) -> TruncatedCayleyGraph:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    total = sum(word_count(rank, n) for n in range(radius + 1))
    if total > max_vertices:
        raise ResourceLimitError(
            f"rank {rank}, radius {radius} needs {total} vertices; cap is {max_vertices}"
        )
    words: list[tuple[int, ...]] = [()]
    shell = [0]
    slot = [1]
    parent = [-1]
    label = [0]
    lo, hi = 0, 1
    for n in range(radius):
        for i in range(lo, hi):
            w = words[i]
            kids = children_slots(rank, n, slot[i])
            for k, b in zip(kids, child_labels(rank, w[-1] if w else None)):
                # Children are produced in increasing angle, so the list stays
                # in shell-then-slot order.
                words.append(w + (b,))
                shell.append(n + 1)
                slot.append(k)
                parent.append(i)
                label.append(b)
        lo, hi = hi, len(words)
    return TruncatedCayleyGraph(
        rank,
        radius,
        words,
        np.array(shell, dtype=np.int64),
        np.array(slot, dtype=np.int64),
        np.array(parent, dtype=np.int32),
        np.array(label, dtype=np.int32),
    )


# -- labeling audit --------------------------------------------------------


@dataclass(frozen=True)
class LabelViolation:
    edge: LabeledEdge
    reasons: tuple[str, ...]

    def __str__(self) -> str:
        e = self.edge
        return (
            f"{format_word(e.source)} -{letter_text(e.source.rank, e.generator)}-> "
            f"{format_word(e.target)}: " + "; ".join(self.reasons)
        )


def check_label_coherence(graph: TruncatedCayleyGraph) -> list[LabelViolation]:
    """Re-derive every edge label from geometry and report disagreements.

    For each edge the audit checks that the target word equals source times
    generator, that the germ at the target is the inverse of the target's last
    letter, that germ labels at each endpoint are distinct, and that the label
    matches the counterclockwise sweep of actual edge directions at the source
    (starting from the parent edge, or from angle zero at the root).  One entry
    per offending edge.
    """
    rank = graph.rank
    top = 2 * rank
    pos = {w: np.array(p) for w, p in zip(graph.words(), graph.positions())}
    edges = graph.edges()
    reasons: dict[int, list[str]] = {}
    incident: dict[ReducedWord, list[tuple[int, int, ReducedWord]]] = {}
    for idx, e in enumerate(edges):
        if multiply(e.source, ReducedWord._trusted(rank, (e.generator,))) != e.target:
            reasons.setdefault(idx, []).append("target is not source times generator")
        if len(e.target) != len(e.source) + 1:
            reasons.setdefault(idx, []).append("edge does not join consecutive shells")
        elif e.target.letters[-1] != e.generator:
            reasons.setdefault(idx, []).append("parent germ is not the inverse of the last letter")
        incident.setdefault(e.source, []).append((idx, e.generator, e.target))
        incident.setdefault(e.target, []).append((idx, involution(rank, e.generator), e.source))

    # Edges that already fail on their own are left out of the duplicate
    # test, so their wrong germ does not implicate a correct neighbor.
    flagged = set(reasons)
    for v, germs in incident.items():
        clean = [t for t in germs if t[0] not in flagged]
        labels = [g for _, g, _ in clean]
        if len(set(labels)) != len(labels):
            for idx, g, _ in clean:
                if labels.count(g) > 1:
                    reasons.setdefault(idx, []).append(f"duplicate germ label at {format_word(v)}")
        here = pos.get(v)
        if here is None:
            continue
        angles = {}
        for idx, g, other in germs:
            d = pos[other] - here if other in pos else None
            if d is not None:
                angles[idx] = math.atan2(d[1], d[0])
        inward = [t for t in germs if len(t[2]) < len(v)]
        if len(v) == 0:
            start = 0.0
            first_label = 1
        elif len(inward) == 1 and inward[0][0] in angles:
            # Start from the germ the vertex word implies, not the recorded
            # one, so a corrupted inward label is blamed on that edge alone.
            start = angles[inward[0][0]]
            first_label = involution(rank, v.letters[-1])
        else:
            for idx, _, _ in germs:
                reasons.setdefault(idx, []).append(f"vertex {format_word(v)} has no unique parent edge")
            continue
        outward = sorted(
            (t for t in germs if len(t[2]) > len(v)),
            key=lambda t: (angles[t[0]] - start) % (2 * math.pi),
        )
        sweep = [(angles[t[0]] - start) % (2 * math.pi) for t in outward]
        if len(set(np.round(sweep, 12))) != len(sweep):
            for idx, _, _ in outward:
                reasons.setdefault(idx, []).append("angular tie among outward edges")
        for pos_in_sweep, (idx, g, _) in enumerate(outward):
            offset = pos_in_sweep if len(v) == 0 else pos_in_sweep + 1
            expected = (first_label + offset - 1) % top + 1
            if g != expected:
                reasons.setdefault(idx, []).append(
                    f"counterclockwise rule expects {letter_text(rank, expected)} "
                    f"at {format_word(v)}, found {letter_text(rank, g)}"
                )
    return [LabelViolation(edges[i], tuple(r)) for i, r in sorted(reasons.items())]


# -- automorphisms ---------------------------------------------------------


class GraphAutomorphism:
    """The partial map ``v(w) -> v(g w)`` on a truncated graph.

    ``image[i]`` is the vertex index of ``g * word(i)``, or -1 where that word
    leaves the truncation.  Edges are indexed by their outer (child) vertex, so
    the edge map is induced by the vertex map on (parent, child) pairs.
    """

    def __init__(self, graph: TruncatedCayleyGraph, g: ReducedWord | None, image: np.ndarray):
        self.graph = graph
        self.element = g
        self.image = image
        image.setflags(write=False)

    @property
    def domain(self) -> np.ndarray:
        return np.nonzero(self.image >= 0)[0]

    def __call__(self, w: ReducedWord) -> ReducedWord | None:
        j = int(self.image[self.graph.index_of(w)])
        return None if j < 0 else self.graph.word(j)

    def vertex_map(self) -> dict[ReducedWord, ReducedWord]:
        return {self.graph.word(int(i)): self.graph.word(int(self.image[i])) for i in self.domain}

    def edge_images(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(edge id, image endpoint at the parent's image, image endpoint at the child's image)."""
        g = self.graph
        a = self.image[g.parent[1:]]
        b = self.image[1:]
        ok = (a >= 0) & (b >= 0)
        return np.flatnonzero(ok) + 1, a[ok], b[ok]

    def edge_map(self) -> dict[LabeledEdge, LabeledEdge]:
        """Edge ``(w, beta_k)`` to ``(g w, beta_k)``, both sides in canonical form."""
        g = self.graph
        out = {}
        for c, a, b in zip(*self.edge_images()):
            src = LabeledEdge(g.word(int(g.parent[c])), int(g.label[c]), g.word(int(c)))
            dst = LabeledEdge(g.word(int(a)), int(g.label[c]), g.word(int(b)))
            out[src] = dst.canonical()
        return out

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self o other``, defined where ``other`` and then ``self`` are."""
        if other.graph is not self.graph:
            raise ValueError("automorphisms act on different graphs")
        # A trailing -1 lets index -1 (undefined) look itself up.
        img = np.append(self.image, -1)[other.image]
        elem = None
        if self.element is not None and other.element is not None:
            elem = multiply(self.element, other.element)
        return GraphAutomorphism(self.graph, elem, img)


def automorphism_action(graph: TruncatedCayleyGraph, g: ReducedWord) -> GraphAutomorphism:
    """Left multiplication by ``g`` as a partial graph map with exact domain."""
    if g.rank != graph.rank:
        raise ValueError(f"element of rank {g.rank} acting on a rank-{graph.rank} graph")
    n_vert = len(graph)
    if len(g) > graph.radius:
        # Slow path: direct multiplication per vertex.
        image = np.full(n_vert, -1, dtype=np.int32)
        for i, w in enumerate(graph.words()):
            gw = multiply(g, w)
            if len(gw) <= graph.radius:
                image[i] = graph.index_of(gw)
        return GraphAutomorphism(graph, g, image)
    # image(w b) = image(w) b.  With |g| <= R, if g w b lies in the truncation
    # then so does g w: were g w longer, it would end in the inverse of b, which
    # is impossible unless w cancels completely into g, leaving a prefix of g.
    flat = graph.neighbors.ravel()
    step = 2 * graph.rank
    image = np.empty(n_vert, dtype=np.int32)
    image[0] = graph.index_of(g)
    off = graph.shell_offsets
    base = min(len(g) + 1, graph.radius)
    for n in range(1, base + 1):
        a, b = off[n], off[n + 1]
        par = image[graph.parent[a:b]]
        # Images of -1 parents are masked after the lookup.
        res = flat[np.maximum(par, 0) * step + graph.label[a:b] - 1]
        res[par < 0] = -1
        image[a:b] = res
    # Past shell |g| + 1 nothing cancels down to the root, so g u keeps the
    # germ of u and the child order with it.  The descendants of u at depth d
    # fill a block of q^d consecutive slots, and g maps that block onto the
    # matching block under g u, keeping the order.
    q = 2 * graph.rank - 1
    top = image[off[base] : off[base + 1]]
    ok = top >= 0
    img_shell = np.where(ok, graph.shell[np.maximum(top, 0)], 0)
    img_slot = np.where(ok, graph.slot[np.maximum(top, 0)], 1)
    for n in range(base + 1, graph.radius + 1):
        d = n - base
        width = q**d
        reach = img_shell + d
        keep = ok & (reach <= graph.radius)
        start = (off[np.minimum(reach, graph.radius)] + (img_slot - 1) * width).astype(np.int32)
        block = image[off[n] : off[n + 1]].reshape(len(top), width)
        np.add(start[:, None], np.arange(width, dtype=np.int32), out=block)
        block[~keep] = -1
    return GraphAutomorphism(graph, g, image)


def automorphism_by_multiplication(graph: TruncatedCayleyGraph, g: ReducedWord) -> GraphAutomorphism:
    """Reference implementation multiplying every vertex word directly."""
    image = np.full(len(graph), -1, dtype=np.int32)
    for i, w in enumerate(graph.words()):
        gw = multiply(g, w)
        if len(gw) <= graph.radius:
            image[i] = graph.index_of(gw)
    return GraphAutomorphism(graph, g, image)


# -- serialization ---------------------------------------------------------


def graph_to_json(graph: TruncatedCayleyGraph) -> dict:
    pos = graph.positions()
    return {
        "rank": graph.rank,
        "radius": graph.radius,
        "vertices": [
            {
                "word": format_word(w),
                "shell": int(graph.shell[i]),
                "slot": int(graph.slot[i]),
                "x": float(pos[i, 0]),
                "y": float(pos[i, 1]),
            }
            for i, w in enumerate(graph.words())
        ],
        "edges": [
            {
                "source_word": format_word(e.source),
                "generator": letter_text(graph.rank, e.generator),
                "target_word": format_word(e.target),
            }
            for e in graph.edges()
        ],
    }


def graph_from_json(data: dict) -> TruncatedCayleyGraph:
    """Rebuild a graph from its JSON form, checking it matches the construction."""
    rank, radius = int(data["rank"]), int(data["radius"])
    graph = build_graph(rank, radius)
    edges = [
        LabeledEdge(
            parse_word(rank, e["source_word"]),
            parse_letter(rank, e["generator"]),
            parse_word(rank, e["target_word"]),
        )
        for e in data["edges"]
    ]
    if edges != graph.edges():
        graph = graph.with_edges(edges)
    return graph


def shell_summary(graph: TruncatedCayleyGraph) -> list[dict]:
    out = []
    for n in range(graph.radius + 1):
        out.append(
            {
                "shell": n,
                "vertices": len(graph.shell_range(n)),
                "edges_inward": 0 if n == 0 else len(graph.shell_range(n)),
            }
        )
    return out


_PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def graph_to_svg(graph: TruncatedCayleyGraph, size: int = 800, labels: bool = True) -> str:
    """Layout drawing: one colored segment per edge (color = positive generator)."""
    pos = graph.positions()
    extent = max(graph.radius, 1) + 0.5
    scale = size / (2 * extent)

    def xy(p):
        return (p[0] + extent) * scale, (extent - p[1]) * scale

    rank = graph.rank
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i in range(1, len(graph)):
        j = int(graph.label[i])
        gen = j if j <= rank else j - rank
        color = _PALETTE[(gen - 1) % len(_PALETTE)]
        x1, y1 = xy(pos[int(graph.parent[i])])
        x2, y2 = xy(pos[i])
        parts.append(
            f'<path d="M {x1:.3f} {y1:.3f} L {x2:.3f} {y2:.3f}" stroke="{color}" '
            f'stroke-width="1.5" fill="none"><title>{letter_text(rank, j)}</title></path>'
        )
    r = max(1.0, min(4.0, 0.08 * scale))
    for i, w in enumerate(graph.words()):
        x, y = xy(pos[i])
        parts.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{r:.2f}" fill="black"/>')
        if labels and graph.radius <= 3:
            parts.append(
                f'<text x="{x + r + 1:.3f}" y="{y - r - 1:.3f}" font-size="10">{format_word(w)}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
