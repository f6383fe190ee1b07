import math
from fractions import Fraction

import numpy as np
import pytest

from cayley_cantor.cayley import (
    LabeledEdge,
    angle_fraction,
    automorphism_action,
    automorphism_by_multiplication,
    build_graph,
    check_label_coherence,
    child_labels,
    children_slots,
    edge,
    graph_from_json,
    graph_to_json,
    graph_to_svg,
    slot_of_word,
    vertex_position,
    word_at_slot,
)
from cayley_cantor.errors import ResourceLimitError, TruncationError
from cayley_cantor.words import ReducedWord, enumerate_words, multiply, parse_word, word_count


def W(rank, text):
    return parse_word(rank, text)


@pytest.fixture(scope="module")
def g24():
    return build_graph(2, 4)


# -- layout --------------------------------------------------------------------


def test_vertex_position_examples():
    for k, frac in [(1, Fraction(1, 4)), (4, Fraction(7, 4))]:
        assert angle_fraction(2, 1, k) == frac
        x, y = vertex_position(2, 1, k)
        assert math.isclose(math.hypot(x, y), 1.0)
        assert math.isclose(math.atan2(y, x) % (2 * math.pi), float(frac) * math.pi)
    assert angle_fraction(2, 2, 1) == Fraction(1, 12)
    x, y = vertex_position(2, 2, 1)
    assert math.isclose(math.hypot(x, y), 2.0)
    assert vertex_position(2, 0, 1) == (0.0, 0.0)


def test_children_slots_examples():
    assert list(children_slots(2, 1, 1)) == [1, 2, 3]
    assert list(children_slots(2, 1, 4)) == [10, 11, 12]
    assert list(children_slots(2, 0, 1)) == [1, 2, 3, 4]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_children_partition_next_shell(rank):
    for n in range(4):
        seen = [s for k in range(1, word_count(rank, n) + 1) for s in children_slots(rank, n, k)]
        assert seen == list(range(1, word_count(rank, n + 1) + 1))


def test_child_labels_counterclockwise_rule():
    assert child_labels(2, None) == [1, 2, 3, 4]
    # Entering a1 the germ is A1 = 3; children get 4, 1, 2.
    assert child_labels(2, 1) == [4, 1, 2]
    g = build_graph(2, 2)
    kids = [g.word(i) for i in g.shell_range(2) if g.word(int(g.parent[i])) == W(2, "a1")]
    assert [str(w) for w in kids] == ["a1A2", "a1a1", "a1a2"]


def test_slot_of_word_examples():
    assert slot_of_word(ReducedWord.identity(2)) == (0, 1)
    assert slot_of_word(W(2, "a1")) == (1, 1)
    assert slot_of_word(W(2, "a1a1")) == (2, 2)


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_slot_bijection(rank):
    for n in range(5):
        for w in enumerate_words(rank, n):
            shell, k = slot_of_word(w)
            assert shell == n
            assert word_at_slot(rank, n, k) == w


def test_slot_order_is_angle_order(g24):
    pos = g24.positions()
    for n in range(1, 5):
        idx = list(g24.shell_range(n))
        ang = [math.atan2(pos[i, 1], pos[i, 0]) % (2 * math.pi) for i in idx]
        assert all(a < b for a, b in zip(ang, ang[1:]))  # strictly: no ties
        assert [int(g24.slot[i]) for i in idx] == list(range(1, len(idx) + 1))
        assert np.allclose(np.hypot(pos[idx, 0], pos[idx, 1]), n)


# -- graph ---------------------------------------------------------------------


def test_base_case_edges():
    g = build_graph(2, 1)
    assert len(g) == 5
    assert [e.generator for e in g.edges()] == [1, 2, 3, 4]
    for e, k in zip(g.edges(), range(1, 5)):
        assert g.vertex_of_word(e.target).angle == Fraction(2 * k - 1, 4)


def test_line_graph():
    g = build_graph(1, 3)
    assert len(g) == 7 and g.edge_count == 6
    degrees = (g.neighbors >= 0).sum(axis=1)
    assert sorted(degrees.tolist()) == [1, 1, 2, 2, 2, 2, 2]


@pytest.mark.parametrize("rank,radius", [(1, 4), (2, 4), (3, 3)])
def test_counts_degrees_and_germs(rank, radius):
    g = build_graph(rank, radius)
    assert len(g) == sum(word_count(rank, n) for n in range(radius + 1))
    for n in range(radius + 1):
        assert len(g.shell_range(n)) == word_count(rank, n)
    degrees = (g.neighbors >= 0).sum(axis=1)
    assert np.all(degrees[g.shell < radius] == 2 * rank)
    assert np.all(degrees[g.shell == radius] == 1) or radius == 0
    # germ labels: neighbors[i, j-1] is reached along beta_j, and the reverse germ is the inverse.
    for i in range(len(g)):
        for j in range(1, 2 * rank + 1):
            t = g.neighbors[i, j - 1]
            if t >= 0:
                assert g.word(int(t)) == multiply(g.word(i), ReducedWord(rank, (j,)))
                inv = (j + rank - 1) % (2 * rank)
                assert g.neighbors[t, inv] == i


def test_word_lookup_round_trip(g24):
    for i, w in enumerate(g24.words()):
        assert g24.index_of(w) == i
        v = g24.vertex_of_word(w)
        assert v.word == w and slot_of_word(w) == (v.shell, v.slot)


def test_lookup_outside_truncation(g24):
    with pytest.raises(TruncationError):
        g24.index_of(W(2, "a1a1a1a1a1"))
    assert not g24.contains(W(2, "a1a1a1a1a1"))


def test_vertex_cap():
    with pytest.raises(ResourceLimitError):
        build_graph(3, 9)


def test_edge_identification():
    e1 = edge(W(2, "a1"), 3)
    assert e1.target == ReducedWord.identity(2)
    assert e1.canonical() == LabeledEdge(ReducedWord.identity(2), 1, W(2, "a1"))
    assert e1.reversed().reversed() == e1


# -- labeling audit ------------------------------------------------------------


@pytest.mark.parametrize("rank,radius", [(1, 5), (2, 4), (2, 6), (3, 3), (3, 4)])
def test_label_coherence_clean(rank, radius):
    assert check_label_coherence(build_graph(rank, radius)) == []


def test_label_coherence_catches_swapped_children():
    g = build_graph(2, 3)
    edges = g.edges()
    a = next(i for i, e in enumerate(edges) if e.target == W(2, "a1a1"))
    b = next(i for i, e in enumerate(edges) if e.target == W(2, "a1a2"))
    ea, eb = edges[a], edges[b]
    edges[a] = LabeledEdge(ea.source, eb.generator, ea.target)
    edges[b] = LabeledEdge(eb.source, ea.generator, eb.target)
    bad = check_label_coherence(g.with_edges(edges))
    assert {v.edge for v in bad} == {edges[a], edges[b]} and len(bad) == 2


def test_label_coherence_catches_rotated_root_labels():
    g = build_graph(2, 1)
    # Keep each target, rotate its label: every root edge is now mislabeled.
    edges = [LabeledEdge(e.source, e.generator % 4 + 1, e.target) for e in g.edges()]
    assert len(check_label_coherence(g.with_edges(edges))) == 4


# -- automorphisms -------------------------------------------------------------


def test_identity_action(g24):
    h = automorphism_action(g24, ReducedWord.identity(2))
    assert np.array_equal(h.image, np.arange(len(g24)))


def test_action_examples(g24):
    h = automorphism_action(g24, W(2, "a1"))
    assert h(W(2, "A1")) == ReducedWord.identity(2)
    assert h(W(2, "a2")) == W(2, "a1a2")
    em = h.edge_map()
    assert em[LabeledEdge(ReducedWord.identity(2), 2, W(2, "a2"))] == LabeledEdge(W(2, "a1"), 2, W(2, "a1a2"))
    assert h(W(2, "a2a2a2a2")) is None  # a1a2a2a2a2 leaves the truncation


@pytest.mark.parametrize("rank,radius", [(2, 4), (3, 3)])
def test_fast_action_matches_multiplication(rank, radius):
    g = build_graph(rank, radius)
    for n in range(radius + 2):
        for w in enumerate_words(rank, n)[:40]:
            assert np.array_equal(automorphism_action(g, w).image, automorphism_by_multiplication(g, w).image)


@pytest.mark.parametrize("rank,radius", [(1, 7), (2, 6), (3, 4)])
def test_fast_action_matches_multiplication_deep(rank, radius):
    # Several shells past |g| + 1, where subtrees move as whole slot blocks.
    g = build_graph(rank, radius)
    for n in range(4):
        for w in enumerate_words(rank, n)[::7]:
            assert np.array_equal(automorphism_action(g, w).image, automorphism_by_multiplication(g, w).image)


def test_action_preserves_labels(g24):
    for w in enumerate_words(2, 2):
        h = automorphism_action(g24, w)
        for src, dst in h.edge_map().items():
            # (w, b) goes to (g w, b); comparing outward forms absorbs the
            # flip to (g w b, inverse of b) when the image edge points inward.
            s2 = multiply(w, src.source)
            assert LabeledEdge(s2, src.generator, multiply(s2, ReducedWord(2, (src.generator,)))).canonical() == dst


def test_composition_on_shared_domain(g24):
    for g1 in enumerate_words(2, 2):
        for g2 in enumerate_words(2, 1):
            comp = automorphism_action(g24, g1).compose(automorphism_action(g24, g2))
            direct = automorphism_action(g24, multiply(g1, g2))
            ok = comp.image >= 0
            assert np.array_equal(comp.image[ok], direct.image[ok])


# -- serialization -------------------------------------------------------------


def test_json_round_trip():
    g = build_graph(2, 3)
    data = graph_to_json(g)
    assert len(data["vertices"]) == 53 and len(data["edges"]) == 52
    assert data["vertices"][1] == {"word": "a1", "shell": 1, "slot": 1, "x": data["vertices"][1]["x"], "y": data["vertices"][1]["y"]}
    back = graph_from_json(data)
    assert back.edges() == g.edges() and len(back) == len(g)


def test_svg_contains_every_vertex():
    svg = graph_to_svg(build_graph(2, 2))
    assert svg.startswith("<svg") and svg.count("<circle") == 17
