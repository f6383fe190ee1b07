import math
import random
from itertools import combinations

import pytest

from cayley_cantor.antoine import (
    ANTOINE_LOCAL_GENUS,
    LEAF,
    POINT_AT_INFINITY_GENUS_LOWER_BOUND,
    UNBOUNDED,
    DefiningSequenceStage,
    Handlebody,
    apply_dihedral,
    ball_sequence,
    canonical_code,
    chain,
    compose_index,
    first_mismatch,
    first_path,
    genus_upper_bound,
    parity_admissible,
    random_tree,
    random_tree_pool,
    rigid_family,
    sher_equivalent,
    sher_equivalent_bruteforce,
    slicing_sum,
    stage_union_index,
    standard_chain_tree,
    tree_defining_sequence,
    tree_from_json,
    tree_to_json,
)
from cayley_cantor.errors import ResourceLimitError, SchemaError, TreeError


def leaves(m):
    return chain([LEAF] * m)


# -- trees ---------------------------------------------------------------------


def test_chain_needs_four_links():
    with pytest.raises(TreeError):
        chain([LEAF] * 3)
    assert leaves(4).links == 4


def test_standard_tree_counts():
    assert standard_chain_tree(4, 0) == LEAF
    t = standard_chain_tree(4, 2)
    assert [len(t.stage(d)) for d in range(3)] == [1, 4, 16]
    assert len(standard_chain_tree(5, 3).stage(3)) == 125
    assert t.depth == 2 and t.node_count() == 21


def test_standard_tree_caps():
    with pytest.raises(TreeError):
        standard_chain_tree(3, 1)
    with pytest.raises(ResourceLimitError):
        standard_chain_tree(10, 7)


# -- index ---------------------------------------------------------------------


def test_index_examples():
    t = standard_chain_tree(4, 3)
    assert stage_union_index(t, 0) == 1
    assert stage_union_index(t, 1) == 2
    assert stage_union_index(t, 3) == 8
    assert compose_index(1, 7) == 7
    assert compose_index(2, 2) == 4
    assert compose_index(2, 3) == 6


def test_index_rejects_missing_chains():
    t = chain([leaves(4), LEAF, LEAF, LEAF])
    with pytest.raises(TreeError):
        stage_union_index(t, 2)
    with pytest.raises(TreeError):
        stage_union_index(leaves(4), 2)


def _product_oracle(tree, d):
    """Multiply the per-stage index along every nesting chain and insist they agree."""
    if d == 0:
        return 1
    inner = {_product_oracle(c, d - 1) for c in tree.children}
    assert len(inner) == 1
    return 2 * inner.pop()


@pytest.mark.parametrize("m", [4, 5])
def test_index_multiplicativity(m):
    for d in range(5 if m == 4 else 4):
        t = standard_chain_tree(m, d)
        assert stage_union_index(t, d) == 2**d == _product_oracle(t, d)
        for d1 in range(d + 1):
            for sub in t.stage(d1):
                assert stage_union_index(t, d) == compose_index(stage_union_index(t, d1), stage_union_index(sub, d - d1))


def test_parity_gate():
    assert parity_admissible(2) and parity_admissible(0)
    assert not parity_admissible(3)
    with pytest.raises(ValueError):
        parity_admissible(-2)


# -- Sher equivalence ----------------------------------------------------------


def test_sher_examples():
    t = standard_chain_tree(4, 2)
    assert sher_equivalent(t, t)
    assert not sher_equivalent(standard_chain_tree(4, 2), standard_chain_tree(5, 2))
    a = chain([leaves(4), leaves(4), leaves(5), leaves(4)])
    b = chain([leaves(4), leaves(5), leaves(4), leaves(4)])
    assert sher_equivalent(a, b) and sher_equivalent_bruteforce(a, b)


def test_reflection_counts_but_arbitrary_permutation_does_not():
    a = chain([leaves(4), leaves(5), leaves(6), leaves(4), leaves(4)])
    mirrored = chain(list(reversed(a.children)))
    shuffled = chain([leaves(4), leaves(6), leaves(5), leaves(4), leaves(4)])
    assert sher_equivalent(a, mirrored)
    assert sher_equivalent(a, shuffled)  # this one is a reflection too
    scrambled = chain([leaves(5), leaves(4), leaves(6), leaves(4), leaves(4)])
    assert not sher_equivalent(a, scrambled) and not sher_equivalent_bruteforce(a, scrambled)


def test_checker_agrees_with_oracle_on_pool():
    pool = random_tree_pool(7)
    assert len(pool) == 40
    equal_pairs = 0
    for a, b in combinations(pool, 2):
        got = sher_equivalent(a, b)
        assert got == sher_equivalent_bruteforce(a, b)
        equal_pairs += got
    assert equal_pairs >= 20  # the dihedral images guarantee positives


def test_equivalence_relation_random_triples():
    rng = random.Random(11)
    base = [random_tree(rng) for _ in range(30)]
    for _ in range(500):
        a = rng.choice(base)
        b = apply_dihedral(a, rng) if rng.random() < 0.5 else rng.choice(base)
        c = apply_dihedral(b, rng) if rng.random() < 0.5 else rng.choice(base)
        assert sher_equivalent(a, a)
        assert sher_equivalent(a, b) == sher_equivalent(b, a)
        if sher_equivalent(a, b) and sher_equivalent(b, c):
            assert sher_equivalent(a, c)


def test_first_mismatch():
    a, b = standard_chain_tree(4, 2), chain([leaves(4)] * 5)
    m = first_mismatch(a, b)
    assert m.stage == 1 and m.kind == "link count"
    deep = chain([leaves(4), leaves(4), leaves(4), leaves(5)])
    m = first_mismatch(standard_chain_tree(4, 2), deep)
    assert m.stage == 2 and m.kind == "link count"
    adj_a = chain([leaves(4), leaves(4), leaves(5), leaves(5), leaves(4), leaves(4)])
    adj_b = chain([leaves(4), leaves(5), leaves(4), leaves(5), leaves(4), leaves(4)])
    m = first_mismatch(adj_a, adj_b)
    assert m.stage == 2 and m.kind == "chain adjacency"
    assert first_mismatch(a, a) is None


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_rigid_family_pairwise_inequivalent(rank):
    fam = rigid_family(rank)
    assert len(fam) == 3 * rank + 1
    for x, y in combinations(fam, 2):
        assert not sher_equivalent(x, y) and not sher_equivalent_bruteforce(x, y)
    for t in fam:
        assert sher_equivalent(t, t)


def test_canonical_code_is_dihedral_invariant():
    rng = random.Random(3)
    for _ in range(100):
        t = random_tree(rng)
        assert canonical_code(apply_dihedral(t, rng)) == canonical_code(t)


# -- genus ---------------------------------------------------------------------


def test_genus_examples():
    balls = ball_sequence(4)
    assert genus_upper_bound(balls, first_path(balls)) == 0
    tori = tree_defining_sequence(standard_chain_tree(4, 3))
    assert genus_upper_bound(tori, first_path(tori)) == ANTOINE_LOCAL_GENUS == 1
    mixed = [
        DefiningSequenceStage(0, (Handlebody(1),)),
        DefiningSequenceStage(1, (Handlebody(2, 0), Handlebody(1, 0))),
        DefiningSequenceStage(2, (Handlebody(1, 0),)),
    ]
    assert genus_upper_bound(mixed, [0, 0, 0]) == 2


def test_genus_rejects_bad_nesting():
    seq = [DefiningSequenceStage(0, (Handlebody(0),)), DefiningSequenceStage(1, (Handlebody(0, 3),))]
    with pytest.raises(TreeError):
        genus_upper_bound(seq, [0, 0])
    ok = ball_sequence(2)
    with pytest.raises(TreeError):
        genus_upper_bound(ok, [0, 2, 0])  # stage-1 component 2 does not exist
    with pytest.raises(TreeError):
        genus_upper_bound(ok, [0, 0, 2])  # component 2 lies in component 1, not 0


def test_unbounded_genus():
    seq = [DefiningSequenceStage(0, (Handlebody(UNBOUNDED),))]
    assert math.isinf(genus_upper_bound(seq, [0]))


def test_slicing_sum():
    assert slicing_sum(1, 1).value == 2
    assert slicing_sum(0, 5).value == 5
    assert slicing_sum(1, 2).value == 3
    assert slicing_sum(1, 1).provenance  # carries the hypothesis it relies on
    assert int(POINT_AT_INFINITY_GENUS_LOWER_BOUND) == 2


# -- serialization -------------------------------------------------------------


def test_tree_json_round_trip():
    rng = random.Random(5)
    for _ in range(50):
        t = random_tree(rng)
        assert tree_from_json(tree_to_json(t)) == t


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"links": 4, "children": ["leaf"] * 3}, "$.links"),
        ({"links": 3, "children": ["leaf"] * 3}, "$.children"),
        ({"links": 4, "children": ["leaf", "leaf", 7, "leaf"]}, "$.children[2]"),
        ({"children": []}, "$"),
        ({"links": 4, "children": "leaf"}, "$.children"),
    ],
)
def test_tree_json_errors_carry_path(doc, path):
    with pytest.raises(SchemaError) as info:
        tree_from_json(doc)
    assert info.value.path == path


def test_tree_node_budget_is_enforced():
    big = standard_chain_tree(4, 9)  # 349525 nodes, under the cap
    assert tree_from_json(tree_to_json(big)) == big
