"""Verification suites run by ``cayley-cantor check``.

Each suite returns a :class:`SuiteResult` with the number of individual
checks made and a list of failure messages.  All randomness comes from a
``random.Random`` seeded by the caller, so reports are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .antoine import (
    LEAF,
    AntoineTree,
    compose_index,
    first_mismatch,
    parity_admissible,
    random_tree_pool,
    rigid_family,
    sher_equivalent,
    sher_equivalent_bruteforce,
    stage_union_index,
    standard_chain_tree,
)
from .cayley import automorphism_action, build_graph, check_label_coherence
from .words import ReducedWord, format_word, multiply

SUITES = ("labeling", "composition", "sher-oracle", "index", "linking")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(message)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks, "failures": self.failures}


# -- labeling ----------------------------------------------------------------


def labeling_suite(rank: int, radius: int) -> SuiteResult:
    res = SuiteResult("labeling")
    for r in range(radius + 1):
        g = build_graph(rank, r)
        bad = check_label_coherence(g)
        res.expect(not bad, f"rank {rank} radius {r}: {len(bad)} violations, first: {bad[0] if bad else ''}")
    return res


# -- composition -------------------------------------------------------------


def random_word(rng: random.Random, rank: int, length: int) -> ReducedWord:
    letters: list[int] = []
    while len(letters) < length:
        j = rng.randint(1, 2 * rank)
        if letters and j == (letters[-1] + rank - 1) % (2 * rank) + 1:
            continue
        letters.append(j)
    return ReducedWord._trusted(rank, tuple(letters))


def composition_pairs(rng: random.Random, rank: int, count: int, max_total: int) -> list[tuple[ReducedWord, ReducedWord]]:
    out = []
    for _ in range(count):
        n1 = rng.randint(0, max_total)
        n2 = rng.randint(0, max_total - n1)
        out.append((random_word(rng, rank, n1), random_word(rng, rank, n2)))
    return out


def check_composition(graph, g1: ReducedWord, g2: ReducedWord, action=None) -> list[str]:
    """Compare ``h_g1 o h_g2`` with ``h_(g1 g2)`` on their shared domain, including labels."""
    action = action or (lambda g: automorphism_action(graph, g))
    h1, h2, h12 = action(g1), action(g2), action(multiply(g1, g2))
    comp = h1.compose(h2)
    tag = f"g1={format_word(g1)} g2={format_word(g2)}"
    problems = []
    shared = (comp.image >= 0) & (h12.image >= 0)
    if np.any((comp.image >= 0) & (h12.image < 0)):
        problems.append(f"{tag}: composite defined where the product is not")
    if not np.array_equal(comp.image[shared], h12.image[shared]):
        problems.append(f"{tag}: vertex images differ")
    # Label preservation: edge (parent, child) labeled b must map to an edge labeled b.
    child, a, b = comp.edge_images()
    labels = graph.label[child]
    if not np.array_equal(graph.neighbors[a, labels - 1], b):
        problems.append(f"{tag}: composite does not preserve edge labels")
    return problems


def composition_suite(rank: int, seed: int, radius: int = 8, count: int = 200, max_total: int = 4) -> SuiteResult:
    res = SuiteResult("composition")
    rng = random.Random(seed)
    graph = build_graph(rank, radius)
    # Short elements recur across pairs; caching only those keeps memory small.
    cache: dict[ReducedWord, object] = {}

    def action(g):
        if len(g) > 2:
            return automorphism_action(graph, g)
        if g not in cache:
            cache[g] = automorphism_action(graph, g)
        return cache[g]

    for g1, g2 in composition_pairs(rng, rank, count, max_total):
        problems = check_composition(graph, g1, g2, action)
        res.expect(not problems, "; ".join(problems))
    return res


# -- Sher equivalence ----------------------------------------------------------


def grow_chain(t: AntoineTree, stage: int) -> AntoineTree:
    """Add one link to the first chain whose torus lies at ``stage``."""
    if stage == 0:
        if t.is_leaf:
            raise ValueError("cannot grow a chain inside a leaf")
        return AntoineTree(t.children + (LEAF,))
    for i, c in enumerate(t.children):
        try:
            grown = grow_chain(c, stage - 1)
        except ValueError:
            continue
        return AntoineTree(t.children[:i] + (grown,) + t.children[i + 1 :])
    raise ValueError(f"no chain at stage {stage}")


def sher_oracle_suite(rank: int, seed: int, pool_size: int = 40) -> SuiteResult:
    res = SuiteResult("sher-oracle")
    pool = random_tree_pool(seed, pool_size)
    for (i, a), (j, b) in combinations(enumerate(pool), 2):
        fast, slow = sher_equivalent(a, b), sher_equivalent_bruteforce(a, b)
        res.expect(fast == slow, f"pool pair ({i}, {j}): checker {fast}, oracle {slow}")
    for i, t in enumerate(pool):
        for s in range(t.depth):
            grown = grow_chain(t, s)
            m = first_mismatch(t, grown)
            res.expect(
                m is not None and m.stage == s + 1 and m.kind == "link count",
                f"pool tree {i}: growing a stage-{s} chain gave {m}",
            )
    fam = rigid_family(rank)
    for x, y in combinations(range(len(fam)), 2):
        res.expect(not sher_equivalent(fam[x], fam[y]), f"family members {x} and {y} are equivalent")
    return res


# -- index -------------------------------------------------------------------


def index_suite(max_depth: int = 5, m: int = 4) -> SuiteResult:
    res = SuiteResult("index")
    for d in range(max_depth + 1):
        t = standard_chain_tree(m, d)
        res.expect(stage_union_index(t, d) == 2**d, f"depth {d}: index {stage_union_index(t, d)}")
        for d1 in range(d + 1):
            outer = stage_union_index(t, d1)
            for sub in t.stage(d1):
                inner = stage_union_index(sub, d - d1)
                res.expect(
                    compose_index(outer, inner) == stage_union_index(t, d),
                    f"split {d1}+{d - d1}: {outer} * {inner} != {stage_union_index(t, d)}",
                )
    for k in range(0, 64):
        res.expect(parity_admissible(k) == (k % 2 == 0), f"parity gate wrong at {k}")
    return res


# -- linking -----------------------------------------------------------------


def linking_suite(rank: int, radius: int, samples: int) -> SuiteResult:
    from .scaffold.build import build_scaffold
    from .scaffold.geometry import circle, gauss_linking
    from .scaffold.validate import validate_linking

    res = SuiteResult("linking")
    hopf = gauss_linking(circle((0, 0, 0), (0, 0, 1), 1.0), circle((1, 0, 0), (0, 1, 0), 1.0), samples)
    res.expect(abs(abs(hopf) - 1) < 0.01, f"Hopf calibration {hopf:.6f}")
    far = gauss_linking(circle((0, 0, 0), (0, 0, 1), 1.0), circle((0, 0, 10), (0, 0, 1), 1.0), samples)
    res.expect(abs(far) < 0.1, f"separated circles {far:.6f}")
    for r in range(radius + 1):
        bad = validate_linking(build_scaffold(build_graph(rank, r)), samples)
        res.expect(not bad, f"rank {rank} radius {r}: {len(bad)} linking violations, first: {bad[0] if bad else ''}")
    return res


def run_suites(names, rank: int, seed: int, radius: int | None = None, samples: int = 512) -> list[SuiteResult]:
    out = []
    for name in names:
        if name == "labeling":
            out.append(labeling_suite(rank, 4 if radius is None else radius))
        elif name == "composition":
            out.append(composition_suite(rank, seed, 6 if radius is None else radius))
        elif name == "sher-oracle":
            out.append(sher_oracle_suite(rank, seed))
        elif name == "index":
            out.append(index_suite())
        elif name == "linking":
            out.append(linking_suite(rank, 2 if radius is None else radius, samples))
        else:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return out
