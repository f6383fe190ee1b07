"""Symbolic Antoine defining sequences.

A tree node is a solid torus; a non-leaf node holds a cyclic chain of at
least four linked child tori (array order is cyclic order, last links first).
Equivalence of two constructions is decided combinatorially: the trees must
match stage by stage with every chain matched up to a dihedral symmetry.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ResourceLimitError, TreeError

MIN_LINKS = 4
MAX_TREE_NODES = 10**6

#: Geometric index of the union of one chain in the torus that contains it.
STAGE_INDEX = 2
#: Local genus of every point of an Antoine Cantor set.
ANTOINE_LOCAL_GENUS = 1
#: Local genus of every point of the standard (tame) Cantor set.
STANDARD_LOCAL_GENUS = 0


@dataclass(frozen=True)
class AntoineTree:
    """A torus with the chain of tori placed inside it (empty for a leaf)."""

    children: tuple["AntoineTree", ...] = ()

    def __post_init__(self) -> None:
        if 0 < len(self.children) < MIN_LINKS:
            raise TreeError(f"a chain needs at least {MIN_LINKS} links, got {len(self.children)}")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def links(self) -> int:
        return len(self.children)

    @property
    def depth(self) -> int:
        return _depth(self)

    def node_count(self) -> int:
        return _node_count(self)

    def stage(self, d: int) -> list["AntoineTree"]:
        """Tori of stage ``d`` (the root is stage 0), in depth-first cyclic order."""
        level = [self]
        for _ in range(d):
            level = [c for t in level for c in t.children]
        return level

    def __repr__(self) -> str:
        if self.is_leaf:
            return "Leaf"
        return f"Chain{list(self.children)!r}"


LEAF = AntoineTree()


def chain(children: Sequence[AntoineTree]) -> AntoineTree:
    return AntoineTree(tuple(children))


@lru_cache(maxsize=None)
def _depth(t: AntoineTree) -> int:
    return 0 if t.is_leaf else 1 + max(_depth(c) for c in t.children)


@lru_cache(maxsize=None)
def _node_count(t: AntoineTree) -> int:
    return 1 + sum(_node_count(c) for c in t.children)


def standard_chain_tree(m: int, depth: int) -> AntoineTree:
    """Uniform tree: every torus above ``depth`` holds a chain of ``m`` tori."""
    if m < MIN_LINKS:
        raise TreeError(f"a chain needs at least {MIN_LINKS} links, got {m}")
    if depth < 0:
        raise TreeError("depth must be non-negative")
    total = sum(m**i for i in range(depth + 1))
    if total > MAX_TREE_NODES:
        raise ResourceLimitError(f"tree with {total} nodes exceeds cap {MAX_TREE_NODES}")
    t = LEAF
    for _ in range(depth):
        t = AntoineTree((t,) * m)
    return t


# -- geometric index -------------------------------------------------------


def compose_index(outer: int, inner: int) -> int:
    """Index of nested tori composes multiplicatively."""
    if outer < 0 or inner < 0:
        raise ValueError("geometric index is non-negative")
    return outer * inner


def stage_union_index(tree: AntoineTree, d: int) -> int:
    """Geometric index of the union of stage-``d`` tori in the root torus.

    Each chain stage has index 2 in its parent torus, so the result is ``2**d``.
    Every torus above stage ``d`` must hold a full chain.
    """
    if d < 0:
        raise TreeError("stage must be non-negative")
    if d > tree.depth:
        raise TreeError(f"stage {d} exceeds tree depth {tree.depth}")
    index = 1
    level = [tree]
    for stage in range(d):
        if any(t.is_leaf for t in level):
            raise TreeError(f"stage {stage} contains a torus without a chain")
        index = compose_index(index, STAGE_INDEX)
        level = [c for t in level for c in t.children]
    return index


def parity_admissible(index: int) -> bool:
    """Whether a claimed index of a union of unknotted index-0 tori can occur (it must be even)."""
    if index < 0:
        raise ValueError("geometric index is non-negative")
    return index % 2 == 0


# -- Sher equivalence ------------------------------------------------------


def _dihedral(seq: tuple) -> Iterator[tuple]:
    m = len(seq)
    rev = seq[::-1]
    for r in range(m):
        yield seq[r:] + seq[:r]
        yield rev[r:] + rev[:r]


@lru_cache(maxsize=None)
def canonical_code(t: AntoineTree) -> tuple:
    """Dihedral-invariant code; equal codes iff the trees are equivalent."""
    if t.is_leaf:
        return ()
    codes = tuple(canonical_code(c) for c in t.children)
    return min(_dihedral(codes))


def sher_equivalent(t1: AntoineTree, t2: AntoineTree) -> bool:
    return canonical_code(t1) == canonical_code(t2)


def sher_equivalent_bruteforce(t1: AntoineTree, t2: AntoineTree) -> bool:
    """Search all stage-preserving dihedral matchings directly (no canonical forms)."""
    if t1.links != t2.links:
        return False
    if t1.is_leaf:
        return True
    m = t1.links
    for shift in range(m):
        for flip in (False, True):
            if all(
                sher_equivalent_bruteforce(
                    t1.children[i], t2.children[(shift - i) % m if flip else (shift + i) % m]
                )
                for i in range(m)
            ):
                return True
    return False


def truncate(t: AntoineTree, depth: int) -> AntoineTree:
    if depth == 0 or t.is_leaf:
        return LEAF
    return AntoineTree(tuple(truncate(c, depth - 1) for c in t.children))


@dataclass(frozen=True)
class Mismatch:
    stage: int
    kind: str  # "link count" or "chain adjacency"
    detail: str

    def __str__(self) -> str:
        return f"mismatch at stage {self.stage} {self.kind}: {self.detail}"


def first_mismatch(t1: AntoineTree, t2: AntoineTree) -> Mismatch | None:
    """Earliest stage at which the two constructions cannot be matched.

    Stage ``s`` consists of the tori in the chains placed inside the stage
    ``s - 1`` tori.  Returns ``None`` for equivalent trees.
    """
    if sher_equivalent(t1, t2):
        return None
    for s in range(1, max(t1.depth, t2.depth) + 1):
        if canonical_code(truncate(t1, s)) == canonical_code(truncate(t2, s)):
            continue
        c1 = sorted(t.links for t in t1.stage(s - 1))
        c2 = sorted(t.links for t in t2.stage(s - 1))
        if c1 != c2:
            return Mismatch(s, "link count", f"chain sizes {c1} vs {c2}")
        return Mismatch(s, "chain adjacency", "chain sizes agree but their cyclic arrangement differs")
    raise AssertionError("inequivalent trees must differ at some stage")


def apply_dihedral(t: AntoineTree, rng: random.Random) -> AntoineTree:
    """Random rotation/reflection of every chain; the result is equivalent to ``t``."""
    if t.is_leaf:
        return t
    kids = [apply_dihedral(c, rng) for c in t.children]
    r = rng.randrange(len(kids))
    kids = kids[r:] + kids[:r]
    if rng.random() < 0.5:
        kids.reverse()
    return AntoineTree(tuple(kids))


def random_tree(rng: random.Random, max_depth: int = 3, max_links: int = 6) -> AntoineTree:
    """Random tree with chains of ``4..max_links`` tori, depth at most ``max_depth``."""

    def grow(d: int) -> AntoineTree:
        if d == 0 or (d < max_depth and rng.random() < 0.25):
            return LEAF
        m = rng.randint(MIN_LINKS, max_links)
        return AntoineTree(tuple(grow(d - 1) for _ in range(m)))

    return grow(rng.randint(1, max_depth))


def random_tree_pool(seed: int, size: int = 40, max_depth: int = 3, max_links: int = 6) -> list[AntoineTree]:
    """Seeded pool: half fresh random trees, half dihedral images of them.

    The images guarantee that the pool contains equivalent, non-identical pairs.
    """
    rng = random.Random(seed)
    base = [random_tree(rng, max_depth, max_links) for _ in range(size - size // 2)]
    extra = [apply_dihedral(rng.choice(base), rng) for _ in range(size // 2)]
    return base + extra


# -- rigid families --------------------------------------------------------


def rigid_family(rank: int, base_m: int = MIN_LINKS) -> list[AntoineTree]:
    """``3N + 1`` pairwise inequivalent patterns.

    Pattern ``p`` has ``base_m`` links at the root; its first child holds
    ``base_m + p`` links and the other children ``base_m``.  Entry 0 is the
    vertex pattern; entry ``1 + (i - 1) N + (k - 1)`` is edge pattern
    ``(i, k)`` for position ``i`` in 1..3 and generator ``k`` in 1..N.
    """
    if base_m < MIN_LINKS:
        raise TreeError(f"a chain needs at least {MIN_LINKS} links, got {base_m}")
    if rank < 1:
        raise ValueError("rank must be positive")
    plain = AntoineTree((LEAF,) * base_m)
    out = []
    for p in range(3 * rank + 1):
        marked = AntoineTree((LEAF,) * (base_m + p))
        out.append(AntoineTree((marked,) + (plain,) * (base_m - 1)))
    return out


def family_index(rank: int, position: int, generator: int) -> int:
    """Position of edge pattern ``(position, generator)`` in :func:`rigid_family`."""
    if not 1 <= position <= 3:
        raise ValueError("chain position must be 1, 2 or 3")
    if not 1 <= generator <= rank:
        raise ValueError(f"edge patterns are indexed by generators 1..{rank}")
    return 1 + (position - 1) * rank + (generator - 1)


# -- genus bookkeeping -----------------------------------------------------

UNBOUNDED = math.inf


@dataclass(frozen=True)
class Handlebody:
    genus: float  # non-negative integer, or UNBOUNDED
    parent: int | None = None


@dataclass(frozen=True)
class DefiningSequenceStage:
    stage: int
    handlebodies: tuple[Handlebody, ...]


def check_nesting(seq: Sequence[DefiningSequenceStage]) -> None:
    for i, st in enumerate(seq):
        if st.stage != i:
            raise TreeError(f"stage {i} is labelled {st.stage}")
        for h in st.handlebodies:
            if h.genus < 0:
                raise TreeError("genus must be non-negative")
            if i == 0:
                if h.parent is not None:
                    raise TreeError("stage-0 handlebodies have no parent")
            elif h.parent is None or not 0 <= h.parent < len(seq[i - 1].handlebodies):
                raise TreeError(f"stage {i} handlebody has no parent in stage {i - 1}")


def genus_upper_bound(seq: Sequence[DefiningSequenceStage], point_path: Sequence[int]) -> float:
    """Supremum of the genus of the components containing a point.

    ``point_path[i]`` selects the stage-``i`` component containing the point;
    each selection must lie inside the previous one.
    """
    check_nesting(seq)
    if len(point_path) != len(seq):
        raise TreeError("point path must choose one component per stage")
    best: float = 0
    for i, (st, c) in enumerate(zip(seq, point_path)):
        if not 0 <= c < len(st.handlebodies):
            raise TreeError(f"stage {i} has no component {c}")
        h = st.handlebodies[c]
        if i > 0 and h.parent != point_path[i - 1]:
            raise TreeError(f"path not nested: stage {i} component {c} is not inside component {point_path[i - 1]}")
        best = max(best, h.genus)
    return best


def tree_defining_sequence(tree: AntoineTree, genus: int = 1) -> list[DefiningSequenceStage]:
    """Stages of a tree realized by handlebodies of one genus (tori by default)."""
    out = []
    level = [(tree, None)]
    i = 0
    while level:
        out.append(DefiningSequenceStage(i, tuple(Handlebody(genus, p) for _, p in level)))
        level = [(c, j) for j, (t, _) in enumerate(level) for c in t.children]
        i += 1
    return out


def ball_sequence(depth: int, branching: int = 2) -> list[DefiningSequenceStage]:
    """Standard Cantor set: each ball holds ``branching`` smaller balls."""
    out = [DefiningSequenceStage(0, (Handlebody(0),))]
    for i in range(1, depth + 1):
        prev = len(out[-1].handlebodies)
        out.append(
            DefiningSequenceStage(i, tuple(Handlebody(0, j) for j in range(prev) for _ in range(branching)))
        )
    return out


def first_path(seq: Sequence[DefiningSequenceStage]) -> list[int]:
    """Path through the first child at every stage."""
    path = [0]
    for st in seq[1:]:
        path.append(next(j for j, h in enumerate(st.handlebodies) if h.parent == path[-1]))
    return path


@dataclass(frozen=True)
class CertifiedGenus:
    """A genus value together with the hypothesis it depends on."""

    value: float
    provenance: tuple[str, ...] = field(default_factory=tuple)

    def __int__(self) -> int:
        return int(self.value)


SLICING_HYPOTHESIS = (
    "caller asserts a 3-ball B about p and a disc D in B with D meeting X and Y only in p, "
    "boundary of D on the boundary of B, and X, Y on opposite sides of D within B"
)


def slicing_sum(gx: float, gy: float) -> CertifiedGenus:
    """Local genus at a common point of two Cantor sets separated by a disc through it."""
    if gx < 0 or gy < 0:
        raise ValueError("genus must be non-negative")
    return CertifiedGenus(gx + gy, (SLICING_HYPOTHESIS,))


#: Lower bound for the local genus of the point at infinity in the assembled set,
#: obtained from two Antoine pieces meeting there.
POINT_AT_INFINITY_GENUS_LOWER_BOUND = slicing_sum(ANTOINE_LOCAL_GENUS, ANTOINE_LOCAL_GENUS)
#: The stronger fact that this local genus is infinite is recorded, not computed.
POINT_AT_INFINITY_GENUS_NOTE = "local genus of the point at infinity is infinite (cited, not computed)"


# -- serialization ---------------------------------------------------------


def tree_to_json(t: AntoineTree):
    if t.is_leaf:
        return "leaf"
    return {"links": t.links, "children": [tree_to_json(c) for c in t.children]}


def tree_from_json(data, path: str = "$") -> AntoineTree:
    from .errors import SchemaError

    budget = [MAX_TREE_NODES]

    def parse(d, p: str) -> AntoineTree:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError(f"tree exceeds {MAX_TREE_NODES} nodes")
        if d == "leaf":
            return LEAF
        if not isinstance(d, dict):
            raise SchemaError(p, 'expected "leaf" or an object with links and children')
        if "links" not in d or "children" not in d:
            raise SchemaError(p, "object needs links and children")
        kids = d["children"]
        if not isinstance(kids, list):
            raise SchemaError(f"{p}.children", "expected an array")
        if d["links"] != len(kids):
            raise SchemaError(f"{p}.links", f"declares {d['links']} links but has {len(kids)} children")
        if len(kids) < MIN_LINKS:
            raise SchemaError(f"{p}.children", f"a chain needs at least {MIN_LINKS} links")
        return AntoineTree(tuple(parse(c, f"{p}.children[{i}]") for i, c in enumerate(kids)))

    return parse(data, path)
