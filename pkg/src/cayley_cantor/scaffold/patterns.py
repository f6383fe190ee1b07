"""Antoine patterns for the tori of a scaffold.

Vertex tori all carry family member 0.  A chain torus with label
``E:g:beta_k:i`` carries member ``family_index(N, i, k')`` where ``k'`` is the
positive generator of the edge, so both names of an edge pick the same member.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..antoine import AntoineTree, family_index, sher_equivalent
from ..errors import CayleyCantorError
from ..labels import (
    ComponentLabel,
    EdgeCantor,
    VertexCantor,
    canonical_label,
    edge_class,
    label_equivalent,
    parse_label,
)
from .build import Scaffold


class FamilySizeError(CayleyCantorError, ValueError):
    pass


@dataclass(frozen=True)
class PatternEntry:
    owner: str
    label: ComponentLabel
    pattern: int  # index into the family


@dataclass(frozen=True)
class PatternAssignment:
    rank: int
    family: tuple[AntoineTree, ...]
    entries: tuple[PatternEntry, ...]

    def pattern(self, owner: str) -> AntoineTree:
        return self.family[self.index_of(owner)]

    def index_of(self, owner: str) -> int:
        return self._by_owner[owner]

    @cached_property
    def _by_owner(self) -> dict[str, int]:
        return {e.owner: e.pattern for e in self.entries}

    def distinct(self, kind: str | None = None) -> set[int]:
        """Pattern indices in use; ``kind`` is ``"vertex"``, ``"edge"`` or None for both."""
        cls = {"vertex": VertexCantor, "edge": EdgeCantor, None: object}[kind]
        return {e.pattern for e in self.entries if isinstance(e.label, cls)}

    def to_json(self) -> list[dict]:
        return [{"owner": e.owner, "pattern": e.pattern} for e in self.entries]


def pattern_of(rank: int, label: ComponentLabel) -> int:
    if isinstance(label, VertexCantor):
        return 0
    i, k = edge_class(label)
    return family_index(rank, i, k)


def assign_patterns(s: Scaffold, family: Sequence[AntoineTree]) -> PatternAssignment:
    if len(family) != 3 * s.rank + 1:
        raise FamilySizeError(f"rank {s.rank} needs a family of {3 * s.rank + 1} patterns, got {len(family)}")
    entries = []
    for t in s.tori():
        label = canonical_label(parse_label(s.rank, t.owner))
        entries.append(PatternEntry(t.owner, label, pattern_of(s.rank, label)))
    return PatternAssignment(s.rank, tuple(family), tuple(entries))


def audit_assignment(a: PatternAssignment) -> list[str]:
    """Problems found when comparing label equivalence with pattern equivalence.

    Equivalent labels must share a pattern, inequivalent ones must get
    Sher-inequivalent patterns.  One representative per pattern is compared.
    """
    problems = []
    reps: dict[int, ComponentLabel] = {}
    for e in a.entries:
        rep = reps.setdefault(e.pattern, e.label)
        if not label_equivalent(rep, e.label):
            problems.append(f"{e.owner} shares pattern {e.pattern} with inequivalent {rep}")
    seen = {}
    for e in a.entries:
        key = pattern_of(a.rank, e.label)
        if key != e.pattern:
            problems.append(f"{e.owner} carries pattern {e.pattern}, expected {key}")
        seen.setdefault(key, e.label)
    keys = sorted(seen)
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            if sher_equivalent(a.family[keys[x]], a.family[keys[y]]):
                problems.append(f"patterns {keys[x]} and {keys[y]} are equivalent but label inequivalent sets")
    return problems
