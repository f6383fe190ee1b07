"""Names of the constituent Cantor sets of the assembled construction.

``VertexCantor(g)`` is the set sitting at vertex ``v(g)``; ``EdgeCantor(g, k, i)``
is the ``i``-th of the three linked sets along the edge from ``v(g)`` labeled
``beta_k``.  The edge ``(g, beta_k)`` is the same as ``(g beta_k, inv(beta_k))``,
and the two names refer to the same set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import RankMismatchError, SchemaError
from .words import (
    ReducedWord,
    enumerate_words,
    format_word,
    involution,
    letter_text,
    multiply,
    parse_letter,
    parse_word,
)


@dataclass(frozen=True)
class VertexCantor:
    word: ReducedWord

    @property
    def rank(self) -> int:
        return self.word.rank

    def __str__(self) -> str:
        return f"V:{format_word(self.word)}"


@dataclass(frozen=True)
class EdgeCantor:
    word: ReducedWord
    generator: int
    position: int

    def __post_init__(self) -> None:
        involution(self.word.rank, self.generator)  # validates the index
        if self.position not in (1, 2, 3):
            raise ValueError(f"chain position must be 1, 2 or 3, got {self.position}")

    @property
    def rank(self) -> int:
        return self.word.rank

    @property
    def far_end(self) -> ReducedWord:
        return multiply(self.word, ReducedWord._trusted(self.rank, (self.generator,)))

    def __str__(self) -> str:
        return f"E:{format_word(self.word)}:{letter_text(self.rank, self.generator)}:{self.position}"


ComponentLabel = Union[VertexCantor, EdgeCantor]


def canonical_label(label: ComponentLabel) -> ComponentLabel:
    """Representative whose source is the shorter of the two endpoint words."""
    if isinstance(label, VertexCantor):
        return label
    other = label.far_end
    if len(other) < len(label.word):
        return EdgeCantor(other, involution(label.rank, label.generator), label.position)
    return label


def edge_class(label: EdgeCantor) -> tuple[int, int]:
    """(position, positive generator index): the equivalence class of an edge label."""
    k = label.generator
    return label.position, k if k <= label.rank else k - label.rank


def label_equivalent(l1: ComponentLabel, l2: ComponentLabel) -> bool:
    """Whether the two named Cantor sets are equivalently embedded."""
    if l1.rank != l2.rank:
        raise RankMismatchError(f"labels of rank {l1.rank} and {l2.rank}")
    if isinstance(l1, VertexCantor) and isinstance(l2, VertexCantor):
        return True
    if isinstance(l1, VertexCantor) or isinstance(l2, VertexCantor):
        return False
    return l1.position == l2.position and (
        l1.generator == l2.generator or l1.generator == involution(l1.rank, l2.generator)
    )


def parse_label(rank: int, text: str) -> ComponentLabel:
    parts = text.strip().split(":")
    try:
        if parts[0] == "V" and len(parts) == 2:
            return VertexCantor(parse_word(rank, parts[1]))
        if parts[0] == "E" and len(parts) == 4:
            return EdgeCantor(parse_word(rank, parts[1]), parse_letter(rank, parts[2]), int(parts[3]))
    except ValueError as exc:
        raise SchemaError("$", f"bad label {text!r}: {exc}") from None
    raise SchemaError("$", f"bad label {text!r}")


def enumerate_edge_labels(rank: int, max_length: int) -> Iterator[EdgeCantor]:
    """Every edge label with source word length at most ``max_length``."""
    for n in range(max_length + 1):
        for w in enumerate_words(rank, n):
            for k in range(1, 2 * rank + 1):
                for i in (1, 2, 3):
                    yield EdgeCantor(w, k, i)
