"""Reduced words in the free group F_N.

Letters are generator indices ``1..2N``: index ``j <= N`` is ``a_j`` and
index ``j > N`` is the inverse of ``a_(j-N)``.  Words are always stored in
freely reduced form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import InvalidGeneratorError, RankMismatchError, ResourceLimitError

MAX_ENUMERATED_WORDS = 10**6

_TEXT_LETTER = re.compile(r"([aA])(\d+)")


def _check_rank(rank: int) -> None:
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")


def involution(rank: int, j: int) -> int:
    """Index of the inverse letter: ``((j + N - 1) mod 2N) + 1``."""
    if not 1 <= j <= 2 * rank:
        raise InvalidGeneratorError(f"generator index {j} outside 1..{2 * rank}")
    return (j + rank - 1) % (2 * rank) + 1


def reduce_letters(rank: int, letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence with a stack."""
    _check_rank(rank)
    top = 2 * rank
    stack: list[int] = []
    for j in letters:
        if not isinstance(j, int) or not 1 <= j <= top:
            raise InvalidGeneratorError(f"generator index {j!r} outside 1..{top}")
        if stack and stack[-1] == (j + rank - 1) % top + 1:
            stack.pop()
        else:
            stack.append(j)
    return tuple(stack)


@dataclass(frozen=True, order=True)
class ReducedWord:
    """An element of F_N as a freely reduced word.

    Construction reduces eagerly, so ``ReducedWord(2, (1, 3))`` is the
    identity.
    """

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", reduce_letters(self.rank, self.letters))

    @classmethod
    def _trusted(cls, rank: int, letters: tuple[int, ...]) -> "ReducedWord":
        # Skips reduction; callers guarantee ``letters`` is reduced.
        word = object.__new__(cls)
        object.__setattr__(word, "rank", rank)
        object.__setattr__(word, "letters", letters)
        return word

    @classmethod
    def identity(cls, rank: int) -> "ReducedWord":
        _check_rank(rank)
        return cls._trusted(rank, ())

    @classmethod
    def generator(cls, rank: int, j: int) -> "ReducedWord":
        return cls(rank, (j,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def __invert__(self) -> "ReducedWord":
        return invert(self)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"ReducedWord({self.rank}, {format_word(self)!r})"


def reduce(rank: int, letters: Sequence[int]) -> ReducedWord:
    """Return the unique freely reduced word for a letter sequence."""
    return ReducedWord._trusted(rank, reduce_letters(rank, letters))


def multiply(w1: ReducedWord, w2: ReducedWord) -> ReducedWord:
    if w1.rank != w2.rank:
        raise RankMismatchError(f"cannot multiply words of rank {w1.rank} and {w2.rank}")
    rank = w1.rank
    a, b = w1.letters, w2.letters
    # Only the seam between the two reduced words can cancel.
    i = 0
    limit = min(len(a), len(b))
    while i < limit and b[i] == (a[-1 - i] + rank - 1) % (2 * rank) + 1:
        i += 1
    return ReducedWord._trusted(rank, a[: len(a) - i] + b[i:])


def invert(w: ReducedWord) -> ReducedWord:
    rank = w.rank
    return ReducedWord._trusted(
        rank, tuple((j + rank - 1) % (2 * rank) + 1 for j in reversed(w.letters))
    )


def word_count(rank: int, n: int) -> int:
    """Number of reduced words of length ``n``: ``2N (2N-1)^(n-1)``, and 1 for n = 0."""
    _check_rank(rank)
    if n < 0:
        raise ValueError("length must be non-negative")
    if n == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (n - 1)


def enumerate_words(rank: int, n: int, limit: int = MAX_ENUMERATED_WORDS) -> list[ReducedWord]:
    """All reduced words of length ``n`` in lexicographic order of letter indices."""
    total = word_count(rank, n)
    if total > limit:
        raise ResourceLimitError(
            f"{total} reduced words of length {n} for rank {rank} exceeds the limit {limit}"
        )
    top = 2 * rank
    out: list[ReducedWord] = []

    def extend(prefix: tuple[int, ...]) -> None:
        if len(prefix) == n:
            out.append(ReducedWord._trusted(rank, prefix))
            return
        banned = (prefix[-1] + rank - 1) % top + 1 if prefix else 0
        for j in range(1, top + 1):
            if j != banned:
                extend(prefix + (j,))

    extend(())
    return out


# -- serialization ---------------------------------------------------------


def letter_text(rank: int, j: int) -> str:
    if not 1 <= j <= 2 * rank:
        raise InvalidGeneratorError(f"generator index {j} outside 1..{2 * rank}")
    return f"a{j}" if j <= rank else f"A{j - rank}"


def parse_letter(rank: int, text: str) -> int:
    m = _TEXT_LETTER.fullmatch(text.strip())
    if not m:
        raise InvalidGeneratorError(f"cannot parse generator {text!r}")
    i = int(m.group(2))
    if not 1 <= i <= rank:
        raise InvalidGeneratorError(f"generator {text!r} outside rank {rank}")
    return i if m.group(1) == "a" else i + rank


def format_word(w: ReducedWord) -> str:
    """Compact text form, e.g. ``a1a2A1``; the identity is ``e``."""
    if not w.letters:
        return "e"
    return "".join(letter_text(w.rank, j) for j in w.letters)


def parse_word(rank: int, text: str) -> ReducedWord:
    text = text.strip()
    if text == "e":
        return ReducedWord.identity(rank)
    pos = 0
    letters = []
    for m in _TEXT_LETTER.finditer(text):
        if m.start() != pos:
            break
        letters.append(parse_letter(rank, m.group(0)))
        pos = m.end()
    if pos != len(text) or not letters:
        raise InvalidGeneratorError(f"cannot parse word {text!r}")
    return reduce(rank, letters)


def word_to_json(w: ReducedWord) -> list[int]:
    """Signed-integer form: ``+j`` for ``a_j`` and ``-j`` for its inverse."""
    return [j if j <= w.rank else -(j - w.rank) for j in w.letters]


def word_from_json(rank: int, data: Sequence[int]) -> ReducedWord:
    letters = []
    for x in data:
        if not isinstance(x, int) or x == 0 or abs(x) > rank:
            raise InvalidGeneratorError(f"signed generator {x!r} outside rank {rank}")
        letters.append(x if x > 0 else rank - x)
    return reduce(rank, letters)
