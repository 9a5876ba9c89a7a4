"""Freely reduced words over m signed generators.

A word is stored as a tuple of nonzero signed integers: ``+i`` means the
i-th generator, ``-i`` its inverse.  Every public constructor freely
reduces its input, so a ``Word`` is always in normal form and safe to
hash, compare and reuse.  The canonical order used throughout the package
is shortlex with the letter order ``g1 < g1^-1 < g2 < g2^-1 < ...``.

The empty word is the identity.  By package-wide convention relation sets
never contain it (it is vacuously a relation of every marked group).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence


class EnumerationBudgetError(RuntimeError):
    """Raised when a ball enumeration would exceed the word budget."""


#: default cap on enumerated words, overridable per call
DEFAULT_WORD_BUDGET = 10**8


class Letter(NamedTuple):
    """A single signed generator symbol."""

    index: int
    sign: int

    @classmethod
    def from_int(cls, value: int) -> "Letter":
        if value == 0:
            raise ValueError("letter must be a nonzero signed integer")
        return cls(abs(value), 1 if value > 0 else -1)

    def to_int(self) -> int:
        return self.index * self.sign


def _validate_letters(rank: int, values: Sequence[int]) -> None:
    for v in values:
        if v == 0 or abs(v) > rank:
            raise ValueError(f"letter {v!r} out of range for rank {rank}")


def _free_reduce(values: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for v in values:
        if out and out[-1] == -v:
            out.pop()
        else:
            out.append(v)
    return tuple(out)


def _letter_key(v: int) -> int:
    # g1 < g1^-1 < g2 < g2^-1 < ...
    return 2 * (abs(v) - 1) + (0 if v > 0 else 1)


class Word:
    """A freely reduced word of fixed rank."""

    __slots__ = ("rank", "letters")

    def __init__(self, rank: int, letters: Iterable[int] = (), *, _reduced: bool = False):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = int(rank)
        if _reduced:
            self.letters = tuple(letters)
        else:
            vals = tuple(int(v) for v in letters)
            _validate_letters(self.rank, vals)
            self.letters = _free_reduce(vals)

    def is_identity(self) -> bool:
        return not self.letters

    @property
    def shortlex_key(self) -> tuple:
        return (len(self.letters), tuple(_letter_key(v) for v in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.rank == other.rank
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.shortlex_key < other.shortlex_key

    def __le__(self, other: "Word") -> bool:
        return self.shortlex_key <= other.shortlex_key

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return Word(self.rank, _free_reduce(self.letters + other.letters), _reduced=True)

    def __invert__(self) -> "Word":
        return Word(self.rank, tuple(-v for v in reversed(self.letters)), _reduced=True)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** (-n)
        out = Word(self.rank, (), _reduced=True)
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({self.rank}, {self.letters!r})"


def reduce(rank: int, seq: Iterable[int]) -> Word:
    """Freely reduce a raw letter sequence into a normal-form word."""
    return Word(rank, seq)


def concat(w: Word, v: Word) -> Word:
    return w * v


def inverse(w: Word) -> Word:
    return ~w


def length(w: Word) -> int:
    return len(w)


def commutator(w: Word, v: Word) -> Word:
    """The reduced word ``w v w^-1 v^-1``."""
    return w * v * ~w * ~v


@dataclass(frozen=True)
class BallSpec:
    """Rank and radius of a ball in the free group."""

    m: int
    lam: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("rank m must be >= 1")
        if self.lam < 0:
            raise ValueError("radius lambda must be >= 0")

    @property
    def word_count(self) -> int:
        return ball_size(self.m, self.lam)


def ball_size(m: int, lam: int) -> int:
    """Number of reduced words of length <= lam over m generators."""
    if m < 1 or lam < 0:
        raise ValueError("need m >= 1 and lam >= 0")
    total = 1
    for i in range(1, lam + 1):
        total += 2 * m * (2 * m - 1) ** (i - 1)
    return total


def signed_alphabet(m: int) -> tuple[int, ...]:
    """All 2m signed letters in canonical order."""
    out = []
    for i in range(1, m + 1):
        out.append(i)
        out.append(-i)
    return tuple(out)


def check_budget(m: int, lam: int, max_words: Optional[int] = None) -> int:
    """Return the ball size, raising if it exceeds the word budget."""
    budget = DEFAULT_WORD_BUDGET if max_words is None else max_words
    n = ball_size(m, lam)
    if n > budget:
        raise EnumerationBudgetError(
            f"ball of rank {m}, radius {lam} holds {n} words, over the budget of {budget}"
        )
    return n


def iter_reduced_letter_tuples(m: int, lam: int) -> Iterator[tuple[int, ...]]:
    """Yield the raw letter tuples of all reduced words of length <= lam, shortlex."""
    alphabet = signed_alphabet(m)
    level: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(lam):
        nxt: list[tuple[int, ...]] = []
        for prefix in level:
            banned = -prefix[-1] if prefix else 0
            for letter in alphabet:
                if letter == banned:
                    continue
                w = prefix + (letter,)
                yield w
                nxt.append(w)
        level = nxt


def enumerate_reduced(spec: BallSpec, max_words: Optional[int] = None) -> Iterator[Word]:
    """All reduced words of length <= lam, each exactly once, in shortlex order."""
    check_budget(spec.m, spec.lam, max_words)
    for letters in iter_reduced_letter_tuples(spec.m, spec.lam):
        yield Word(spec.m, letters, _reduced=True)


def evaluate(word: Word, group, marking: Sequence) -> object:
    """Substitute the marking tuple into the word and multiply out in the group."""
    marking = tuple(marking)
    if len(marking) != word.rank:
        raise ValueError(
            f"marking has {len(marking)} elements but the word has rank {word.rank}"
        )
    for s in marking:
        group.check_element(s)
    ident = group.identity
    if not word.letters:
        return ident
    pos = list(marking)
    neg = [group._inv(s) for s in marking]
    mul = group._mul
    e = ident
    for v in word.letters:
        e = mul(e, pos[v - 1] if v > 0 else neg[-v - 1])
    return e


_NAME_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str, rank: Optional[int] = None, names: Optional[Sequence[str]] = None) -> Word:
    """Parse a word from text.

    Two syntaxes are accepted: whitespace-separated signed integers
    (``"1 1 -2 -2"``), or the compact named form (``"x^2 y^-2"``) when a
    generator-name context is supplied.
    """
    tokens = text.replace("*", " ").split()
    if names is not None:
        index = {name: i + 1 for i, name in enumerate(names)}
        letters: list[int] = []
        for tok in tokens:
            mt = _NAME_TOKEN.match(tok)
            if not mt or mt.group(1) not in index:
                raise ValueError(f"unknown generator token {tok!r}")
            i = index[mt.group(1)]
            exp = int(mt.group(2)) if mt.group(2) else 1
            letters.extend([i if exp > 0 else -i] * abs(exp))
        return Word(len(names), letters)
    if rank is None:
        raise ValueError("need either a rank or a generator-name context")
    if not tokens:
        return Word(rank, ())
    try:
        letters = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"cannot parse word {text!r} as signed integers") from exc
    return Word(rank, letters)


def format_word(word: Word, names: Optional[Sequence[str]] = None) -> str:
    """Render a word as signed integers, or in compact named form."""
    if not word.letters:
        return "1" if names is not None else ""
    if names is None:
        return " ".join(str(v) for v in word.letters)
    parts = []
    run_letter, run_len = word.letters[0], 1
    for v in word.letters[1:]:
        if v == run_letter:
            run_len += 1
        else:
            parts.append((run_letter, run_len))
            run_letter, run_len = v, 1
    parts.append((run_letter, run_len))
    out = []
    for v, n in parts:
        name = names[abs(v) - 1]
        exp = n if v > 0 else -n
        out.append(name if exp == 1 else f"{name}^{exp}")
    return " ".join(out)
