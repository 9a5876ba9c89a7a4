"""Marked groups, relation balls, the Gromov-Grigorchuk distance and
finite-window limit diagnostics.

A marked group is a group together with an ordered generating tuple.  Its
relation ball ``Rel_lam`` is the set of nonempty reduced words of length
at most ``lam`` that evaluate to the identity under the marking.  Two
independent algorithms compute relation balls (shortlex sweep with
memoized prefix evaluation, and a depth-limited walk of the prefix tree
carrying group elements); they serve as mutual oracles.

Limit diagnostics are window-approximate by design: a finite index window
can witness tail stability but never the infinitary limit, so every
verdict carries its window.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import groups as _groups
from . import words as _words
from .words import Word


class NotStabilizedError(RuntimeError):
    """The windowed sequence did not reach a stable relation ball."""


GENERATION_RADIUS = 8  # structural certificate radius for infinite groups


class MarkedGroup:
    """A group with an ordered generating tuple (a point of the marked space).

    For finite groups generation is verified exhaustively at construction.
    For infinite groups a structural certificate is used: the marking is
    accepted as verified when its ball of radius ``GENERATION_RADIUS``
    contains every named generator; otherwise the marked group is still
    usable but flagged ``generation="unverified"``.
    """

    __slots__ = ("group", "marking", "rank", "generation")

    def __init__(self, group: _groups.Group, marking: Sequence, verify: bool = True):
        marking = tuple(marking)
        if not marking:
            raise ValueError("marking must be nonempty")
        for s in marking:
            group.check_element(s)
        self.group = group
        self.marking = marking
        self.rank = len(marking)
        self.generation = "unverified"
        if verify:
            self._verify_generation()

    def _verify_generation(self):
        g = self.group
        if g.is_finite:
            closure = _groups.generated_closure(g, self.marking)
            if len(closure) != g.size():
                raise ValueError(
                    f"marking does not generate {g.descriptor}: closure has "
                    f"{len(closure)} of {g.size()} elements"
                )
            self.generation = "verified"
            return
        ball = set(_ball_elements(g, self.marking, GENERATION_RADIUS))
        targets = set(g.generators.values())
        self.generation = "verified" if targets <= ball else "unverified"

    @property
    def descriptor_text(self) -> str:
        return self.group.descriptor

    @property
    def marking_text(self) -> str:
        return ";".join(_groups.format_element(s) for s in self.marking)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MarkedGroup)
            and self.group == other.group
            and self.marking == other.marking
        )

    def __hash__(self) -> int:
        return hash((self.group, self.marking))

    def __repr__(self) -> str:
        return f"({self.descriptor_text}, [{self.marking_text}])"


def mark(descriptor: str, marking_names: str) -> MarkedGroup:
    """Build a marked group from descriptor text and comma-separated generator names."""
    group = _groups.parse_group(descriptor)
    return MarkedGroup(group, parse_marking(group, marking_names))


def parse_marking(group: _groups.Group, text: str) -> tuple:
    """Resolve names like ``"x,y"`` (``1`` or ``id`` mean the identity,
    ``name^-1`` the inverse) into a tuple of elements."""
    out = []
    for token in text.split(","):
        token = token.strip()
        invert = False
        if token.endswith("^-1"):
            token, invert = token[:-3], True
        if token in ("1", "id"):
            out.append(group.identity)
            continue
        if token not in group.generators:
            raise ValueError(
                f"unknown generator {token!r} for {group.descriptor}; "
                f"known: {', '.join(group.generator_names())}"
            )
        g = group.generators[token]
        out.append(group._inv(g) if invert else g)
    return tuple(out)


def std_marked(descriptor: str) -> MarkedGroup:
    group = _groups.parse_group(descriptor)
    return MarkedGroup(group, group.standard_marking())


# ---------------------------------------------------------------------------
# relation balls


class RelationBall:
    """The nonempty reduced words of length <= lam vanishing on the marking.

    Canonically ordered (shortlex), inverse-closed, hashable, and cheap to
    restrict to smaller radii.
    """

    __slots__ = ("m", "lam", "words", "_set")

    def __init__(self, m: int, lam: int, word_list: Iterable[Word]):
        self.m = m
        self.lam = lam
        self.words = tuple(sorted(word_list, key=lambda w: w.shortlex_key))
        self._set = frozenset(self.words)

    def __contains__(self, w: Word) -> bool:
        return w in self._set

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RelationBall)
            and self.m == other.m
            and self.lam == other.lam
            and self._set == other._set
        )

    def __hash__(self) -> int:
        return hash((self.m, self.lam, self._set))

    def same_words(self, other: "RelationBall") -> bool:
        """Set equality of the word lists, ignoring the radius stamp."""
        return self.m == other.m and self._set == other._set

    def restrict(self, lam: int) -> "RelationBall":
        if lam > self.lam:
            raise ValueError(f"cannot grow a radius-{self.lam} ball to {lam}")
        return RelationBall(self.m, lam, [w for w in self.words if len(w) <= lam])

    def symmetric_difference(self, other: "RelationBall") -> tuple[Word, ...]:
        if self.m != other.m:
            raise ValueError("rank mismatch")
        diff = self._set ^ other._set
        return tuple(sorted(diff, key=lambda w: w.shortlex_key))

    def body_lines(self) -> list[str]:
        return [" ".join(str(v) for v in w.letters) for w in self.words]

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.m} {self.lam}\n".encode())
        for line in self.body_lines():
            h.update(line.encode())
            h.update(b"\n")
        return h.hexdigest()


def rel_ball(mg: MarkedGroup, lam: int, max_words: Optional[int] = None) -> RelationBall:
    """Relation ball by shortlex enumeration with memoized prefix evaluation.

    Only the previous length's prefix evaluations are retained, so memory
    is one level of the prefix tree.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    _words.check_budget(mg.rank, lam, max_words)
    group = mg.group
    mul = group._mul
    ident = group.identity
    alphabet = _marking_alphabet(group, mg.marking)
    rels: list[Word] = []
    level: list[tuple[tuple[int, ...], object]] = [((), ident)]
    for _ in range(lam):
        nxt: list[tuple[tuple[int, ...], object]] = []
        for letters, e in level:
            banned = -letters[-1] if letters else 0
            for letter, gen in alphabet:
                if letter == banned:
                    continue
                e2 = mul(e, gen)
                w2 = letters + (letter,)
                if e2 == ident:
                    rels.append(Word(mg.rank, w2, _reduced=True))
                nxt.append((w2, e2))
        level = nxt
    return RelationBall(mg.rank, lam, rels)


def rel_ball_bfs(mg: MarkedGroup, lam: int, max_words: Optional[int] = None) -> RelationBall:
    """Relation ball by a depth-limited walk of the reduced-word prefix tree.

    Independent of :func:`rel_ball`: elements are carried down the tree and
    nothing is memoized.  Same contract, used as the second oracle.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    _words.check_budget(mg.rank, lam, max_words)
    group = mg.group
    mul = group._mul
    ident = group.identity
    alphabet = _marking_alphabet(group, mg.marking)
    rels: list[Word] = []

    def walk(e, banned, letters, depth_left):
        for letter, gen in alphabet:
            if letter == banned:
                continue
            e2 = mul(e, gen)
            w2 = letters + (letter,)
            if e2 == ident:
                rels.append(Word(mg.rank, w2, _reduced=True))
            if depth_left > 1:
                walk(e2, -letter, w2, depth_left - 1)

    if lam > 0:
        walk(ident, 0, (), lam)
    return RelationBall(mg.rank, lam, rels)


def _marking_alphabet(group, marking):
    out = []
    for i, s in enumerate(marking, 1):
        out.append((i, s))
        out.append((-i, group._inv(s)))
    return out


# ---------------------------------------------------------------------------
# the metric


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a distance computation capped at ``lambda_max``.

    ``exact`` means the largest agreement radius was found inside the cap;
    then ``agreement_radius`` is that radius, ``distance = e^-radius`` and
    ``witness`` is the shortlex-least word separating the relation balls
    (its length is ``agreement_radius + 1``).  Otherwise only the upper
    bound ``e^-lambda_max`` can be asserted.
    """

    lambda_max: int
    exact: bool
    agreement_radius: Optional[int]
    witness: Optional[Word]

    @property
    def distance(self) -> Optional[float]:
        return math.exp(-self.agreement_radius) if self.exact else None

    @property
    def bound(self) -> float:
        return math.exp(-self.lambda_max)

    def describe(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.exact:
            return f"d <= e^-{self.lambda_max} (relation balls agree up to the cap)"
        w = _words.format_word(self.witness, names)
        return (
            f"d = e^-{self.agreement_radius} "
            f"(separating word of length {len(self.witness)}: {w})"
        )


def gg_distance(
    mg1: MarkedGroup,
    mg2: MarkedGroup,
    lambda_max: int,
    max_words: Optional[int] = None,
) -> DistanceResult:
    """Exact distance between two marked groups, capped at ``lambda_max``."""
    if mg1.rank != mg2.rank:
        raise ValueError(f"rank mismatch: {mg1.rank} vs {mg2.rank}")
    b1 = rel_ball(mg1, lambda_max, max_words)
    b2 = rel_ball(mg2, lambda_max, max_words)
    diff = b1.symmetric_difference(b2)
    if not diff:
        return DistanceResult(lambda_max, False, None, None)
    witness = diff[0]
    return DistanceResult(lambda_max, True, len(witness) - 1, witness)


# ---------------------------------------------------------------------------
# marked Cayley balls


class BallGraph:
    """Rooted, generator-labeled ball of a marked Cayley graph.

    Vertices are numbered in canonical breadth-first order (neighbors
    expanded in the fixed letter order), so two balls are isomorphic as
    rooted labeled graphs exactly when their transition tables are equal.
    """

    __slots__ = ("rank", "radius", "vertices", "vertex_words", "distances", "table")

    def __init__(self, mg: MarkedGroup, radius: int):
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self.rank = mg.rank
        self.radius = radius
        group = mg.group
        alphabet = _marking_alphabet(group, mg.marking)
        ident = group.identity
        index = {ident: 0}
        verts = [ident]
        vwords: list[tuple[int, ...]] = [()]
        dist = [0]
        frontier = [ident]
        d = 0
        while frontier and d < radius:
            d += 1
            nxt = []
            for e in frontier:
                base = vwords[index[e]]
                for letter, gen in alphabet:
                    t = group._mul(e, gen)
                    if t not in index:
                        index[t] = len(verts)
                        verts.append(t)
                        vwords.append(base + (letter,))
                        dist.append(d)
                        nxt.append(t)
            frontier = nxt
        table = []
        for e in verts:
            row = []
            for letter, gen in alphabet:
                t = group._mul(e, gen)
                row.append(index.get(t))
            table.append(tuple(row))
        self.vertices = tuple(verts)
        self.vertex_words = tuple(Word(mg.rank, w, _reduced=True) for w in vwords)
        self.distances = tuple(dist)
        self.table = tuple(table)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def root(self) -> int:
        return 0

    def signature(self) -> tuple:
        return (self.rank, self.radius, self.table)

    def edges(self):
        """Directed edges (u, generator index, v) with both endpoints in the ball."""
        for u, row in enumerate(self.table):
            for slot in range(0, 2 * self.rank, 2):
                v = row[slot]
                if v is not None:
                    yield (u, slot // 2 + 1, v)

    def to_dot(self, names: Optional[Sequence[str]] = None) -> str:
        lines = ["digraph ball {", '  graph [root="v0"];']
        for u in range(len(self.vertices)):
            mark = ' shape=doublecircle' if u == 0 else ""
            lines.append(f'  v{u} [label="{u}"{mark}];')
        for u, i, v in self.edges():
            label = names[i - 1] if names else str(i)
            lines.append(f'  v{u} -> v{v} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def ball_graph(mg: MarkedGroup, radius: int) -> BallGraph:
    return BallGraph(mg, radius)


def ball_isomorphic(b1: BallGraph, b2: BallGraph) -> bool:
    """Root- and label-preserving isomorphism test via canonical tables."""
    if b1.rank != b2.rank:
        raise ValueError("rank mismatch")
    if b1.radius != b2.radius:
        raise ValueError("radius mismatch")
    return b1.signature() == b2.signature()


def _ball_elements(group, marking, radius):
    """Elements within word-distance ``radius`` of the identity."""
    alphabet = _marking_alphabet(group, marking)
    seen = {group.identity}
    frontier = [group.identity]
    for _ in range(radius):
        nxt = []
        for e in frontier:
            for _, gen in alphabet:
                t = group._mul(e, gen)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen)


def ball_elements(mg: MarkedGroup, radius: int) -> list:
    """Sorted canonical elements of the radius-``radius`` ball."""
    return _ball_elements(mg.group, mg.marking, radius)


# ---------------------------------------------------------------------------
# sequences and windows


@dataclass(frozen=True)
class SequenceSpec:
    """A family of marked groups over an inclusive index window."""

    name: str
    factory: Callable[[int], MarkedGroup] = field(compare=False)
    window: tuple[int, int] = (0, 0)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise ValueError("empty window")

    @property
    def indices(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def at(self, i: int) -> MarkedGroup:
        mg = self.factory(i)
        if not isinstance(mg, MarkedGroup):
            raise TypeError("sequence factory must produce MarkedGroup values")
        return mg


def quaternion_sequence(window: tuple[int, int]) -> SequenceSpec:
    """(quaternion(i), (x, y)) over the window."""
    return SequenceSpec("quaternion-std", lambda i: std_marked(f"quaternion({i})"), window)


def dihedral_sequence(window: tuple[int, int]) -> SequenceSpec:
    """(dihedral(i), (r, s)) over the window."""
    return SequenceSpec("dihedral-std", lambda i: std_marked(f"dihedral({i})"), window)


def cyclic2_sequence(k: int, window: tuple[int, int]) -> SequenceSpec:
    """(cyclic(2^i), (1, 2^(i-k))) over the window; needs i > k throughout."""
    if window[0] <= k:
        raise ValueError("window must start above k")

    def make(i: int) -> MarkedGroup:
        g = _groups.Cyclic(2**i)
        return MarkedGroup(g, (1, 2 ** (i - k)))

    return SequenceSpec(f"cyclic2-two-marked(k={k})", make, window)


def cyclic2_single_sequence(window: tuple[int, int]) -> SequenceSpec:
    """(cyclic(2^i), (1,)) over the window."""
    return SequenceSpec(
        "cyclic2-single-marked",
        lambda i: MarkedGroup(_groups.Cyclic(2**i), (1,)),
        window,
    )


def constant_sequence(mg: MarkedGroup, window: tuple[int, int]) -> SequenceSpec:
    return SequenceSpec("constant", lambda i: mg, window)


def window_balls(seq: SequenceSpec, lam: int, max_words: Optional[int] = None) -> dict[int, RelationBall]:
    return {i: rel_ball(seq.at(i), lam, max_words) for i in seq.indices}


@dataclass(frozen=True)
class WindowWordSet:
    """A liminf/limsup word set computed on a finite window.

    Always window-approximate: the window end stands in for infinity.
    """

    kind: str
    words: frozenset[Word]
    window: tuple[int, int]
    lam: int
    window_approximate: bool = True

    def __contains__(self, w: Word) -> bool:
        return w in self.words


def liminf_relations(seq: SequenceSpec, lam: int, max_words: Optional[int] = None) -> WindowWordSet:
    """Words belonging to every relation ball from some window index onward.

    Union over j of the intersection of the balls on [j, window end]; on a
    finite window the last tail dominates, which is exactly the honest
    content of a truncated liminf.
    """
    balls = window_balls(seq, lam, max_words)
    indices = sorted(balls)
    out: set[Word] = set()
    tail: Optional[set[Word]] = None
    for i in reversed(indices):
        cur = set(balls[i].words)
        tail = cur if tail is None else (tail & cur)
        out |= tail
    return WindowWordSet("liminf", frozenset(out), seq.window, lam)


def limsup_relations(seq: SequenceSpec, lam: int, max_words: Optional[int] = None) -> WindowWordSet:
    """Words appearing in some relation ball arbitrarily late in the window.

    Intersection over j of the union of the balls on [j, window end].
    """
    balls = window_balls(seq, lam, max_words)
    indices = sorted(balls)
    out: Optional[set[Word]] = None
    tail: set[Word] = set()
    for i in reversed(indices):
        tail |= set(balls[i].words)
        out = set(tail) if out is None else (out & tail)
    return WindowWordSet("limsup", frozenset(out or set()), seq.window, lam)


def converged_at(
    seq: SequenceSpec, lam: int, max_words: Optional[int] = None
) -> Optional[int]:
    """Least window index from which the relation balls are constant.

    Stability must be witnessed by at least one repeat, so a window whose
    final ball differs from its predecessor (or a one-index window) reports
    not-stabilized by returning None.
    """
    j, _ = _stabilization(seq, lam, max_words)
    return j


def stable_onset(balls: dict[int, RelationBall]) -> Optional[int]:
    """Least index from which the balls are constant, needing one repeat."""
    indices = sorted(balls)
    last = balls[indices[-1]]
    j = None
    for i in reversed(indices):
        if balls[i].same_words(last):
            j = i
        else:
            break
    if j is None or j == indices[-1]:
        return None
    return j


def _stabilization(seq, lam, max_words=None):
    balls = window_balls(seq, lam, max_words)
    return (stable_onset(balls), balls)


@dataclass(frozen=True)
class CompareVerdict:
    """Verdict of comparing a stabilized window tail against a limit candidate."""

    status: str  # "match" | "mismatch"
    stabilized_at: int
    lam: int
    window: tuple[int, int]
    witness: Optional[Word] = None
    witness_in_limit: Optional[bool] = None

    @property
    def matched(self) -> bool:
        return self.status == "match"


def limit_compare(
    seq: SequenceSpec,
    limit_mg: MarkedGroup,
    lam: int,
    max_words: Optional[int] = None,
) -> CompareVerdict:
    """Compare the stabilized tail relation ball with the candidate limit's."""
    sample = seq.at(seq.window[0])
    if sample.rank != limit_mg.rank:
        raise ValueError("rank mismatch between sequence and limit candidate")
    j, balls = _stabilization(seq, lam, max_words)
    if j is None:
        raise NotStabilizedError(
            f"{seq.name} did not stabilize at lambda={lam} in window {seq.window}"
        )
    tail = balls[max(balls)]
    limit_ball = rel_ball(limit_mg, lam, max_words)
    diff = tail.symmetric_difference(limit_ball)
    if not diff:
        return CompareVerdict("match", j, lam, seq.window)
    witness = diff[0]
    return CompareVerdict(
        "mismatch", j, lam, seq.window, witness, witness in limit_ball
    )


def ball_rel_correspondence(
    mg1: MarkedGroup, mg2: MarkedGroup, max_radius: int
) -> list[tuple[int, bool, bool]]:
    """Measured correspondence between Cayley-ball isomorphism and relation
    agreement, per radius.  No conversion constant is asserted; the rows are
    the record."""
    out = []
    for r in range(max_radius + 1):
        iso = ball_isomorphic(ball_graph(mg1, r), ball_graph(mg2, r))
        req = rel_ball(mg1, r) == rel_ball(mg2, r)
        out.append((r, iso, req))
    return out
