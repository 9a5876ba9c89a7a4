"""Finite presentations, exhaustive homomorphism search, and residual
witnesses for the quaternion-limit family.

``presentation_of_limit(l, k)`` is a reconstructed presentation of the
limit group ``limitQ(l,k)`` on generators ``y, a1..al, t``; it is validated
computationally (every relator vanishes under the standard images, and for
l = 0 the presented group is isomorphic to the quaternion group of order
2^(k+1)), not proved, and all outputs label it as a reconstruction.

A residual witness for a marked limit group and radius R is a finite
quaternion group together with a homomorphism that is injective on the
radius-R ball; it certifies that the marked distance from the limit group
to that quaternion marking is at most e^-R, which the search re-verifies
by comparing relation balls.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import groups as _groups
from . import marked as _marked
from . import words as _words
from .marked import MarkedGroup
from .words import Word

PRESENTATION_NOTE = "reconstructed presentation; relators machine-checked, not proved"


@dataclass(frozen=True)
class Presentation:
    """Named generators and freely reduced, nonempty relator words."""

    names: tuple[str, ...]
    relators: tuple[Word, ...]
    note: str = ""

    def __post_init__(self):
        if not self.names:
            raise ValueError("need at least one generator")
        for r in self.relators:
            if r.rank != len(self.names):
                raise ValueError("relator rank does not match the generator count")
            if r.is_identity():
                raise ValueError("relators must be nonempty")

    @property
    def rank(self) -> int:
        return len(self.names)

    def __str__(self) -> str:
        rels = ", ".join(_words.format_word(r, self.names) for r in self.relators)
        return f"< {' '.join(self.names)} | {rels} >"


@dataclass(frozen=True)
class Homomorphism:
    """A generator-image assignment satisfying every relator."""

    presentation: Presentation
    group: _groups.Group
    images: tuple

    def image_of_name(self, name: str):
        return self.images[self.presentation.names.index(name)]

    def verify(self) -> bool:
        """Re-check the relator condition by direct evaluation."""
        ident = self.group.identity
        return all(
            _words.evaluate(r, self.group, self.images) == ident
            for r in self.presentation.relators
        )

    def __str__(self) -> str:
        pairs = ", ".join(
            f"{n} -> {_groups.format_element(g)}"
            for n, g in zip(self.presentation.names, self.images)
        )
        return "{" + pairs + "}"


def presentation_of_limit(l: int, k: int) -> Presentation:
    """Presentation of limitQ(l,k) on y, a1..al, t.

    Relators: the a_i commute with each other and with t, conjugation by y
    inverts every a_i and t, t has order dividing 2^k, and y^2 equals
    t^(2^(k-1)).
    """
    if l < 0 or k < 1:
        raise ValueError("need l >= 0 and k >= 1")
    names = ("y",) + tuple(f"a{i+1}" for i in range(l)) + ("t",)
    rank = l + 2
    y = 1
    t = rank
    a = lambda i: 1 + i  # a_i at slot i+1 (1-based letters)
    rel: list[Word] = []
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            rel.append(Word(rank, [a(i), a(j), -a(i), -a(j)]))
        rel.append(Word(rank, [a(i), t, -a(i), -t]))
        rel.append(Word(rank, [y, a(i), -y, a(i)]))
    rel.append(Word(rank, [y, t, -y, t]))
    rel.append(Word(rank, [t] * (2**k)))
    rel.append(Word(rank, [y, y] + [-t] * (2 ** (k - 1))))
    return Presentation(names, tuple(rel), note=PRESENTATION_NOTE)


def standard_images(pres: Presentation, limit: _groups.LimitQuaternion) -> tuple:
    """The standard generator tuple of the limit group, ordered like the presentation."""
    return tuple(limit.generators[name] for name in pres.names)


# ---------------------------------------------------------------------------
# homomorphism search


def _power_bounds(pres: Presentation) -> dict[int, int]:
    """Per-generator order bounds derived from single-generator relators g^n."""
    bounds: dict[int, int] = {}
    for r in pres.relators:
        letters = set(r.letters)
        if len(letters) == 1:
            (v,) = letters
            n = len(r)
            g = abs(v)
            bounds[g] = min(bounds.get(g, n), n)
    return bounds


def iter_homs(pres: Presentation, group: _groups.Group) -> Iterator[Homomorphism]:
    """All homomorphisms into a finite group, in deterministic order.

    Backtracking assigns generator images in presentation order; each
    relator is checked as soon as all of its generators have images, and
    single-generator power relators prune candidate images by order.
    """
    if not group.is_finite:
        raise _groups.InfiniteGroupError("homomorphism search needs a finite target")
    elems = group.elements()
    bounds = _power_bounds(pres)
    rank = pres.rank
    pools = []
    for g in range(1, rank + 1):
        if g in bounds:
            pools.append([e for e in elems if bounds[g] % group.order_of(e) == 0])
        else:
            pools.append(elems)
    by_stage: list[list[Word]] = [[] for _ in range(rank + 1)]
    for r in pres.relators:
        stage = max(abs(v) for v in r.letters)
        by_stage[stage].append(r)
    ident = group.identity
    images: list = [None] * rank

    def ok_at(stage: int) -> bool:
        prefix = tuple(images[:stage])
        for r in by_stage[stage]:
            if _words.evaluate(_truncate(r, stage), group, prefix) != ident:
                return False
        return True

    def _truncate(r: Word, stage: int) -> Word:
        # relators at this stage only use letters <= stage
        return Word(stage, r.letters, _reduced=True)

    def assign(stage: int) -> Iterator[Homomorphism]:
        if stage == rank:
            yield Homomorphism(pres, group, tuple(images))
            return
        for cand in pools[stage]:
            images[stage] = cand
            if ok_at(stage + 1):
                yield from assign(stage + 1)
        images[stage] = None

    yield from assign(0)


def homs(pres: Presentation, group: _groups.Group) -> list[Homomorphism]:
    """All homomorphisms, materialized."""
    return list(iter_homs(pres, group))


# ---------------------------------------------------------------------------
# residual witnesses


@dataclass(frozen=True)
class CollisionReport:
    """Why one candidate homomorphism failed on the ball."""

    hom: Homomorphism
    pair: tuple  # (ball element, ball element) with equal images
    image: object


@dataclass(frozen=True)
class FailedLevel:
    n: int
    homs_tried: int
    first_collision: Optional[CollisionReport]


@dataclass(frozen=True)
class WitnessResult:
    found: bool
    radius: int
    n: Optional[int]
    hom: Optional[Homomorphism]
    image_marking: Optional[tuple]
    ball_size: int
    distance_verified: Optional[bool]
    failures: tuple[FailedLevel, ...]
    note: str = PRESENTATION_NOTE


def _marking_words(pres: Presentation, limit: _groups.LimitQuaternion, marking) -> list[Word]:
    """Each marking entry as a word in the presentation generators.

    Supported entries: standard generators, their inverses, the identity.
    """
    table = {}
    for slot, name in enumerate(pres.names, 1):
        g = limit.generators[name]
        table.setdefault(g, Word(pres.rank, [slot]))
        table.setdefault(limit._inv(g), Word(pres.rank, [-slot]))
    table.setdefault(limit.identity, Word(pres.rank, ()))
    out = []
    for s in marking:
        if s not in table:
            raise ValueError(
                f"marking element {s!r} is not a standard generator of {limit.descriptor}"
            )
        out.append(table[s])
    return out


def residual_witness(
    limit_mg: MarkedGroup, radius: int, n_max: int
) -> WitnessResult:
    """Smallest quaternion group receiving a homomorphism injective on the ball.

    Also re-verifies the distance corollary for the found witness: the
    radius-R relation balls of the limit marking and of the image marking
    agree.  Injectivity is established by pairwise comparison over the
    explicit ball element list, independent of the search order.
    """
    limit = limit_mg.group
    if not isinstance(limit, _groups.LimitQuaternion):
        raise ValueError("residual witnesses are searched for limitQ groups")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    pres = presentation_of_limit(limit.l, limit.k)
    mark_words = _marking_words(pres, limit, limit_mg.marking)
    graph = _marked.ball_graph(limit_mg, radius)
    ball_words = graph.vertex_words
    failures: list[FailedLevel] = []
    for n in range(3, n_max + 1):
        target = _groups.Quaternion(n)
        tried = 0
        first_collision = None
        for hom in iter_homs(pres, target):
            tried += 1
            image_marking = tuple(
                _words.evaluate(w, target, hom.images) for w in mark_words
            )
            images = [
                _words.evaluate(w, target, image_marking) for w in ball_words
            ]
            collision = _first_collision(images, graph.vertices)
            if collision is None:
                mg_image = MarkedGroup(target, image_marking, verify=False)
                dist_ok = _marked.rel_ball(limit_mg, radius) == _marked.rel_ball(
                    mg_image, radius
                )
                return WitnessResult(
                    True,
                    radius,
                    n,
                    hom,
                    image_marking,
                    len(ball_words),
                    dist_ok,
                    tuple(failures),
                )
            if first_collision is None:
                first_collision = CollisionReport(hom, collision[0], collision[1])
        failures.append(FailedLevel(n, tried, first_collision))
    return WitnessResult(
        False, radius, None, None, None, len(ball_words), None, tuple(failures)
    )


def _first_collision(images, vertices):
    seen: dict = {}
    for v, img in zip(vertices, images):
        if img in seen:
            return ((seen[img], v), img)
        seen[img] = v
    return None


@dataclass(frozen=True)
class WitnessTable:
    limit_descriptor: str
    marking_text: str
    n_max: int
    rows: tuple[WitnessResult, ...]
    note: str = PRESENTATION_NOTE

    @property
    def all_found(self) -> bool:
        return all(r.found for r in self.rows)

    def nondecreasing(self) -> bool:
        ns = [r.n for r in self.rows if r.found]
        return all(a <= b for a, b in zip(ns, ns[1:]))

    def write_csv(self, fp) -> None:
        writer = csv.writer(fp)
        writer.writerow(
            ["radius", "n", "generator_images", "ball_size", "distance_verified", "note"]
        )
        for r in self.rows:
            writer.writerow(
                [
                    r.radius,
                    r.n if r.found else "exhausted",
                    str(r.hom) if r.found else "",
                    r.ball_size,
                    r.distance_verified if r.found else "",
                    self.note,
                ]
            )


def fully_residual_check(
    limit_mg: MarkedGroup, radius_list: Sequence[int], n_max: int
) -> WitnessTable:
    """Residual witnesses for each radius; exhaustion is recorded, not fatal."""
    rows = tuple(residual_witness(limit_mg, r, n_max) for r in sorted(radius_list))
    return WitnessTable(
        limit_mg.descriptor_text, limit_mg.marking_text, n_max, rows
    )


# ---------------------------------------------------------------------------
# presentation text format

_PRES = re.compile(r"^\s*<\s*(.*?)\s*\|\s*(.*?)\s*>\s*$")


def parse_presentation(text: str) -> Presentation:
    """Parse ``< y t | t^4, y t y^-1 t, y^2 t^-2 >``."""
    mt = _PRES.match(text)
    if not mt:
        raise ValueError(f"cannot parse presentation {text!r}")
    names = tuple(mt.group(1).split())
    if not names:
        raise ValueError("presentation needs generators")
    relators = tuple(
        _words.parse_word(tok.strip(), names=names)
        for tok in mt.group(2).split(",")
        if tok.strip()
    )
    return Presentation(names, relators)
