"""Executable instances of the limit-structure arguments: lifted markings,
kernel identification through windowed tails, centrality transfer, the
center formula, the five-candidate involution analysis, and abelian limits
of cyclic 2-groups.

The standard quaternion pipeline lifts the marked quaternion groups to
their semidirect covers ``sd4`` by appending the kernel generator
``t_n = (2, 2^(n-2))`` to the marking.  Words that land in the kernel at
every tail index identify, in the limit cover, the kernel of the limit
quotient; for the quaternion family that kernel is the two-element central
subgroup generated by ``(2, 2^(k-1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import groups as _groups
from . import marked as _marked
from . import words as _words
from .groups import INFINITE
from .marked import MarkedGroup, NotStabilizedError, SequenceSpec
from .words import Word


@dataclass(frozen=True)
class LiftedSequence:
    """Marked covers, kernels, and marked quotients over one index window,
    together with the candidate limits of both rows."""

    name: str
    window: tuple[int, int]
    cover_at: Callable[[int], MarkedGroup]
    kernel_at: Callable[[int], tuple]
    quotient_at: Callable[[int], MarkedGroup]
    limit_cover: MarkedGroup
    limit_quotient: MarkedGroup

    @property
    def indices(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def cover_sequence(self) -> SequenceSpec:
        return SequenceSpec(f"{self.name}-covers", self.cover_at, self.window)

    def quotient_sequence(self) -> SequenceSpec:
        return SequenceSpec(f"{self.name}-quotients", self.quotient_at, self.window)


def quaternion_lift(window: tuple[int, int], kernel_mode: str = "standard") -> LiftedSequence:
    """The lifted quaternion pipeline on a window of indices n.

    Covers are sd4 over Z_{2^(n-1)} marked (x, y, t_n) with
    t_n = (2, 2^(n-2)); quotients are the quaternion groups marked
    (x, y, 1).  ``kernel_mode`` picks the per-index kernel: "standard" is
    the pair generated by t_n, "trivial" the identity alone, "center" the
    full four-element center.
    """
    if kernel_mode not in ("standard", "trivial", "center"):
        raise ValueError(f"unknown kernel mode {kernel_mode!r}")
    if window[0] < 3:
        raise ValueError("quaternion lift needs indices n >= 3")

    def cover_at(n: int) -> MarkedGroup:
        g = _groups.Sd4(0, 2 ** (n - 1))
        t = (2, (), 2 ** (n - 2))
        return MarkedGroup(g, (g.generators["x"], g.generators["y"], t))

    def kernel_at(n: int) -> tuple:
        g = _groups.Sd4(0, 2 ** (n - 1))
        if kernel_mode == "trivial":
            return (g.identity,)
        if kernel_mode == "center":
            return tuple(g.center())
        return tuple(sorted((g.identity, (2, (), 2 ** (n - 2)))))

    def quotient_at(n: int) -> MarkedGroup:
        # the quotient marking is the canonical image of the cover marking;
        # kernel members collapse to the identity downstairs
        cov = cover_at(n)
        q = _groups.CentralQuotient(cov.group, kernel_at(n))
        return MarkedGroup(q, tuple(q._canon(s) for s in cov.marking), verify=False)

    cover_limit_group = _groups.Sd4(1, 2)
    s_limit = (
        cover_limit_group.generators["a"],   # the first marked generators gain infinite order
        cover_limit_group.generators["y"],
        (2, (0,), 1),                        # limit of the kernel generators t_n
    )
    limit_cover = MarkedGroup(cover_limit_group, s_limit)
    if kernel_mode == "standard":
        lq = _groups.LimitQuaternion(1, 1)
        limit_quotient = MarkedGroup(
            lq, (lq.generators["a"], lq.generators["y"], lq.identity)
        )
    elif kernel_mode == "trivial":
        limit_quotient = limit_cover
    else:
        q = _groups.CentralQuotient(cover_limit_group, tuple(cover_limit_group.center()))
        limit_quotient = MarkedGroup(
            q,
            tuple(q._canon(s) for s in s_limit),
            verify=False,
        )
    return LiftedSequence(
        f"quaternion-lift[{kernel_mode}]",
        window,
        cover_at,
        kernel_at,
        quotient_at,
        limit_cover,
        limit_quotient,
    )


def dihedral_lift(window: tuple[int, int]) -> LiftedSequence:
    """Dihedral analogue: the covers are the dihedral semidirect products
    themselves and every kernel is trivial."""

    def cover_at(n: int) -> MarkedGroup:
        g = _groups.Sd2(0, n)
        return MarkedGroup(g, (g.generators["r"], g.generators["s"]))

    def kernel_at(n: int) -> tuple:
        return (_groups.Sd2(0, n).identity,)

    limit_group = _groups.Sd2(1, 1)
    limit = MarkedGroup(limit_group, (limit_group.generators["a"], limit_group.generators["s"]))
    return LiftedSequence(
        "dihedral-lift", window, cover_at, kernel_at, cover_at, limit, limit
    )


# ---------------------------------------------------------------------------
# kernel identification


@dataclass(frozen=True)
class KernelReport:
    lam: int
    window: tuple[int, int]
    covers_stable_at: int
    quotients_stable_at: int
    cover_limit_matched: bool
    kernel_words: frozenset[Word]
    kernel_elements: tuple
    closed: bool
    inverse_closed: bool

    @property
    def size(self) -> int:
        return len(self.kernel_elements)


def kernel_identification(lifted: LiftedSequence, lam: int) -> KernelReport:
    """Identify the limit kernel from windowed tails.

    The words of length <= lam that land in the kernel at index i are
    exactly the relations of the marked quotient (the kernel generator is
    marked by the identity downstairs), so the stable tail of the quotient
    relation balls is the word-level kernel description; evaluating those
    words in the limit cover produces the kernel elements.  The supplied
    limit cover must itself match the stable cover tail, otherwise the
    evaluation would be against the wrong group.
    """
    cov_balls = _marked.window_balls(lifted.cover_sequence(), lam)
    quo_balls = _marked.window_balls(lifted.quotient_sequence(), lam)
    j_cov = _marked.stable_onset(cov_balls)
    j_quo = _marked.stable_onset(quo_balls)
    if j_cov is None or j_quo is None:
        raise NotStabilizedError(
            f"{lifted.name}: covers or quotients not stabilized at lambda={lam} "
            f"in window {lifted.window}"
        )
    last = lifted.window[1]
    limit_cover_ball = _marked.rel_ball(lifted.limit_cover, lam)
    cover_matched = cov_balls[last].same_words(limit_cover_ball)
    if not cover_matched:
        raise ValueError(
            f"{lifted.name}: the supplied limit cover does not match the stable "
            f"cover tail at lambda={lam}"
        )
    m_words = quo_balls[last]
    limit_group = lifted.limit_cover.group
    marking = lifted.limit_cover.marking
    elems = {limit_group.identity}
    elems.update(_words.evaluate(w, limit_group, marking) for w in m_words)
    kernel_elements = tuple(sorted(elems))
    closed = _groups.is_subgroup_witness(limit_group, kernel_elements)
    inverse_closed = all(limit_group._inv(g) in elems for g in kernel_elements)
    return KernelReport(
        lam,
        lifted.window,
        j_cov,
        j_quo,
        cover_matched,
        frozenset(m_words.words),
        kernel_elements,
        closed,
        inverse_closed,
    )


# ---------------------------------------------------------------------------
# centrality transfer


@dataclass(frozen=True)
class TransferCheck:
    test_word: Word
    commutator: Word
    tail_ok: bool          # the commutator vanishes at every tail index
    balls_isomorphic: bool  # tail cover balls match the limit cover ball
    limit_ok: bool         # the commutator vanishes in the limit cover

    @property
    def ok(self) -> bool:
        return self.tail_ok and self.balls_isomorphic and self.limit_ok


@dataclass(frozen=True)
class CentralityVerdict:
    word: Word
    in_kernel_words: bool
    checks: tuple[TransferCheck, ...]
    central: bool


def centrality_transfer_check(
    lifted: LiftedSequence,
    w: Word,
    test_words: Sequence[Word],
    lam: int,
) -> CentralityVerdict:
    """Transfer of commutation from the tail to the limit cover.

    For each test word v, the commutator [w, v] must vanish at every tail
    index, the cover balls of radius |[w, v]| must be isomorphic to the
    limit cover's, and the commutator must vanish in the limit itself.
    The verdict also reports whether w lies in the identified kernel words
    (a word outside them is a negative control, not an error).
    """
    report = kernel_identification(lifted, lam)
    tail_start = max(report.covers_stable_at, report.quotients_stable_at)
    tail = [i for i in lifted.indices if i >= tail_start]
    in_kernel = w in report.kernel_words
    limit_mg = lifted.limit_cover
    checks = []
    for v in test_words:
        c = _words.commutator(w, v)
        radius = max(len(c), 1)
        tail_ok = True
        for i in tail:
            mg = lifted.cover_at(i)
            if _words.evaluate(c, mg.group, mg.marking) != mg.group.identity:
                tail_ok = False
                break
        limit_ball = _marked.ball_graph(limit_mg, radius)
        balls_ok = all(
            _marked.ball_isomorphic(_marked.ball_graph(lifted.cover_at(i), radius), limit_ball)
            for i in tail
        )
        limit_ok = (
            _words.evaluate(c, limit_mg.group, limit_mg.marking)
            == limit_mg.group.identity
        )
        checks.append(TransferCheck(v, c, tail_ok, balls_ok, limit_ok))
    central = in_kernel and all(c.ok for c in checks)
    return CentralityVerdict(w, in_kernel, tuple(checks), central)


# ---------------------------------------------------------------------------
# center formula


@dataclass(frozen=True)
class CenterVerdict:
    descriptor: str
    expected: tuple
    computed: tuple
    matches: bool
    mode: str  # "exhaustive" | "bounded"


def center_formula_check(
    l: Optional[int] = None, k: Optional[int] = None, n: Optional[int] = None
) -> CenterVerdict:
    """The center of the cover is {(0,0), (2,0), (0, d/2), (2, d/2)}.

    ``n`` checks the finite cover sd4 over Z_{2^(n-1)} by exhaustion;
    ``(l, k)`` checks the infinite cover sd4(l, 2^k) by the structural
    formula cross-checked on a bounded box.
    """
    if n is not None:
        group = _groups.Sd4(0, 2 ** (n - 1))
        half = 2 ** (n - 2)
        expected = tuple(sorted((x, (), t) for x in (0, 2) for t in (0, half)))
        computed = tuple(sorted(group.center()))
        return CenterVerdict(
            group.descriptor, expected, computed, computed == expected, "exhaustive"
        )
    if l is None or k is None:
        raise ValueError("pass either n or both l and k")
    if l < 1:
        raise ValueError("the bounded check is for infinite covers; use n for finite ones")
    group = _groups.Sd4(l, 2**k)
    half = 2 ** (k - 1)
    zeros = (0,) * l
    expected = tuple(sorted((x, zeros, t) for x in (0, 2) for t in (0, half)))
    computed = tuple(sorted(group.center()))  # formula + box cross-check inside
    return CenterVerdict(
        group.descriptor, expected, computed, computed == expected, "bounded"
    )


# ---------------------------------------------------------------------------
# the five kernel candidates


@dataclass(frozen=True)
class CaseReport:
    case_index: int  # 1..5 in the fixed candidate order
    kernel: tuple
    involution_count: object  # int or math.inf
    witnesses: tuple[tuple, ...]  # quotient elements verified to be involutions
    unique_involution: bool
    notes: tuple[str, ...] = ()


def kernel_candidates(l: int, k: int) -> list[tuple]:
    """The five subgroups of the cover's center, in the fixed order:
    trivial, <(2,0)>, <(0, 2^(k-1))>, <(2, 2^(k-1))>, the whole center."""
    zeros = (0,) * l
    half = 2 ** (k - 1)
    ident = (0, zeros, 0)
    return [
        (ident,),
        tuple(sorted((ident, (2, zeros, 0)))),
        tuple(sorted((ident, (0, zeros, half)))),
        tuple(sorted((ident, (2, zeros, half)))),
        tuple(sorted(((0, zeros, 0), (2, zeros, 0), (0, zeros, half), (2, zeros, half)))),
    ]


def case_analysis(l: int, k: int) -> list[CaseReport]:
    """Involution census of the cover modulo each central candidate.

    Only the candidate generated by (2, 2^(k-1)) produces a unique
    involution; the census is exhaustive for l = 0 and exact-by-reduction
    for l >= 1 (squaring doubles the free part, so involution cosets have
    free part zero unless the whole odd stratum collapses to involutions).
    For k = 1 the quarter-torsion witnesses do not exist and the report
    says so instead of asserting them.
    """
    if l < 0 or k < 1:
        raise ValueError("need l >= 0 and k >= 1")
    cover = _groups.Sd4(l, 2**k)
    zeros = (0,) * l
    half = 2 ** (k - 1)
    quarter = 2 ** (k - 2) if k >= 2 else None
    named = {
        1: [(2, zeros, 0), (0, zeros, half), (2, zeros, half)],
        2: [(1, zeros, 0), (0, zeros, half)],
        3: [(2, zeros, 0)] + ([(0, zeros, quarter)] if quarter is not None else []),
        4: [(0, zeros, half)],
        5: [(1, zeros, 0)] + ([(0, zeros, quarter)] if quarter is not None else []),
    }
    reports = []
    for idx, kernel in enumerate(kernel_candidates(l, k), start=1):
        quotient = _groups.CentralQuotient(cover, kernel)
        count, _reps = quotient.involution_census()
        witnesses = []
        for g in named[idx]:
            c = quotient._canon(g)
            is_inv = c != quotient.identity and quotient._mul(c, c) == quotient.identity
            witnesses.append((c, is_inv))
        notes = []
        if k == 1 and idx in (3, 5):
            notes.append("k=1: the quarter-torsion witness is undefined")
        if count is INFINITE:
            notes.append("odd stratum collapses to involutions; infinitely many")
        reports.append(
            CaseReport(
                idx,
                kernel,
                count,
                tuple(witnesses),
                count == 1,
                tuple(notes),
            )
        )
    return reports


# ---------------------------------------------------------------------------
# abelian limits of cyclic 2-groups


def abelian_limit_check(
    k: int,
    window: tuple[int, int],
    lam: int,
    single_generator: bool = False,
) -> _marked.CompareVerdict:
    """Marked cyclic 2-groups converge to Z (+) Z_{2^k}.

    The sequence is (Z_{2^n}, (1, 2^(n-k))) against the limit
    (Z (+) Z_{2^k}, ((1,0), (0,1))).  With ``single_generator`` the
    degenerate one-generator check (Z_{2^n}, (1)) against (Z, (1)) runs
    instead.
    """
    if single_generator:
        seq = _marked.cyclic2_single_sequence(window)
        limit_group = _groups.FreeAbelianCyclic(1, 1)
        limit = MarkedGroup(limit_group, (((1,), 0),))
        return _marked.limit_compare(seq, limit, lam)
    if k < 1:
        raise ValueError("k must be >= 1")
    seq = _marked.cyclic2_sequence(k, window)
    limit_group = _groups.FreeAbelianCyclic(1, 2**k)
    limit = MarkedGroup(limit_group, (((1,), 0), ((0,), 1)))
    return _marked.limit_compare(seq, limit, lam)


# ---------------------------------------------------------------------------
# quotient limits


@dataclass(frozen=True)
class QuotientLimitVerdict:
    matches: bool
    lam: int
    witness: Optional[Word]
    kernel: tuple
    quotient_stable_at: int


def quotient_limit_check(lifted: LiftedSequence, lam: int) -> QuotientLimitVerdict:
    """The limit of the quotients is the quotient of the limit.

    Left side: the relation ball of the limit quotient candidate.  Right
    side: the words of length <= lam whose value in the limit cover lies in
    the identified kernel.  Exact set equality is required.
    """
    report = kernel_identification(lifted, lam)
    kernel = set(report.kernel_elements)
    limit_cover = lifted.limit_cover
    left = _marked.rel_ball(lifted.limit_quotient, lam)
    group = limit_cover.group
    marking = limit_cover.marking
    right = set()
    spec = _words.BallSpec(limit_cover.rank, lam)
    for w in _words.enumerate_reduced(spec):
        if w.is_identity():
            continue
        if _words.evaluate(w, group, marking) in kernel:
            right.add(w)
    left_set = set(left.words)
    if left_set == right:
        return QuotientLimitVerdict(True, lam, None, report.kernel_elements, report.quotients_stable_at)
    witness = min(left_set ^ right, key=lambda w: w.shortlex_key)
    return QuotientLimitVerdict(False, lam, witness, report.kernel_elements, report.quotients_stable_at)
