"""Universal sentences over the group language, checked by brute force.

The accepted fragment is deliberately small: universally quantified
conjunctions of clauses, each clause an implication whose antecedent is a
conjunction of word equations ``w(x1..xv) = 1`` and whose consequent is a
disjunction of word equations and variable equalities.  Both library
sentences live in this fragment, and it is decidable over finite groups by
exhausting all variable tuples.

On infinite groups only bounded checking is offered: tuples are drawn from
a ball around the identity with respect to the standard marking, so "no
counterexample" is always a radius-relative verdict.  Window classification
of a sentence along a family of finite groups is likewise explicitly
window-relative; no ultrafilter object exists anywhere here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Optional, Sequence

from . import marked as _marked
from . import words as _words
from .marked import MarkedGroup, SequenceSpec
from .words import Word

LIBRARY_VERSION = "1"


@dataclass(frozen=True)
class Clause:
    """(and of antecedent equations) -> (or of consequent equations).

    Every equation is a word that must evaluate to the identity.
    """

    antecedent: tuple[Word, ...]
    consequent: tuple[Word, ...]


@dataclass(frozen=True)
class UniversalSentence:
    variables: int
    clauses: tuple[Clause, ...]
    name: str = ""
    library_version: str = ""

    def __post_init__(self):
        if self.variables < 1:
            raise ValueError("need at least one variable")
        if not self.clauses:
            raise ValueError("need at least one clause")
        for cl in self.clauses:
            for w in cl.antecedent + cl.consequent:
                if w.rank != self.variables:
                    raise ValueError("equation rank does not match the variable count")

    def __str__(self) -> str:
        names = _var_names(self.variables)
        parts = []
        for cl in self.clauses:
            cons = " | ".join(_format_equation(w, names) for w in cl.consequent)
            if cl.antecedent:
                ant = " & ".join(_format_equation(w, names) for w in cl.antecedent)
                parts.append(f"({ant}) -> ({cons})")
            else:
                parts.append(cons)
        return f"forall {' '.join(names)} : " + " ; ".join(parts)


def _var_names(v: int) -> list[str]:
    base = ["x", "y", "z", "u", "w"]
    return [base[i] if i < len(base) else f"x{i+1}" for i in range(v)]


def _format_equation(w: Word, names: Sequence[str]) -> str:
    if len(w) == 2 and w.letters[0] > 0 and w.letters[1] < 0 and w.letters[0] != -w.letters[1]:
        return f"{names[w.letters[0] - 1]}={names[-w.letters[1] - 1]}"
    return f"{_words.format_word(w, names)}=1"


# ---------------------------------------------------------------------------
# library


def unique_involution() -> UniversalSentence:
    """forall x y : (x^2=1 & y^2=1) -> (x=1 | y=1 | x=y)."""
    w = lambda letters: Word(2, letters)
    return UniversalSentence(
        2,
        (
            Clause(
                antecedent=(w([1, 1]), w([2, 2])),
                consequent=(w([1]), w([2]), w([1, -2])),
            ),
        ),
        name="unique-involution",
        library_version=LIBRARY_VERSION,
    )


def torsion_free(p: int) -> UniversalSentence:
    """forall x : x^p=1 -> x=1."""
    if p < 1:
        raise ValueError("exponent must be positive")
    return UniversalSentence(
        1,
        (Clause(antecedent=(Word(1, [1] * p),), consequent=(Word(1, [1]),)),),
        name=f"torsion-free:{p}",
        library_version=LIBRARY_VERSION,
    )


def get_sentence(name: str) -> UniversalSentence:
    """Look up a library sentence by name, or parse free text."""
    if name == "unique-involution":
        return unique_involution()
    mt = re.match(r"^torsion-free:(\d+)$", name)
    if mt:
        return torsion_free(int(mt.group(1)))
    if name.strip().startswith("forall"):
        return parse_sentence(name)
    raise ValueError(f"unknown sentence {name!r}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class HoldsResult:
    holds: bool
    counterexample: Optional[tuple]
    domain_note: str = "all elements"

    def __bool__(self) -> bool:
        return self.holds


def _word_value(w: Word, group, xs, inv_cache):
    e = group.identity
    mul = group._mul
    for v in w.letters:
        e = mul(e, xs[v - 1] if v > 0 else inv_cache[-v - 1])
    return e


def _clause_true(cl: Clause, group, xs, inv_cache) -> bool:
    ident = group.identity
    for w in cl.antecedent:
        if _word_value(w, group, xs, inv_cache) != ident:
            return True
    for w in cl.consequent:
        if _word_value(w, group, xs, inv_cache) == ident:
            return True
    return False


def holds(group, sentence: UniversalSentence, domain: Optional[Sequence] = None) -> HoldsResult:
    """Exhaustive truth over all variable tuples (or over a closed sub-domain).

    The counterexample, when one exists, is the first failing tuple in the
    deterministic element order.
    """
    if domain is None:
        elems = group.elements()
        note = "all elements"
    else:
        elems = list(domain)
        note = f"domain of {len(elems)} elements"
    inv_of = {g: group._inv(g) for g in elems}
    for xs in _iproduct(elems, repeat=sentence.variables):
        inv_cache = tuple(inv_of[x] for x in xs)
        for cl in sentence.clauses:
            if not _clause_true(cl, group, xs, inv_cache):
                return HoldsResult(False, xs, note)
    return HoldsResult(True, None, note)


@dataclass(frozen=True)
class BoundedResult:
    no_counterexample: bool
    counterexample: Optional[tuple]
    radius: int

    def __bool__(self) -> bool:
        return self.no_counterexample


def holds_bounded(
    group, sentence: UniversalSentence, radius: int, marking: Optional[tuple] = None
) -> BoundedResult:
    """Check over all tuples from the radius-R ball around the identity.

    A counterexample is conclusive; its absence only covers the ball.
    """
    mark = marking if marking is not None else group.standard_marking()
    ball = _marked._ball_elements(group, mark, radius)
    res = holds(group, sentence, domain=ball)
    return BoundedResult(res.holds, res.counterexample, radius)


@dataclass(frozen=True)
class EventualTruth:
    sentence_name: str
    per_index: tuple[tuple[int, bool], ...]
    failure_indices: tuple[int, ...]
    window: tuple[int, int]

    @property
    def true_everywhere(self) -> bool:
        return not self.failure_indices


def eventual_truth(seq: SequenceSpec, sentence: UniversalSentence) -> EventualTruth:
    """Truth value of the sentence at every (finite) group in the window."""
    rows = []
    failures = []
    for i in seq.indices:
        mg = seq.at(i)
        ok = holds(mg.group, sentence).holds
        rows.append((i, ok))
        if not ok:
            failures.append(i)
    return EventualTruth(sentence.name or str(sentence), tuple(rows), tuple(failures), seq.window)


@dataclass(frozen=True)
class TransferReport:
    """Universal sentences surviving the whole window must hold in the limit.

    ``consistent`` is False only on a fatal inconsistency: a sentence true at
    every window index whose bounded check in the limit found a
    counterexample.
    """

    lam: int
    radius: int
    rows: tuple[tuple[str, bool, Optional[bool]], ...]  # (name, window_true, limit_ok)
    consistent: bool
    stabilized_at: int


def universal_transfer_check(
    seq: SequenceSpec,
    limit_mg: MarkedGroup,
    sentences: Sequence[UniversalSentence],
    radius: int,
    lam: int,
) -> TransferReport:
    """Instance check that window-wide truth transfers to the limit group."""
    verdict = _marked.limit_compare(seq, limit_mg, lam)
    if not verdict.matched:
        raise ValueError(
            "sequence tail does not match the limit candidate; transfer check is vacuous"
        )
    rows = []
    consistent = True
    for sigma in sentences:
        ev = eventual_truth(seq, sigma)
        if not ev.true_everywhere:
            rows.append((sigma.name or str(sigma), False, None))
            continue
        bounded = holds_bounded(limit_mg.group, sigma, radius, marking=limit_mg.marking)
        ok = bounded.no_counterexample
        rows.append((sigma.name or str(sigma), True, ok))
        if not ok:
            consistent = False
    return TransferReport(lam, radius, tuple(rows), consistent, verdict.stabilized_at)


# ---------------------------------------------------------------------------
# parsing

_EQ = re.compile(r"^(.*?)=(.*)$")


def parse_sentence(text: str) -> UniversalSentence:
    """Parse ``forall x y : (x^2=1 & y^2=1) -> (x=1 | y=1 | x=y)``.

    Multiple clauses are separated by ``;``.  Only this universal clause
    shape is accepted; anything else is rejected at parse time.
    """
    text = text.strip()
    if not text.startswith("forall"):
        raise ValueError("sentence must start with 'forall'")
    head, _, body = text[len("forall"):].partition(":")
    names = head.split()
    if not names or len(set(names)) != len(names):
        raise ValueError("bad variable list")
    clauses = []
    for part in body.split(";"):
        part = part.strip()
        if not part:
            raise ValueError("empty clause")
        if "->" in part:
            ant_text, arrow, cons_text = part.partition("->")
            antecedent = tuple(
                _parse_equation(tok, names) for tok in _split_atoms(ant_text, "&")
            )
        else:
            cons_text = part
            antecedent = ()
        consequent = tuple(
            _parse_equation(tok, names) for tok in _split_atoms(cons_text, "|")
        )
        clauses.append(Clause(antecedent, consequent))
    return UniversalSentence(len(names), tuple(clauses), name=text)


def _split_atoms(text: str, sep: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    atoms = [t.strip() for t in text.split(sep)]
    if any(not t for t in atoms):
        raise ValueError(f"empty atom in {text!r}")
    return atoms


def _parse_equation(token: str, names: Sequence[str]) -> Word:
    mt = _EQ.match(token)
    if not mt:
        raise ValueError(f"atom {token!r} is not an equation")
    lhs, rhs = mt.group(1).strip(), mt.group(2).strip()
    wl = _parse_side(lhs, names)
    wr = _parse_side(rhs, names)
    return wl * ~wr


def _parse_side(side: str, names: Sequence[str]) -> Word:
    if side == "1":
        return Word(len(names), ())
    return _words.parse_word(side, names=names)
