"""The package's verification suite: ten exact, desk-scale criteria.

Each criterion is a function returning a :class:`CriterionResult`; the CLI
``verify-all`` subcommand and the acceptance tests both run these, so there
is a single source of truth for what "working" means.  Every check is an
exact set or integer comparison; there are no tolerances to tune.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

from . import groups as _groups
from . import logic as _logic
from . import marked as _marked
from . import residual as _residual
from . import structure as _structure
from . import words as _words
from .marked import MarkedGroup
from .words import Word


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{self.number:2d}/10] {status}  {self.name} ({self.seconds:.1f}s): {self.detail}"


def _result(number: int, name: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure with the reason recorded
        passed, detail = False, f"exception: {exc!r}"
    return CriterionResult(number, name, passed, detail, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# 1. dual-oracle relation balls


def _standard_suite() -> list[MarkedGroup]:
    descriptors = (
        [f"quaternion({n})" for n in range(3, 7)]
        + [f"dihedral({n})" for n in range(4, 13)]
        + [f"sd4({n})" for n in range(3, 7)]
        + ["limitQ(1,1)", "limitQ(0,2)"]
    )
    return [_marked.std_marked(d) for d in descriptors]


def criterion_1() -> CriterionResult:
    def run():
        checked = 0
        for mg in _standard_suite():
            for lam in range(0, 9):
                a = _marked.rel_ball(mg, lam)
                b = _marked.rel_ball_bfs(mg, lam)
                if a != b:
                    return (
                        False,
                        f"algorithms disagree on {mg} at lambda={lam}",
                    )
                checked += 1
        return True, f"{checked} (group, lambda) pairs, exact set equality"

    return _result(1, "dual-oracle relation balls", run)


# ---------------------------------------------------------------------------
# 2. quaternion construction soundness


def criterion_2() -> CriterionResult:
    def run():
        for n in range(3, 8):
            cover = _groups.Sd4(0, 2 ** (n - 1))
            t = (2, (), 2 ** (n - 2))
            q = _groups.central_quotient(cover, (cover.identity, t))
            if q.size() != 2**n:
                return False, f"order of the quotient at n={n} is {q.size()}"
            x = q._canon((0, (), 1))
            y = q._canon((1, (), 0))
            rels = [
                Word(2, [1] * 2 ** (n - 1)),          # x^(2^(n-1))
                Word(2, [2] * 4),                      # y^4
                Word(2, [2, 1, -2, 1]),                # y x y^-1 x
                Word(2, [1] * 2 ** (n - 2) + [-2, -2]),  # x^(2^(n-2)) y^-2
            ]
            for w in rels:
                if _words.evaluate(w, q, (x, y)) != q.identity:
                    return False, f"relation {w} fails at n={n}"
            if len(q.involutions()) != 1:
                return False, f"involution count at n={n} is {len(q.involutions())}"
        return True, "orders, all four relations, unique involution for n=3..7"

    return _result(2, "quaternion construction soundness", run)


# ---------------------------------------------------------------------------
# 3. the quaternion-limit instance


def criterion_3() -> CriterionResult:
    def run():
        lam = 10
        limit = _marked.mark("limitQ(1,1)", "a,y")
        limit_ball = _marked.rel_ball(limit, lam)
        for n in range(6, 10):
            ball = _marked.rel_ball(_marked.std_marked(f"quaternion({n})"), lam)
            if not ball.same_words(limit_ball):
                return False, f"relation balls differ at n={n}"
        for n in (3, 4, 5):
            ball = _marked.rel_ball(_marked.std_marked(f"quaternion({n})"), lam)
            diff = ball.symmetric_difference(limit_ball)
            expected = Word(2, [1] * 2 ** (n - 2) + [-2, -2])
            if expected not in diff:
                return False, f"named witness missing from the difference at n={n}"
            if n in (3, 4):
                shortest = min(len(w) for w in diff)
                if shortest != 2 ** (n - 2) + 2:
                    return False, f"shorter difference than the witness at n={n}"
        return True, "equality for n=6..9; witness x^(2^(n-2)) y^-2 for n=3..5, shortest for n=3,4"

    return _result(3, "quaternion-limit instance at lambda=10", run)


# ---------------------------------------------------------------------------
# 4. kernel identification


def criterion_4() -> CriterionResult:
    def run():
        lifted = _structure.quaternion_lift((5, 9))
        report = _structure.kernel_identification(lifted, 8)
        if not report.cover_limit_matched:
            return False, "cover tail does not match the limit cover"
        if report.size != 2:
            return False, f"kernel has {report.size} elements"
        nonid = [g for g in report.kernel_elements if g != (0, (0,), 0)]
        if nonid != [(2, (0,), 1)]:
            return False, f"kernel nonidentity element is {nonid}"
        if not (report.closed and report.inverse_closed):
            return False, "kernel is not subgroup-closed"
        return True, (
            f"two-element kernel with nonidentity (2,(0),1); covers stable at "
            f"{report.covers_stable_at}, quotients at {report.quotients_stable_at}"
        )

    return _result(4, "kernel identification on the lifted window", run)


# ---------------------------------------------------------------------------
# 5. five-candidate involution analysis


def criterion_5() -> CriterionResult:
    def run():
        for l, k in ((0, 3), (1, 2), (1, 3)):
            reports = _structure.case_analysis(l, k)
            flags = [r.unique_involution for r in reports]
            if flags != [False, False, False, True, False]:
                return False, f"unique-involution pattern {flags} at (l,k)=({l},{k})"
            c1, c2, c3, c4, c5 = reports
            if c1.involution_count < 3 or (l == 0 and c1.involution_count != 3):
                return False, f"case one count {c1.involution_count} at (l,k)=({l},{k})"
            for rep in (c2, c3, c5):
                if rep.involution_count < 2:
                    return False, f"case {rep.case_index} count too small at ({l},{k})"
            if c4.involution_count != 1:
                return False, f"case four count {c4.involution_count} at ({l},{k})"
            for rep in reports:
                if not all(ok for _, ok in rep.witnesses):
                    return False, f"witness fails in case {rep.case_index} at ({l},{k})"
        return True, "verdict pattern and named witnesses for (0,3), (1,2), (1,3)"

    return _result(5, "five-candidate involution analysis", run)


# ---------------------------------------------------------------------------
# 6. center formula


def criterion_6() -> CriterionResult:
    def run():
        for n in range(3, 7):
            verdict = _structure.center_formula_check(n=n)
            if not verdict.matches:
                return False, f"center mismatch on {verdict.descriptor}"
        return True, "brute-force centers match the four-element formula for n=3..6"

    return _result(6, "center formula on the covers", run)


# ---------------------------------------------------------------------------
# 7. residual witnesses


def criterion_7() -> CriterionResult:
    def run():
        mg = _marked.mark("limitQ(1,1)", "a,y")
        table = _residual.fully_residual_check(mg, (0, 1, 2, 3), 8)
        if not table.all_found:
            return False, "some radius exhausted the search"
        if not table.nondecreasing():
            return False, "witness n decreases with the radius"
        for row in table.rows:
            if row.distance_verified is not True:
                return False, f"distance bound unverified at R={row.radius}"
        r2 = next(r for r in table.rows if r.radius == 2)
        if r2.n != 4:
            return False, f"minimal witness at R=2 is n={r2.n}"
        if not any(f.n == 3 and f.first_collision is not None for f in r2.failures):
            return False, "no recorded collision for n=3 at R=2"
        # every candidate into the order-8 group that separates the radius-1
        # ball collides the squares of the two marked generators
        limit = mg.group
        pres = _residual.presentation_of_limit(1, 1)
        q8 = _groups.Quaternion(3)
        graph1 = _marked.ball_graph(mg, 1)
        a_sq = Word(2, [1, 1])
        y_sq = Word(2, [2, 2])
        central = (0, 2 ** (3 - 2))
        injective_on_b1 = 0
        for hom in _residual.iter_homs(pres, q8):
            image_marking = (hom.image_of_name("a1"), hom.image_of_name("y"))
            images = [
                _words.evaluate(w, q8, image_marking) for w in graph1.vertex_words
            ]
            if len(set(images)) != len(images):
                continue
            injective_on_b1 += 1
            va = _words.evaluate(a_sq, q8, image_marking)
            vy = _words.evaluate(y_sq, q8, image_marking)
            if not (va == vy == central):
                return False, "a radius-1-injective candidate avoids the square collision"
        if injective_on_b1 == 0:
            return False, "no radius-1-injective candidate into the order-8 group"
        return True, (
            "witnesses for R=0..3 with verified distance bounds; R=2 minimal n=4, "
            f"n=3 blocked by the square collision ({injective_on_b1} candidates checked)"
        )

    return _result(7, "residual witnesses for limitQ(1,1)", run)


# ---------------------------------------------------------------------------
# 8. sentence suite


def criterion_8() -> CriterionResult:
    def run():
        ui = _logic.unique_involution()
        for n in range(3, 10):
            if not _logic.holds(_groups.Quaternion(n), ui).holds:
                return False, f"unique involution fails on quaternion({n})"
        for n in (2, 4, 6, 8):
            if _logic.holds(_groups.Dihedral(n), ui).holds:
                return False, f"unique involution unexpectedly holds on dihedral({n})"
        if len(_groups.Dihedral(4).involutions()) != 5:
            return False, "dihedral(4) involution count is not 5"
        for p in (3, 5, 7, 11, 13):
            tf = _logic.torsion_free(p)
            for n in range(3, 10):
                if not _logic.holds(_groups.Quaternion(n), tf).holds:
                    return False, f"torsion-free:{p} fails on quaternion({n})"
        return True, "unique-involution and torsion-free verdicts across the families"

    return _result(8, "universal sentence suite", run)


# ---------------------------------------------------------------------------
# 9. dihedral limit cross-check


def criterion_9() -> CriterionResult:
    def run():
        seq = _marked.dihedral_sequence((10, 14))
        limit = _marked.mark("limitD(1,1)", "a,s")
        verdict = _marked.limit_compare(seq, limit, 8)
        if not verdict.matched:
            return False, f"mismatch with witness {verdict.witness}"
        return True, f"stable from n={verdict.stabilized_at}, equal to the limit at lambda=8"

    return _result(9, "dihedral limit cross-check", run)


# ---------------------------------------------------------------------------
# 10. metric properties


def criterion_10() -> CriterionResult:
    def run():
        lam_max = 8
        suite = [
            _marked.std_marked("quaternion(3)"),
            _marked.std_marked("quaternion(4)"),
            _marked.std_marked("quaternion(5)"),
            _marked.std_marked("dihedral(4)"),
            _marked.mark("limitQ(1,1)", "a,y"),
        ]
        n = len(suite)
        agreement: dict[tuple[int, int], int | None] = {}
        for i in range(n):
            for j in range(i + 1, n):
                d1 = _marked.gg_distance(suite[i], suite[j], lam_max)
                d2 = _marked.gg_distance(suite[j], suite[i], lam_max)
                if (d1.exact, d1.agreement_radius, d1.witness) != (
                    d2.exact,
                    d2.agreement_radius,
                    d2.witness,
                ):
                    return False, f"asymmetry between {suite[i]} and {suite[j]}"
                agreement[(i, j)] = d1.agreement_radius if d1.exact else None
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if len({i, j, k}) != 3:
                        continue
                    ij = agreement[(min(i, j), max(i, j))]
                    jk = agreement[(min(j, k), max(j, k))]
                    ik = agreement[(min(i, k), max(i, k))]
                    if None in (ij, jk, ik):
                        continue
                    if ik < min(ij, jk):
                        return False, f"ultrameric inequality fails on triple {(i, j, k)}"
        for mg in suite:
            big = _marked.rel_ball(mg, lam_max)
            for lam in (0, 3, 5):
                small = _marked.rel_ball(mg, lam)
                if not set(small.words) <= set(big.words):
                    return False, f"monotonicity fails for {mg} at lambda={lam}"
        exact_pairs = sum(1 for v in agreement.values() if v is not None)
        return True, f"symmetry, ultrametric on exact triples ({exact_pairs} exact pairs), monotone balls"

    return _result(10, "metric properties", run)


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(verbose: bool = False) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        res = fn()
        results.append(res)
        if verbose:
            print(res.line())
    if verbose:
        failed = [r.number for r in results if not r.passed]
        total = sum(r.seconds for r in results)
        if failed:
            print(f"FAILED criteria: {failed} ({total:.1f}s total)")
        else:
            print(f"all 10 criteria passed ({total:.1f}s total)")
    return results
