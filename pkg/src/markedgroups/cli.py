"""Command-line front end.

Subcommands cover the whole toolkit: relation balls (``rel``), distances
(``dist``), stabilization sweeps (``converge``), limit comparison
(``limit-compare``), Cayley-ball export (``cayley``), censuses
(``involutions``, ``center``), sentence checking (``sentence``,
``eventual``), residual witnesses (``witness``), the five-candidate kernel
analysis (``cases``), the lifted kernel pipeline (``kernel``) and the full
verification suite (``verify-all``).

Exit codes: 0 success, 1 verification failure (or cache corruption /
non-stabilized window), 2 invalid input, 3 word budget exceeded.

A plain-text INI config may supply any flag: ``--config FILE`` with
``--experiment SECTION`` injects that section's entries as flags, with
explicitly passed flags taking precedence.  There are no hidden defaults
for radii, windows or lambdas: every run states its parameters.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import cache as _cache
from . import groups as _groups
from . import logic as _logic
from . import marked as _marked
from . import residual as _residual
from . import structure as _structure
from . import words as _words
from .groups import INFINITE, InfiniteGroupError
from .marked import MarkedGroup, NotStabilizedError
from .words import EnumerationBudgetError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


def _parse_window(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return (int(lo), int(hi))
    except ValueError as exc:
        raise ValueError(f"window must look like 3:8, got {text!r}") from exc


def _build_sequence(family: str, window: tuple[int, int], k: int | None):
    if family == "quaternion":
        return _marked.quaternion_sequence(window)
    if family == "dihedral":
        return _marked.dihedral_sequence(window)
    if family == "cyclic2":
        if k is None:
            raise ValueError("the cyclic2 family needs --k")
        return _marked.cyclic2_sequence(k, window)
    raise ValueError(f"unknown family {family!r}; use quaternion, dihedral or cyclic2")


def _marked_group(descriptor: str, marking: str | None) -> MarkedGroup:
    group = _groups.parse_group(descriptor)
    if marking is None:
        return MarkedGroup(group, group.standard_marking())
    return MarkedGroup(group, _marked.parse_marking(group, marking))


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ValueError("missing required flag(s): " + ", ".join(f"--{n}" for n in missing))


def _emit(payload: str, out: str | None):
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _json_report(data, out: str | None):
    _emit(json.dumps(data, sort_keys=True, indent=2) + "\n", out)


def _fmt_elem(g) -> str:
    return _groups.format_element(g)


# ---------------------------------------------------------------------------
# handlers


def cmd_rel(args) -> int:
    _need(args, "group", "marking", "lambda")
    mg = _marked_group(args.group, args.marking)
    lam = args.lam
    cache = _cache.default_cache(args.cache_dir)
    key = _cache.cache_key(mg.descriptor_text, mg.marking_text, lam)
    payload = None
    if cache is not None:
        payload = cache.get(key)
        if payload is not None:
            print(f"cache hit {key[:16]}", file=sys.stderr)
    if payload is None:
        ball = _marked.rel_ball(mg, lam, args.max_words)
        if args.algorithm in ("tree", "both"):
            other = _marked.rel_ball_bfs(mg, lam, args.max_words)
            if ball != other:
                print("FAIL: the two relation-ball algorithms disagree", file=sys.stderr)
                return EXIT_FAIL
            if args.algorithm == "tree":
                ball = other
        payload = _cache.serialize_relation_ball(mg, ball)
        if cache is not None:
            cache.put(key, payload)
    _emit(payload.decode(), args.out)
    return EXIT_OK


def cmd_dist(args) -> int:
    _need(args, "a", "b", "marking", "lambda_max")
    mg1 = _marked_group(args.a, args.marking)
    mg2 = _marked_group(args.b, args.marking_b or args.marking)
    res = _marked.gg_distance(mg1, mg2, args.lambda_max, args.max_words)
    names = args.marking.split(",") if args.marking else None
    print(res.describe([n.strip() for n in names] if names else None))
    return EXIT_OK


def cmd_converge(args) -> int:
    _need(args, "family", "window", "lambda")
    seq = _build_sequence(args.family, _parse_window(args.window), args.k)
    j = _marked.converged_at(seq, args.lam, args.max_words)
    if j is None:
        print(f"not stabilized in window {args.window} at lambda={args.lam}")
    else:
        print(f"stabilized at index {j} (lambda={args.lam}, window {args.window})")
    return EXIT_OK


def cmd_limit_compare(args) -> int:
    _need(args, "family", "window", "limit", "limit_marking", "lambda")
    seq = _build_sequence(args.family, _parse_window(args.window), args.k)
    limit = _marked_group(args.limit, args.limit_marking)
    verdict = _marked.limit_compare(seq, limit, args.lam, args.max_words)
    if verdict.matched:
        print(
            f"match: tail (from index {verdict.stabilized_at}) agrees with "
            f"{limit.descriptor_text} at lambda={args.lam}"
        )
        return EXIT_OK
    side = "limit only" if verdict.witness_in_limit else "tail only"
    print(
        f"mismatch: witness {verdict.witness} ({side}) at lambda={args.lam}, "
        f"tail stabilized at {verdict.stabilized_at}"
    )
    return EXIT_FAIL


def cmd_cayley(args) -> int:
    _need(args, "group", "marking", "radius")
    mg = _marked_group(args.group, args.marking)
    graph = _marked.ball_graph(mg, args.radius)
    names = [n.strip() for n in args.marking.split(",")]
    _emit(graph.to_dot(names), args.out)
    print(f"{len(graph)} vertices at radius {args.radius}", file=sys.stderr)
    return EXIT_OK


def cmd_involutions(args) -> int:
    _need(args, "group")
    group = _groups.parse_group(args.group)
    try:
        invs = group.involutions()
    except InfiniteGroupError as exc:
        print(f"infinite census: {exc}")
        return EXIT_OK
    print(f"{len(invs)} involution(s) in {group.descriptor}")
    for g in invs:
        print(f"  {_fmt_elem(g)}")
    return EXIT_OK


def cmd_center(args) -> int:
    _need(args, "group")
    group = _groups.parse_group(args.group)
    try:
        elems = group.center()
    except InfiniteGroupError as exc:
        print(f"no finite census: {exc}")
        return EXIT_OK
    print(f"center of {group.descriptor} has {len(elems)} element(s)")
    for g in elems:
        print(f"  {_fmt_elem(g)}")
    return EXIT_OK


def cmd_sentence(args) -> int:
    _need(args, "group", "sigma")
    group = _groups.parse_group(args.group)
    sigma = _logic.get_sentence(args.sigma)
    if group.is_finite:
        res = _logic.holds(group, sigma)
        if res.holds:
            print(f"HOLDS: {sigma.name or sigma} on {group.descriptor}")
            return EXIT_OK
        ce = ", ".join(_fmt_elem(g) for g in res.counterexample)
        print(f"FAIL: {sigma.name or sigma} on {group.descriptor}; counterexample ({ce})")
        return EXIT_FAIL
    if args.radius is None:
        raise ValueError(f"{group.descriptor} is infinite; pass --radius for a bounded check")
    res = _logic.holds_bounded(group, sigma, args.radius)
    if res.no_counterexample:
        print(
            f"NO COUNTEREXAMPLE within radius {args.radius}: "
            f"{sigma.name or sigma} on {group.descriptor}"
        )
        return EXIT_OK
    ce = ", ".join(_fmt_elem(g) for g in res.counterexample)
    print(f"FAIL: counterexample within radius {args.radius}: ({ce})")
    return EXIT_FAIL


def cmd_eventual(args) -> int:
    _need(args, "family", "window", "sigma")
    seq = _build_sequence(args.family, _parse_window(args.window), args.k)
    sigma = _logic.get_sentence(args.sigma)
    report = _logic.eventual_truth(seq, sigma)
    for i, ok in report.per_index:
        print(f"  index {i}: {'true' if ok else 'FALSE'}")
    if report.true_everywhere:
        print(f"true at every index of window {args.window}")
    else:
        print(f"fails at indices {list(report.failure_indices)}")
    return EXIT_OK


def cmd_witness(args) -> int:
    _need(args, "limit", "marking", "radii", "n_max")
    mg = _marked_group(args.limit, args.marking)
    radii = [int(r) for r in args.radii.split(",")]
    table = _residual.fully_residual_check(mg, radii, args.n_max)
    for row in table.rows:
        if row.found:
            print(
                f"R={row.radius}: n={row.n}, ball={row.ball_size}, "
                f"distance verified={row.distance_verified}, hom {row.hom}"
            )
        else:
            print(f"R={row.radius}: exhausted at n_max={args.n_max}")
            for lvl in row.failures:
                note = ""
                if lvl.first_collision is not None:
                    a, b = lvl.first_collision.pair
                    note = (
                        f"; first collision {_fmt_elem(a)} / {_fmt_elem(b)} "
                        f"-> {_fmt_elem(lvl.first_collision.image)}"
                    )
                print(f"    n={lvl.n}: {lvl.homs_tried} homs tried{note}")
    print(f"note: {table.note}")
    if args.csv:
        with open(args.csv, "w", newline="") as fp:
            table.write_csv(fp)
    return EXIT_OK


def cmd_cases(args) -> int:
    _need(args, "l", "k")
    reports = _structure.case_analysis(args.l, args.k)
    data = []
    for rep in reports:
        count = "infinite" if rep.involution_count is INFINITE else rep.involution_count
        wt = ", ".join(
            f"{_fmt_elem(g)}{'' if ok else ' (NOT an involution)'}" for g, ok in rep.witnesses
        )
        print(
            f"case {rep.case_index}: kernel {{{','.join(_fmt_elem(g) for g in rep.kernel)}}} "
            f"-> {count} involution(s); witnesses: {wt or '-'}"
            + (f"; {'; '.join(rep.notes)}" if rep.notes else "")
        )
        data.append(
            {
                "case": rep.case_index,
                "kernel": [_fmt_elem(g) for g in rep.kernel],
                "involutions": "infinite" if rep.involution_count is INFINITE else rep.involution_count,
                "witnesses": [[_fmt_elem(g), ok] for g, ok in rep.witnesses],
                "unique_involution": rep.unique_involution,
                "notes": list(rep.notes),
            }
        )
    unique_cases = [r.case_index for r in reports if r.unique_involution]
    print(f"unique-involution case(s): {unique_cases}")
    if args.json:
        _json_report({"l": args.l, "k": args.k, "cases": data}, args.json)
    return EXIT_OK


def cmd_kernel(args) -> int:
    _need(args, "window", "lambda")
    window = _parse_window(args.window)
    lifted = _structure.quaternion_lift(window, kernel_mode=args.variant)
    report = _structure.kernel_identification(lifted, args.lam)
    print(
        f"covers stable at {report.covers_stable_at}, "
        f"quotients stable at {report.quotients_stable_at}, "
        f"cover limit matched: {report.cover_limit_matched}"
    )
    print(
        f"kernel: {len(report.kernel_elements)} element(s): "
        + ", ".join(_fmt_elem(g) for g in report.kernel_elements)
    )
    print(f"closed under product/inverse: {report.closed}")
    if args.json:
        _json_report(
            {
                "variant": args.variant,
                "window": list(window),
                "lambda": args.lam,
                "covers_stable_at": report.covers_stable_at,
                "quotients_stable_at": report.quotients_stable_at,
                "cover_limit_matched": report.cover_limit_matched,
                "kernel_elements": [_fmt_elem(g) for g in report.kernel_elements],
                "kernel_word_count": len(report.kernel_words),
                "closed": report.closed,
            },
            args.json,
        )
    return EXIT_OK


def cmd_verify_all(args) -> int:
    from . import acceptance

    results = acceptance.run_all(verbose=True)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


_HANDLERS = {
    "rel": cmd_rel,
    "dist": cmd_dist,
    "converge": cmd_converge,
    "limit-compare": cmd_limit_compare,
    "cayley": cmd_cayley,
    "involutions": cmd_involutions,
    "center": cmd_center,
    "sentence": cmd_sentence,
    "eventual": cmd_eventual,
    "witness": cmd_witness,
    "cases": cmd_cases,
    "kernel": cmd_kernel,
    "verify-all": cmd_verify_all,
}


def _add_common(sp):
    sp.add_argument("--config", help="INI config file supplying flags")
    sp.add_argument("--experiment", default="default", help="config section name")
    sp.add_argument("--cache-dir", help="relation-ball cache directory")
    sp.add_argument("--max-words", type=int, default=None, help="word enumeration budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markedgroups",
        description="Exact computations in the space of marked groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rel", help="relation ball of a marked group")
    sp.add_argument("--group")
    sp.add_argument("--marking")
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--algorithm", choices=("enum", "tree", "both"), default="enum")
    sp.add_argument("--out")
    _add_common(sp)

    sp = sub.add_parser("dist", help="distance between two marked groups")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.add_argument("--marking")
    sp.add_argument("--marking-b")
    sp.add_argument("--lambda-max", type=int)
    _add_common(sp)

    sp = sub.add_parser("converge", help="stabilization sweep over a family window")
    sp.add_argument("--family")
    sp.add_argument("--window")
    sp.add_argument("--k", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    _add_common(sp)

    sp = sub.add_parser("limit-compare", help="compare a stabilized tail with a limit candidate")
    sp.add_argument("--family")
    sp.add_argument("--window")
    sp.add_argument("--k", type=int)
    sp.add_argument("--limit")
    sp.add_argument("--limit-marking")
    sp.add_argument("--lambda", dest="lam", type=int)
    _add_common(sp)

    sp = sub.add_parser("cayley", help="export a marked Cayley ball as DOT")
    sp.add_argument("--group")
    sp.add_argument("--marking")
    sp.add_argument("--radius", type=int)
    sp.add_argument("--out")
    _add_common(sp)

    sp = sub.add_parser("involutions", help="involution census of a group")
    sp.add_argument("--group")
    _add_common(sp)

    sp = sub.add_parser("center", help="center of a group")
    sp.add_argument("--group")
    _add_common(sp)

    sp = sub.add_parser("sentence", help="check a universal sentence on a group")
    sp.add_argument("--group")
    sp.add_argument("--sigma")
    sp.add_argument("--radius", type=int, help="ball radius for infinite groups")
    _add_common(sp)

    sp = sub.add_parser("eventual", help="per-index truth of a sentence over a family window")
    sp.add_argument("--family")
    sp.add_argument("--window")
    sp.add_argument("--k", type=int)
    sp.add_argument("--sigma")
    _add_common(sp)

    sp = sub.add_parser("witness", help="residual witnesses for a limit group")
    sp.add_argument("--limit")
    sp.add_argument("--marking")
    sp.add_argument("--radii", help="comma-separated radii, e.g. 0,1,2,3")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--csv")
    _add_common(sp)

    sp = sub.add_parser("cases", help="involution census of the five central kernel candidates")
    sp.add_argument("--l", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--json")
    _add_common(sp)

    sp = sub.add_parser("kernel", help="lifted-sequence kernel identification pipeline")
    sp.add_argument("--window")
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--variant", choices=("standard", "trivial", "center"), default="standard")
    sp.add_argument("--json")
    _add_common(sp)

    sp = sub.add_parser("verify-all", help="run the full acceptance suite")
    _add_common(sp)

    return parser


def _inject_config(args, parser, argv):
    """Re-parse with the config section's entries injected before user flags."""
    cfg = configparser.ConfigParser()
    read = cfg.read(args.config)
    if not read:
        raise ValueError(f"cannot read config file {args.config!r}")
    if not cfg.has_section(args.experiment):
        raise ValueError(f"config has no section [{args.experiment}]")
    injected = []
    for key, value in cfg.items(args.experiment):
        injected.extend([f"--{key}", value])
    command = argv[0]
    rest = [a for a in argv[1:]]
    return parser.parse_args([command] + injected + rest)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            args = _inject_config(args, parser, argv)
        handler = _HANDLERS[args.command]
        return handler(args)
    except EnumerationBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        NotStabilizedError,
        _cache.CacheCorruptionError,
        _cache.CacheWriteConflictError,
    ) as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
