"""
Reflectwist CLI
===============
Thin dispatcher over the library. Every command prints one JSON report on
stdout (enumerations print JSON lines) and exits with

    0  all checks pass
    1  a mathematical property failed (the report carries the witness)
    2  malformed input
    3  a size gate was exceeded

Examples:
    python cli.py check ybe data/flip.json
    python cli.py check reflection data/p3.json data/p3_plus1.json --side right
    python cli.py enumerate skew-braces --order 6 --strategy direct
    python cli.py hunt ell-counterexamples --max-order 6
"""

import argparse
import logging
import sys
from typing import Any, Callable, Iterable, Optional, Sequence, Tuple

from braided_group import (
    BraidedGroup,
    braiding_from_skewbrace,
    check_braiding,
    check_group_drinfeld_twist,
    check_group_reflection,
    is_faithful,
    one_legged_twist_check,
    require_braiding,
    skewbrace_from_braiding,
    type1_twist,
    viability_verdict,
)
from errors import MalformedInput, ReflectwistError, SchemaError
from schemas import (
    BraidedGroupFile,
    CommandReport,
    FamilyFile,
    GroupFile,
    MapFile,
    OneLeggedFile,
    ShelfFile,
    SkewBraceFile,
    SolutionFile,
    TwistFile,
    dumps,
    load_file,
)
from search import (
    Strategy,
    enumerate_group_reflections,
    enumerate_groups,
    enumerate_reflections,
    enumerate_skew_braces,
    enumerate_solutions,
    find_ell_counterexamples,
)
from settings import get_settings
from structure_monoid import bre3_transfer_check, build_component, garside_bijective, garside_commutation_check, monoid_reflection_check
from twist_core import check_drinfeld_twist, compose_twists, invert_twist, twist_from_reflection
from yb_core import FiniteMap, Side, braid_relation_holds, check_reflection, k_derived, rack_solution

logger = logging.getLogger("reflectwist.cli")

Outcome = Tuple[bool, Any]


# ============================================================================
# INPUT
# ============================================================================

def _solution(path: str):
    return load_file(path, SolutionFile).to_braided_set()


def _map(path: str, n: int) -> FiniteMap:
    return load_file(path, MapFile).to_map(n)


def _twist(path: str):
    return load_file(path, TwistFile).to_datum()


def _braided_group(path: str, require: bool = True) -> BraidedGroup:
    """A braided group file, or a skew brace file read through its braiding"""
    try:
        brace = load_file(path, SkewBraceFile)
    except SchemaError:
        bg = load_file(path, BraidedGroupFile).to_braided_group()
        if require:
            require_braiding(bg)
        return bg
    return braiding_from_skewbrace(brace.to_skew_brace())


# ============================================================================
# CHECK
# ============================================================================

def cmd_check_ybe(args) -> Outcome:
    bs = _solution(args.solution)
    braid = braid_relation_holds(bs)
    return braid, {"flags": bs.flags(), "braid_relation": braid}


def cmd_check_braiding(args) -> Outcome:
    bg = _braided_group(args.braided_group, require=False)
    report = check_braiding(bg)
    result = {"report": report.to_dict(), "faithful": is_faithful(bg)}
    if report.ok:
        result["skew_brace"] = skewbrace_from_braiding(bg).to_dict()
    return report.ok, result


def cmd_check_shelf(args) -> Outcome:
    bs = rack_solution(load_file(args.shelf, ShelfFile).to_shelf())
    return True, {**bs.to_dict(), "flags": bs.flags()}


def cmd_check_reflection(args) -> Outcome:
    bs = _solution(args.solution)
    report = check_reflection(bs, _map(args.map, bs.n), Side(args.side))
    return report.ok, report.to_dict()


def cmd_check_group_reflection(args) -> Outcome:
    bg = _braided_group(args.braided_group)
    k = _map(args.map, bg.n)
    report = check_group_reflection(bg, k)
    result = {"report": report.to_dict()}
    if is_faithful(bg):
        result["viability"] = viability_verdict(bg, k).to_dict()
    return report.ok, result


def cmd_check_twist(args) -> Outcome:
    report = check_drinfeld_twist(_solution(args.solution), _twist(args.twist))
    return report.ok, report.to_dict()


def cmd_check_group_twist(args) -> Outcome:
    report = check_group_drinfeld_twist(_braided_group(args.braided_group), _twist(args.twist))
    return report.ok, report.to_dict()


def cmd_check_one_legged(args) -> Outcome:
    bg = _braided_group(args.braided_group)
    outcome = one_legged_twist_check(bg, load_file(args.varrho, OneLeggedFile).varrho)
    result = {"report": outcome.report.to_dict()}
    if outcome.datum is not None:
        result["twist"] = outcome.datum.to_dict()
    return outcome.report.ok, result


# ============================================================================
# TWIST / DERIVE
# ============================================================================

def cmd_twist_from_reflection(args) -> Outcome:
    bs = _solution(args.solution)
    return True, twist_from_reflection(bs, _map(args.map, bs.n)).to_dict()


def cmd_twist_compose(args) -> Outcome:
    return True, compose_twists(_solution(args.solution), _twist(args.first), _twist(args.second)).to_dict()


def cmd_twist_invert(args) -> Outcome:
    return True, invert_twist(_solution(args.solution), _twist(args.twist)).to_dict()


def cmd_twist_type1(args) -> Outcome:
    grp = load_file(args.group, GroupFile).to_group()
    t = type1_twist(grp, load_file(args.family, FamilyFile).maps)
    return True, {"target": t.dst.grp.to_dict(), "twist": t.datum.to_dict(), "multiplicity": t.multiplicity}


def cmd_derive(args) -> Outcome:
    bs = _solution(args.solution)
    k = _map(args.k, bs.n) if args.k else FiniteMap.identity(bs.n)
    derived = k_derived(bs, k)
    return True, {**derived.to_dict(), "flags": derived.flags()}


# ============================================================================
# MONOID
# ============================================================================

def cmd_monoid_classes(args) -> Outcome:
    return True, build_component(_solution(args.solution), args.degree).to_dict()


def cmd_monoid_garside(args) -> Outcome:
    bs = _solution(args.solution)
    k = _map(args.map, bs.n)
    report = garside_commutation_check(bs, k, args.degree, require=False)
    return report.ok, {"report": report.to_dict(), "bijective": garside_bijective(bs, k, args.degree)}


def cmd_monoid_re_check(args) -> Outcome:
    bs = _solution(args.solution)
    k = _map(args.map, bs.n)
    extension = monoid_reflection_check(bs, k, args.degree, require=False)
    transfer = bre3_transfer_check(bs, k, args.degree)
    return extension.ok, {"extension": extension.to_dict(), "bre3_transfer": transfer.to_dict()}


# ============================================================================
# ENUMERATE / HUNT / SUITE
# ============================================================================

def cmd_enumerate_solutions(args) -> Iterable[Any]:
    for bs in enumerate_solutions(args.order, args.nondegenerate, args.involutive, args.up_to_iso, args.jobs):
        yield bs.to_dict()


def cmd_enumerate_reflections(args) -> Iterable[Any]:
    for k in enumerate_reflections(_solution(args.solution), Side(args.side)):
        yield {"k": k.tolist()}


def cmd_enumerate_groups(args) -> Iterable[Any]:
    for grp in enumerate_groups(args.order):
        yield grp.to_dict()


def cmd_enumerate_skew_braces(args) -> Iterable[Any]:
    for sb in enumerate_skew_braces(args.order, Strategy(args.strategy), args.jobs):
        yield sb.to_dict()


def cmd_enumerate_group_reflections(args) -> Iterable[Any]:
    if args.brace:
        for k in enumerate_group_reflections(_braided_group(args.brace)):
            yield {"k": k.tolist()}
        return
    if args.order is None:
        raise MalformedInput("give a brace file or --order", {"order": None})
    for sb in enumerate_skew_braces(args.order, jobs=args.jobs):
        for k in enumerate_group_reflections(sb):
            yield {"brace": sb.to_dict(), "k": k.tolist()}


def cmd_hunt_ell(args) -> Outcome:
    found = find_ell_counterexamples(range(args.min_order, args.max_order + 1), args.bijective_k, args.jobs)
    return True, {"count": len(found), "findings": [ce.to_dict() for ce in found]}


def cmd_verify_suite(args) -> Outcome:
    from verify_suite import SuiteLevel, run_suite

    return run_suite(SuiteLevel(args.level), jobs=args.jobs)


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reflectwist", description="Reflections, twists and braided groups on finite sets")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default REFLECTWIST_JOBS)")

    def leaf(group, label: str, handler: Callable, *positionals: str, lines: bool = False) -> argparse.ArgumentParser:
        sub = group.add_parser(label.split(" ")[-1], parents=[common])
        for positional in positionals:
            sub.add_argument(positional)
        sub.set_defaults(handler=handler, lines=lines, label=label)
        return sub

    def family(name: str):
        return commands.add_parser(name).add_subparsers(dest="action", required=True)

    side_choices = [s.value for s in Side]

    check = family("check")
    leaf(check, "check ybe", cmd_check_ybe, "solution")
    leaf(check, "check braiding", cmd_check_braiding, "braided_group")
    leaf(check, "check shelf", cmd_check_shelf, "shelf")
    leaf(check, "check reflection", cmd_check_reflection, "solution", "map").add_argument(
        "--side", choices=side_choices, default=Side.RIGHT.value
    )
    leaf(check, "check group-reflection", cmd_check_group_reflection, "braided_group", "map")
    leaf(check, "check twist", cmd_check_twist, "solution", "twist")
    leaf(check, "check group-twist", cmd_check_group_twist, "braided_group", "twist")
    leaf(check, "check one-legged", cmd_check_one_legged, "braided_group", "varrho")

    twist = family("twist")
    leaf(twist, "twist from-reflection", cmd_twist_from_reflection, "solution", "map")
    leaf(twist, "twist compose", cmd_twist_compose, "solution", "first", "second")
    leaf(twist, "twist invert", cmd_twist_invert, "solution", "twist")
    leaf(twist, "twist type1", cmd_twist_type1, "group", "family")

    leaf(commands, "derive", cmd_derive, "solution").add_argument("--k", default=None)

    monoid = family("monoid")
    for label, handler, positionals in (
        ("monoid classes", cmd_monoid_classes, ("solution",)),
        ("monoid garside", cmd_monoid_garside, ("solution", "map")),
        ("monoid re-check", cmd_monoid_re_check, ("solution", "map")),
    ):
        leaf(monoid, label, handler, *positionals).add_argument("--degree", type=int, required=True)

    enum = family("enumerate")
    solutions = leaf(enum, "enumerate solutions", cmd_enumerate_solutions, lines=True)
    solutions.add_argument("--order", type=int, required=True)
    solutions.add_argument("--nondegenerate", action="store_true")
    solutions.add_argument("--involutive", action="store_true")
    solutions.add_argument("--up-to-iso", action="store_true")
    leaf(enum, "enumerate reflections", cmd_enumerate_reflections, "solution", lines=True).add_argument(
        "--side", choices=side_choices, default=Side.RIGHT.value
    )
    leaf(enum, "enumerate groups", cmd_enumerate_groups, lines=True).add_argument("--order", type=int, required=True)
    braces = leaf(enum, "enumerate skew-braces", cmd_enumerate_skew_braces, lines=True)
    braces.add_argument("--order", type=int, required=True)
    braces.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.HOLOMORPH.value)
    reflections = leaf(enum, "enumerate group-reflections", cmd_enumerate_group_reflections, lines=True)
    reflections.add_argument("brace", nargs="?", default=None)
    reflections.add_argument("--order", type=int, default=None)

    hunt = family("hunt")
    ell = leaf(hunt, "hunt ell-counterexamples", cmd_hunt_ell)
    ell.add_argument("--max-order", type=int, required=True)
    ell.add_argument("--min-order", type=int, default=1)
    ell.add_argument("--bijective-k", action="store_true")

    leaf(commands, "verify-suite", cmd_verify_suite).add_argument("--level", choices=["quick", "full"], default="quick")
    return parser


def configure_logging(verbosity: int) -> None:
    level = get_settings().log_level
    if verbosity == 1:
        level = "INFO"
    elif verbosity >= 2:
        level = "DEBUG"
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    label = args.label
    try:
        configure_logging(args.verbose)
        if args.lines:
            for obj in args.handler(args):
                print(dumps(obj))
            return 0
        ok, result = args.handler(args)
    except ReflectwistError as e:
        logger.info("%s failed: %s", label, e)
        print(CommandReport(command=label, ok=False, error=e.to_dict()).dumps())
        return e.exit_code
    print(CommandReport(command=label, ok=ok, result=result).dumps())
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
