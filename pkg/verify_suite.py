#!/usr/bin/env python3
"""
Reflectwist - Verification Suite
================================
Runs every theorem-level check against exhaustive enumerations, prints a
colored pass/fail matrix on stderr and returns a JSON-ready payload with the
per-check details and the discrepancy ledger.

    python verify_suite.py            # quick level
    python verify_suite.py full       # orders to 8, degrees to 4
"""

import itertools
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from braided_group import (
    Viability,
    additive_group_of,
    braiding_from_skewbrace,
    check_group_drinfeld_twist,
    compose_families,
    cyclic_group,
    direct_product,
    group_reflection_twist,
    groups_isomorphic,
    is_faithful,
    is_group_reflection,
    skewbrace_from_braiding,
    symmetric_group,
    trivial_brace_reflections,
    trivial_skew_brace,
    twisted_braided_group,
    two_torsion_check,
    type1_twist,
    viability_verdict,
)
from errors import BraidRelationViolation, ReflectwistError
from search import (
    NAIVE_SWEEP_ORDER,
    EllCounterexample,
    FailureKind,
    Strategy,
    enumerate_automorphism_group,
    enumerate_group_reflections,
    enumerate_groups,
    enumerate_reflections,
    enumerate_skew_braces,
    enumerate_solutions,
    find_ell_counterexamples,
)
from structure_monoid import bre3_transfer_check, build_component, garside_commutation_check, monoid_reflection_check
from twist_core import (
    braid_rep,
    compose_twists,
    find_conjugator,
    find_conjugators,
    find_twist_data,
    inversion_formula_report,
    representation_witness,
    twist_from_reflection,
)
from yb_core import (
    BraidedSet,
    FiniteMap,
    SquareMap,
    check_reflection,
    composition_condition,
    conjugate,
    double_conjugation,
    explicit_variant_report,
    k_derived,
    permutation_solution,
)

# Color codes for terminal output
GREEN = '\033[92m'
RED = '\033[91m'
YELLOW = '\033[93m'
BLUE = '\033[94m'
RESET = '\033[0m'


def print_status(message, status="info"):
    """Print colored status message (stderr, stdout carries the JSON report)"""
    colors = {
        "success": GREEN,
        "error": RED,
        "warning": YELLOW,
        "info": BLUE
    }
    color = colors.get(status, RESET)
    symbol = {
        "success": "✓",
        "error": "✗",
        "warning": "⚠",
        "info": "ℹ"
    }.get(status, "•")

    print(f"{color}{symbol} {message}{RESET}", file=sys.stderr)


def print_banner(title):
    print("\n" + "=" * 60, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * 60, file=sys.stderr)


class SuiteLevel(Enum):
    QUICK = "quick"
    FULL = "full"


@dataclass(frozen=True)
class SuiteBounds:
    solution_carrier: int      # non-degenerate solutions for twist checks
    explicit_carrier: int      # (bs, k, h) triples for the closed form
    brace_order: int           # skew braces for braided-group checks
    optimality_order: int      # all n^n maps
    sampled_orders: Tuple[int, ...]
    census_orders: Tuple[int, ...]
    monoid_carrier: int
    monoid_degree: int
    garside_degree: int
    trivial_order: int


BOUNDS = {
    SuiteLevel.QUICK: SuiteBounds(2, 2, 4, 3, (), (1, 2, 3, 4), 2, 3, 3, 4),
    SuiteLevel.FULL: SuiteBounds(3, 3, 6, 4, (5, 6), (1, 2, 3, 4, 5, 6), 3, 4, 5, 6),
}

# carrier 2 cannot tell the kh and hk closed forms apart, carrier 3 can
HK_WITNESS_CARRIER = 3

# skew braces up to isomorphism, by order
KNOWN_BRACE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 4, 5: 1, 6: 6, 7: 1}


@dataclass
class CheckOutcome:
    ok: bool
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass
class LedgerEntry:
    name: str
    claim: str
    verdict: str
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "claim": self.claim, "verdict": self.verdict, "witness": self.witness}


# ============================================================================
# CORPORA
# ============================================================================

def solution_corpus(max_n: int) -> List[BraidedSet]:
    """Non-degenerate solutions up to isomorphism, |X| ≤ max_n"""
    return [bs for n in range(1, max_n + 1) for bs in enumerate_solutions(n, nondegenerate=True, up_to_iso=True)]


def reflection_corpus(max_n: int) -> List[Tuple[BraidedSet, FiniteMap]]:
    return [(bs, k) for bs in solution_corpus(max_n) for k in enumerate_reflections(bs)]


def lambda_solution(lam: Tuple[int, ...]) -> BraidedSet:
    """r(a,b) = (λ(b), a)"""
    return permutation_solution(list(lam), list(range(len(lam))))


# ============================================================================
# CHECKS
# ============================================================================

def check_guitar_twists(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """Every reflection k gives a Drinfeld twist whose twisted solution is a solution"""
    print_banner("GUITAR TWISTS ARE DRINFELD TWISTS")
    count = 0
    for bs, k in reflection_corpus(bounds.solution_carrier):
        twist_from_reflection(bs, k)
        if not k_derived(bs, k).ybe_holds:
            return CheckOutcome(False, {"solution": bs.to_dict(), "k": k.tolist()})
        count += 1
    print_status(f"{count} (solution, reflection) pairs", "success")
    return CheckOutcome(True, {"instances": count})


def _hk_witness(max_n: int) -> Optional[Dict[str, Any]]:
    """First (bs, k, h) on which the hk closed form misses"""
    for bs, k in reflection_corpus(max_n):
        for h in enumerate_reflections(k_derived(bs, k)):
            if not explicit_variant_report(bs, k, h)["hk"]:
                return {"solution": bs.to_dict(), "k": k.tolist(), "h": h.tolist()}
    return None


def check_explicit_double_twist(bounds: SuiteBounds, jobs: Optional[int], ledger: List[LedgerEntry]) -> CheckOutcome:
    """Closed form of (r^(k))^(h), and the composition condition against double conjugation"""
    print_banner("EXPLICIT DOUBLE TWIST")
    tally = {"kh": 0, "hk": 0}
    total = 0
    hk_witness = None
    condition_mismatch = None
    for bs, k in reflection_corpus(bounds.explicit_carrier):
        n = bs.n
        twisted = k_derived(bs, k)
        all_maps = [FiniteMap(np.array(m)) for m in itertools.product(range(n), repeat=n)]
        for h in enumerate_reflections(twisted):
            total += 1
            report = explicit_variant_report(bs, k, h)
            for variant, ok in report.items():
                tally[variant] += ok
            if not report["hk"] and hk_witness is None:
                hk_witness = {"solution": bs.to_dict(), "k": k.tolist(), "h": h.tolist()}
            oracle = double_conjugation(bs, k, h)
            for ell in all_maps:
                by_condition = composition_condition(bs, k, h, ell)
                by_tables = k_derived(bs, ell, allow_non_reflection=True) == oracle
                if by_condition != by_tables and condition_mismatch is None:
                    condition_mismatch = {"solution": bs.to_dict(), "k": k.tolist(), "h": h.tolist(), "ell": ell.tolist()}

    if hk_witness is None:
        hk_witness = _hk_witness(HK_WITNESS_CARRIER)
    ledger.append(
        LedgerEntry(
            "explicit-variant",
            "the closed form uses ρ⁻¹ at k∘h (kh) or at h∘k (hk)",
            f"kh matches on {tally['kh']}/{total}, hk matches on {tally['hk']}/{total}",
            hk_witness,
        )
    )
    ok = tally["kh"] == total and condition_mismatch is None
    print_status(f"kh {tally['kh']}/{total}, hk {tally['hk']}/{total}", "success" if ok else "error")
    return CheckOutcome(ok, {"triples": total, "variants": tally, "condition_mismatch": condition_mismatch})


def check_permutation_twists(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """On Z₂ with F = swap×id: λ = id twists, and for each λ a twist exists exactly when a conjugator does"""
    print_banner("PERMUTATION SOLUTIONS")
    swap_F = SquareMap.from_tuples([[1 - a, b] for a in range(2) for b in range(2)], 2)
    details: Dict[str, Any] = {}
    for name, lam in (("identity", (0, 1)), ("swap", (1, 0))):
        bs = lambda_solution(lam)
        details[f"{name}_twist_data"] = len(find_twist_data(bs, swap_F))
        details[f"{name}_conjugator"] = _conjugator_exists(bs, swap_F)
    ok = details["identity_twist_data"] > 0 and all(
        (details[f"{name}_twist_data"] > 0) == details[f"{name}_conjugator"] for name in ("identity", "swap")
    )
    print_status(
        f"λ = id: {details['identity_twist_data']} data; λ = swap: {details['swap_twist_data']} data",
        "success" if ok else "error",
    )
    return CheckOutcome(ok, details)


def _conjugator_exists(bs: BraidedSet, F: SquareMap) -> bool:
    try:
        return find_conjugator(braid_rep(bs), braid_rep(conjugate(bs, F))) is not None
    except BraidRelationViolation:
        return False


def _conjugator_count(bs: BraidedSet, F: SquareMap) -> int:
    try:
        return len(find_conjugators(braid_rep(bs), braid_rep(conjugate(bs, F))))
    except BraidRelationViolation:
        return 0


def check_representations(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """F₁₂Ψ conjugates the braid representations; on |X| = 2 twist data and conjugators come in equal numbers"""
    print_banner("BRAID GROUP REPRESENTATIONS")
    count = 0
    for bs, k in reflection_corpus(bounds.solution_carrier):
        t = twist_from_reflection(bs, k)
        r1, r2 = braid_rep(bs), braid_rep(conjugate(bs, t.F))
        a = representation_witness(t).table
        if not (np.array_equal(a[r1.gen12], r2.gen12[a]) and np.array_equal(a[r1.gen23], r2.gen23[a])):
            return CheckOutcome(False, {"solution": bs.to_dict(), "k": k.tolist()})
        count += 1

    agree = same_count = pairs = 0
    mismatch = None
    for bs in solution_corpus(2):
        if bs.n != 2 or not bs.invertible:
            continue
        for perm in itertools.permutations(range(4)):
            F = SquareMap(2, np.array(perm))
            twists = len(find_twist_data(bs, F))
            conjugators = _conjugator_count(bs, F)
            pairs += 1
            agree += (twists > 0) == (conjugators > 0)
            same_count += twists == conjugators
            if twists != conjugators and mismatch is None:
                mismatch = {"solution": bs.to_dict(), "F": F.tuples(), "twists": twists, "conjugators": conjugators}
    ok = agree == pairs and same_count == pairs
    print_status(
        f"{count} witnesses conjugate; |X| = 2: {agree}/{pairs} agree, {same_count}/{pairs} equal counts",
        "success" if ok else "error",
    )
    return CheckOutcome(
        ok, {"witnesses": count, "pairs": pairs, "agree": agree, "equal_counts": same_count, "mismatch": mismatch}
    )


def check_braided_group_twists(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """Skew brace round trip; G^(k) is a braided group with the same additive group for every group reflection"""
    print_banner("BRAIDED GROUP TWISTS")
    braces = reflections = 0
    for n in range(1, bounds.brace_order + 1):
        for sb in enumerate_skew_braces(n, jobs=jobs):
            bg = braiding_from_skewbrace(sb)
            if skewbrace_from_braiding(bg) != sb:
                return CheckOutcome(False, {"round_trip": sb.to_dict()})
            braces += 1
            for k in enumerate_group_reflections(bg):
                twisted = twisted_braided_group(bg, k)
                report = check_group_drinfeld_twist(bg, group_reflection_twist(bg, k))
                if not report.ok:
                    return CheckOutcome(False, {"brace": sb.to_dict(), "k": k.tolist(), "report": report.to_dict()})
                # twist-related braces share their additive group
                if groups_isomorphic(additive_group_of(twisted), sb.add) is None:
                    return CheckOutcome(False, {"brace": sb.to_dict(), "k": k.tolist(), "failed": "additive group"})
                reflections += 1
    print_status(f"{braces} skew braces, {reflections} group reflections", "success")
    return CheckOutcome(True, {"braces": braces, "reflections": reflections})


def check_optimality(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """BRE1+BRE2 decide whether the twisted product is a group, on faithful braided groups"""
    print_banner("REFLECTION AXIOMS ARE OPTIMAL")
    rng = np.random.default_rng(0)
    counts = {"maps": 0, "faithful": 0, "braided_agree": 0}
    for n in list(range(1, bounds.optimality_order + 1)) + list(bounds.sampled_orders):
        exhaustive = n <= bounds.optimality_order
        for sb in enumerate_skew_braces(n, jobs=jobs):
            bg = braiding_from_skewbrace(sb)
            if not is_faithful(bg):
                continue
            counts["faithful"] += 1
            if exhaustive:
                maps = (np.array(m) for m in itertools.product(range(n), repeat=n))
            else:
                maps = (rng.integers(0, n, n) for _ in range(200))
            for m in maps:
                k = FiniteMap(m)
                verdict = viability_verdict(bg, k)
                if not verdict.group_agrees:
                    return CheckOutcome(
                        False, {"brace": sb.to_dict(), "k": k.tolist(), "failed": "BRE1+BRE2", **verdict.to_dict()}
                    )
                if is_group_reflection(bg, k) and verdict.bre3_prime_witness is not None:
                    return CheckOutcome(False, {"brace": sb.to_dict(), "k": k.tolist(), "failed": "BRE3'"})
                counts["maps"] += 1
                counts["braided_agree"] += verdict.braided_agrees
    print_status(f"{counts['maps']} maps on {counts['faithful']} faithful braided groups", "success")
    return CheckOutcome(True, counts)


def check_two_torsion(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    print_banner("BIJECTIVE GROUP REFLECTIONS")
    instances = 0
    for n in range(1, bounds.brace_order + 1):
        for sb in enumerate_skew_braces(n, jobs=jobs):
            bg = braiding_from_skewbrace(sb)
            if not is_faithful(bg):
                continue
            for k in enumerate_group_reflections(bg):
                if not k.is_bijective:
                    continue
                report = two_torsion_check(bg, k)
                if not report.ok:
                    return CheckOutcome(False, {"brace": sb.to_dict(), "k": k.tolist(), "report": report.to_dict()})
                instances += 1
    print_status(f"{instances} faithful instances with a bijective reflection", "success" if instances else "warning")
    return CheckOutcome(True, {"instances": instances})


def _replay_counterexample(ce: EllCounterexample) -> Optional[str]:
    """Recompute one hunt finding from its brace; None when it stands"""
    bg = braiding_from_skewbrace(ce.brace)
    if not is_group_reflection(bg, ce.k):
        return "k"
    twisted = twisted_braided_group(bg, ce.k)
    if not is_group_reflection(twisted, ce.h):
        return "h"
    M, minv = bg.grp.mul, bg.grp.inv
    if M[M[ce.k.k, minv[ce.k.k[ce.h.k]]], ce.h.k].tolist() != ce.ell.tolist():
        return "ell"
    kinds = set()
    if not is_group_reflection(bg, ce.ell):
        kinds.add(FailureKind.NOT_REFLECTION_FOR_R)
    if not is_group_reflection(twisted, ce.ell):
        kinds.add(FailureKind.NOT_REFLECTION_FOR_TWISTED)
    return None if kinds and kinds == set(ce.kinds) else "kinds"


def check_ell_counterexamples(
    bounds: SuiteBounds, jobs: Optional[int], level: SuiteLevel, ledger: List[LedgerEntry]
) -> CheckOutcome:
    """
    Every composite ℓ the hunt reports is replayed from scratch, and the
    group-reflection enumeration it rests on matches the naive sweep. Where
    the counterexamples sit is a ledger matter.
    """
    print_banner("COMPOSITE REFLECTIONS")
    orders = list(range(1, NAIVE_SWEEP_ORDER + 1))
    for n in orders:
        for sb in enumerate_skew_braces(n, jobs=jobs):
            enumerate_group_reflections(sb, cross_check=True)
    if level is SuiteLevel.FULL:
        orders.append(6)
    found = find_ell_counterexamples(orders, jobs=jobs)

    by_order = {n: sum(ce.order == n for ce in found) for n in orders}
    details: Dict[str, Any] = {"by_order": {str(n): c for n, c in by_order.items()}}
    for ce in found:
        failed = _replay_counterexample(ce)
        if failed is not None:
            details["replay_failure"] = {"finding": ce.to_dict(), "failed": failed}
            print_status(f"finding at order {ce.order} does not replay ({failed})", "error")
            return CheckOutcome(False, details)

    if level is SuiteLevel.FULL:
        bijective = find_ell_counterexamples(range(1, 9), require_bijective_k=True, jobs=jobs)
        details["bijective_by_order"] = {str(n): sum(ce.order == n for ce in bijective) for n in range(1, 9)}

    first = found[0].to_dict() if found else None
    ledger.append(
        LedgerEntry(
            "composite-reflection",
            "ℓ(a) = k(a)·k(h(a))⁻¹·h(a) is a group reflection whenever k is one and h is one for the k-twist",
            f"failures by order {details['by_order']}; the first sits at order {found[0].order if found else '-'}",
            first,
        )
    )
    print_status(f"{len(found)} replayed findings, by order {details['by_order']}", "success")
    return CheckOutcome(True, details)


def check_brace_census(bounds: SuiteBounds, jobs: Optional[int], level: SuiteLevel) -> CheckOutcome:
    """Holomorph and direct enumerations agree, with the known class counts"""
    print_banner("SKEW BRACE CENSUS")
    counts = {}
    ok = True
    for n in bounds.census_orders:
        holomorph = enumerate_skew_braces(n, Strategy.HOLOMORPH, jobs)
        direct = enumerate_skew_braces(n, Strategy.DIRECT, jobs)
        counts[n] = len(holomorph)
        if holomorph != direct or len(holomorph) != KNOWN_BRACE_COUNTS.get(n, len(holomorph)):
            ok = False
            print_status(f"order {n}: holomorph {len(holomorph)}, direct {len(direct)}", "error")
    if level is SuiteLevel.FULL:
        counts[8] = len(enumerate_skew_braces(8, Strategy.HOLOMORPH, jobs))
        ok = ok and counts[8] >= 34
    if ok:
        print_status(f"class counts {counts}", "success")
    return CheckOutcome(ok, {"counts": {str(n): c for n, c in counts.items()}})


def check_structure_monoid(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """Class counts, Garside commutation, and reflections extending to the monoid"""
    print_banner("STRUCTURE MONOID")
    flip = lambda_solution((0, 1))
    flip_counts = [build_component(flip, d).class_count for d in range(1, bounds.monoid_degree + 1)]
    p3 = lambda_solution((1, 2, 0))
    p3_classes = build_component(p3, 2).class_count
    ok = flip_counts == [d + 1 for d in range(1, bounds.monoid_degree + 1)] and p3_classes == 2
    details: Dict[str, Any] = {"flip_counts": flip_counts, "p3_degree_two": p3_classes}

    checked = transfers = 0
    for bs, k in reflection_corpus(bounds.monoid_carrier):
        for d in range(2, bounds.garside_degree + 1):
            garside_commutation_check(bs, k, d)
        extension = monoid_reflection_check(bs, k, bounds.monoid_degree, require=False)
        if not extension.ok:
            ok = False
            details["extension_failure"] = {"solution": bs.to_dict(), "k": k.tolist(), "report": extension.to_dict()}
            break
        transfers += bre3_transfer_check(bs, k, bounds.monoid_degree).ok
        checked += 1
    details.update({"pairs": checked, "bre3_transfer_holds": transfers})
    print_status(f"{checked} (solution, reflection) pairs extend", "success" if ok else "error")
    return CheckOutcome(ok, details)


def check_trivial_braces(bounds: SuiteBounds, jobs: Optional[int]) -> CheckOutcome:
    """Trivial-brace reflections are the class-function homomorphisms; type-I twists compose"""
    print_banner("TRIVIAL SKEW BRACES")
    groups = 0
    for n in range(1, bounds.trivial_order + 1):
        for grp in enumerate_groups(n):
            characterized = trivial_brace_reflections(grp)
            propagated = enumerate_group_reflections(trivial_skew_brace(grp))
            if characterized != propagated:
                return CheckOutcome(False, {"group": grp.to_dict()})
            groups += 1

    compositions = 0
    for grp in (cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2))):
        autos = enumerate_automorphism_group(grp)
        choices = [[m.k for m in autos if m.k[x] == x] for x in range(grp.n)]
        families = [np.array(fam) for fam in itertools.islice(itertools.product(*choices), 6)]
        for f, g in itertools.product(families, repeat=2):
            tf, tg = type1_twist(grp, f), type1_twist(grp, g)
            composed = compose_twists(tf.src.bs, tf.datum, tg.datum)
            if composed.F != type1_twist(grp, compose_families(f, g)).datum.F:
                return CheckOutcome(False, {"group": grp.to_dict(), "f": f.tolist(), "g": g.tolist()})
            compositions += 1
    print_status(f"{groups} groups, {compositions} family compositions", "success")
    return CheckOutcome(True, {"groups": groups, "compositions": compositions})


# ============================================================================
# DISCREPANCY LEDGER
# ============================================================================

def ledger_permutation_remark(bounds: SuiteBounds) -> LedgerEntry:
    """r(a,b) = (λ(b), a): the guitar map is the identity, so r^(k) = r"""
    instances = matches_r = matches_remark = 0
    witness = None
    for n in range(1, bounds.solution_carrier + 1):
        for lam in itertools.permutations(range(n)):
            bs = lambda_solution(lam)
            a, _ = np.indices((n, n))
            remark = BraidedSet.from_tables(a, np.tile(np.array(lam)[:, None], (1, n)))
            for k in enumerate_reflections(bs):
                derived = k_derived(bs, k)
                instances += 1
                matches_r += derived == bs
                matches_remark += derived == remark
                if derived != remark and witness is None:
                    witness = {"lambda": list(lam), "k": k.tolist(), "derived": derived.to_dict()}
    return LedgerEntry(
        "permutation-twist-remark",
        "for r(a,b) = (λ(b), a) the k-derived solution is (a,b) ↦ (a, λ(b))",
        f"r^(k) = r on {matches_r}/{instances}; (a, λ(b)) on {matches_remark}/{instances}",
        witness,
    )


def ledger_permutation_lemma(bounds: SuiteBounds) -> LedgerEntry:
    """F = p×q on r(a,b) = (λ(b), a) over |X| = 2, where pλp⁻¹ = qλq⁻¹ always holds"""
    instances = twists = 0
    witness = None
    perms = list(itertools.permutations(range(2)))
    for lam in perms:
        bs = lambda_solution(lam)
        for p, q in itertools.product(perms, repeat=2):
            F = SquareMap.from_tuples([[p[a], q[b]] for a in range(2) for b in range(2)], 2)
            found = find_twist_data(bs, F)
            instances += 1
            twists += bool(found)
            if found and lam != (0, 1) and not F.is_identity and witness is None:
                witness = {"lambda": list(lam), "p": list(p), "q": list(q), "twist": found[0].to_dict()}
    return LedgerEntry(
        "permutation-twist-lemma",
        "p×q is a Drinfeld twist for a permutation solution only when λ = id",
        f"twist data found for {twists}/{instances} (λ, p, q)",
        witness,
    )


def ledger_constant_maps(bounds: SuiteBounds) -> LedgerEntry:
    """The constant map x ↦ c against the kλ = λk criterion"""
    instances = reflections = agree = 0
    witness = None
    for n in range(1, bounds.solution_carrier + 2):
        for lam in itertools.permutations(range(n)):
            bs = lambda_solution(lam)
            for c in range(n):
                ok = check_reflection(bs, FiniteMap.constant(n, c)).ok
                instances += 1
                reflections += ok
                agree += ok == (lam[c] == c)
                if not ok and witness is None:
                    witness = {"lambda": list(lam), "c": c}
    return LedgerEntry(
        "constant-map-reflection",
        "every constant map is a reflection of every braided set",
        f"reflection on {reflections}/{instances}; λ(c) = c decides {agree}/{instances}",
        witness,
    )


def ledger_bre3_prime(bounds: SuiteBounds) -> LedgerEntry:
    """BRE3′ against the braided-group axioms on the twisted tables, faithful braided groups only"""
    rng = np.random.default_rng(1)
    s3 = symmetric_group(3)
    corpus = [
        (
            trivial_skew_brace(s3),
            [FiniteMap.identity(6)] + trivial_brace_reflections(s3) + [FiniteMap(rng.integers(0, 6, 6)) for _ in range(60)],
        )
    ]
    for n in range(1, bounds.optimality_order + 1):
        for sb in enumerate_skew_braces(n, jobs=1):
            maps = [FiniteMap(np.array(m)) for m in itertools.product(range(n), repeat=n)]
            corpus.append((sb, maps))

    instances = agree = braided = 0
    witness = None
    for sb, maps in corpus:
        bg = braiding_from_skewbrace(sb)
        if not is_faithful(bg):
            continue
        for k in maps:
            verdict = viability_verdict(bg, k)
            if verdict.viability is Viability.NOT_GROUP:
                continue
            instances += 1
            braided += verdict.viability is Viability.BRAIDED_GROUP
            agree += verdict.braided_agrees
            if not verdict.braided_agrees and witness is None:
                witness = {"brace": sb.to_dict(), "k": k.tolist(), **verdict.to_dict()}
    return LedgerEntry(
        "bre3-prime-optimality",
        "on a faithful braided group, J·r·J⁻¹ braids (G, m∘J⁻¹) exactly when BRE1, BRE2 and BRE3′ hold",
        f"braided on {braided}/{instances} twisted groups; BRE3′ predicts it on {agree}/{instances}",
        witness,
    )


def ledger_inversion_formula(bounds: SuiteBounds) -> LedgerEntry:
    instances = literal_ok = corrected_ok = 0
    witness = None
    for bs, k in reflection_corpus(bounds.solution_carrier):
        report = inversion_formula_report(bs, twist_from_reflection(bs, k))
        instances += 1
        literal_ok += report["literal_is_twist"]
        corrected_ok += report["corrected_is_twist"]
        if not report["literal_is_twist"] and witness is None:
            witness = {"solution": bs.to_dict(), "k": k.tolist(), "failed": report["literal_failed"]}
    return LedgerEntry(
        "twist-inversion-formula",
        "(F⁻¹, F₂₃⁻¹Φ⁻¹F₂₃, F₁₂⁻¹Ψ⁻¹F₁₂) is a twist for r^F",
        f"as written: {literal_ok}/{instances}; (F⁻¹, F₂₃Φ⁻¹F₂₃⁻¹, F₁₂Ψ⁻¹F₁₂⁻¹): {corrected_ok}/{instances}",
        witness,
    )


# ============================================================================
# RUNNER
# ============================================================================

def _guarded(check: Callable[[], CheckOutcome]) -> CheckOutcome:
    try:
        return check()
    except ReflectwistError as e:
        print_status(f"{type(e).__name__}: {e}", "error")
        return CheckOutcome(False, {"error": e.to_dict()})


def run_suite(level: SuiteLevel = SuiteLevel.QUICK, jobs: Optional[int] = None) -> Tuple[bool, Dict[str, Any]]:
    """Run all checks; returns (all passed, JSON-ready payload)"""
    print(f"\n{BLUE}{'=' * 60}", file=sys.stderr)
    print(f"REFLECTWIST - VERIFICATION SUITE ({level.value})", file=sys.stderr)
    print(f"{'=' * 60}{RESET}\n", file=sys.stderr)

    bounds = BOUNDS[level]
    ledger: List[LedgerEntry] = []
    results = {
        "guitar-twist-is-drinfeld": _guarded(lambda: check_guitar_twists(bounds, jobs)),
        "explicit-double-twist": _guarded(lambda: check_explicit_double_twist(bounds, jobs, ledger)),
        "permutation-twists": _guarded(lambda: check_permutation_twists(bounds, jobs)),
        "representation-equivalence": _guarded(lambda: check_representations(bounds, jobs)),
        "braided-group-twist": _guarded(lambda: check_braided_group_twists(bounds, jobs)),
        "reflection-optimality": _guarded(lambda: check_optimality(bounds, jobs)),
        "two-torsion": _guarded(lambda: check_two_torsion(bounds, jobs)),
        "ell-counterexamples": _guarded(lambda: check_ell_counterexamples(bounds, jobs, level, ledger)),
        "skew-brace-census": _guarded(lambda: check_brace_census(bounds, jobs, level)),
        "structure-monoid": _guarded(lambda: check_structure_monoid(bounds, jobs)),
        "trivial-brace-reflections": _guarded(lambda: check_trivial_braces(bounds, jobs)),
    }
    ledger += [
        ledger_permutation_remark(bounds),
        ledger_permutation_lemma(bounds),
        ledger_constant_maps(bounds),
        ledger_inversion_formula(bounds),
        ledger_bre3_prime(bounds),
    ]

    # Summary
    print_banner("VERIFICATION SUMMARY")
    passed = sum(outcome.ok for outcome in results.values())
    total = len(results)
    for check, outcome in results.items():
        print_status(f"{check:30} {'PASS' if outcome.ok else 'FAIL'}", "success" if outcome.ok else "error")
    print(f"\n{BLUE}Results: {passed}/{total} checks passed{RESET}\n", file=sys.stderr)
    for entry in ledger:
        print_status(f"{entry.name}: {entry.verdict}", "info")

    payload = {
        "level": level.value,
        "checks": {name: {"ok": outcome.ok, "details": outcome.details} for name, outcome in results.items()},
        "ledger": [entry.to_dict() for entry in ledger],
    }
    return passed == total, payload


if __name__ == "__main__":
    from schemas import CommandReport

    try:
        level = SuiteLevel(sys.argv[1]) if len(sys.argv) > 1 else SuiteLevel.QUICK
        success, payload = run_suite(level)
        print(CommandReport(command="verify-suite", ok=success, result=payload).dumps())
        sys.exit(0 if success else 1)
    except KeyboardInterrupt:
        print_status("\n\nVerification cancelled by user", "warning")
        sys.exit(1)
