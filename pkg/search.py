"""
Search
======
Exhaustive enumeration of the small objects everything else is tested on:
solutions, reflections, groups, skew braces, group reflections, and the hunt
for composite reflections ℓ that fail to be reflections.

Every enumerator returns a canonically sorted list, so the output does not
depend on traversal order or on how many workers ran it.
"""

import asyncio
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from braided_group import (
    BraidedGroup,
    FiniteGroup,
    SkewBrace,
    braiding_from_skewbrace,
    ell_candidate,
    homomorphisms,
    is_group_reflection,
    minimal_generating_set,
    relabel_group,
    transport_table,
    twisted_braided_group,
    validate_group,
    validate_skew_brace,
)
from errors import FalsificationEvent, SizeLimitExceeded
from settings import check_gate, get_settings
from yb_core import BraidedSet, FiniteMap, Side, reflection_sides

logger = logging.getLogger("reflectwist.search")

# carriers up to which solution enumeration is exhaustive
MAX_SOLUTION_CARRIER = 3
MAX_NONDEGENERATE_CARRIER = 4
# naive n^n cross-check of group reflections
NAIVE_SWEEP_ORDER = 5


class Strategy(Enum):
    HOLOMORPH = "holomorph"
    DIRECT = "direct"


class FailureKind(Enum):
    NOT_REFLECTION_FOR_R = "not_reflection_for_r"
    NOT_REFLECTION_FOR_TWISTED = "not_reflection_for_twisted"


# ============================================================================
# WORKER ORCHESTRATION
# ============================================================================

async def _gather(worker: Callable[[Any], Any], items: Sequence[Any], jobs: int) -> List[Any]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, worker, item) for item in items]
        return list(await asyncio.gather(*futures))


def run_partitioned(worker: Callable[[Any], Any], items: Sequence[Any], jobs: Optional[int] = None) -> List[Any]:
    """Map worker over items, inline or on a process pool; results keep item order"""
    jobs = jobs or get_settings().jobs
    if jobs <= 1 or len(items) <= 1:
        return [worker(item) for item in items]
    logger.info("running %d work items on %d workers", len(items), jobs)
    return asyncio.run(_gather(worker, items, jobs))


def _check_order(n: int) -> None:
    limit = get_settings().max_order
    if n > limit:
        raise SizeLimitExceeded(
            f"order {n} is above the enumeration limit {limit}",
            {"states": n, "gate": limit, "what": "order"},
        )


# ============================================================================
# CANONICAL FORMS
# ============================================================================

def _permutations(n: int, fix_zero: bool) -> Tuple[np.ndarray, np.ndarray]:
    if fix_zero:
        perms = np.array([(0,) + p for p in itertools.permutations(range(1, n))], dtype=np.int64)
    else:
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return perms, np.argsort(perms, axis=1)


def _transport_all(table: np.ndarray, perms: np.ndarray, inverses: np.ndarray) -> np.ndarray:
    """Row i is the table relabelled by perms[i], flattened"""
    m = perms.shape[0]
    moved = table[inverses[:, :, None], inverses[:, None, :]].reshape(m, -1)
    return np.take_along_axis(perms, moved, axis=1)


def _lexmin_row(rows: np.ndarray) -> int:
    return int(np.lexsort(rows.T[::-1])[0])


def canonical_solution(bs: BraidedSet) -> BraidedSet:
    """Lexicographically least (sigma, rho) over all relabellings of the carrier"""
    n = bs.n
    check_gate(math.factorial(n), "canonical form")
    perms, inverses = _permutations(n, fix_zero=False)
    rows = np.hstack([_transport_all(bs.sigma, perms, inverses), _transport_all(bs.rho, perms, inverses)])
    best = rows[_lexmin_row(rows)]
    return BraidedSet.from_tables(best[: n * n].reshape(n, n), best[n * n:].reshape(n, n))


def canonical_group(grp: FiniteGroup) -> FiniteGroup:
    """Least table over relabellings fixing the identity at 0"""
    if grp.e != 0:
        grp = relabel_group(grp)
    perms, inverses = _permutations(grp.n, fix_zero=True)
    rows = _transport_all(grp.mul, perms, inverses)
    return validate_group(rows[_lexmin_row(rows)].reshape(grp.n, grp.n))


def canonical_skew_brace(sb: SkewBrace) -> SkewBrace:
    """Least (add, mul) pair over relabellings fixing the identity at 0"""
    n = sb.n
    if sb.add.e != 0:
        perm = np.arange(n)
        perm[[0, sb.add.e]] = perm[[sb.add.e, 0]]
        sb = validate_skew_brace(transport_table(sb.add.mul, perm), transport_table(sb.mul.mul, perm))
    perms, inverses = _permutations(n, fix_zero=True)
    rows = np.hstack([_transport_all(sb.add.mul, perms, inverses), _transport_all(sb.mul.mul, perms, inverses)])
    best = rows[_lexmin_row(rows)]
    return SkewBrace(validate_group(best[: n * n].reshape(n, n)), validate_group(best[n * n:].reshape(n, n)))


def enumerate_automorphism_group(grp: FiniteGroup) -> List[FiniteMap]:
    return sorted((FiniteMap(h) for h in homomorphisms(grp, grp, bijective=True)), key=lambda m: m.tolist())


# ============================================================================
# SOLUTIONS AND REFLECTIONS
# ============================================================================

def _padded(table: np.ndarray, n: int) -> np.ndarray:
    """Table with an extra row and column holding the sentinel n ("unknown")"""
    out = np.full((n + 1, n + 1), n, dtype=np.int64)
    out[:n, :n] = table
    return out


def _ybe_conflict(S: np.ndarray, R: np.ndarray, n: int) -> bool:
    """Some YBE component is decided on both sides and fails"""
    a, b, c = np.indices((n, n, n))
    ab, a_b, bc, b_c = S[a, b], R[b, a], S[b, c], R[c, b]
    sides = (
        (S[ab, S[a_b, c]], S[a, bc]),
        (R[S[a_b, c], ab], S[R[bc, a], b_c]),
        (R[c, a_b], R[b_c, R[bc, a]]),
    )
    return any(np.any((lhs != rhs) & (lhs != n) & (rhs != n)) for lhs, rhs in sides)


def _pair_order(n: int) -> List[Tuple[int, int]]:
    return sorted(((a, b) for a in range(n) for b in range(n)), key=lambda ab: (max(ab), ab))


def _solution_tables(item: Tuple[int, bool, bool, Tuple[int, int]]) -> List[Tuple[List[List[int]], List[List[int]]]]:
    """All completions with r(0,0) fixed to item's prefix"""
    n, nondegenerate, involutive, prefix = item
    S = np.full((n + 1, n + 1), n, dtype=np.int64)
    R = np.full((n + 1, n + 1), n, dtype=np.int64)
    order = _pair_order(n)
    found = []

    def consistent(a: int, b: int) -> bool:
        x, y = S[a, b], R[b, a]
        if nondegenerate and (np.count_nonzero(S[a, :n] == x) > 1 or np.count_nonzero(R[b, :n] == y) > 1):
            return False
        if involutive:
            if S[x, y] != n and (S[x, y] != a or R[y, x] != b):
                return False
            hits = np.argwhere((S[:n, :n] == a) & (R[:n, :n].T == b))
            if any((int(c), int(d)) != (x, y) for c, d in hits):
                return False
        return not _ybe_conflict(S, R, n)

    def descend(i: int) -> None:
        if i == len(order):
            found.append((S[:n, :n].tolist(), R[:n, :n].tolist()))
            return
        a, b = order[i]
        for x in range(n):
            for y in range(n):
                S[a, b], R[b, a] = x, y
                if consistent(a, b):
                    descend(i + 1)
        S[a, b], R[b, a] = n, n

    S[0, 0], R[0, 0] = prefix
    if consistent(0, 0):
        descend(1)
    return found


def enumerate_solutions(
    n: int,
    nondegenerate: bool = False,
    involutive: bool = False,
    up_to_iso: bool = False,
    jobs: Optional[int] = None,
) -> List[BraidedSet]:
    """Every solution on 0..n-1 with the requested properties"""
    limit = MAX_NONDEGENERATE_CARRIER if nondegenerate else MAX_SOLUTION_CARRIER
    if n > limit:
        raise SizeLimitExceeded(
            f"solution enumeration runs up to |X| = {limit}",
            {"states": n, "gate": limit, "what": "solutions"},
        )
    items = [(n, nondegenerate, involutive, (x, y)) for x in range(n) for y in range(n)]
    found = []
    for chunk in run_partitioned(_solution_tables, items, jobs):
        for sigma, rho in chunk:
            bs = BraidedSet.from_tables(np.array(sigma), np.array(rho))
            if not bs.ybe_holds:
                raise FalsificationEvent("solution search produced a non-solution", bs.to_dict())
            found.append(canonical_solution(bs) if up_to_iso else bs)
    unique = {bs.key(): bs for bs in found}
    logger.info("n=%d: %d solutions", n, len(unique))
    return [unique[key] for key in sorted(unique)]


def enumerate_reflections(bs: BraidedSet, side: Side = Side.RIGHT) -> List[FiniteMap]:
    """Every map satisfying the reflection equation on the given side, lexicographically"""
    n = bs.n
    check_gate(n ** n, "reflection maps")
    S, R = _padded(bs.sigma, n), _padded(bs.rho, n)
    k = np.full(n + 1, n, dtype=np.int64)
    found: List[FiniteMap] = []

    def consistent() -> bool:
        l1, l2, r1, r2 = reflection_sides(S, R, k, side, n=n)
        bad = ((l1 != r1) & (l1 != n) & (r1 != n)) | ((l2 != r2) & (l2 != n) & (r2 != n))
        return not bad.any()

    def descend(x: int) -> None:
        if x == n:
            found.append(FiniteMap(k[:n].copy()))
            return
        for v in range(n):
            k[x] = v
            if consistent():
                descend(x + 1)
        k[x] = n

    descend(0)
    return found


# ============================================================================
# GROUPS AND SKEW BRACES
# ============================================================================

def _latin_ok(T: np.ndarray, n: int) -> bool:
    for line in itertools.chain(T[:n, :n], T[:n, :n].T):
        known = line[line != n]
        if np.unique(known).size != known.size:
            return False
    return True


def _force(T: np.ndarray, rows: np.ndarray, cols: np.ndarray, vals: np.ndarray) -> Optional[bool]:
    """Write forced cells; None on conflict, True when something changed"""
    if rows.size == 0:
        return False
    current = T[rows, cols]
    if np.any((current != T.shape[0] - 1) & (current != vals)):
        return None
    fresh = current == T.shape[0] - 1
    if not fresh.any():
        return False
    T[rows[fresh], cols[fresh]] = vals[fresh]
    if np.any(T[rows, cols] != vals):
        return None
    return True


def _propagate(T: np.ndarray, n: int, add: Optional[np.ndarray], neg: Optional[np.ndarray]) -> bool:
    """Close T under associativity (and the brace rule when add is given); False on conflict"""
    a, b, c = np.indices((n, n, n))
    while True:
        ab, bc = T[a, b], T[b, c]
        lhs, rhs = T[ab, c], T[a, bc]
        if np.any((lhs != rhs) & (lhs != n) & (rhs != n)):
            return False
        m1 = (lhs != n) & (rhs == n) & (bc != n)
        m2 = (rhs != n) & (lhs == n) & (ab != n)
        rows = [a[m1], ab[m2]]
        cols = [bc[m1], c[m2]]
        vals = [lhs[m1], rhs[m2]]
        if add is not None:
            # a∘(b+c) = a∘b − a + a∘c
            ac = T[a, c]
            m3 = (ab != n) & (ac != n)
            rows.append(a[m3])
            cols.append(add[b, c][m3])
            vals.append(add[add[ab, neg[a]], ac][m3])
        changed = _force(T, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
        if changed is None or not _latin_ok(T, n):
            return False
        if not changed:
            return True


def _complete_tables(n: int, add: Optional[np.ndarray] = None) -> List[np.ndarray]:
    """Group tables on 0..n-1 with identity 0 (satisfying the brace rule over add when given)"""
    T = np.full((n + 1, n + 1), n, dtype=np.int64)
    T[0, :n] = np.arange(n)
    T[:n, 0] = np.arange(n)
    add_p = neg_p = None
    if add is not None:
        add_p = _padded(add, n)
        neg = np.argmax(add == 0, axis=1)
        neg_p = np.append(neg, n)
    found: List[np.ndarray] = []

    def descend(T: np.ndarray) -> None:
        open_cells = np.argwhere(T[:n, :n] == n)
        if not open_cells.size:
            found.append(T[:n, :n].copy())
            return
        a, b = (int(v) for v in open_cells[0])
        for v in range(n):
            if np.any(T[a, :n] == v) or np.any(T[:n, b] == v):
                continue
            trial = T.copy()
            trial[a, b] = v
            if _propagate(trial, n, add_p, neg_p):
                descend(trial)

    if _propagate(T, n, add_p, neg_p):
        descend(T)
    return found


def enumerate_groups(n: int) -> List[FiniteGroup]:
    """Groups of order n up to isomorphism, identity at 0"""
    _check_order(n)
    classes: Dict[Tuple[int, ...], FiniteGroup] = {}
    for table in _complete_tables(n):
        grp = canonical_group(validate_group(table))
        classes.setdefault(grp.key(), grp)
    logger.info("order %d: %d groups", n, len(classes))
    return [classes[key] for key in sorted(classes)]


def _regular_subgroups(A: FiniteGroup) -> List[np.ndarray]:
    """
    Regular subgroups of Hol(A) as product tables a∘b = h_a(b), where h_a is the
    unique element sending 0 to a. Subgroups grow one generator at a time: the
    next generator sends 0 to the least point outside the current orbit.
    """
    n = A.n
    autos = [tuple(int(v) for v in phi) for phi in homomorphisms(A, A, bijective=True)]
    translations = [[tuple(int(v) for v in A.mul[b, list(phi)]) for phi in autos] for b in range(n)]
    identity = tuple(range(n))
    seen: Set[frozenset] = set()
    tables: Dict[Tuple[int, ...], np.ndarray] = {}

    def closure(gens: List[Tuple[int, ...]]) -> Optional[Dict[int, Tuple[int, ...]]]:
        by_origin = {0: identity}
        frontier = [identity]
        while frontier:
            g = frontier.pop()
            for h in gens:
                gh = tuple(g[x] for x in h)
                held = by_origin.get(gh[0])
                if held is None:
                    by_origin[gh[0]] = gh
                    frontier.append(gh)
                elif held != gh:
                    return None
        return by_origin

    def descend(gens: List[Tuple[int, ...]], group: Dict[int, Tuple[int, ...]]) -> None:
        key = frozenset(group.values())
        if key in seen:
            return
        seen.add(key)
        if len(group) == n:
            table = np.array([group[a] for a in range(n)], dtype=np.int64)
            tables.setdefault(tuple(table.ravel().tolist()), table)
            return
        b = min(set(range(n)) - set(group))
        for h in translations[b]:
            grown = closure(gens + [h])
            if grown is not None:
                descend(gens + [h], grown)

    descend([], {0: identity})
    return [tables[key] for key in sorted(tables)]


def _braces_over(item: Tuple[Dict[str, Any], str]) -> List[Tuple[int, ...]]:
    """Canonical keys of the skew braces with additive group item[0]"""
    add_dict, strategy = item
    A = validate_group(add_dict["mul"])
    if Strategy(strategy) is Strategy.HOLOMORPH:
        tables = _regular_subgroups(A)
    else:
        tables = _complete_tables(A.n, A.mul)
    keys = set()
    for table in tables:
        sb = validate_skew_brace(A, validate_group(table))
        keys.add(canonical_skew_brace(sb).key())
    return sorted(keys)


def enumerate_skew_braces(
    n: int, strategy: Strategy = Strategy.HOLOMORPH, jobs: Optional[int] = None
) -> List[SkewBrace]:
    """Skew braces of order n up to isomorphism"""
    _check_order(n)
    items = [(grp.to_dict(), strategy.value) for grp in enumerate_groups(n)]
    keys = sorted({key for chunk in run_partitioned(_braces_over, items, jobs) for key in chunk})
    braces = [_brace_from_key(key) for key in keys]
    logger.info("order %d: %d skew braces (%s)", n, len(braces), strategy.value)
    return braces


def _brace_from_key(key: Tuple[int, ...]) -> SkewBrace:
    n = key[0]
    flat = np.array(key[1:], dtype=np.int64)
    return SkewBrace(validate_group(flat[: n * n].reshape(n, n)), validate_group(flat[n * n:].reshape(n, n)))


# ============================================================================
# GROUP REFLECTIONS
# ============================================================================

def _propagate_reflection(kp: np.ndarray, bg: BraidedGroup, S: np.ndarray, R: np.ndarray, M: np.ndarray) -> bool:
    """Close a partial k under BRE2 and BRE3; False on conflict"""
    n = bg.n
    a, b = np.indices((n, n))
    while True:
        kb = kp[b]
        bre2 = M[S[a, kb], kp[R[kb, a]]]          # value of k(ab)
        bre3 = S[S[a, b], kp[R[b, a]]]            # value of k(a)
        targets = np.concatenate([bg.grp.mul[a, b].ravel(), a.ravel()])
        values = np.concatenate([bre2.ravel(), bre3.ravel()])
        known = values != n
        targets, values = targets[known], values[known]
        current = kp[targets]
        if np.any((current != n) & (current != values)):
            return False
        fresh = current == n
        if not fresh.any():
            return True
        kp[targets[fresh]] = values[fresh]
        if np.any(kp[targets] != values):
            return False


def naive_group_reflections(bg: BraidedGroup) -> List[FiniteMap]:
    n = bg.n
    check_gate(n ** n, "group reflection sweep")
    return [
        FiniteMap(np.array(k))
        for k in itertools.product(range(n), repeat=n)
        if is_group_reflection(bg, FiniteMap(np.array(k)))
    ]


def enumerate_group_reflections(
    target: Union[SkewBrace, BraidedGroup], cross_check: bool = False
) -> List[FiniteMap]:
    """
    Group reflections by generator propagation: k(1) = 1, branch on the images
    of a minimal generating set (then on any point still open), and close under
    BRE2 and BRE3 after every choice.
    """
    bg = braiding_from_skewbrace(target) if isinstance(target, SkewBrace) else target
    n, e = bg.n, bg.grp.e
    _check_order(n)
    S, R = _padded(bg.bs.sigma, n), _padded(bg.bs.rho, n)
    M = _padded(bg.grp.mul, n)
    branch_order = list(minimal_generating_set(bg.grp)) + list(range(n))
    found: Dict[Tuple[int, ...], FiniteMap] = {}

    def descend(kp: np.ndarray) -> None:
        open_points = [x for x in branch_order if kp[x] == n]
        if not open_points:
            k = FiniteMap(kp[:n].copy())
            if is_group_reflection(bg, k):
                found.setdefault(tuple(k.tolist()), k)
            return
        x = open_points[0]
        for v in range(n):
            trial = kp.copy()
            trial[x] = v
            if _propagate_reflection(trial, bg, S, R, M):
                descend(trial)

    start = np.full(n + 1, n, dtype=np.int64)
    start[e] = e
    if _propagate_reflection(start, bg, S, R, M):
        descend(start)
    result = [found[key] for key in sorted(found)]

    if cross_check and n <= NAIVE_SWEEP_ORDER:
        naive = naive_group_reflections(bg)
        if naive != result:
            raise FalsificationEvent(
                "generator propagation and the naive sweep disagree",
                {"propagated": [k.tolist() for k in result], "naive": [k.tolist() for k in naive]},
            )
    return result


# ============================================================================
# COUNTEREXAMPLES FOR COMPOSED REFLECTIONS
# ============================================================================

@dataclass(frozen=True)
class EllCounterexample:
    brace: SkewBrace
    k: FiniteMap
    h: FiniteMap
    ell: FiniteMap
    kinds: Tuple[FailureKind, ...]
    set_level: Dict[str, bool]

    @property
    def order(self) -> int:
        return self.brace.n

    def sort_key(self) -> Tuple[Any, ...]:
        return (self.order, self.brace.key(), tuple(self.k.tolist()), tuple(self.h.tolist()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "brace": self.brace.to_dict(),
            "k": self.k.tolist(),
            "h": self.h.tolist(),
            "ell": self.ell.tolist(),
            "failure_kinds": [kind.value for kind in self.kinds],
            "set_level": self.set_level,
        }


def _hunt_brace(item: Tuple[Tuple[int, ...], bool]) -> List[EllCounterexample]:
    key, bijective_only = item
    sb = _brace_from_key(key)
    bg = braiding_from_skewbrace(sb)
    found = []
    for k in enumerate_group_reflections(bg):
        if bijective_only and not k.is_bijective:
            continue
        twisted = twisted_braided_group(bg, k)
        for h in enumerate_group_reflections(twisted):
            cand = ell_candidate(bg, k, h, twisted)
            kinds = []
            if not cand.reflection_for_r:
                kinds.append(FailureKind.NOT_REFLECTION_FOR_R)
            if not cand.reflection_for_twisted:
                kinds.append(FailureKind.NOT_REFLECTION_FOR_TWISTED)
            if kinds:
                found.append(
                    EllCounterexample(
                        sb,
                        k,
                        h,
                        cand.ell,
                        tuple(kinds),
                        {"for_r": cand.set_reflection_for_r, "for_twisted": cand.set_reflection_for_twisted},
                    )
                )
    return found


def find_ell_counterexamples(
    orders: Iterable[int], require_bijective_k: bool = False, jobs: Optional[int] = None
) -> List[EllCounterexample]:
    """Instances (brace, k, h) whose composite ℓ is not a group reflection on one side or the other"""
    items = []
    for n in orders:
        _check_order(n)
        items += [(sb.key(), require_bijective_k) for sb in enumerate_skew_braces(n, jobs=jobs)]
    found = [ce for chunk in run_partitioned(_hunt_brace, items, jobs) for ce in chunk]
    found.sort(key=lambda ce: ce.sort_key())
    logger.info("%d composite-reflection counterexamples", len(found))
    return found
