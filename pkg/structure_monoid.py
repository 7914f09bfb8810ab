"""
Structure Monoid
================
Degree-d slices of the structure monoid M(X,r): the words X^d modulo the
relations xy = (x⇀y)(x↼y), which preserve length. On top of the slices sit
the word-level extensions

    r̃(u, v) = (u ⇀̃ v, u ↼̃ v)     the bundle v crosses the bundle u
    k̃(x·v)  = (x ⇀̃ k̃(v)) · k(x ↼̃ k̃(v)),  k̃(x) = k(x),  k̃(ε) = ε

with k̃ restricted to X^d being the k-Garside map Δ^{d;k}.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import FalsificationEvent
from settings import check_gate, get_settings
from yb_core import BraidedSet, FiniteMap, Report, SquareMap, decode, digits, encode, require_reflection

logger = logging.getLogger("reflectwist.structure_monoid")

Word = Tuple[int, ...]


# ============================================================================
# UNION-FIND OVER WORDS
# ============================================================================

class WordPartition:
    """
    Disjoint subsets of word codes 0..size-1. The representative of every
    subset is its smallest code, i.e. the lexicographically smallest word, so
    the result does not depend on the order in which edges are merged.
    """

    def __init__(self, size: int):
        self.labels = np.arange(size, dtype=np.int64)

    def unify_edges(self, src: np.ndarray, dst: np.ndarray) -> None:
        labels = self.labels
        while True:
            low = np.minimum(labels[src], labels[dst])
            merged = labels.copy()
            np.minimum.at(merged, src, low)
            np.minimum.at(merged, dst, low)
            merged = merged[merged]
            if np.array_equal(merged, labels):
                break
            labels = merged
        self.labels = labels

    def rep(self, code: int) -> int:
        return int(self.labels[code])

    def unified(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]


# ============================================================================
# GRADED COMPONENTS
# ============================================================================

@dataclass(frozen=True, eq=False)
class GradedComponent:
    """Congruence classes of X^d; labels[code(w)] is the code of the class representative"""
    degree: int
    n: int
    labels: np.ndarray

    @property
    def class_count(self) -> int:
        return int(np.unique(self.labels).size)

    @property
    def representatives(self) -> List[Word]:
        return [word_of(int(c), self.n, self.degree) for c in np.unique(self.labels)]

    def label(self, w: Sequence[int]) -> int:
        return int(self.labels[encode(w, self.n)])

    def same_class(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.label(u) == self.label(v)

    def classes(self) -> List[List[Word]]:
        out: Dict[int, List[Word]] = {}
        for code, rep in enumerate(self.labels.tolist()):
            out.setdefault(rep, []).append(word_of(code, self.n, self.degree))
        return [out[rep] for rep in sorted(out)]

    def to_dict(self) -> Dict[str, object]:
        return {"degree": self.degree, "classes": [[list(w) for w in cls] for cls in self.classes()]}


def word_of(code: int, n: int, d: int) -> Word:
    return decode(code, n, d)


def position_map(bs: BraidedSet, d: int, i: int) -> np.ndarray:
    """r_i on X^d as a code map; i is 1-based and r acts on letters i, i+1"""
    n = bs.n
    cols = np.array(digits(n, d))
    x, y = cols[i - 1].copy(), cols[i].copy()
    cols[i - 1] = bs.sigma[x, y]
    cols[i] = bs.rho[y, x]
    codes = np.zeros(cols.shape[1], dtype=np.int64)
    for row in cols:
        codes = codes * n + row
    return codes


def build_component(bs: BraidedSet, d: int) -> GradedComponent:
    """Partition X^d by the closure of single-position rewrites"""
    size = bs.n ** d
    check_gate(size, f"degree-{d} words")
    partition = WordPartition(size)
    words = np.arange(size)
    for i in range(1, d):
        partition.unify_edges(words, position_map(bs, d, i))
    component = GradedComponent(d, bs.n, partition.labels)
    logger.debug("degree %d: %d words, %d classes", d, size, component.class_count)
    return component


# ============================================================================
# WORD-LEVEL EXTENSIONS
# ============================================================================

@dataclass
class WordMaps:
    """Cached evaluators of r̃ and k̃ for one braided set (and one map k)"""
    bs: BraidedSet
    k: Optional[FiniteMap] = None
    _r_cache: Dict[Tuple[Word, Word], Tuple[Word, Word]] = field(default_factory=dict, repr=False)
    _k_cache: Dict[Word, Word] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._sigma = self.bs.sigma.tolist()
        self._rho = self.bs.rho.tolist()
        self._kk = self.k.tolist() if self.k is not None else None

    def r(self, u: Sequence[int], v: Sequence[int]) -> Tuple[Word, Word]:
        """(u ⇀̃ v, u ↼̃ v): every letter of v crosses the whole of u, leftmost first"""
        u, v = tuple(u), tuple(v)
        if not u or not v:
            return v, u
        key = (u, v)
        hit = self._r_cache.get(key)
        if hit is not None:
            return hit
        w = list(u + v)
        p = len(u)
        for j in range(len(v)):
            for i in range(p - 1 + j, j - 1, -1):
                x, y = w[i], w[i + 1]
                w[i], w[i + 1] = self._sigma[x][y], self._rho[y][x]
        out = (tuple(w[: len(v)]), tuple(w[len(v):]))
        self._r_cache[key] = out
        return out

    def k_word(self, w: Sequence[int]) -> Word:
        """k̃ by first-letter recursion"""
        w = tuple(w)
        if not w:
            return ()
        hit = self._k_cache.get(w)
        if hit is not None:
            return hit
        if len(w) == 1:
            out = (self._kk[w[0]],)
        else:
            kv = self.k_word(w[1:])
            left, right = self.r(w[:1], kv)
            out = left + (self._kk[right[0]],)
        self._k_cache[w] = out
        return out

    def k_split(self, u: Sequence[int], v: Sequence[int]) -> Word:
        """(u ⇀̃ k̃(v)) · k̃(u ↼̃ k̃(v))"""
        left, right = self.r(u, self.k_word(v))
        return left + self.k_word(right)


def extend_r(bs: BraidedSet, u: Sequence[int], v: Sequence[int]) -> Tuple[Word, Word]:
    return WordMaps(bs).r(u, v)


def extend_k(bs: BraidedSet, k: FiniteMap, w: Sequence[int]) -> Word:
    return WordMaps(bs, k).k_word(w)


def _tabulate(bs: BraidedSet, d: int, fn) -> np.ndarray:
    n = bs.n
    check_gate(n ** d, f"degree-{d} words")
    return np.array([encode(fn(word_of(c, n, d)), n) for c in range(n ** d)], dtype=np.int64)


def garside_map(bs: BraidedSet, k: FiniteMap, d: int) -> SquareMap:
    """Δ^{d;k} tabulated on X^d"""
    maps = WordMaps(bs, k)
    return SquareMap(bs.n, _tabulate(bs, d, maps.k_word), d)


def guitar_map_n(bs: BraidedSet, k: FiniteMap, d: int) -> SquareMap:
    """J^{k;d}(w)_i = w_i ↼̃ k̃(w_{i+1}…w_d)"""
    maps = WordMaps(bs, k)

    def apply(w: Word) -> Word:
        return tuple(maps.r(w[i:i + 1], maps.k_word(w[i + 1:]))[1][0] for i in range(len(w)))

    return SquareMap(bs.n, _tabulate(bs, d, apply), d)


# ============================================================================
# EXTENSION CHECKS
# ============================================================================

def garside_commutation_check(bs: BraidedSet, k: FiniteMap, d: int, require: bool = True) -> Report:
    """Δ^{d;k} r_i = r_{d−i} Δ^{d;k} on all of X^d"""
    if require:
        require_reflection(bs, k)
    delta = garside_map(bs, k, d).table
    for i in range(1, d):
        lhs = delta[position_map(bs, d, i)]
        rhs = position_map(bs, d, d - i)[delta]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            w = word_of(int(bad[0]), bs.n, d)
            return Report("garside-commutation", False, failed=f"r_{i}", witness=w, details={"i": i})
    return Report("garside-commutation", True, details={"degree": d})


def garside_bijective(bs: BraidedSet, k: FiniteMap, d: int) -> bool:
    return garside_map(bs, k, d).is_bijective


def splitting_check(bs: BraidedSet, k: FiniteMap, d: int) -> Report:
    """Every factorization u·v of a word gives the same k̃"""
    maps = WordMaps(bs, k)
    n = bs.n
    check_gate(n ** d, f"degree-{d} words", get_settings().word_gate)
    for code in range(n ** d):
        w = word_of(code, n, d)
        target = maps.k_word(w)
        for cut in range(1, d):
            if maps.k_split(w[:cut], w[cut:]) != target:
                return Report("k-splitting", False, failed=f"cut {cut}", witness=w)
    return Report("k-splitting", True, details={"degree": d})


def components_upto(bs: BraidedSet, dmax: int) -> Dict[int, GradedComponent]:
    return {d: build_component(bs, d) for d in range(1, dmax + 1)}


def well_definedness_check(bs: BraidedSet, k: FiniteMap, d: int) -> Report:
    """r̃ and k̃ send congruent inputs of total degree d to congruent outputs"""
    n = bs.n
    check_gate(max(d - 1, 1) * n ** d, f"degree-{d} well-definedness", get_settings().word_gate)
    comps = components_upto(bs, d)
    maps = WordMaps(bs, k)

    def rep(w: Word) -> Word:
        return word_of(comps[len(w)].label(w), n, len(w))

    top = comps[d]
    for code in range(n ** d):
        w = word_of(code, n, d)
        if top.label(maps.k_word(w)) != top.label(maps.k_word(rep(w))):
            return Report("well-defined", False, failed="k", witness=w)
    for d1 in range(1, d):
        d2 = d - d1
        for cu in range(n ** d1):
            u = word_of(cu, n, d1)
            for cv in range(n ** d2):
                v = word_of(cv, n, d2)
                x, y = maps.r(u, v)
                xr, yr = maps.r(rep(u), rep(v))
                if comps[d2].label(x) != comps[d2].label(xr) or comps[d1].label(y) != comps[d1].label(yr):
                    return Report("well-defined", False, failed="r", witness=u + v, details={"split": d1})
    return Report("well-defined", True, details={"degree": d})


def monoid_reflection_check(bs: BraidedSet, k: FiniteMap, dmax: int, require: bool = True) -> Report:
    """k̄₂ r̄ k̄₂ r̄ = r̄ k̄₂ r̄ k̄₂ on class representatives of all degree pairs with d₁+d₂ ≤ dmax"""
    if require:
        require_reflection(bs, k)
    comps = components_upto(bs, max(dmax - 1, 1))
    maps = WordMaps(bs, k)
    checked = 0
    for d1 in range(1, dmax):
        for d2 in range(1, dmax - d1 + 1):
            for u in comps[d1].representatives:
                for v in comps[d2].representatives:
                    x, y = maps.r(u, v)
                    x, y = maps.r(x, maps.k_word(y))
                    lhs = (x, maps.k_word(y))
                    x, y = maps.r(u, maps.k_word(v))
                    rhs = maps.r(x, maps.k_word(y))
                    checked += 1
                    if comps[d1].label(lhs[0]) != comps[d1].label(rhs[0]) or comps[d2].label(
                        lhs[1]
                    ) != comps[d2].label(rhs[1]):
                        return Report(
                            "monoid-reflection",
                            False,
                            failed=f"({d1},{d2})",
                            witness=u + v,
                            details={"split": d1},
                        )
    return Report("monoid-reflection", True, details={"pairs_checked": checked, "dmax": dmax})


def bre3_transfer_check(bs: BraidedSet, k: FiniteMap, dmax: int) -> Report:
    """
    k̄(w) ∼ (w ⇀̄ v) ⇀̄ k̄(w ↼̄ v) for class representatives up to total degree dmax,
    and the identity holds in every tested degree exactly when it holds on letters.
    """
    require_reflection(bs, k)
    comps = components_upto(bs, max(dmax - 1, 1))
    maps = WordMaps(bs, k)
    per_pair: Dict[str, bool] = {}
    first_failure = None
    for d1 in range(1, dmax):
        for d2 in range(1, dmax - d1 + 1):
            holds = True
            for w in comps[d1].representatives:
                for v in comps[d2].representatives:
                    left, right = maps.r(w, v)
                    rhs = maps.r(left, maps.k_word(right))[0]
                    if comps[d1].label(maps.k_word(w)) != comps[d1].label(rhs):
                        holds = False
                        if first_failure is None:
                            first_failure = w + v
                        break
                if not holds:
                    break
            per_pair[f"{d1},{d2}"] = holds
    letters = per_pair.get("1,1", True)
    everywhere = all(per_pair.values())
    if letters != everywhere:
        raise FalsificationEvent(
            "BRE3 on letters does not match BRE3 on the monoid",
            {"per_degree": per_pair, "k": k.tolist()},
        )
    return Report(
        "bre3-transfer",
        everywhere,
        failed=None if everywhere else "BRE3",
        witness=first_failure,
        details={"per_degree": per_pair, "letters": letters},
    )
