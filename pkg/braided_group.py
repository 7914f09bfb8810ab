"""
Braided Groups
==============
Finite groups, skew braces and braidings on groups. On top of them: group
reflections (BRE1-BRE3), the twisted braided group G^(k), group Drinfeld
twists (BDT1-BDT4), the type-I / one-legged factorization of a group twist,
and the reflections of trivial skew braces.

A braided group is a FiniteGroup plus a BraidedSet on the same carrier, with
the tables laid out as in yb_core: sigma[a][b] = a⇀b, rho[b][a] = a↼b.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    BdtViolation,
    FalsificationEvent,
    HypothesisViolation,
    NoIdentity,
    NoInverse,
    NotABraiding,
    NotAGroupReflection,
    NotASkewBrace,
    NotAssociative,
    NotBijective,
    NotFaithful,
    NotFixing,
    NotIsomorphism,
    PropertyFailure,
    SizeLimitExceeded,
    SizeMismatch,
)
from twist_core import TwistDatum, check_drinfeld_twist, require_twist, search_twist_data, twist_from_reflection
from yb_core import (
    BraidedSet,
    FiniteMap,
    Report,
    Side,
    SquareMap,
    as_table,
    check_range,
    check_reflection,
    composition_condition,
    conjugate,
    cube_map,
    decode,
    digits,
    double_conjugation,
    first_true,
    guitar_map,
    inverse_codes,
    is_faithful_right_action,
    k_derived,
    on_first_two,
    on_last_two,
    ybe_first_violation,
)

logger = logging.getLogger("reflectwist.braided_group")

# the twist factorization reruns a twist-data search per call
DECOMPOSE_MAX_ORDER = 6


class Viability(Enum):
    """What the k-twisted product turns G into"""
    NOT_GROUP = "not_group"
    GROUP_ONLY = "group_only"
    BRAIDED_GROUP = "braided_group"


# ============================================================================
# GROUPS
# ============================================================================

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A Cayley table mul[a][b] = ab with identity e and inverses inv"""
    n: int
    mul: np.ndarray
    e: int
    inv: np.ndarray

    def __post_init__(self):
        for name in ("mul", "inv"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @property
    def has_exponent_two(self) -> bool:
        x = np.arange(self.n)
        return bool(np.all(self.mul[x, x] == self.e))

    def opposite(self) -> "FiniteGroup":
        return FiniteGroup(self.n, self.mul.T, self.e, self.inv)

    def key(self) -> Tuple[int, ...]:
        return (self.n, self.e) + tuple(self.mul.ravel().tolist())

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "mul": self.mul.tolist(), "identity": self.e}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def validate_group(mul: Any) -> FiniteGroup:
    """Associativity, then a two-sided identity, then two-sided inverses"""
    table = as_table(mul, "mul")
    n = table.shape[0]
    check_range(table, n, "mul")

    a, b, c = np.indices((n, n, n))
    bad = np.argwhere(table[table[a, b], c] != table[a, table[b, c]])
    if bad.size:
        a0, b0, c0 = (int(x) for x in bad[0])
        raise NotAssociative(f"(ab)c ≠ a(bc) at ({a0},{b0},{c0})", {"a": a0, "b": b0, "c": c0})

    points = np.arange(n)
    identities = [x for x in range(n) if np.array_equal(table[x], points) and np.array_equal(table[:, x], points)]
    if not identities:
        raise NoIdentity("no two-sided identity", {})
    e = identities[0]

    inv = np.empty(n, dtype=np.int64)
    for x in range(n):
        hits = np.flatnonzero((table[x] == e) & (table[:, x] == e))
        if not hits.size:
            raise NoInverse(f"{x} has no two-sided inverse", {"x": x})
        inv[x] = hits[0]
    return FiniteGroup(n, table, e, inv)


def transport_table(table: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """The operation carried along the relabelling x ↦ perm[x]"""
    out = np.empty_like(table)
    out[np.ix_(perm, perm)] = perm[table]
    return out


def relabel_group(grp: FiniteGroup, perm: Optional[Sequence[int]] = None) -> FiniteGroup:
    """Relabel by perm; by default swap the identity into index 0"""
    if perm is None:
        perm = np.arange(grp.n)
        perm[[0, grp.e]] = perm[[grp.e, 0]]
    return validate_group(transport_table(grp.mul, np.asarray(perm)))


def cyclic_group(n: int) -> FiniteGroup:
    a, b = np.indices((n, n))
    return validate_group((a + b) % n)


def symmetric_group(m: int) -> FiniteGroup:
    """Permutations of 0..m-1 in lexicographic order, (pq)(x) = p(q(x))"""
    perms = list(itertools.permutations(range(m)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [[index[tuple(p[x] for x in q)] for q in perms] for p in perms]
    return validate_group(mul)


def dihedral_group(m: int) -> FiniteGroup:
    """Order 2m; code j·m + i stands for r^i s^j"""
    n = 2 * m
    x, y = np.indices((n, n))
    i, a = x % m, x // m
    j, b = y % m, y // m
    rot = (i + np.where(a == 0, j, -j)) % m
    return validate_group(((a + b) % 2) * m + rot)


def quaternion_group() -> FiniteGroup:
    """Q₈ with code 4·s + u: sign s ∈ {+,−}, unit u ∈ {1, i, j, k}"""
    # unit products as (sign, unit)
    units = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ]
    mul = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            sign, unit = units[x % 4][y % 4]
            mul[x, y] = 4 * ((sign + x // 4 + y // 4) % 2) + unit
    return validate_group(mul)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Code a·|h| + b for the pair (a, b)"""
    x, y = np.indices((g.n * h.n, g.n * h.n))
    first = g.mul[x // h.n, y // h.n]
    second = h.mul[x % h.n, y % h.n]
    return validate_group(first * h.n + second)


def generated_subgroup(grp: FiniteGroup, gens: Sequence[int]) -> List[int]:
    seen = {grp.e}
    frontier = [grp.e]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = int(grp.mul[x, g])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return sorted(seen)


def minimal_generating_set(grp: FiniteGroup) -> Tuple[int, ...]:
    """Smallest generating set, lexicographically first among those"""
    others = [x for x in range(grp.n) if x != grp.e]
    for size in range(0, len(others) + 1):
        for gens in itertools.combinations(others, size):
            if len(generated_subgroup(grp, gens)) == grp.n:
                return gens
    return tuple(others)


def _extend_on_generators(
    src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> Optional[np.ndarray]:
    image = np.full(src.n, -1, dtype=np.int64)
    image[src.e] = dst.e
    frontier = [src.e]
    while frontier:
        x = frontier.pop()
        for g, v in zip(gens, images):
            y, w = src.mul[x, g], dst.mul[image[x], v]
            if image[y] < 0:
                image[y] = w
                frontier.append(y)
            elif image[y] != w:
                return None
    if np.any(image < 0):
        return None
    if not np.array_equal(image[src.mul], dst.mul[np.ix_(image, image)]):
        return None
    return image


def homomorphisms(
    src: FiniteGroup, dst: FiniteGroup, bijective: bool = False, limit: Optional[int] = None
) -> List[np.ndarray]:
    """Every homomorphism src → dst, fixed by its values on a minimal generating set"""
    gens = minimal_generating_set(src)
    found = []
    for images in itertools.product(range(dst.n), repeat=len(gens)):
        hom = _extend_on_generators(src, dst, gens, images)
        if hom is None or (bijective and np.unique(hom).size != src.n):
            continue
        found.append(hom)
        if limit is not None and len(found) >= limit:
            break
    return found


def groups_isomorphic(g1: FiniteGroup, g2: FiniteGroup) -> Optional[FiniteMap]:
    if g1.n != g2.n or g1.is_abelian != g2.is_abelian:
        return None
    found = homomorphisms(g1, g2, bijective=True, limit=1)
    return FiniteMap(found[0]) if found else None


# ============================================================================
# SKEW BRACES AND BRAIDINGS
# ============================================================================

@dataclass(frozen=True, eq=False)
class SkewBrace:
    """Additive and multiplicative groups on one carrier with a shared identity"""
    add: FiniteGroup
    mul: FiniteGroup

    @property
    def n(self) -> int:
        return self.add.n

    @property
    def is_brace(self) -> bool:
        return self.add.is_abelian

    @property
    def is_trivial(self) -> bool:
        return self.add == self.mul

    def key(self) -> Tuple[int, ...]:
        return (self.n,) + tuple(self.add.mul.ravel().tolist()) + tuple(self.mul.mul.ravel().tolist())

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "add": self.add.mul.tolist(), "mul": self.mul.mul.tolist()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkewBrace) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def _group_of(value: Any) -> FiniteGroup:
    return value if isinstance(value, FiniteGroup) else validate_group(value)


def validate_skew_brace(add: Any, mul: Any) -> SkewBrace:
    """a(b+c) = ab − a + ac on every triple"""
    A, M = _group_of(add), _group_of(mul)
    if A.n != M.n:
        raise SizeMismatch(f"additive order {A.n}, multiplicative order {M.n}", {"add": A.n, "mul": M.n})
    if A.e != M.e:
        raise NotASkewBrace("the two identities differ", {"add": A.e, "mul": M.e})
    n = A.n
    a, b, c = np.indices((n, n, n))
    lhs = M.mul[a, A.mul[b, c]]
    rhs = A.mul[A.mul[M.mul[a, b], A.inv[a]], M.mul[a, c]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a0, b0, c0 = (int(x) for x in bad[0])
        raise NotASkewBrace(f"a(b+c) ≠ ab − a + ac at ({a0},{b0},{c0})", {"a": a0, "b": b0, "c": c0})
    return SkewBrace(A, M)


def trivial_skew_brace(grp: FiniteGroup) -> SkewBrace:
    return SkewBrace(grp, grp)


@dataclass(frozen=True, eq=False)
class BraidedGroup:
    grp: FiniteGroup
    bs: BraidedSet

    @property
    def n(self) -> int:
        return self.grp.n

    def key(self) -> Tuple[int, ...]:
        return self.grp.key() + self.bs.key()

    def to_dict(self) -> Dict[str, Any]:
        return {**self.grp.to_dict(), "sigma": self.bs.sigma.tolist(), "rho": self.bs.rho.tolist()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BraidedGroup) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def check_braiding(bg: BraidedGroup) -> Report:
    """YBE plus BG1-BG5 on every point, pair and triple"""
    grp, s, p = bg.grp, bg.bs.sigma, bg.bs.rho
    M, e, n = grp.mul, grp.e, grp.n

    violation = ybe_first_violation(s, p)
    if violation is not None:
        return Report("braiding", False, failed=violation[3], witness=violation[:3])

    x = np.arange(n)
    a2, b2 = np.indices((n, n))
    a, b, c = np.indices((n, n, n))
    axioms = (
        ("BG1", (s[x, e] == e) & (p[e, x] == x)),
        ("BG2", (s[e, x] == x) & (p[x, e] == e)),
        ("BG3", (s[a, M[b, c]] == M[s[a, b], s[p[b, a], c]]) & (p[M[b, c], a] == p[c, p[b, a]])),
        ("BG4", (s[M[a, b], c] == s[a, s[b, c]]) & (p[c, M[a, b]] == M[p[s[b, c], a], p[c, b]])),
        ("BG5", M[s[a2, b2], p[b2, a2]] == M[a2, b2]),
    )
    for name, ok in axioms:
        bad = np.argwhere(~ok)
        if bad.size:
            return Report("braiding", False, failed=name, witness=tuple(int(v) for v in bad[0]))
    return Report("braiding", True)


def require_braiding(bg: BraidedGroup) -> None:
    report = check_braiding(bg)
    if not report.ok:
        raise NotABraiding(
            f"{report.failed} fails at {report.witness}",
            {"axiom": report.failed, "witness": list(report.witness)},
        )


def braiding_from_skewbrace(sb: SkewBrace) -> BraidedGroup:
    """a⇀b = −a + ab, a↼b = (a⇀b)⁻¹ab"""
    n = sb.n
    A, neg = sb.add.mul, sb.add.inv
    M, minv = sb.mul.mul, sb.mul.inv
    a, b = np.indices((n, n))
    sigma = A[neg[a], M[a, b]]
    right = M[M[minv[sigma], a], b]         # right[a][b] = a↼b
    bg = BraidedGroup(sb.mul, BraidedSet.from_tables(sigma, right.T))
    report = check_braiding(bg)
    if not report.ok:
        raise FalsificationEvent(
            f"skew brace braiding fails {report.failed} at {report.witness}",
            {"axiom": report.failed, "witness": list(report.witness)},
        )
    return bg


def skewbrace_from_braiding(bg: BraidedGroup) -> SkewBrace:
    """a + b = a(a⁻¹⇀b)"""
    n = bg.n
    M, minv = bg.grp.mul, bg.grp.inv
    a, b = np.indices((n, n))
    add = M[a, bg.bs.sigma[minv[a], b]]
    return validate_skew_brace(validate_group(add), bg.grp)


def additive_group_of(bg: BraidedGroup) -> FiniteGroup:
    return skewbrace_from_braiding(bg).add


def is_faithful(bg: BraidedGroup) -> bool:
    return is_faithful_right_action(bg.bs)


# ============================================================================
# GROUP REFLECTIONS
# ============================================================================

def _first_witness(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    bad = np.argwhere(~mask)
    return tuple(int(v) for v in bad[0]) if bad.size else None


def group_reflection_axioms(bg: BraidedGroup, k: FiniteMap) -> Dict[str, Optional[Tuple[int, ...]]]:
    """First witness of each of BRE1, BRE2, BRE3 and BRE3′ (None when it holds)"""
    if k.n != bg.n:
        raise SizeMismatch(f"map on {k.n} points, group of order {bg.n}", {"k": k.n, "n": bg.n})
    M, e, n = bg.grp.mul, bg.grp.e, bg.n
    s, p, kk = bg.bs.sigma, bg.bs.rho, k.k
    a, b = np.indices((n, n))
    x = kk[M[a, kk[b]]]
    return {
        "BRE1": None if kk[e] == e else (e,),
        "BRE2": _first_witness(kk[M[a, b]] == M[s[a, kk[b]], kk[p[kk[b], a]]]),
        "BRE3": _first_witness(kk[a] == s[s[a, b], kk[p[b, a]]]),
        "BRE3'": _first_witness(M[x, x] == e),
    }


def check_group_reflection(bg: BraidedGroup, k: FiniteMap) -> Report:
    """
    BRE1-BRE3 (and BRE3′ for information). A group reflection is always a set
    reflection, so the set-level equation is re-checked whenever BRE1-BRE3 hold.
    """
    found = group_reflection_axioms(bg, k)
    failed = next((name for name in ("BRE1", "BRE2", "BRE3") if found[name] is not None), None)
    details = {
        name: {"ok": w is None, "witness": list(w) if w is not None else None} for name, w in found.items()
    }
    if failed is None:
        set_level = check_reflection(bg.bs, k, Side.RIGHT)
        if not set_level.ok:
            raise FalsificationEvent(
                f"group reflection {k.tolist()} fails the reflection equation at {set_level.witness}",
                {"k": k.tolist(), "pair": list(set_level.witness)},
            )
    return Report(
        "group-reflection",
        failed is None,
        failed=failed,
        witness=found[failed] if failed else None,
        details=details,
    )


def is_group_reflection(bg: BraidedGroup, k: FiniteMap) -> bool:
    found = group_reflection_axioms(bg, k)
    return found["BRE1"] is None and found["BRE2"] is None and found["BRE3"] is None


def require_group_reflection(bg: BraidedGroup, k: FiniteMap, which: str = "k") -> None:
    report = check_group_reflection(bg, k)
    if not report.ok:
        raise NotAGroupReflection(
            f"{which} fails {report.failed} at {report.witness}",
            {"which": which, "axiom": report.failed, "witness": list(report.witness)},
        )


def twisted_product(bg: BraidedGroup, F: SquareMap) -> np.ndarray:
    """m∘F⁻¹ as a Cayley table"""
    return bg.grp.mul.ravel()[F.inverse().table].reshape(bg.n, bg.n)


def twist_braided_group(bg: BraidedGroup, F: SquareMap) -> BraidedGroup:
    """(G, m∘F⁻¹, F·r·F⁻¹), validated as a group; the braiding is not checked here"""
    return BraidedGroup(validate_group(twisted_product(bg, F)), conjugate(bg.bs, F))


def twisted_braided_group(bg: BraidedGroup, k: FiniteMap) -> BraidedGroup:
    """
    G^(k): product a∘b = (a↼k(b)⁻¹)·b, identity 1, inverse a⁻¹↼k(a), braiding
    J·r·J⁻¹. The reflection twist (J, Φ, Ψ) is verified against BDT1-BDT4.
    """
    require_group_reflection(bg, k)
    J = guitar_map(bg.bs, k)
    try:
        grp = validate_group(twisted_product(bg, J))
    except PropertyFailure as exc:
        raise FalsificationEvent(f"twisted product of a group reflection is not a group: {exc}", exc.witness)
    expected_inv = bg.bs.rho[k.k, bg.grp.inv]
    if grp.e != bg.grp.e or not np.array_equal(grp.inv, expected_inv):
        raise FalsificationEvent(
            "twisted group has the wrong identity or inverses",
            {"identity": grp.e, "inverse": grp.inv.tolist(), "expected": expected_inv.tolist()},
        )

    twisted = BraidedGroup(grp, k_derived(bg.bs, k))
    report = check_braiding(twisted)
    if not report.ok:
        raise FalsificationEvent(
            f"twisted braiding fails {report.failed} at {report.witness}",
            {"axiom": report.failed, "k": k.tolist()},
        )
    group_reflection_twist(bg, k)
    return twisted


# ============================================================================
# GROUP DRINFELD TWISTS
# ============================================================================

@dataclass(frozen=True, eq=False)
class GroupTwist:
    """A group Drinfeld twist src → dst with the number of (Φ, Ψ) it admits"""
    src: BraidedGroup
    dst: BraidedGroup
    datum: TwistDatum
    multiplicity: int = 1


def _multiplication_maps(grp: FiniteGroup) -> Tuple[np.ndarray, np.ndarray]:
    """m₁₂ and m₂₃ from X³ codes to X² codes"""
    n = grp.n
    a, b, c = digits(n, 3)
    return grp.mul[a, b] * n + c, a * n + grp.mul[b, c]


def _bdt2_holds(grp: FiniteGroup, F: SquareMap) -> Optional[Tuple[int, ...]]:
    n, e = grp.n, grp.e
    p, q = digits(n, 2)
    bad = first_true(((p == e) | (q == e)) & (F.table != np.arange(n * n)))
    return None if bad is None else decode(bad, n, 2)


def check_group_drinfeld_twist(bg: BraidedGroup, t: TwistDatum) -> Report:
    """BDT1-BDT4 for a set-level twist; on success G^F must be a braided group"""
    require_twist(bg.bs, t)
    n, e = bg.n, bg.grp.e
    codes = np.arange(n ** 3)
    a, _, c = digits(n, 3)
    phi, psi, F = t.Phi.table, t.Psi.table, t.F.table
    m12, m23 = _multiplication_maps(bg.grp)

    bdt1 = ((a != e) | (phi == codes)) & ((c != e) | (psi == codes))
    bad = first_true(~bdt1)
    if bad is not None:
        return Report("group-drinfeld-twist", False, failed="BDT1", witness=decode(bad, n, 3))
    pair = _bdt2_holds(bg.grp, t.F)
    if pair is not None:
        return Report("group-drinfeld-twist", False, failed="BDT2", witness=pair)
    for name, lhs, rhs in (("BDT3", m23[phi], F[m23]), ("BDT4", m12[psi], F[m12])):
        bad = first_true(lhs != rhs)
        if bad is not None:
            return Report("group-drinfeld-twist", False, failed=name, witness=decode(bad, n, 3))

    try:
        twisted = twist_braided_group(bg, t.F)
    except PropertyFailure as exc:
        raise FalsificationEvent(f"m∘F⁻¹ is not a group for a group twist: {exc}", exc.witness)
    report = check_braiding(twisted)
    if twisted.grp.e != e or not report.ok:
        raise FalsificationEvent(
            "a group Drinfeld twist produced no braided group",
            {"identity": twisted.grp.e, "axiom": report.failed},
        )
    return Report("group-drinfeld-twist", True, details={"twisted": twisted.to_dict()})


def require_group_twist(bg: BraidedGroup, t: TwistDatum) -> None:
    report = check_group_drinfeld_twist(bg, t)
    if not report.ok:
        raise BdtViolation(
            f"{report.failed} fails at {report.witness}",
            {"axiom": report.failed, "witness": list(report.witness)},
        )


def group_reflection_twist(bg: BraidedGroup, k: FiniteMap) -> TwistDatum:
    """The reflection twist (J, Φ, Ψ) of a group reflection, checked against BDT1-BDT4"""
    require_group_reflection(bg, k)
    datum = twist_from_reflection(bg.bs, k)
    require_group_twist(bg, datum)
    return datum


def find_group_twist_data(bg: BraidedGroup, F: SquareMap) -> List[TwistDatum]:
    """
    Every (Φ, Ψ) making F a group Drinfeld twist. BDT1, BDT3 and BDT4 pin the
    candidate images of Ψ point by point before the set-level search runs.
    """
    n, e = bg.n, bg.grp.e
    if F.n != n:
        raise SizeMismatch(f"F on {F.n} points, group of order {n}", {"F": F.n, "n": n})
    if not F.is_bijective or _bdt2_holds(bg.grp, F) is not None:
        return []
    m12, m23 = _multiplication_maps(bg.grp)
    M = inverse_codes(on_last_two(F.table, n))[on_first_two(F.table, n)]
    codes = np.arange(n ** 3)
    a, _, c = digits(n, 3)

    allowed = (m12[None, :] == F.table[m12][:, None]) & (m23[M][None, :] == F.table[m23][:, None])
    allowed[c == e] &= codes[None, :] == codes[c == e][:, None]
    allowed[a == e] &= M[None, :] == codes[a == e][:, None]
    domains = [np.flatnonzero(row) for row in allowed]
    if any(d.size == 0 for d in domains):
        return []
    found = search_twist_data(bg.bs, F, domains)
    return [t for t in found if check_group_drinfeld_twist(bg, t).ok]


# ============================================================================
# OPTIMALITY AND TORSION
# ============================================================================

def _weak_bre3_prime(bg: BraidedGroup, k: FiniteMap) -> bool:
    """ρ_{k(a k(b))²} = ρ₁ for all a, b"""
    M, n = bg.grp.mul, bg.n
    a, b = np.indices((n, n))
    x = k.k[M[a, k.k[b]]]
    return bool(np.all(bg.bs.rho[M[x, x]] == bg.bs.rho[bg.grp.e]))


@dataclass(frozen=True)
class ViabilityVerdict:
    """What the twisted tables are, next to what BRE1+BRE2 and BRE3′ predict"""
    viability: Viability
    group_by_axioms: bool
    braided_by_axioms: bool
    bre3_prime_witness: Optional[Tuple[int, ...]]

    @property
    def group_agrees(self) -> bool:
        return (self.viability is not Viability.NOT_GROUP) == self.group_by_axioms

    @property
    def braided_agrees(self) -> bool:
        return (self.viability is Viability.BRAIDED_GROUP) == self.braided_by_axioms

    def to_dict(self) -> Dict[str, Any]:
        return {
            "viability": self.viability.value,
            "group_by_axioms": self.group_by_axioms,
            "braided_by_axioms": self.braided_by_axioms,
            "bre3_prime_witness": list(self.bre3_prime_witness) if self.bre3_prime_witness else None,
        }


def viability_verdict(bg: BraidedGroup, k: FiniteMap) -> ViabilityVerdict:
    """
    Whether (G, m∘J⁻¹, 1) is a group, and whether J·r·J⁻¹ braids it, decided
    on the twisted tables. The axiom predictions ride along unenforced: BRE3′
    fails for k = id on the trivial brace of S₃ while the twisted structure
    is a braided group.
    """
    axioms = group_reflection_axioms(bg, k)
    if not is_faithful(bg):
        raise NotFaithful(
            "the right action is not faithful",
            {"weak_bre3_prime": _weak_bre3_prime(bg, k), "k": k.tolist()},
        )
    group_by_axioms = axioms["BRE1"] is None and axioms["BRE2"] is None
    braided_by_axioms = group_by_axioms and axioms["BRE3'"] is None

    try:
        grp = validate_group(twisted_product(bg, guitar_map(bg.bs, k)))
        group_ok = grp.e == bg.grp.e
    except PropertyFailure:
        group_ok = False
    viability = Viability.NOT_GROUP
    if group_ok:
        twisted_bs = k_derived(bg.bs, k, allow_non_reflection=True)
        braided_ok = twisted_bs.ybe_holds and check_braiding(BraidedGroup(grp, twisted_bs)).ok
        viability = Viability.BRAIDED_GROUP if braided_ok else Viability.GROUP_ONLY

    verdict = ViabilityVerdict(viability, group_by_axioms, braided_by_axioms, axioms["BRE3'"])
    if not (verdict.group_agrees and verdict.braided_agrees):
        logger.debug("k = %s: tables say %s, axioms disagree", k.tolist(), viability.value)
    return verdict


def classify_twist_viability(bg: BraidedGroup, k: FiniteMap) -> Viability:
    return viability_verdict(bg, k).viability


def two_torsion_check(bg: BraidedGroup, k: FiniteMap) -> Report:
    """For a bijective group reflection: ρ_{k(a)²} = ρ₁, and a² = 1 when ↼ is faithful"""
    if not k.is_bijective:
        raise NotBijective("k is not a bijection", {"which": "k"})
    require_group_reflection(bg, k)
    M, e, n = bg.grp.mul, bg.grp.e, bg.n
    x = np.arange(n)
    sq = M[k.k, k.k]
    rho_ok = np.all(bg.bs.rho[sq] == bg.bs.rho[e], axis=1)
    faithful = is_faithful(bg)
    details: Dict[str, Any] = {"faithful": faithful, "rho_level": bool(rho_ok.all()), "exponent_two": None}
    if not rho_ok.all():
        return Report("two-torsion", False, failed="rho-level", witness=(int(np.argmin(rho_ok)),), details=details)
    if faithful:
        squares_ok = M[x, x] == e
        details["exponent_two"] = bool(squares_ok.all())
        if not squares_ok.all():
            return Report(
                "two-torsion", False, failed="exponent", witness=(int(np.argmin(squares_ok)),), details=details
            )
    return Report("two-torsion", True, details=details)


# ============================================================================
# COMPOSING REFLECTIONS
# ============================================================================

@dataclass(frozen=True)
class EllCandidate:
    """ℓ(a) = k(a)·k(h(a))⁻¹·h(a) and whether it is a reflection on either side"""
    ell: FiniteMap
    reflection_for_r: bool
    reflection_for_twisted: bool
    set_reflection_for_r: bool
    set_reflection_for_twisted: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ell": self.ell.tolist(),
            "reflection_for_r": self.reflection_for_r,
            "reflection_for_twisted": self.reflection_for_twisted,
            "set_reflection_for_r": self.set_reflection_for_r,
            "set_reflection_for_twisted": self.set_reflection_for_twisted,
        }


def ell_candidate(
    bg: BraidedGroup, k: FiniteMap, h: FiniteMap, twisted: Optional[BraidedGroup] = None
) -> EllCandidate:
    """
    The candidate composite of k and h. Its guitar conjugation equals the double
    conjugation by construction; that equality is asserted, the reflection
    properties are reported.
    """
    require_group_reflection(bg, k, "k")
    if twisted is None:
        twisted = twisted_braided_group(bg, k)
    require_group_reflection(twisted, h, "h")

    M, minv = bg.grp.mul, bg.grp.inv
    ell = FiniteMap(M[M[k.k, minv[k.k[h.k]]], h.k])
    target = double_conjugation(bg.bs, k, h)
    if k_derived(bg.bs, ell, allow_non_reflection=True) != target or not composition_condition(bg.bs, k, h, ell):
        raise FalsificationEvent(
            "r^(ℓ) differs from (r^(k))^(h)",
            {"k": k.tolist(), "h": h.tolist(), "ell": ell.tolist()},
        )
    return EllCandidate(
        ell=ell,
        reflection_for_r=is_group_reflection(bg, ell),
        reflection_for_twisted=is_group_reflection(twisted, ell),
        set_reflection_for_r=check_reflection(bg.bs, ell).ok,
        set_reflection_for_twisted=check_reflection(twisted.bs, ell).ok,
    )


# ============================================================================
# TYPE-I AND ONE-LEGGED TWISTS
# ============================================================================

def _family_table(grp: FiniteGroup, family: Any) -> np.ndarray:
    fam = as_table(family, "family", square=False)
    if fam.shape != (grp.n, grp.n):
        raise SizeMismatch(
            f"family needs {grp.n} maps on {grp.n} points, got {fam.shape}",
            {"shape": list(fam.shape), "n": grp.n},
        )
    check_range(fam, grp.n, "family")
    return fam


def family_target(grp: FiniteGroup, family: Any) -> FiniteGroup:
    """The product carried along f_1: ā ·̄ b̄ = f_1(f_1⁻¹(ā) · f_1⁻¹(b̄))"""
    fam = _family_table(grp, family)
    f = fam[grp.e]
    if np.unique(f).size != grp.n:
        raise NotIsomorphism(f"f_{grp.e} is not bijective", {"x": grp.e})
    return validate_group(transport_table(grp.mul, f))


def type1_twist(grp: FiniteGroup, family: Any, target: Optional[FiniteGroup] = None) -> GroupTwist:
    """
    F(x,y) = (f_{xy}(x), f_{xy}(y)) from isomorphisms f_x: (G,·) → (G,·̄) with
    f_x(x) = x, as a twist between the two trivial skew braces.
    """
    n, M = grp.n, grp.mul
    fam = _family_table(grp, family)
    for x in range(n):
        if np.unique(fam[x]).size != n:
            raise NotIsomorphism(f"f_{x} is not bijective", {"x": x})
        if fam[x, x] != x:
            raise NotFixing(f"f_{x}({x}) = {int(fam[x, x])}", {"x": x, "image": int(fam[x, x])})
    if target is None:
        target = family_target(grp, fam)
    a, b = np.indices((n, n))
    for x in range(n):
        f = fam[x]
        bad = first_true((f[M[a, b]] != target.mul[f[a], f[b]]).ravel())
        if bad is not None:
            raise NotIsomorphism(
                f"f_{x} is not a homomorphism onto the target",
                {"x": x, "pair": list(divmod(bad, n))},
            )

    p, q = digits(n, 2)
    z = M[p, q]
    F = SquareMap(n, fam[z, p] * n + fam[z, q])
    src = braiding_from_skewbrace(trivial_skew_brace(grp))
    dst = braiding_from_skewbrace(trivial_skew_brace(target))
    found = find_group_twist_data(src, F)
    if not found:
        raise FalsificationEvent("a fixing family of isomorphisms gives no group twist", {"family": fam.tolist()})
    if len(found) > 1:
        logger.warning("type-I twist admits %d choices of (Φ, Ψ)", len(found))
    if conjugate(src.bs, F) != dst.bs or not np.array_equal(twisted_product(src, F), target.mul):
        raise FalsificationEvent("type-I twist does not land on the target trivial brace", {"family": fam.tolist()})
    return GroupTwist(src, dst, found[0], len(found))


def compose_families(f: Any, g: Any) -> np.ndarray:
    """{g_x ∘ f_x}"""
    f, g = np.asarray(f), np.asarray(g)
    return np.take_along_axis(g, f, axis=1)


@dataclass(frozen=True)
class OneLeggedResult:
    report: Report
    datum: Optional[TwistDatum]


def _one_legged_datum(bg: BraidedGroup, V: np.ndarray) -> TwistDatum:
    n, M, minv = bg.n, bg.grp.mul, bg.grp.inv
    p, q = digits(n, 2)
    a, b, c = digits(n, 3)
    vb = V[c, b]
    u = M[V[c, M[a, b]], minv[vb]]
    return TwistDatum(
        SquareMap(n, V[q, p] * n + q),
        cube_map(n, (V[M[b, c], a] * n + b) * n + c),
        cube_map(n, (u * n + vb) * n + c),
    )


def _is_group_twist(bg: BraidedGroup, t: TwistDatum) -> bool:
    if not (t.F.is_bijective and t.Phi.is_bijective and t.Psi.is_bijective):
        return False
    return check_drinfeld_twist(bg.bs, t).ok and check_group_drinfeld_twist(bg, t).ok


def _unit_hypotheses(grp: FiniteGroup, varrho: Any) -> np.ndarray:
    V = as_table(varrho, "varrho")
    if V.shape[0] != grp.n:
        raise SizeMismatch(f"varrho on {V.shape[0]} points, group of order {grp.n}", {"varrho": V.shape[0]})
    check_range(V, grp.n, "varrho")
    if not np.array_equal(V[grp.e], np.arange(grp.n)):
        raise HypothesisViolation("ϱ_1 is not the identity", {"row": V[grp.e].tolist()})
    bad = first_true(V[:, grp.e] != grp.e)
    if bad is not None:
        raise HypothesisViolation(f"ϱ_{bad}(1) ≠ 1", {"b": bad})
    return V


def one_legged_twist_check(bg: BraidedGroup, varrho: Any) -> OneLeggedResult:
    """
    Whether (a,b) ↦ (ϱ_b(a), b) is a group Drinfeld twist, by the pointwise
    conditions on ϱ and, independently, by building Φ and Ψ and running the
    twist checks. varrho[b][a] = ϱ_b(a).
    """
    V = _unit_hypotheses(bg.grp, varrho)
    n, M, minv = bg.n, bg.grp.mul, bg.grp.inv
    s, p = bg.bs.sigma, bg.bs.rho
    a, b, c = np.indices((n, n, n))
    vb = V[c, b]
    vab = V[c, M[a, b]]
    u = M[vab, minv[vb]]
    v_right = V[c, p[b, a]]

    rows_ok = np.array([np.unique(row).size == n for row in V])
    conditions = (
        ("bijective", rows_ok),
        ("unitary", np.ones(1, dtype=bool)),
        ("dt1", V[vb, u] == V[M[b, c], a]),
        ("dt2-left", M[vab, minv[v_right]] == s[u, vb]),
        ("dt2-right", v_right == p[vb, u]),
    )
    status = {name: bool(mask.all()) for name, mask in conditions}
    failed = next((name for name, mask in conditions if not mask.all()), None)
    witness = _first_witness(dict(conditions)[failed]) if failed else None

    datum = _one_legged_datum(bg, V) if status["bijective"] else None
    by_datum = datum is not None and _is_group_twist(bg, datum)
    if by_datum != (failed is None):
        raise FalsificationEvent(
            "one-legged conditions and the twist axioms disagree",
            {"varrho": V.tolist(), "conditions": status, "twist": by_datum},
        )
    report = Report("one-legged-twist", failed is None, failed=failed, witness=witness, details={"conditions": status})
    return OneLeggedResult(report, datum if failed is None else None)


def abelian_flip_one_legged(grp: FiniteGroup, varrho: Any) -> bool:
    """On an abelian group with the flip: every ϱ_c an automorphism and ϱ_{bc}(a) = ϱ_{ϱ_c(b)}(ϱ_c(a))"""
    if not grp.is_abelian:
        raise HypothesisViolation("the flip braids only abelian groups", {"n": grp.n})
    V = _unit_hypotheses(grp, varrho)
    n, M = grp.n, grp.mul
    if any(np.unique(row).size != n for row in V):
        return False
    a, b, c = np.indices((n, n, n))
    automorphisms = np.all(V[c, M[a, b]] == M[V[c, a], V[c, b]])
    return bool(automorphisms and np.all(V[M[b, c], a] == V[V[c, b], V[c, a]]))


def trivial_brace_braiding(grp: FiniteGroup) -> BraidedGroup:
    return braiding_from_skewbrace(trivial_skew_brace(grp))


@dataclass(frozen=True)
class Decomposition:
    """t.F = g ∘ F_f with F_f of type I and g(a,b) = (ϱ_b(a), b)"""
    family: np.ndarray
    type1: GroupTwist
    varrho: np.ndarray
    one_legged_ok: Optional[bool]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.tolist(),
            "intermediate": self.type1.dst.grp.to_dict(),
            "varrho": self.varrho.tolist(),
            "one_legged_ok": self.one_legged_ok,
        }


def decompose_twist(src: BraidedGroup, dst: BraidedGroup, t: TwistDatum) -> Decomposition:
    """
    Factor a group twist src → dst. The type-I family is forced by the second
    coordinate, f_z(y) = second(F(z·y⁻¹, y)), and the remaining factor must act
    on the first leg only. Any failure of the factorization is a falsification.
    """
    n, M, minv, e = src.n, src.grp.mul, src.grp.inv, src.grp.e
    if n > DECOMPOSE_MAX_ORDER:
        raise SizeLimitExceeded(
            f"twist decomposition runs up to order {DECOMPOSE_MAX_ORDER}",
            {"states": n, "gate": DECOMPOSE_MAX_ORDER, "what": "decomposition"},
        )
    require_group_twist(src, t)
    landed = twist_braided_group(src, t.F)
    if landed != dst:
        raise BdtViolation("the twist does not send src to dst", {"expected": dst.to_dict()})

    z, y = np.indices((n, n))
    family = t.F.table[M[z, minv[y]] * n + y] % n
    try:
        type1 = type1_twist(src.grp, family)
    except PropertyFailure as exc:
        raise FalsificationEvent(f"forced type-I family is invalid: {exc}", {"family": family.tolist(), **exc.witness})

    g = t.F.table[type1.datum.F.inverse().table]
    first, second = np.divmod(g, n)
    p, q = digits(n, 2)
    if not np.array_equal(second, q):
        raise FalsificationEvent("remaining factor moves the second leg", {"family": family.tolist()})
    varrho = np.empty((n, n), dtype=np.int64)
    varrho[q, p] = first
    try:
        _unit_hypotheses(src.grp, varrho)
    except HypothesisViolation as exc:
        raise FalsificationEvent(f"one-legged factor is not unital: {exc}", exc.witness)

    intermediate = type1.dst.grp
    mid = BraidedGroup(intermediate, conjugate(src.bs, type1.datum.F))
    one_legged_ok = None
    if check_braiding(mid).ok:
        one_legged_ok = one_legged_twist_check(mid, varrho).report.ok
    logger.debug("decomposed twist: family %s, varrho %s", family.tolist(), varrho.tolist())
    return Decomposition(family, type1, varrho, one_legged_ok)


# ============================================================================
# TRIVIAL SKEW BRACES
# ============================================================================

def trivial_brace_reflections(grp: FiniteGroup) -> List[FiniteMap]:
    """
    Group reflections of the trivial skew brace on grp: homomorphisms with
    abelian image that are constant on conjugacy classes. Cross-checked against
    a direct scan (all n^n maps up to order 5, all antihomomorphisms beyond).
    """
    n, M, inv = grp.n, grp.mul, grp.inv
    a, b = np.indices((n, n))
    conj = M[M[inv[b], a], b]
    found = []
    for hom in homomorphisms(grp, grp):
        image = np.unique(hom)
        sub = M[np.ix_(image, image)]
        if np.array_equal(sub, sub.T) and np.array_equal(hom[conj], hom[a]):
            found.append(FiniteMap(hom))
    found.sort(key=lambda m: m.tolist())

    bg = trivial_brace_braiding(grp)
    if n <= 5:
        candidates = (np.array(c) for c in itertools.product(range(n), repeat=n))
    else:
        candidates = iter(homomorphisms(grp, grp.opposite()))
    scanned = sorted(
        (FiniteMap(c) for c in candidates if is_group_reflection(bg, FiniteMap(c))),
        key=lambda m: m.tolist(),
    )
    if scanned != found:
        raise FalsificationEvent(
            "class-function homomorphisms differ from the scanned group reflections",
            {"characterized": [m.tolist() for m in found], "scanned": [m.tolist() for m in scanned]},
        )
    return found
