"""
Twist Core
==========
Set-theoretic Drinfeld twists (F, Φ, Ψ) of a braided set, their algebra
(composition, inversion), the standard constructions (from a reflection, from
an isomorphism), exhaustive searches for twist data, and the B₃
representations whose isomorphisms the twist data parametrize.

A datum is a twist for r when
    DT1  F₁₂Ψ = F₂₃Φ
    DT2  Ψr₁₂ = r₁₂Ψ
    DT3  Φr₂₃ = r₂₃Φ
and then r^F = F·r·F⁻¹ is again a solution.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    BraidRelationViolation,
    DtViolation,
    FalsificationEvent,
    NotBijective,
    SizeLimitExceeded,
    SizeMismatch,
)
from settings import get_settings
from structure_monoid import guitar_map_n
from yb_core import (
    BraidedSet,
    FiniteMap,
    Report,
    SquareMap,
    conjugate,
    cube_map,
    decode,
    digits,
    first_true,
    guitar_map,
    inverse_codes,
    is_permutation,
    on_first_two,
    on_last_two,
    require_reflection,
)

logger = logging.getLogger("reflectwist.twist_core")

# exhaustive twist / conjugator searches run up to this carrier size
MAX_SEARCH_CARRIER = 3


# ============================================================================
# DATA STRUCTURES
# ============================================================================

@dataclass(frozen=True, eq=False)
class TwistDatum:
    """F on X², Φ and Ψ on X³"""
    F: SquareMap
    Phi: SquareMap
    Psi: SquareMap

    @property
    def n(self) -> int:
        return self.F.n

    @classmethod
    def identity(cls, n: int) -> "TwistDatum":
        return cls(SquareMap.identity(n), SquareMap.identity(n, 3), SquareMap.identity(n, 3))

    def key(self) -> Tuple[Tuple[int, ...], ...]:
        return (
            tuple(self.F.table.tolist()),
            tuple(self.Phi.table.tolist()),
            tuple(self.Psi.table.tolist()),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "F": self.F.tuples(),
            "Phi": self.Phi.table.tolist(),
            "Psi": self.Psi.table.tolist(),
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TwistDatum) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class BraidRepresentation:
    """Images of σ₁₂ and σ₂₃ as permutations of X³"""
    n: int
    gen12: np.ndarray
    gen23: np.ndarray


# ============================================================================
# CHECKS
# ============================================================================

def _host_maps(bs: BraidedSet) -> Tuple[np.ndarray, np.ndarray]:
    r = bs.r_codes()
    return on_first_two(r, bs.n), on_last_two(r, bs.n)


def check_drinfeld_twist(bs: BraidedSet, t: TwistDatum) -> Report:
    """Pointwise DT1–DT3; on success the twisted solution is checked for YBE"""
    n = bs.n
    if t.n != n:
        raise SizeMismatch(f"twist on {t.n} points, solution on {n}", {"twist": t.n, "n": n})
    for which, m in (("F", t.F), ("Phi", t.Phi), ("Psi", t.Psi)):
        if not m.is_bijective:
            raise NotBijective(f"{which} is not a bijection", {"which": which})

    r12, r23 = _host_maps(bs)
    F12 = on_first_two(t.F.table, n)
    F23 = on_last_two(t.F.table, n)
    phi, psi = t.Phi.table, t.Psi.table
    axioms = (
        ("DT1", F12[psi], F23[phi]),
        ("DT2", psi[r12], r12[psi]),
        ("DT3", phi[r23], r23[phi]),
    )
    for name, lhs, rhs in axioms:
        bad = first_true(lhs != rhs)
        if bad is not None:
            return Report(
                "drinfeld-twist",
                False,
                failed=name,
                witness=decode(bad, n, 3),
                details={"lhs": list(decode(int(lhs[bad]), n, 3)), "rhs": list(decode(int(rhs[bad]), n, 3))},
            )

    twisted = conjugate(bs, t.F)
    if not twisted.ybe_holds:
        raise FalsificationEvent("a Drinfeld twist produced a non-solution", {"F": t.F.tuples()})
    return Report("drinfeld-twist", True, details={"twisted": twisted.to_dict()})


def require_twist(bs: BraidedSet, t: TwistDatum) -> None:
    report = check_drinfeld_twist(bs, t)
    if not report.ok:
        raise DtViolation(
            f"{report.failed} fails at {report.witness}",
            {"axiom": report.failed, "triple": list(report.witness)},
        )


# ============================================================================
# CONSTRUCTIONS
# ============================================================================

def twist_from_reflection(bs: BraidedSet, k: FiniteMap) -> TwistDatum:
    """
    The guitar twist of a right reflection:
        F = J,  Φ(a,b,c) = ((a↼(b⇀k(c)))↼k(b↼k(c)), b, c),
                Ψ(a,b,c) = (a↼(b⇀k(c)), b↼k(c), c)
    """
    bs.rho_inverse()
    require_reflection(bs, k)
    n = bs.n
    a, b, c = digits(n, 3)
    kc = k.k[c]
    psi1 = bs.rho[bs.sigma[b, kc], a]
    psi2 = bs.rho[kc, b]
    phi1 = bs.rho[k.k[psi2], psi1]
    datum = TwistDatum(
        guitar_map(bs, k),
        cube_map(n, (phi1 * n + b) * n + c),
        cube_map(n, (psi1 * n + psi2) * n + c),
    )
    require_twist(bs, datum)

    # both sides of DT1 are the three-strand guitar map
    common = on_first_two(datum.F.table, n)[datum.Psi.table]
    if not np.array_equal(common, guitar_map_n(bs, k, 3).table):
        raise FalsificationEvent("F₁₂Ψ differs from the three-strand guitar map", {"k": k.tolist()})
    return datum


def twist_from_isomorphism(bs: BraidedSet, f: FiniteMap) -> TwistDatum:
    """F = f×f, Ψ = id×id×f, Φ = f×id×id"""
    if not f.is_bijective:
        raise NotBijective("f is not a permutation", {"which": "f"})
    n = bs.n
    a, b, c = digits(n, 3)
    p, q = digits(n, 2)
    fk = f.k
    datum = TwistDatum(
        SquareMap(n, fk[p] * n + fk[q]),
        cube_map(n, (fk[a] * n + b) * n + c),
        cube_map(n, (a * n + b) * n + fk[c]),
    )
    require_twist(bs, datum)
    return datum


def compose_twists(bs: BraidedSet, t1: TwistDatum, t2: TwistDatum) -> TwistDatum:
    """t1 a twist for r, t2 a twist for r^F: returns (GF, F₂₃⁻¹φF₂₃Φ, F₁₂⁻¹ψF₁₂Ψ)"""
    n = bs.n
    require_twist(bs, t1)
    host = conjugate(bs, t1.F)
    require_twist(host, t2)

    F12 = on_first_two(t1.F.table, n)
    F23 = on_last_two(t1.F.table, n)
    phi = inverse_codes(F23)[t2.Phi.table[F23[t1.Phi.table]]]
    psi = inverse_codes(F12)[t2.Psi.table[F12[t1.Psi.table]]]
    composed = TwistDatum(t2.F.after(t1.F), cube_map(n, phi), cube_map(n, psi))
    require_twist(bs, composed)

    if conjugate(bs, composed.F) != conjugate(host, t2.F):
        raise FalsificationEvent("r^(GF) differs from (r^F)^G", {})
    return composed


def invert_twist(bs: BraidedSet, t: TwistDatum) -> TwistDatum:
    """t a twist for r: returns (F⁻¹, F₂₃Φ⁻¹F₂₃⁻¹, F₁₂Ψ⁻¹F₁₂⁻¹), a twist for r^F"""
    n = bs.n
    require_twist(bs, t)
    host = conjugate(bs, t.F)
    F12 = on_first_two(t.F.table, n)
    F23 = on_last_two(t.F.table, n)
    phi = F23[inverse_codes(t.Phi.table)[inverse_codes(F23)]]
    psi = F12[inverse_codes(t.Psi.table)[inverse_codes(F12)]]
    inverse = TwistDatum(t.F.inverse(), cube_map(n, phi), cube_map(n, psi))
    require_twist(host, inverse)

    if conjugate(host, inverse.F) != bs:
        raise FalsificationEvent("(r^F)^(F⁻¹) differs from r", {})
    return inverse


def inversion_formula_report(bs: BraidedSet, t: TwistDatum) -> Dict[str, Any]:
    """
    Evaluates the conjugation (F⁻¹, F₂₃⁻¹Φ⁻¹F₂₃, F₁₂⁻¹Ψ⁻¹F₁₂) against r^F next to
    the one invert_twist uses.
    """
    n = bs.n
    require_twist(bs, t)
    host = conjugate(bs, t.F)
    F12 = on_first_two(t.F.table, n)
    F23 = on_last_two(t.F.table, n)
    phi = inverse_codes(F23)[inverse_codes(t.Phi.table)[F23]]
    psi = inverse_codes(F12)[inverse_codes(t.Psi.table)[F12]]
    literal = TwistDatum(t.F.inverse(), cube_map(n, phi), cube_map(n, psi))
    report = check_drinfeld_twist(host, literal)
    return {
        "literal_is_twist": report.ok,
        "literal_failed": report.failed,
        "literal_witness": list(report.witness) if report.witness is not None else None,
        "corrected_is_twist": check_drinfeld_twist(host, invert_twist(bs, t)).ok,
        "coincide": literal == invert_twist(bs, t),
    }


# ============================================================================
# EXHAUSTIVE SEARCH
# ============================================================================

def equivariant_bijections(
    size: int,
    edges: Sequence[Tuple[np.ndarray, np.ndarray]],
    allowed: Optional[Sequence[Sequence[int]]] = None,
    limit: Optional[int] = None,
) -> List[np.ndarray]:
    """
    All bijections a of 0..size-1 with a(g[x]) = h[a(x)] for every edge (g, h).

    Backtracks over the first unassigned point; every assignment is pushed
    along the edges, so one choice fixes a whole orbit. `allowed[x]` restricts
    the candidate images of x.
    """
    edge_list = [(g.tolist(), h.tolist()) for g, h in edges]
    allowed_sets = None if allowed is None else [set(int(v) for v in vals) for vals in allowed]
    image = [-1] * size
    used = [False] * size
    found: List[np.ndarray] = []

    def assign(x: int, v: int, trail: List[int]) -> bool:
        stack = [(x, v)]
        while stack:
            y, w = stack.pop()
            current = image[y]
            if current >= 0:
                if current != w:
                    return False
                continue
            if used[w] or (allowed_sets is not None and w not in allowed_sets[y]):
                return False
            image[y] = w
            used[w] = True
            trail.append(y)
            for g, h in edge_list:
                stack.append((g[y], h[w]))
        return True

    def undo(trail: List[int]) -> None:
        for y in trail:
            used[image[y]] = False
            image[y] = -1

    def descend(start: int) -> bool:
        x = start
        while x < size and image[x] >= 0:
            x += 1
        if x == size:
            found.append(np.array(image, dtype=np.int64))
            return limit is not None and len(found) >= limit
        candidates = sorted(allowed_sets[x]) if allowed_sets is not None else range(size)
        for v in candidates:
            if used[v]:
                continue
            trail: List[int] = []
            if assign(x, v, trail) and descend(x + 1):
                undo(trail)
                return True
            undo(trail)
        return False

    descend(0)
    return found


def _twist_edges(bs: BraidedSet, F: SquareMap) -> Tuple[List[Tuple[np.ndarray, np.ndarray]], np.ndarray]:
    """Edges forcing Ψ by DT2/DT3, and M with Φ = M∘Ψ (DT1)"""
    n = bs.n
    r12, r23 = _host_maps(bs)
    F12 = on_first_two(F.table, n)
    F23 = on_last_two(F.table, n)
    M = inverse_codes(F23)[F12]
    T = inverse_codes(M)[r23[M]]
    edges = [(r12, r12), (r23, T)]
    if bs.invertible:
        edges += [(inverse_codes(r12), inverse_codes(r12)), (inverse_codes(r23), inverse_codes(T))]
    return edges, M


def search_twist_data(
    bs: BraidedSet,
    F: SquareMap,
    allowed: Optional[Sequence[Sequence[int]]] = None,
    limit: Optional[int] = None,
) -> List[TwistDatum]:
    """Every (Φ, Ψ) making F a twist for r, optionally with per-point domains for Ψ"""
    if not F.is_bijective:
        raise NotBijective("F is not a bijection", {"which": "F"})
    if F.n != bs.n:
        raise SizeMismatch(f"F on {F.n} points, solution on {bs.n}", {"F": F.n, "n": bs.n})
    n = bs.n
    edges, M = _twist_edges(bs, F)
    gate = get_settings().size_gate
    cap = gate + 1 if limit is None else limit
    psis = equivariant_bijections(n ** 3, edges, allowed, cap)
    if limit is None and len(psis) > gate:
        raise SizeLimitExceeded(
            f"more than {gate} twist data for this F",
            {"states": len(psis), "gate": gate, "what": "twist data"},
        )
    data = [TwistDatum(F, cube_map(n, M[psi]), cube_map(n, psi)) for psi in psis]
    data.sort(key=lambda t: (tuple(t.Psi.table.tolist()), tuple(t.Phi.table.tolist())))
    logger.debug("F admits %d twist data", len(data))
    return data


def find_twist_data(bs: BraidedSet, F: SquareMap) -> List[TwistDatum]:
    """Exhaustive list of twist data for F; empty certifies F is not a twist"""
    if bs.n > MAX_SEARCH_CARRIER:
        raise SizeLimitExceeded(
            f"twist-data search is exhaustive only up to |X| = {MAX_SEARCH_CARRIER}",
            {"n": bs.n, "gate": MAX_SEARCH_CARRIER, "what": "twist data"},
        )
    found = search_twist_data(bs, F)
    for datum in found:
        require_twist(bs, datum)
    return found


# ============================================================================
# BRAID GROUP REPRESENTATIONS
# ============================================================================

def braid_rep(bs: BraidedSet) -> BraidRepresentation:
    r12, r23 = _host_maps(bs)
    if not is_permutation(r12):
        raise NotBijective("r is not invertible, no representation of B₃", {"which": "r"})
    if not np.array_equal(r12[r23[r12]], r23[r12[r23]]):
        bad = first_true(r12[r23[r12]] != r23[r12[r23]])
        raise BraidRelationViolation(
            f"braid relation fails at {decode(bad, bs.n, 3)}",
            {"triple": list(decode(bad, bs.n, 3))},
        )
    return BraidRepresentation(bs.n, r12, r23)


def find_conjugators(
    r1: BraidRepresentation, r2: BraidRepresentation, limit: Optional[int] = None
) -> List[SquareMap]:
    """Every bijection a of X³ with a∘r1.gen = r2.gen∘a on both generators"""
    if r1.n != r2.n:
        raise SizeMismatch(f"representations on {r1.n} and {r2.n} points", {"r1": r1.n, "r2": r2.n})
    if r1.n > MAX_SEARCH_CARRIER:
        raise SizeLimitExceeded(
            f"conjugator search is exhaustive only up to |X| = {MAX_SEARCH_CARRIER}",
            {"n": r1.n, "gate": MAX_SEARCH_CARRIER, "what": "conjugators"},
        )
    edges = []
    for g1, g2 in ((r1.gen12, r2.gen12), (r1.gen23, r2.gen23)):
        edges.append((g1, g2))
        edges.append((inverse_codes(g1), inverse_codes(g2)))
    return [cube_map(r1.n, a) for a in equivariant_bijections(r1.n ** 3, edges, limit=limit)]


def find_conjugator(r1: BraidRepresentation, r2: BraidRepresentation) -> Optional[SquareMap]:
    found = find_conjugators(r1, r2, limit=1)
    return found[0] if found else None


def representation_witness(t: TwistDatum) -> SquareMap:
    """a = F₁₂Ψ, the isomorphism between the representations of r and r^F"""
    return cube_map(t.n, on_first_two(t.F.table, t.n)[t.Psi.table])
