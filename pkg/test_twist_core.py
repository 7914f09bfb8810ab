"""Drinfeld twist data, their algebra, and the B₃ representations they relate."""

import itertools

import numpy as np
import pytest

from errors import BraidRelationViolation, DtViolation, NotBijective, SizeLimitExceeded
from search import enumerate_reflections
from twist_core import (
    TwistDatum,
    braid_rep,
    check_drinfeld_twist,
    compose_twists,
    equivariant_bijections,
    find_conjugator,
    find_conjugators,
    find_twist_data,
    invert_twist,
    inversion_formula_report,
    representation_witness,
    require_twist,
    twist_from_isomorphism,
    twist_from_reflection,
)
from yb_core import (
    FiniteMap,
    SquareMap,
    conjugate,
    cube_map,
    double_conjugation,
    k_derived,
    permutation_solution,
    rack_solution,
    validate_shelf,
)


def pair_map(fn, n=2):
    return SquareMap.from_tuples([list(fn(a, b)) for a in range(n) for b in range(n)], n)


def triple_map(fn, n=2):
    return cube_map(n, np.array([(x * n + y) * n + z for x, y, z in (fn(*t) for t in itertools.product(range(n), repeat=3))]))


def conjugates(a, r1, r2):
    return np.array_equal(a[r1.gen12], r2.gen12[a]) and np.array_equal(a[r1.gen23], r2.gen23[a])


class TestGuitarTwists:
    def test_identity_reflection_on_quandle(self, dihedral_quandle):
        k = FiniteMap.identity(3)
        t = twist_from_reflection(dihedral_quandle, k)
        report = check_drinfeld_twist(dihedral_quandle, t)
        assert report.ok
        assert report.details["twisted"] == k_derived(dihedral_quandle, k).to_dict()

    def test_every_reflection_twists(self, dihedral_quandle, p3):
        for bs in (dihedral_quandle, p3):
            for k in enumerate_reflections(bs):
                t = twist_from_reflection(bs, k)
                assert conjugate(bs, t.F) == k_derived(bs, k)

    def test_witness_conjugates_representations(self, dihedral_quandle):
        for k in enumerate_reflections(dihedral_quandle):
            t = twist_from_reflection(dihedral_quandle, k)
            r1, r2 = braid_rep(dihedral_quandle), braid_rep(conjugate(dihedral_quandle, t.F))
            assert conjugates(representation_witness(t).table, r1, r2)

    def test_isomorphism_twist_fixes_p3(self, p3):
        t = twist_from_isomorphism(p3, FiniteMap.from_list([1, 2, 0]))
        assert conjugate(p3, t.F) == p3

    def test_identity_datum(self, p3):
        assert check_drinfeld_twist(p3, TwistDatum.identity(3)).ok


class TestTwistAlgebra:
    def test_composition_lands_on_double_twist(self, dihedral_quandle):
        for k in enumerate_reflections(dihedral_quandle):
            twisted = k_derived(dihedral_quandle, k)
            for h in enumerate_reflections(twisted):
                composed = compose_twists(
                    dihedral_quandle,
                    twist_from_reflection(dihedral_quandle, k),
                    twist_from_reflection(twisted, h),
                )
                assert conjugate(dihedral_quandle, composed.F) == double_conjugation(dihedral_quandle, k, h)

    def test_inverse_twist(self, dihedral_quandle):
        t = twist_from_reflection(dihedral_quandle, FiniteMap.identity(3))
        inverse = invert_twist(dihedral_quandle, t)
        assert inverse.F == t.F.inverse()
        assert conjugate(conjugate(dihedral_quandle, t.F), inverse.F) == dihedral_quandle

    def test_inversion_report_shows_corrected_form(self, dihedral_quandle):
        t = twist_from_reflection(dihedral_quandle, FiniteMap.identity(3))
        report = inversion_formula_report(dihedral_quandle, t)
        assert report["corrected_is_twist"]
        assert isinstance(report["literal_is_twist"], bool)


class TestPermutationTwists:
    def test_shift_with_trivial_legs_fails(self, p_swap):
        F = pair_map(lambda a, b: ((a + 1) % 2, b))
        with pytest.raises(DtViolation) as exc:
            require_twist(p_swap, TwistDatum(F, SquareMap.identity(2, 3), SquareMap.identity(2, 3)))
        assert exc.value.witness["axiom"] == "DT1"

    def test_swap_times_identity_twists_the_flip(self, flip):
        F = pair_map(lambda a, b: (1 - a, b))
        datum = TwistDatum(F, SquareMap.identity(2, 3), triple_map(lambda a, b, c: (1 - a, 1 - b, c)))
        assert check_drinfeld_twist(flip, datum).ok
        assert datum in find_twist_data(flip, F)

    def test_swap_times_identity_twists_swap_solution(self, p_swap):
        F = pair_map(lambda a, b: (1 - a, b))
        datum = TwistDatum(
            F,
            triple_map(lambda a, b, c: (1 - a, 1 - b, 1 - c)),
            triple_map(lambda a, b, c: (a, b, 1 - c)),
        )
        assert check_drinfeld_twist(p_swap, datum).ok
        assert datum in find_twist_data(p_swap, F)

    def test_swap_representations_are_conjugate(self, p_swap):
        F = pair_map(lambda a, b: (1 - a, b))
        r1, r2 = braid_rep(p_swap), braid_rep(conjugate(p_swap, F))
        a = triple_map(lambda x, y, z: (x, 1 - y, z)).table
        assert conjugates(a, r1, r2)
        assert find_conjugator(r1, r2) is not None

    @pytest.mark.parametrize("perm", list(itertools.permutations(range(4))))
    def test_twist_data_match_conjugators(self, p_swap, perm):
        # (Φ, Ψ) ↦ F₁₂Ψ is a bijection onto the conjugators, for every F
        F = SquareMap(2, np.array(perm))
        data = find_twist_data(p_swap, F)
        try:
            conjugators = find_conjugators(braid_rep(p_swap), braid_rep(conjugate(p_swap, F)))
        except BraidRelationViolation:
            conjugators = []
        assert len(data) == len(conjugators)
        assert sorted(representation_witness(t).table.tolist() for t in data) == sorted(
            c.table.tolist() for c in conjugators
        )


class TestSearchLimits:
    def test_twist_search_is_gated(self):
        bs = permutation_solution(list(range(4)), list(range(4)))
        with pytest.raises(SizeLimitExceeded):
            find_twist_data(bs, SquareMap.identity(4))

    def test_non_bijective_f(self, flip):
        with pytest.raises(NotBijective):
            find_twist_data(flip, SquareMap(2, np.zeros(4, dtype=np.int64)))

    def test_degenerate_solution_has_no_representation(self):
        bs = rack_solution(validate_shelf([[0, 0], [0, 0]]))
        with pytest.raises(NotBijective):
            braid_rep(bs)

    def test_equivariant_bijections_of_a_cycle(self):
        cycle = np.array([1, 2, 0])
        found = equivariant_bijections(3, [(cycle, cycle)])
        assert sorted(f.tolist() for f in found) == [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
