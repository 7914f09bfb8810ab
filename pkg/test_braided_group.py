"""Groups, skew braces, braidings, group reflections and group twists."""

import numpy as np
import pytest

from braided_group import (
    BraidedGroup,
    Viability,
    abelian_flip_one_legged,
    check_braiding,
    check_group_drinfeld_twist,
    check_group_reflection,
    classify_twist_viability,
    compose_families,
    cyclic_group,
    decompose_twist,
    dihedral_group,
    direct_product,
    ell_candidate,
    group_reflection_twist,
    groups_isomorphic,
    homomorphisms,
    is_faithful,
    is_group_reflection,
    minimal_generating_set,
    one_legged_twist_check,
    quaternion_group,
    relabel_group,
    skewbrace_from_braiding,
    trivial_brace_braiding,
    trivial_brace_reflections,
    twisted_braided_group,
    two_torsion_check,
    type1_twist,
    validate_group,
    validate_skew_brace,
    viability_verdict,
)
from errors import HypothesisViolation, NoIdentity, NoInverse, NotAssociative, NotASkewBrace, NotFaithful, NotFixing
from search import enumerate_group_reflections
from twist_core import compose_twists
from yb_core import FiniteMap

Z4_ENDOMORPHISMS = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 0, 2], [0, 3, 2, 1]]

# f_x fixes x: negation on the 2-torsion points, identity elsewhere
NEGATING_FAMILY = [[0, 3, 2, 1], [0, 1, 2, 3], [0, 3, 2, 1], [0, 1, 2, 3]]


class TestGroups:
    def test_non_associative(self):
        with pytest.raises(NotAssociative) as exc:
            validate_group([[(a - b) % 3 for b in range(3)] for a in range(3)])
        assert exc.value.witness == {"a": 0, "b": 0, "c": 1}

    def test_no_identity(self):
        with pytest.raises(NoIdentity):
            validate_group([[0, 0], [0, 0]])

    def test_no_inverse(self):
        with pytest.raises(NoInverse) as exc:
            validate_group([[0, 1], [1, 1]])
        assert exc.value.witness == {"x": 1}

    def test_standard_groups(self, s3):
        assert not s3.is_abelian
        assert cyclic_group(5).is_abelian
        assert groups_isomorphic(dihedral_group(3), s3) is not None
        assert groups_isomorphic(quaternion_group(), dihedral_group(4)) is None
        assert groups_isomorphic(cyclic_group(4), direct_product(cyclic_group(2), cyclic_group(2))) is None

    def test_minimal_generating_sets(self, z4):
        assert minimal_generating_set(z4) == (1,)
        assert minimal_generating_set(direct_product(cyclic_group(2), cyclic_group(2))) == (1, 2)

    def test_endomorphisms_of_z4(self, z4):
        assert sorted(h.tolist() for h in homomorphisms(z4, z4)) == Z4_ENDOMORPHISMS

    def test_relabel_moves_identity(self, z4):
        moved = relabel_group(z4, [1, 0, 2, 3])
        assert moved.e == 1
        assert relabel_group(moved).e == 0


class TestSkewBraces:
    def test_z4_brace_products(self, z4_brace):
        mul = z4_brace.mul.mul
        assert (mul[1, 1], mul[2, 2], mul[1, 2], mul[2, 1]) == (0, 0, 3, 3)
        assert z4_brace.is_brace
        assert not z4_brace.is_trivial
        assert z4_brace.mul.has_exponent_two

    def test_round_trip(self, z4_brace, z4_braided):
        assert check_braiding(z4_braided).ok
        assert skewbrace_from_braiding(z4_braided) == z4_brace

    def test_relabelled_cyclic_product_is_not_a_brace(self, z4):
        with pytest.raises(NotASkewBrace):
            validate_skew_brace(z4, relabel_group(z4, [0, 2, 1, 3]))

    def test_identities_must_agree(self):
        with pytest.raises(NotASkewBrace):
            validate_skew_brace([[0, 1], [1, 0]], [[1, 0], [0, 1]])

    def test_trivial_brace_of_abelian_group_is_the_flip(self, z4):
        bg = trivial_brace_braiding(z4)
        for a in range(4):
            for b in range(4):
                assert bg.bs.r(a, b) == (b, a)
        assert not is_faithful(bg)

    def test_solution_that_ignores_the_unit(self, p_swap):
        # r(a,0) = (1, a) breaks r(a,1) = (1,a) with 1 = 0
        report = check_braiding(BraidedGroup(cyclic_group(2), p_swap))
        assert not report.ok
        assert report.failed == "BG1"


class TestGroupReflections:
    def test_trivial_brace_reflections_are_endomorphisms(self, z4):
        assert [k.tolist() for k in trivial_brace_reflections(z4)] == Z4_ENDOMORPHISMS
        bg = trivial_brace_braiding(z4)
        assert [k.tolist() for k in enumerate_group_reflections(bg, cross_check=True)] == Z4_ENDOMORPHISMS

    def test_trivial_brace_on_s3(self, s3):
        # the trivial map and the three sign maps onto a transposition
        assert len(trivial_brace_reflections(s3)) == 4

    def test_failing_axioms(self, z4):
        bg = trivial_brace_braiding(z4)
        assert check_group_reflection(bg, FiniteMap.from_list([1, 0, 2, 3])).failed == "BRE1"
        report = check_group_reflection(bg, FiniteMap.from_list([0, 1, 0, 1]))
        assert report.failed == "BRE2"
        assert report.details["BRE1"]["ok"]

    def test_twists_of_z4_brace(self, z4_braided):
        reflections = enumerate_group_reflections(z4_braided, cross_check=True)
        assert FiniteMap.constant(4, 0) in reflections
        for k in reflections:
            twisted = twisted_braided_group(z4_braided, k)
            assert check_braiding(twisted).ok
            assert twisted.grp.e == 0
            assert check_group_drinfeld_twist(z4_braided, group_reflection_twist(z4_braided, k)).ok

    def test_bijective_reflections_square_to_one(self, z4_braided):
        for k in enumerate_group_reflections(z4_braided):
            if k.is_bijective:
                assert two_torsion_check(z4_braided, k).ok

    def test_viability_needs_faithful_action(self, z4):
        bg = trivial_brace_braiding(z4)
        with pytest.raises(NotFaithful) as exc:
            classify_twist_viability(bg, FiniteMap.identity(4))
        assert "weak_bre3_prime" in exc.value.witness

    def test_identity_on_s3_braids_without_bre3_prime(self, s3):
        # the twisted structure is S₃ᵒᵖ with r(a,b) = (a⁻¹ba, a)
        bg = trivial_brace_braiding(s3)
        assert is_faithful(bg)
        verdict = viability_verdict(bg, FiniteMap.identity(6))
        assert verdict.viability is Viability.BRAIDED_GROUP
        assert verdict.group_by_axioms and verdict.group_agrees
        assert not verdict.braided_by_axioms and not verdict.braided_agrees
        assert verdict.bre3_prime_witness == (0, 3)
        assert classify_twist_viability(bg, FiniteMap.identity(6)) is Viability.BRAIDED_GROUP

    def test_viability_of_s3_reflections(self, s3):
        bg = trivial_brace_braiding(s3)
        for k in trivial_brace_reflections(s3):
            verdict = viability_verdict(bg, k)
            assert verdict.viability is Viability.BRAIDED_GROUP
            assert verdict.group_agrees and verdict.braided_agrees

    def test_z4_brace_action_is_not_faithful(self, z4_braided):
        # ρ_b is the identity for even b
        assert not is_faithful(z4_braided)
        assert np.array_equal(z4_braided.bs.rho[0], z4_braided.bs.rho[2])

    def test_constant_candidate(self, z4_braided):
        zero = FiniteMap.constant(4, 0)
        cand = ell_candidate(z4_braided, zero, zero)
        assert cand.ell == zero
        assert cand.reflection_for_r and cand.reflection_for_twisted

    def test_candidates_on_trivial_brace_are_reflections(self, z4):
        bg = trivial_brace_braiding(z4)
        for k in trivial_brace_reflections(z4):
            for h in trivial_brace_reflections(z4):
                cand = ell_candidate(bg, k, h)
                assert cand.reflection_for_r and cand.reflection_for_twisted
                assert is_group_reflection(bg, cand.ell)


class TestTypeOneTwists:
    def test_identity_family(self, z4):
        t = type1_twist(z4, [list(range(4))] * 4)
        assert t.datum.F.is_identity
        assert t.dst == t.src
        assert t.multiplicity >= 1

    def test_negating_family(self, z4):
        t = type1_twist(z4, NEGATING_FAMILY)
        assert t.dst.grp == z4
        for x in range(4):
            for y in range(4):
                z = (x + y) % 4
                f = NEGATING_FAMILY[z]
                assert t.datum.F(x, y) == (f[x], f[y])

    def test_composition_matches_composed_family(self, z4):
        tf = type1_twist(z4, NEGATING_FAMILY)
        composed = compose_twists(tf.src.bs, tf.datum, tf.datum)
        expected = type1_twist(z4, compose_families(NEGATING_FAMILY, NEGATING_FAMILY))
        assert composed.F == expected.datum.F
        assert composed.F.is_identity

    def test_family_must_fix_its_index(self, z4):
        with pytest.raises(NotFixing):
            type1_twist(z4, [[0, 3, 2, 1]] * 4)

    def test_decomposition_recovers_family(self, z4):
        t = type1_twist(z4, NEGATING_FAMILY)
        dec = decompose_twist(t.src, t.dst, t.datum)
        assert dec.family.tolist() == NEGATING_FAMILY
        assert dec.varrho.tolist() == [list(range(4))] * 4


class TestOneLeggedTwists:
    def test_parity_negation(self, z4):
        # ϱ_c = negation for odd c
        varrho = [[a if c % 2 == 0 else (-a) % 4 for a in range(4)] for c in range(4)]
        assert abelian_flip_one_legged(z4, varrho)
        result = one_legged_twist_check(trivial_brace_braiding(z4), varrho)
        assert result.report.ok
        assert result.datum is not None

    def test_identity_legs(self, z4):
        varrho = [list(range(4))] * 4
        result = one_legged_twist_check(trivial_brace_braiding(z4), varrho)
        assert result.report.ok
        assert result.datum.F.is_identity

    def test_unit_hypotheses(self, z4):
        varrho = [[0, 3, 2, 1]] + [list(range(4))] * 3
        with pytest.raises(HypothesisViolation):
            one_legged_twist_check(trivial_brace_braiding(z4), varrho)

    def test_flip_needs_abelian_group(self, s3):
        with pytest.raises(HypothesisViolation):
            abelian_flip_one_legged(s3, [list(range(6))] * 6)
