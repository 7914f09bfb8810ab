"""Exhaustive enumerators and the composite-reflection hunt."""

import itertools

import numpy as np
import pytest

from braided_group import dihedral_group, transport_table
from errors import SizeLimitExceeded
from search import (
    FailureKind,
    Strategy,
    canonical_group,
    canonical_solution,
    enumerate_group_reflections,
    enumerate_groups,
    enumerate_reflections,
    enumerate_skew_braces,
    enumerate_solutions,
    find_ell_counterexamples,
    run_partitioned,
)
from settings import get_settings
from yb_core import BraidedSet, FiniteMap, Side, check_reflection

SKEW_BRACE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 4, 5: 1, 6: 6}


def naive_solutions(n):
    tables = [np.array(t).reshape(n, n) for t in itertools.product(range(n), repeat=n * n)]
    found = (BraidedSet.from_tables(s, r) for s in tables for r in tables)
    return sorted((bs for bs in found if bs.ybe_holds), key=BraidedSet.key)


def relabel_solution(bs, perm):
    perm = np.asarray(perm)
    return BraidedSet.from_tables(transport_table(bs.sigma, perm), transport_table(bs.rho, perm))


class TestSolutions:
    def test_single_point(self):
        assert len(enumerate_solutions(1)) == 1

    def test_two_points_match_naive_sweep(self):
        naive = naive_solutions(2)
        assert enumerate_solutions(2, jobs=1) == naive
        assert enumerate_solutions(2, nondegenerate=True) == [bs for bs in naive if bs.nondegenerate]
        assert enumerate_solutions(2, involutive=True) == [bs for bs in naive if bs.involutive]

    def test_up_to_isomorphism(self):
        naive = naive_solutions(2)
        classes = {canonical_solution(bs).key() for bs in naive}
        assert [bs.key() for bs in enumerate_solutions(2, up_to_iso=True)] == sorted(classes)

    def test_workers_do_not_change_the_result(self):
        assert enumerate_solutions(2, jobs=2) == enumerate_solutions(2, jobs=1)

    def test_carrier_limits(self):
        with pytest.raises(SizeLimitExceeded):
            enumerate_solutions(4)
        with pytest.raises(SizeLimitExceeded):
            enumerate_solutions(5, nondegenerate=True)


class TestReflectionSearch:
    @pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
    def test_p3_reflections_commute_with_lambda(self, p3, side):
        lam = [1, 2, 0]
        expected = [
            list(k) for k in itertools.product(range(3), repeat=3)
            if all(k[lam[x]] == lam[k[x]] for x in range(3))
        ]
        assert [k.tolist() for k in enumerate_reflections(p3, side)] == expected

    def test_quandle_matches_brute_force(self, dihedral_quandle):
        brute = [
            list(k) for k in itertools.product(range(3), repeat=3)
            if check_reflection(dihedral_quandle, FiniteMap.from_list(k)).ok
        ]
        assert [k.tolist() for k in enumerate_reflections(dihedral_quandle)] == brute

    def test_every_constant_reflects_the_flip(self, flip):
        assert FiniteMap.constant(2, 0) in enumerate_reflections(flip)
        assert FiniteMap.constant(2, 1) in enumerate_reflections(flip)


class TestGroupsAndBraces:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (4, 2), (6, 2)])
    def test_group_counts(self, n, count):
        groups = enumerate_groups(n)
        assert len(groups) == count
        assert all(grp.e == 0 for grp in groups)

    @pytest.mark.slow
    def test_groups_of_order_eight(self):
        assert len(enumerate_groups(8)) == 5

    @pytest.mark.parametrize("n", sorted(SKEW_BRACE_COUNTS))
    def test_skew_brace_counts(self, n):
        assert len(enumerate_skew_braces(n, jobs=1)) == SKEW_BRACE_COUNTS[n]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_strategies_agree(self, n):
        holomorph = enumerate_skew_braces(n, Strategy.HOLOMORPH, jobs=1)
        direct = enumerate_skew_braces(n, Strategy.DIRECT, jobs=1)
        assert holomorph == direct

    @pytest.mark.slow
    def test_skew_braces_of_order_eight(self):
        assert len(enumerate_skew_braces(8)) >= 34

    def test_order_gate(self, monkeypatch):
        monkeypatch.setenv("REFLECTWIST_MAX_ORDER", "3")
        get_settings.cache_clear()
        with pytest.raises(SizeLimitExceeded) as exc:
            enumerate_groups(4)
        assert exc.value.witness["gate"] == 3

    def test_group_reflections_survive_cross_check(self):
        for sb in enumerate_skew_braces(4, jobs=1):
            reflections = enumerate_group_reflections(sb, cross_check=True)
            assert FiniteMap.constant(4, 0) in reflections


class TestCanonicalForms:
    def test_solution_form_ignores_labels(self, p3, dihedral_quandle):
        for bs in (p3, dihedral_quandle):
            for perm in itertools.permutations(range(3)):
                assert canonical_solution(relabel_solution(bs, perm)) == canonical_solution(bs)

    def test_isomorphic_groups_share_a_form(self, s3):
        assert canonical_group(dihedral_group(3)) == canonical_group(s3)

    def test_run_partitioned_inline(self):
        assert run_partitioned(abs, [-1, 2, -3], 1) == [1, 2, 3]


class TestEllHunt:
    def test_nothing_below_order_four(self):
        assert find_ell_counterexamples(range(1, 4), jobs=1) == []

    def test_first_failures_sit_at_order_four(self):
        found = find_ell_counterexamples(range(1, 6), jobs=1)
        assert len(found) == 8
        assert {ce.order for ce in found} == {4}
        assert all(ce.kinds for ce in found)

    def test_order_four_instance(self):
        found = find_ell_counterexamples([4], jobs=1)
        hits = [ce for ce in found if ce.k.tolist() == [0, 1, 3, 2] and ce.h.tolist() == [0, 2, 0, 2]]
        assert hits
        ce = hits[0]
        assert ce.ell.tolist() == [0, 0, 3, 3]
        assert FailureKind.NOT_REFLECTION_FOR_R in ce.kinds
        # additive Z₂ × Z₂, multiplicative Z₄
        assert ce.brace.add.has_exponent_two
        assert not ce.brace.mul.has_exponent_two
        assert ce.to_dict()["failure_kinds"]

    def test_bijective_k_keeps_the_order_four_instance(self):
        found = find_ell_counterexamples(range(1, 6), require_bijective_k=True, jobs=1)
        assert found
        assert all(ce.k.is_bijective for ce in found)
        assert any(ce.k.tolist() == [0, 1, 3, 2] for ce in found)

    @pytest.mark.slow
    def test_order_six_is_clean(self):
        assert find_ell_counterexamples([6]) == []
