"""Graded components of the structure monoid and the word-level extensions of r and k."""

import itertools

import numpy as np
import pytest

from errors import NotAReflection, SizeLimitExceeded
from settings import get_settings
from structure_monoid import (
    WordPartition,
    build_component,
    extend_k,
    extend_r,
    garside_bijective,
    garside_commutation_check,
    guitar_map_n,
    monoid_reflection_check,
    splitting_check,
    well_definedness_check,
)
from yb_core import FiniteMap, guitar_map


class TestComponents:
    def test_flip_classes_are_multisets(self, flip):
        assert build_component(flip, 2).class_count == 3
        assert build_component(flip, 3).class_count == 4

    def test_p3_degree_two(self, p3):
        comp = build_component(p3, 2)
        assert comp.class_count == 2
        # the orbit of (0,1) under r has three words
        assert comp.classes()[1] == [(0, 1), (1, 2), (2, 0)]
        assert comp.same_class((0, 0), (2, 2))

    def test_representatives_are_least_words(self, p3):
        comp = build_component(p3, 2)
        assert comp.representatives == [(0, 0), (0, 1)]

    def test_partition_is_order_independent(self):
        a = WordPartition(5)
        a.unify_edges(np.array([4, 3]), np.array([3, 1]))
        b = WordPartition(5)
        b.unify_edges(np.array([1, 3]), np.array([3, 4]))
        assert a.labels.tolist() == b.labels.tolist() == [0, 1, 2, 1, 1]

    def test_component_gate(self, p3, monkeypatch):
        monkeypatch.setenv("REFLECTWIST_SIZE_GATE", "20")
        get_settings.cache_clear()
        with pytest.raises(SizeLimitExceeded):
            build_component(p3, 3)


class TestExtensions:
    def test_flip_moves_words_whole(self, flip):
        assert extend_r(flip, (0, 1), (1,)) == ((1,), (0, 1))

    def test_p3_letter_crosses_two_letters(self, p3):
        assert extend_r(p3, (0, 1), (2,)) == ((1,), (0, 1))

    def test_letters_recover_r(self, dihedral_quandle):
        for a, b in itertools.product(range(3), repeat=2):
            x, y = dihedral_quandle.r(a, b)
            assert extend_r(dihedral_quandle, (a,), (b,)) == ((x,), (y,))

    def test_identity_reverses_words_on_flip(self, flip):
        k = FiniteMap.identity(2)
        for w in itertools.product(range(2), repeat=3):
            assert extend_k(flip, k, w) == w[::-1]

    def test_two_strand_guitar_map(self, dihedral_quandle):
        k = FiniteMap.identity(3)
        assert guitar_map_n(dihedral_quandle, k, 2) == guitar_map(dihedral_quandle, k)


class TestMonoidReflections:
    def test_garside_commutation(self, dihedral_quandle):
        k = FiniteMap.identity(3)
        assert garside_commutation_check(dihedral_quandle, k, 3).ok
        assert garside_bijective(dihedral_quandle, k, 3)

    def test_garside_requires_reflection(self, p3):
        with pytest.raises(NotAReflection):
            garside_commutation_check(p3, FiniteMap.constant(3, 0), 3)

    def test_reflection_extends(self, dihedral_quandle, flip):
        assert monoid_reflection_check(dihedral_quandle, FiniteMap.identity(3), 3).ok
        assert monoid_reflection_check(flip, FiniteMap.constant(2, 0), 3).ok

    def test_non_reflection_fails_on_letters(self, p3):
        report = monoid_reflection_check(p3, FiniteMap.constant(3, 0), 3, require=False)
        assert not report.ok
        assert report.failed == "(1,1)"

    def test_splitting_and_well_definedness(self, dihedral_quandle, p3):
        assert splitting_check(dihedral_quandle, FiniteMap.identity(3), 3).ok
        assert well_definedness_check(p3, FiniteMap.identity(3), 3).ok
