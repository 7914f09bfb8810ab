"""The acceptance battery and its discrepancy ledger."""

import dataclasses

import pytest

from search import find_ell_counterexamples
from verify_suite import (
    BOUNDS,
    SuiteLevel,
    _hk_witness,
    _replay_counterexample,
    check_representations,
    ledger_bre3_prime,
    ledger_constant_maps,
    ledger_permutation_lemma,
    ledger_permutation_remark,
    run_suite,
)
from yb_core import FiniteMap

QUICK = BOUNDS[SuiteLevel.QUICK]


class TestLedger:
    def test_swap_solution_admits_a_nontrivial_product_twist(self):
        entry = ledger_permutation_lemma(QUICK)
        assert entry.name == "permutation-twist-lemma"
        assert entry.witness["lambda"] == [1, 0]
        assert [entry.witness["p"], entry.witness["q"]] != [[0, 1], [0, 1]]

    def test_guitar_twist_leaves_permutation_solutions_alone(self):
        entry = ledger_permutation_remark(QUICK)
        # the witness is r itself, not (a,b) ↦ (a, λ(b))
        derived = entry.witness["derived"]
        n = derived["n"]
        lam = entry.witness["lambda"]
        assert derived["sigma"] == [[lam[b] for b in range(n)] for _ in range(n)]

    def test_constant_maps_need_a_fixed_point(self):
        entry = ledger_constant_maps(QUICK)
        assert entry.witness is not None
        lam, c = entry.witness["lambda"], entry.witness["c"]
        assert lam[c] != c
        assert set(entry.to_dict()) == {"name", "claim", "verdict", "witness"}

    def test_bre3_prime_misses_the_identity_on_s3(self):
        entry = ledger_bre3_prime(QUICK)
        assert entry.name == "bre3-prime-optimality"
        assert entry.witness["brace"]["n"] == 6
        assert entry.witness["k"] == list(range(6))
        assert entry.witness["viability"] == "braided_group"
        assert entry.witness["braided_by_axioms"] is False
        assert entry.witness["bre3_prime_witness"] == [0, 3]

    def test_carrier_two_cannot_separate_closed_forms(self):
        assert _hk_witness(2) is None

    @pytest.mark.slow
    def test_carrier_three_separates_closed_forms(self):
        witness = _hk_witness(3)
        assert witness is not None
        assert witness["solution"]["n"] == 3


class TestChecks:
    def test_twist_data_and_conjugators_come_in_equal_numbers(self):
        outcome = check_representations(QUICK, jobs=1)
        assert outcome.ok
        details = outcome.details
        assert details["pairs"] > 0
        assert details["agree"] == details["equal_counts"] == details["pairs"]
        assert details["mismatch"] is None

    def test_hunt_findings_replay(self):
        found = find_ell_counterexamples([4], jobs=1)
        assert found
        assert all(_replay_counterexample(ce) is None for ce in found)
        tampered = dataclasses.replace(found[0], ell=FiniteMap.identity(4))
        assert _replay_counterexample(tampered) == "ell"


@pytest.mark.slow
def test_quick_suite_passes(capsys):
    ok, payload = run_suite(SuiteLevel.QUICK, jobs=1)
    assert ok, [name for name, check in payload["checks"].items() if not check["ok"]]
    assert payload["level"] == "quick"
    ledger = {entry["name"]: entry for entry in payload["ledger"]}
    assert set(ledger) >= {
        "permutation-twist-remark",
        "permutation-twist-lemma",
        "constant-map-reflection",
        "twist-inversion-formula",
        "explicit-variant",
        "composite-reflection",
        "bre3-prime-optimality",
    }
    assert ledger["explicit-variant"]["witness"] is not None
    assert ledger["composite-reflection"]["witness"]["order"] == 4
    assert payload["checks"]["ell-counterexamples"]["details"]["by_order"]["4"] == 8
    assert "VERIFICATION SUMMARY" in capsys.readouterr().err
