"""Unit tests for the sequence-form LP solver."""

from __future__ import annotations

from fractions import Fraction

from kuhn_cheat.builder import CheatConfig, build_classic, build_variant
from kuhn_cheat.gametree import expected_value
from kuhn_cheat.solver import build_sequence_form, exploitability, solve_lp


class TestSequenceForm:
    def test_classic_dimensions(self):
        sf = build_sequence_form(build_classic())
        # Each player: the empty sequence plus two actions at each of
        # six information sets.
        assert sf.p1.n_seqs == 13
        assert sf.p2.n_seqs == 13
        assert len(sf.p1.infosets) == 6
        assert len(sf.p2.infosets) == 6

    def test_payoff_entries_cover_all_terminals(self):
        tree = build_classic()
        sf = build_sequence_form(tree)
        # Every classic terminal pins down both players' full sequences,
        # so each contributes its own chance-weighted matrix entry.
        assert len(sf.payoff) == 30
        assert sum(sf.payoff.values(), Fraction(0)) == sum(
            (Fraction(1, 6) * node.payoff for node in tree.terminals()), Fraction(0)
        )


class TestSolveLP:
    def test_classic_value_and_certificates(self, classic_tree, classic_lp):
        assert classic_lp.method == "lp"
        assert classic_lp.value == Fraction(-1, 18)
        assert classic_lp.exploitability == 0
        assert classic_lp.profile.covers(classic_tree)
        # The reported value must be the actual expectation of the
        # reported profile, and the profile must be unexploitable.
        assert expected_value(classic_tree, classic_lp.profile) == classic_lp.value
        assert exploitability(classic_tree, classic_lp.profile) == 0

    def test_one_sided_cheating_value(self):
        tree = build_variant(CheatConfig(p=Fraction(1)))
        result = solve_lp(tree)
        assert result.value == Fraction(1, 9)
        assert exploitability(tree, result.profile) == 0

    def test_detection_interior_equilibrium(self):
        tree = build_variant(
            CheatConfig(p=Fraction(1, 2), q=Fraction(1, 2), r1=Fraction(1, 2), r2=Fraction(1, 2))
        )
        result = solve_lp(tree)
        assert expected_value(tree, result.profile) == result.value
        assert exploitability(tree, result.profile) == 0

    def test_deterministic_output(self, classic_tree):
        first = solve_lp(classic_tree)
        second = solve_lp(classic_tree)
        assert first.value == second.value
        assert first.profile.distributions == second.profile.distributions
