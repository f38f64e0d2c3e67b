"""Unit tests for the extensive-form core: deals, profiles, evaluation."""

from __future__ import annotations

from fractions import Fraction

import pytest

from kuhn_cheat.gametree import (
    Action,
    BehaviorProfile,
    Card,
    ChanceBranch,
    ChanceNode,
    CoverageError,
    Deal,
    GameTree,
    TerminalNode,
    UnsupportedVariantError,
    View,
    all_deals,
    chance_reachable_nodes,
    complete_profile,
    expected_value,
    merge_profiles,
    own_sequence_map,
    per_deal_breakdown,
    player_sequence,
    profile_from_keys,
    tree_stats,
    validate_tree,
)
from kuhn_cheat.builder import build_classic


def pure(tree, chooser):
    """Profile that plays chooser(infoset) with probability one."""

    dists = {}
    for iset in tree.infosets:
        action = chooser(iset)
        dists[iset.id] = {a: Fraction(a == action) for a in iset.actions}
    return BehaviorProfile(dists)


def aggressive(iset):
    """Open with a bet, call any bet."""

    return Action.BET if Action.BET in iset.actions else Action.CALL


def passive(iset):
    """Open with a check, fold to any bet."""

    return Action.CHECK if Action.CHECK in iset.actions else Action.FOLD


class TestDeal:
    def test_down_card_is_the_third_card(self):
        assert Deal(Card.K, Card.J).down_card == Card.Q
        assert Deal(Card.Q, Card.J).down_card == Card.K

    def test_identical_cards_rejected(self):
        with pytest.raises(ValueError):
            Deal(Card.K, Card.K)

    def test_showdown_order(self):
        assert Deal(Card.K, Card.Q).p1_wins_showdown
        assert not Deal(Card.J, Card.Q).p1_wins_showdown

    def test_all_deals_are_the_six_permutations(self):
        deals = all_deals()
        assert len(deals) == 6
        assert len(set(deals)) == 6
        assert all(d.p1_card != d.p2_card for d in deals)

    def test_labels(self):
        assert Deal(Card.K, Card.J).label() == "KJ"
        assert str(Deal(Card.J, Card.Q)) == "JQ"


class TestView:
    def test_str_shows_own_card_only(self):
        assert str(View(Card.Q)) == "Q"

    def test_str_shows_full_deal_when_peeked(self):
        assert str(View(Card.Q, deal=Deal(Card.Q, Card.K))) == "QK"

    def test_str_marks_a_catch(self):
        assert str(View(Card.K, caught_opponent=True)) == "K+caught"


class TestBehaviorProfile:
    def test_rejects_negative_probability(self):
        with pytest.raises(ValueError, match="negative"):
            BehaviorProfile({0: {Action.BET: Fraction(-1, 2), Action.CHECK: Fraction(3, 2)}})

    def test_rejects_bad_total(self):
        with pytest.raises(ValueError, match="sum"):
            BehaviorProfile({0: {Action.BET: Fraction(1, 2)}})

    def test_prob_defaults_to_zero_for_missing_action(self):
        profile = BehaviorProfile({0: {Action.BET: Fraction(1)}})
        assert profile.prob(0, Action.CHECK) == 0

    def test_covers(self):
        tree = build_classic()
        assert not BehaviorProfile({}).covers(tree)
        assert pure(tree, aggressive).covers(tree)


class TestValidateTree:
    def test_classic_tree_is_clean(self):
        assert validate_tree(build_classic()) == []

    def test_flags_bad_chance_distribution(self):
        tree = GameTree(
            nodes=(
                ChanceNode(0, (
                    ChanceBranch("a", Fraction(1, 4), 1),
                    ChanceBranch("b", Fraction(1, 2), 2),
                )),
                TerminalNode(1, Fraction(1)),
                TerminalNode(2, Fraction(-1)),
            ),
            infosets=(),
            variant="classic",
        )
        problems = validate_tree(tree)
        assert any("sum" in p for p in problems)

    def test_flags_unreachable_node(self):
        tree = GameTree(
            nodes=(
                ChanceNode(0, (ChanceBranch("a", Fraction(1), 1),)),
                TerminalNode(1, Fraction(0)),
                TerminalNode(2, Fraction(1)),
            ),
            infosets=(),
            variant="classic",
        )
        problems = validate_tree(tree)
        assert any("unreachable" in p for p in problems)


class TestExpectedValue:
    # Hand-computed oracles on the classic tree.  Always-bet vs
    # always-call reaches showdown for +/-2 in every deal, and the six
    # deals split three wins and three losses, so the value is 0.
    def test_all_bet_all_call_is_zero(self):
        tree = build_classic()
        assert expected_value(tree, pure(tree, aggressive)) == 0

    def test_all_bet_all_fold_wins_the_ante(self):
        tree = build_classic()

        def bet_or_fold(iset):
            return Action.BET if Action.BET in iset.actions else Action.FOLD

        # Player 1 bets, player 2 folds in every deal: +1 each time.
        assert expected_value(tree, pure(tree, bet_or_fold)) == 1

    def test_all_check_is_showdown_for_the_ante(self):
        tree = build_classic()

        def check_or_call(iset):
            return Action.CHECK if Action.CHECK in iset.actions else Action.CALL

        assert expected_value(tree, pure(tree, check_or_call)) == 0

    def test_requires_full_coverage(self):
        tree = build_classic()
        with pytest.raises(CoverageError):
            expected_value(tree, BehaviorProfile({}))


class TestEvaluationLinearity:
    # Each infoset lies on any root-to-terminal path at most once, so the
    # expected value is linear in the distribution at a single infoset
    # while every other infoset is held fixed.

    @staticmethod
    def _with_dist(profile, iset_id, dist):
        dists = {k: dict(v) for k, v in profile.distributions.items()}
        dists[iset_id] = dict(dist)
        return BehaviorProfile(dists)

    @pytest.mark.parametrize("lam", [Fraction(1, 3), Fraction(1, 4)])
    def test_mixing_one_infoset_mixes_the_value(self, lam):
        tree = build_classic()
        half = Fraction(1, 2)
        base = BehaviorProfile(
            {s.id: {a: half for a in s.actions} for s in tree.infosets}
        )
        for iset in tree.infosets:
            first, second = iset.actions
            v_first = expected_value(
                tree, self._with_dist(base, iset.id, {first: Fraction(1), second: Fraction(0)})
            )
            v_second = expected_value(
                tree, self._with_dist(base, iset.id, {first: Fraction(0), second: Fraction(1)})
            )
            mixed = self._with_dist(base, iset.id, {first: lam, second: 1 - lam})
            assert expected_value(tree, mixed) == lam * v_first + (1 - lam) * v_second


class TestPerDealBreakdown:
    def test_rows_sum_to_the_value(self):
        tree = build_classic()
        profile = pure(tree, aggressive)
        breakdown = per_deal_breakdown(tree, profile)
        assert breakdown.net == expected_value(tree, profile)

    def test_gross_amounts_for_always_bet_always_call(self):
        tree = build_classic()
        breakdown = per_deal_breakdown(tree, pure(tree, aggressive))
        # Each deal is reached with probability 1/6 and ends in a called
        # bet: the winner's gross is 2/6, the loser's zero.
        row = breakdown.row(Card.K, Card.Q)
        assert (row.p1_gross, row.p2_gross) == (Fraction(1, 3), Fraction(0))
        row = breakdown.row(Card.J, Card.K)
        assert (row.p1_gross, row.p2_gross) == (Fraction(0), Fraction(1, 3))
        assert row.net == Fraction(-1, 3)

    def test_unknown_row_raises(self):
        tree = build_classic()
        breakdown = per_deal_breakdown(tree, pure(tree, aggressive))
        with pytest.raises(KeyError):
            breakdown.row(Card.K, Card.K)

    def test_tree_without_deal_tags_is_unsupported(self):
        tree = GameTree(
            nodes=(
                ChanceNode(0, (ChanceBranch("only", Fraction(1), 1),)),
                TerminalNode(1, Fraction(1)),
            ),
            infosets=(),
            variant="toy",
        )
        with pytest.raises(UnsupportedVariantError, match="deal"):
            per_deal_breakdown(tree, BehaviorProfile({}))


class TestTreeStats:
    def test_classic_counts(self):
        stats = tree_stats(build_classic())
        assert stats.chance_nodes == 1
        assert stats.decision_nodes == 24
        assert stats.terminal_nodes == 30
        assert stats.total_nodes == 55
        assert dict(stats.infosets_per_player) == {1: 6, 2: 6}


class TestProfileHelpers:
    def test_profile_from_keys_ignores_foreign_keys(self):
        tree = build_classic()
        by_key = {
            (1, View(Card.K), ()): {Action.BET: Fraction(1), Action.CHECK: Fraction(0)},
            (1, View(Card.K, deal=Deal(Card.K, Card.Q)), ()): {
                Action.BET: Fraction(1),
                Action.CHECK: Fraction(0),
            },
        }
        profile = profile_from_keys(tree, by_key)
        assert len(profile.distributions) == 1

    def test_complete_profile_fills_with_first_action(self):
        tree = build_classic()
        filled = complete_profile(tree, BehaviorProfile({}))
        assert filled.covers(tree)
        for iset in tree.infosets:
            assert filled.prob(iset.id, iset.actions[0]) == 1

    def test_complete_profile_respects_player_filter(self):
        tree = build_classic()
        filled = complete_profile(tree, BehaviorProfile({}), players=(1,))
        assert all(tree.infosets[i].player == 1 for i in filled.distributions)

    def test_merge_profiles(self):
        tree = build_classic()
        part1 = complete_profile(tree, BehaviorProfile({}), players=(1,))
        part2 = complete_profile(tree, BehaviorProfile({}), players=(2,))
        merged = merge_profiles(tree, part1, part2)
        assert merged.covers(tree)


class TestSequences:
    def test_root_path_sequences_are_per_player(self):
        tree = build_classic()
        sequences = own_sequence_map(tree)
        # Terminal after history bet-call in some deal: player 1 chose
        # BET at their infoset, player 2 chose CALL at theirs.
        for node in tree.terminals():
            seq1 = player_sequence(sequences, node.id, 1)
            seq2 = player_sequence(sequences, node.id, 2)
            actions1 = [a for _, a in seq1]
            actions2 = [a for _, a in seq2]
            assert len(actions1) in (1, 2)
            assert len(actions2) == 1
            if actions1 == [Action.BET]:
                assert actions2 in ([Action.CALL], [Action.FOLD])

    def test_chance_reachable_covers_everything_in_classic(self):
        tree = build_classic()
        assert chance_reachable_nodes(tree) == set(range(len(tree.nodes)))
