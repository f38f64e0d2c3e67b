"""Closed-form fair strategies, per-deal formulas, and naive exploitation.

The classic game has a one-parameter family of optimal strategies for
player 1, indexed by the bluffing weight ``a`` in [0, 1/3]; player 2's
optimal strategy does not depend on ``a``.  This module carries those
tables, the per-deal value formulas they induce, and the value of a
secret cheater best-responding to a fair opponent.

Reference tables circulated for the cheating scenarios are reproduced
here verbatim; rows that disagree with a direct recomputation are
reported as discrepancies rather than silently corrected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .builder import CheatConfig, build_cheating, build_classic
from .gametree import (
    Action,
    BehaviorProfile,
    Card,
    Deal,
    DealBreakdown,
    DealRow,
    GameTree,
    InfoSetKey,
    View,
    all_deals,
    complete_profile,
    expected_value,
    merge_profiles,
    per_deal_breakdown,
    profile_from_keys,
)
from .solver.response import best_response, exploitability

ZERO = Fraction(0)
ONE = Fraction(1)

#: Upper end of the valid bluffing-weight range.
FAIR_PARAM_MAX = Fraction(1, 3)

#: Game value of the classic variant.
CLASSIC_VALUE = Fraction(-1, 18)

_B, _X, _C, _F = Action.BET, Action.CHECK, Action.CALL, Action.FOLD


def check_fair_param(a) -> Fraction:
    """Coerce and range-check the bluffing weight ``a``."""

    a = Fraction(a)
    if not 0 <= a <= FAIR_PARAM_MAX:
        raise ValueError(f"fair parameter a must lie in [0, 1/3], got {a}")
    return a


def fair_strategy_keys(a) -> dict[InfoSetKey, dict[Action, Fraction]]:
    """Key-addressed fair strategy for both players.

    Keys are ``(player, View(card), history)``, matching the honest
    infosets of every variant tree, so the same map can be bound to the
    classic tree or restricted onto a cheating tree.
    """

    a = check_fair_param(a)
    third = Fraction(1, 3)
    keys: dict[InfoSetKey, dict[Action, Fraction]] = {}

    def put(player, card, history, first_weight, second_weight):
        if history in ((), (_X,)):
            first, second = _B, _X
        else:
            first, second = _C, _F
        keys[(player, View(card), history)] = {
            first: first_weight,
            second: second_weight,
        }

    # player 1 opening
    put(1, Card.K, (), 3 * a, 1 - 3 * a)
    put(1, Card.Q, (), ZERO, ONE)
    put(1, Card.J, (), a, 1 - a)
    # player 1 facing a bet after checking
    put(1, Card.K, (_X, _B), ONE, ZERO)
    put(1, Card.Q, (_X, _B), third + a, 1 - third - a)
    put(1, Card.J, (_X, _B), ZERO, ONE)
    # player 2 facing a bet
    put(2, Card.K, (_B,), ONE, ZERO)
    put(2, Card.Q, (_B,), third, 1 - third)
    put(2, Card.J, (_B,), ZERO, ONE)
    # player 2 after a check
    put(2, Card.K, (_X,), ONE, ZERO)
    put(2, Card.Q, (_X,), ZERO, ONE)
    put(2, Card.J, (_X,), third, 1 - third)
    return keys


def fair_profile(a, tree: GameTree | None = None) -> BehaviorProfile:
    """The fair strategy pair bound to ``tree`` (default: the classic tree)."""

    if tree is None:
        tree = build_classic()
    return profile_from_keys(tree, fair_strategy_keys(a))


@dataclass(frozen=True)
class AffinePair:
    """A value of the form ``constant + slope * a``."""

    constant: Fraction
    slope: Fraction = ZERO

    def at(self, a: Fraction) -> Fraction:
        return self.constant + self.slope * a


def _pair(c, s=0) -> AffinePair:
    return AffinePair(Fraction(c), Fraction(s))


#: Per-deal gross winnings under fair play, as affine functions of ``a``.
FAIR_BREAKDOWN: dict[tuple[Card, Card], tuple[AffinePair, AffinePair]] = {
    (Card.K, Card.J): (_pair(Fraction(2, 9), Fraction(-1, 6)), _pair(0)),
    (Card.K, Card.Q): (_pair(Fraction(1, 6), Fraction(1, 6)), _pair(0)),
    (Card.Q, Card.J): (
        _pair(Fraction(4, 27), Fraction(1, 9)),
        _pair(Fraction(1, 27), Fraction(-1, 18)),
    ),
    (Card.Q, Card.K): (_pair(0), _pair(Fraction(2, 9), Fraction(1, 6))),
    (Card.J, Card.K): (_pair(0), _pair(Fraction(1, 6), Fraction(1, 6))),
    (Card.J, Card.Q): (
        _pair(0, Fraction(1, 9)),
        _pair(Fraction(1, 6), Fraction(-1, 18)),
    ),
}


def fair_breakdown_formula(a) -> DealBreakdown:
    """Closed-form per-deal breakdown of fair play; nets to -1/18 for all a."""

    a = check_fair_param(a)
    rows = []
    for deal in all_deals():
        p1_pair, p2_pair = FAIR_BREAKDOWN[(deal.p1_card, deal.p2_card)]
        rows.append(DealRow(deal, p1_pair.at(a), p2_pair.at(a)))
    return DealBreakdown(tuple(rows))


# ---------------------------------------------------------------------------
# naive exploitation: a secret cheater against a fair opponent


@dataclass(frozen=True)
class RowDiscrepancy:
    """One disagreement between recomputed and reference values."""

    deal: Deal | None  # None marks the net-value row
    side: str  # "p1", "p2", or "net"
    computed: Fraction
    published: Fraction


@dataclass(frozen=True)
class NaiveExploitation:
    cheater: int
    a: Fraction
    value: Fraction
    breakdown: DealBreakdown
    cheater_strategy: BehaviorProfile
    published_value: Fraction
    discrepancies: tuple[RowDiscrepancy, ...]
    #: Exploitability of the naive pair itself.  The cheater already
    #: best-responds, so this is exactly the fair player's lost ground.
    exploitability: Fraction = ZERO

    @property
    def matches_published(self) -> bool:
        return not self.discrepancies


#: Reference tables for the gross winnings when one player always cheats
#: and the other keeps playing the fair strategy.  Values are affine in
#: the fair parameter ``a``; the net rows are as published even where
#: they disagree with the sum of the published deal rows.
PUBLISHED_CHEATER1: dict = {
    (Card.K, Card.J): (_pair(Fraction(2, 9)), _pair(0)),
    (Card.K, Card.Q): (_pair(Fraction(2, 9)), _pair(0)),
    (Card.Q, Card.J): (_pair(Fraction(2, 9)), _pair(0)),
    (Card.Q, Card.K): (_pair(0), _pair(Fraction(1, 6))),
    (Card.J, Card.K): (_pair(0), _pair(Fraction(1, 6))),
    (Card.J, Card.Q): (_pair(Fraction(1, 9)), _pair(Fraction(1, 18))),
    "net": _pair(Fraction(7, 18)),
}

PUBLISHED_CHEATER2: dict = {
    (Card.K, Card.J): (_pair(Fraction(1, 6)), _pair(0)),
    (Card.K, Card.Q): (_pair(Fraction(1, 6)), _pair(0)),
    (Card.Q, Card.J): (
        _pair(Fraction(1, 9), Fraction(1, 9)),
        _pair(Fraction(1, 9), Fraction(-1, 6)),
    ),
    (Card.Q, Card.K): (_pair(0), _pair(Fraction(2, 9), Fraction(1, 6))),
    (Card.J, Card.K): (_pair(0), _pair(Fraction(1, 6))),
    (Card.J, Card.Q): (_pair(0), _pair(Fraction(1, 6))),
    "net": _pair(Fraction(-2, 3), Fraction(-1, 9)),
}


def naive_exploitation(cheater: int, a) -> NaiveExploitation:
    """Value of always cheating against an opponent who keeps playing fair.

    The cheater best-responds with full knowledge of the deal; the
    honest player plays ``fair_profile(a)``.  Computed on the one-sided
    cheating tree with cheat probability one for the cheater.  The
    result carries the reference values and any row or net
    discrepancies between them and this recomputation.
    """

    if cheater not in (1, 2):
        raise ValueError(f"cheater must be 1 or 2, got {cheater}")
    a = check_fair_param(a)
    honest = 2 if cheater == 1 else 1
    config = CheatConfig(p=ONE if cheater == 1 else ZERO, q=ONE if cheater == 2 else ZERO)
    tree = build_cheating(config)

    fair_keys = {
        key: dist for key, dist in fair_strategy_keys(a).items() if key[0] == honest
    }
    fixed = profile_from_keys(tree, fair_keys)
    fixed = complete_profile(tree, fixed, players=(honest,))
    response = best_response(tree, fixed, responder=cheater)
    combined = merge_profiles(tree, fixed, response.profile)
    value = expected_value(tree, combined)
    breakdown = per_deal_breakdown(tree, combined)
    gap = exploitability(tree, combined)

    published = PUBLISHED_CHEATER1 if cheater == 1 else PUBLISHED_CHEATER2
    discrepancies: list[RowDiscrepancy] = []
    for row in breakdown.rows:
        ref_p1, ref_p2 = published[(row.deal.p1_card, row.deal.p2_card)]
        if row.p1_gross != ref_p1.at(a):
            discrepancies.append(
                RowDiscrepancy(row.deal, "p1", row.p1_gross, ref_p1.at(a))
            )
        if row.p2_gross != ref_p2.at(a):
            discrepancies.append(
                RowDiscrepancy(row.deal, "p2", row.p2_gross, ref_p2.at(a))
            )
    published_net = published["net"].at(a)
    if value != published_net:
        discrepancies.append(RowDiscrepancy(None, "net", value, published_net))
    return NaiveExploitation(
        cheater=cheater,
        a=a,
        value=value,
        breakdown=breakdown,
        cheater_strategy=response.profile,
        published_value=published_net,
        discrepancies=tuple(discrepancies),
        exploitability=gap,
    )
