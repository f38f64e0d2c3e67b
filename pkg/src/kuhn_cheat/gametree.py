"""Extensive-form game representation with exact rational arithmetic.

A :class:`GameTree` is a flat arena of chance, decision, and terminal
nodes indexed by dense integer ids.  Payoffs are stored once, as the
amount won by player 1; the game is zero sum by representation.  All
probabilities and payoffs are :class:`fractions.Fraction`, so every
evaluation in this module is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Union

ZERO = Fraction(0)
ONE = Fraction(1)


class Card(IntEnum):
    """The three-card deck, ordered by showdown strength."""

    J = 0
    Q = 1
    K = 2

    def __str__(self) -> str:
        return self.name


class Action(IntEnum):
    """Betting actions.  Enum order is the canonical tie-break order."""

    BET = 0
    CHECK = 1
    CALL = 2
    FOLD = 3

    def __str__(self) -> str:
        return self.name.capitalize()


#: Actions available to the player opening a betting round.
OPEN_ACTIONS = (Action.BET, Action.CHECK)
#: Actions available to a player facing a bet.
RESPONSE_ACTIONS = (Action.CALL, Action.FOLD)


@dataclass(frozen=True, order=True)
class Deal:
    """One assignment of the three cards: both hole cards plus the down card."""

    p1_card: Card
    p2_card: Card

    def __post_init__(self) -> None:
        if self.p1_card == self.p2_card:
            raise ValueError(f"deal requires distinct cards, got {self.p1_card} twice")

    @property
    def down_card(self) -> Card:
        (down,) = set(Card) - {self.p1_card, self.p2_card}
        return down

    def card_of(self, player: int) -> Card:
        return self.p1_card if player == 1 else self.p2_card

    @property
    def p1_wins_showdown(self) -> bool:
        return self.p1_card > self.p2_card

    def label(self) -> str:
        return f"{self.p1_card}{self.p2_card}"

    def __str__(self) -> str:
        return self.label()


def all_deals() -> tuple[Deal, ...]:
    """The six deals in deterministic (strong player-1 card first) order."""

    order = (Card.K, Card.Q, Card.J)
    return tuple(
        Deal(c1, c2) for c1 in order for c2 in order if c1 != c2
    )


@dataclass(frozen=True)
class View:
    """What a player knows about the cards when acting.

    ``card`` is always the player's own card.  ``deal`` is the full deal
    when the player peeked at the down card (which reveals everything in
    a three-card deck), else ``None``.  ``caught_opponent`` is set when
    the player has caught the opponent cheating; it carries only that
    fact, not the opponent's card.
    """

    card: Card
    deal: Deal | None = None
    caught_opponent: bool = False

    def __str__(self) -> str:
        seen = str(self.deal) if self.deal is not None else str(self.card)
        return seen + ("+caught" if self.caught_opponent else "")


#: Hashable information-set key: (player, view, public action history).
InfoSetKey = tuple


@dataclass(frozen=True)
class ChanceBranch:
    label: str
    prob: Fraction
    child: int


@dataclass(frozen=True)
class ChanceNode:
    id: int
    branches: tuple[ChanceBranch, ...]

    @property
    def children(self) -> tuple[int, ...]:
        return tuple(b.child for b in self.branches)


@dataclass(frozen=True)
class DecisionNode:
    id: int
    player: int
    infoset: int
    actions: tuple[Action, ...]
    children: tuple[int, ...]


@dataclass(frozen=True)
class TerminalNode:
    id: int
    payoff: Fraction  # amount won by player 1; player 2 wins the negation
    deal: Deal | None = None
    label: str = ""

    @property
    def children(self) -> tuple[int, ...]:
        return ()


Node = Union[ChanceNode, DecisionNode, TerminalNode]


@dataclass(frozen=True)
class InfoSet:
    """A set of decision nodes indistinguishable to their owner."""

    id: int
    player: int
    key: InfoSetKey
    actions: tuple[Action, ...]
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class GameTree:
    """Immutable extensive-form game.  Node 0 is the root."""

    nodes: tuple[Node, ...]
    infosets: tuple[InfoSet, ...]
    variant: str
    config: object = None

    @property
    def root(self) -> int:
        return 0

    @cached_property
    def infoset_by_key(self) -> Mapping[InfoSetKey, InfoSet]:
        return {s.key: s for s in self.infosets}

    def infosets_of(self, player: int) -> tuple[InfoSet, ...]:
        return tuple(s for s in self.infosets if s.player == player)

    def terminals(self) -> Iterator[TerminalNode]:
        for node in self.nodes:
            if isinstance(node, TerminalNode):
                yield node

    def decisions(self) -> Iterator[DecisionNode]:
        for node in self.nodes:
            if isinstance(node, DecisionNode):
                yield node


@dataclass(frozen=True)
class BehaviorProfile:
    """Behavior strategy for both players: infoset id to action distribution.

    Distributions are exact rationals and must sum to one.  A profile is
    valid for any tree whose infoset ids it covers; use
    :func:`complete_profile` to fill unreachable infosets with defaults.
    """

    distributions: Mapping[int, Mapping[Action, Fraction]]

    def __post_init__(self) -> None:
        for infoset_id, dist in self.distributions.items():
            total = ZERO
            for action, prob in dist.items():
                if prob < 0:
                    raise ValueError(
                        f"infoset {infoset_id}: negative probability for {action}"
                    )
                total += prob
            if total != 1:
                raise ValueError(
                    f"infoset {infoset_id}: probabilities sum to {total}, not 1"
                )

    def prob(self, infoset_id: int, action: Action) -> Fraction:
        return self.distributions[infoset_id].get(action, ZERO)

    def covers(self, tree: GameTree) -> bool:
        return all(s.id in self.distributions for s in tree.infosets)


class CoverageError(KeyError):
    """A profile is missing a distribution for a required infoset."""


class UnsupportedVariantError(ValueError):
    """The tree lacks the structure an operation requires (e.g. deal tags)."""


@dataclass(frozen=True)
class DealRow:
    """Gross amounts each player wins within one deal, reach-weighted.

    ``p1_gross`` sums reach times payoff over terminals player 1 wins;
    ``p2_gross`` does the same for player 2 (as a positive number).  The
    deal's chance weight is included, so rows sum to the game value.
    """

    deal: Deal
    p1_gross: Fraction
    p2_gross: Fraction

    @property
    def net(self) -> Fraction:
        return self.p1_gross - self.p2_gross


@dataclass(frozen=True)
class DealBreakdown:
    rows: tuple[DealRow, ...]

    @property
    def net(self) -> Fraction:
        return sum((r.net for r in self.rows), ZERO)

    def row(self, p1_card: Card, p2_card: Card) -> DealRow:
        for r in self.rows:
            if r.deal.p1_card == p1_card and r.deal.p2_card == p2_card:
                return r
        raise KeyError(f"no row for deal {p1_card}{p2_card}")


@dataclass(frozen=True)
class TreeStats:
    chance_nodes: int
    decision_nodes: int
    terminal_nodes: int
    infosets_per_player: Mapping[int, int]

    @property
    def total_nodes(self) -> int:
        return self.chance_nodes + self.decision_nodes + self.terminal_nodes


# ---------------------------------------------------------------------------
# validation


def own_sequence_map(tree: GameTree) -> dict[int, tuple[tuple[int, Action], ...]]:
    """Map node id to the owner-tagged action sequence leading to it.

    The sequence of a node records, per player, the (infoset, action)
    pairs that player chose on the root path.  Returned per node as a
    tuple of (player-tagged) entries; filter by player as needed.
    """

    sequences: dict[int, tuple] = {tree.root: ()}
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        node = tree.nodes[nid]
        seq = sequences[nid]
        if isinstance(node, ChanceNode):
            for branch in node.branches:
                sequences[branch.child] = seq
                stack.append(branch.child)
        elif isinstance(node, DecisionNode):
            for action, child in zip(node.actions, node.children):
                sequences[child] = seq + ((node.player, node.infoset, action),)
                stack.append(child)
    return sequences


def player_sequence(
    sequences: Mapping[int, tuple], nid: int, player: int
) -> tuple[tuple[int, Action], ...]:
    """The (infoset, action) pairs of one player on the path to ``nid``."""

    return tuple((i, a) for p, i, a in sequences[nid] if p == player)


def validate_tree(tree: GameTree) -> list[str]:
    """Structural diagnostics; an empty list means the tree is well formed.

    Checks ids, reachability, chance distributions, infoset consistency,
    and perfect recall (all nodes of an infoset share the owner's own
    action sequence).
    """

    problems: list[str] = []
    n = len(tree.nodes)
    for i, node in enumerate(tree.nodes):
        if node.id != i:
            problems.append(f"node {i}: stored id {node.id} does not match index")

    seen: set[int] = set()
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        if nid in seen:
            problems.append(f"node {nid}: reached twice (not a tree)")
            continue
        seen.add(nid)
        node = tree.nodes[nid]
        for child in node.children:
            if not 0 <= child < n:
                problems.append(f"node {nid}: child {child} out of range")
            else:
                stack.append(child)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        problems.append(f"unreachable nodes: {missing}")

    for node in tree.nodes:
        if isinstance(node, ChanceNode):
            total = sum((b.prob for b in node.branches), ZERO)
            if total != 1:
                problems.append(f"node {node.id}: chance probabilities sum to {total}")
            if any(b.prob < 0 for b in node.branches):
                problems.append(f"node {node.id}: negative chance probability")
        elif isinstance(node, DecisionNode):
            if node.player not in (1, 2):
                problems.append(f"node {node.id}: bad player {node.player}")
            if len(node.actions) != len(node.children):
                problems.append(f"node {node.id}: actions/children length mismatch")
            if not 0 <= node.infoset < len(tree.infosets):
                problems.append(f"node {node.id}: infoset {node.infoset} out of range")

    by_infoset: dict[int, list[DecisionNode]] = {}
    for node in tree.decisions():
        by_infoset.setdefault(node.infoset, []).append(node)
    for idx, iset in enumerate(tree.infosets):
        if iset.id != idx:
            problems.append(f"infoset at index {idx}: stored id {iset.id} mismatch")
        members = by_infoset.get(iset.id, [])
        if tuple(m.id for m in members) != iset.nodes:
            problems.append(f"infoset {iset.id}: member list does not match tree nodes")
        for m in members:
            if m.player != iset.player:
                problems.append(
                    f"infoset {iset.id}: node {m.id} owned by player {m.player},"
                    f" infoset by player {iset.player}"
                )
            if m.actions != iset.actions:
                problems.append(f"infoset {iset.id}: node {m.id} action list differs")
    claimed = {i for s in tree.infosets for i in s.nodes}
    for node in tree.decisions():
        if node.id not in claimed:
            problems.append(f"node {node.id}: decision node in no infoset")

    sequences = own_sequence_map(tree)
    for iset in tree.infosets:
        own = {
            player_sequence(sequences, nid, iset.player) for nid in iset.nodes
        }
        if len(own) > 1:
            problems.append(
                f"infoset {iset.id}: perfect recall violated, "
                f"{len(own)} distinct own-action sequences"
            )
    return problems


# ---------------------------------------------------------------------------
# evaluation


def _check_coverage(tree: GameTree, profile: BehaviorProfile) -> None:
    for iset in tree.infosets:
        if iset.id not in profile.distributions:
            raise CoverageError(
                f"profile does not cover infoset {iset.id} (key {iset.key!r})"
            )


def expected_value(tree: GameTree, profile: BehaviorProfile) -> Fraction:
    """Exact expected payoff to player 1 under ``profile``."""

    _check_coverage(tree, profile)
    memo: dict[int, Fraction] = {}

    def value(nid: int) -> Fraction:
        if nid in memo:
            return memo[nid]
        node = tree.nodes[nid]
        if isinstance(node, TerminalNode):
            result = node.payoff
        elif isinstance(node, ChanceNode):
            result = sum(
                (b.prob * value(b.child) for b in node.branches if b.prob != 0), ZERO
            )
        else:
            result = ZERO
            for action, child in zip(node.actions, node.children):
                p = profile.prob(node.infoset, action)
                if p != 0:
                    result += p * value(child)
        memo[nid] = result
        return result

    return value(tree.root)


def terminal_reach_probabilities(
    tree: GameTree, profile: BehaviorProfile
) -> dict[int, Fraction]:
    """Reach probability of every terminal under ``profile`` (chance included)."""

    _check_coverage(tree, profile)
    reach: dict[int, Fraction] = {tree.root: ONE}
    out: dict[int, Fraction] = {}
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        node = tree.nodes[nid]
        r = reach[nid]
        if isinstance(node, TerminalNode):
            out[nid] = r
        elif isinstance(node, ChanceNode):
            for b in node.branches:
                reach[b.child] = r * b.prob
                stack.append(b.child)
        else:
            for action, child in zip(node.actions, node.children):
                reach[child] = r * profile.prob(node.infoset, action)
                stack.append(child)
    return out


def per_deal_breakdown(tree: GameTree, profile: BehaviorProfile) -> DealBreakdown:
    """Reach-weighted gross winnings per player, grouped by deal.

    Requires every terminal to carry a deal tag.  The breakdown nets to
    :func:`expected_value` exactly.
    """

    reach = terminal_reach_probabilities(tree, profile)
    gross: dict[Deal, list[Fraction]] = {d: [ZERO, ZERO] for d in all_deals()}
    for node in tree.terminals():
        if node.deal is None:
            raise UnsupportedVariantError(
                f"terminal {node.id} carries no deal tag; breakdown unsupported"
            )
        weighted = reach[node.id] * node.payoff
        if weighted > 0:
            gross[node.deal][0] += weighted
        elif weighted < 0:
            gross[node.deal][1] -= weighted
    rows = tuple(DealRow(d, gross[d][0], gross[d][1]) for d in all_deals())
    return DealBreakdown(rows)


def tree_stats(tree: GameTree) -> TreeStats:
    chance = decision = terminal = 0
    per_player: dict[int, int] = {1: 0, 2: 0}
    for node in tree.nodes:
        if isinstance(node, ChanceNode):
            chance += 1
        elif isinstance(node, DecisionNode):
            decision += 1
        else:
            terminal += 1
    for iset in tree.infosets:
        per_player[iset.player] = per_player.get(iset.player, 0) + 1
    return TreeStats(chance, decision, terminal, per_player)


# ---------------------------------------------------------------------------
# profile helpers


def profile_from_keys(
    tree: GameTree, by_key: Mapping[InfoSetKey, Mapping[Action, Fraction]]
) -> BehaviorProfile:
    """Bind key-addressed distributions to the infoset ids of ``tree``.

    Keys in ``by_key`` with no matching infoset are ignored, so one key
    map can serve several variants.
    """

    dists = {
        s.id: dict(by_key[s.key]) for s in tree.infosets if s.key in by_key
    }
    return BehaviorProfile(dists)


def complete_profile(
    tree: GameTree, profile: BehaviorProfile, players: tuple[int, ...] = (1, 2)
) -> BehaviorProfile:
    """Fill infosets missing from ``profile`` with the pure first action.

    Used to extend a strategy onto branches it never reaches (for
    example a fair player's infosets on a zero-probability cheat branch).
    """

    dists = {k: dict(v) for k, v in profile.distributions.items()}
    for iset in tree.infosets:
        if iset.player in players and iset.id not in dists:
            dist = {a: ZERO for a in iset.actions}
            dist[iset.actions[0]] = ONE
            dists[iset.id] = dist
    return BehaviorProfile(dists)


def merge_profiles(tree: GameTree, part1: BehaviorProfile, part2: BehaviorProfile) -> BehaviorProfile:
    """Combine two partial profiles (disjoint or agreeing on overlap)."""

    dists = {k: dict(v) for k, v in part1.distributions.items()}
    for k, v in part2.distributions.items():
        dists[k] = dict(v)
    return BehaviorProfile(dists)


def chance_reachable_nodes(tree: GameTree) -> set[int]:
    """Ids of nodes reachable when only zero-probability chance branches prune.

    Player actions are never pruned; this is the support that matters
    for equilibrium computation.
    """

    reachable: set[int] = set()
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        reachable.add(nid)
        node = tree.nodes[nid]
        if isinstance(node, ChanceNode):
            stack.extend(b.child for b in node.branches if b.prob != 0)
        else:
            stack.extend(node.children)
    return reachable
