"""Builders for the Kuhn poker variants.

Every variant shares the same one-round betting structure over a
three-card deck with one-dollar antes and a one-dollar bet.  The
variants differ in the chance layers stacked above the deal:

* classic: just the uniform six-way deal.
* cheating: player-1-cheats (prob p) and player-2-cheats (prob q)
  layers; a cheater peeks at the down card, which in a three-card deck
  reveals the whole deal.
* detection: additionally player-1-detected (prob r1) and
  player-2-detected (prob r2) layers.  A detection branch only matters
  when the matching player actually cheated; the catcher learns the
  fact of cheating (not the opponent's card) and the money is settled
  by the catch rules in :func:`compute_terminal_payoff`.

All chance layers always build both branches, even at probability 0 or
1, so tree shape depends only on the variant, never on the numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .gametree import (
    Action,
    Card,
    ChanceBranch,
    ChanceNode,
    Deal,
    DecisionNode,
    GameTree,
    InfoSet,
    InfoSetKey,
    Node,
    OPEN_ACTIONS,
    RESPONSE_ACTIONS,
    TerminalNode,
    View,
    all_deals,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def _as_unit_fraction(value, name: str) -> Fraction:
    prob = Fraction(value)
    if not 0 <= prob <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {prob}")
    return prob


@dataclass(frozen=True)
class CheatConfig:
    """Cheat and detection probabilities.

    ``p`` and ``q`` are the probabilities that player 1 and player 2
    cheat; ``r1`` and ``r2`` are the probabilities that player 1's and
    player 2's cheating would be detected.
    """

    p: Fraction = ZERO
    q: Fraction = ZERO
    r1: Fraction = ZERO
    r2: Fraction = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _as_unit_fraction(self.p, "p"))
        object.__setattr__(self, "q", _as_unit_fraction(self.q, "q"))
        object.__setattr__(self, "r1", _as_unit_fraction(self.r1, "r1"))
        object.__setattr__(self, "r2", _as_unit_fraction(self.r2, "r2"))

    @classmethod
    def classic(cls) -> "CheatConfig":
        return cls()


@dataclass(frozen=True)
class RoundFlags:
    """What actually happened in one round: who cheated, who got caught."""

    p1_cheated: bool = False
    p2_cheated: bool = False
    p1_caught_p2: bool = False
    p2_caught_p1: bool = False

    def __post_init__(self) -> None:
        if self.p1_caught_p2 and not self.p2_cheated:
            raise ValueError("p1_caught_p2 requires p2_cheated")
        if self.p2_caught_p1 and not self.p1_cheated:
            raise ValueError("p2_caught_p1 requires p1_cheated")


#: betting history -> (player 1 pot contribution, player 2 pot contribution,
#: folding player or None).  The ante is one dollar; a bet or call adds one.
BETTING_TERMINALS: Mapping[tuple[Action, ...], tuple[int, int, int | None]] = {
    (Action.BET, Action.CALL): (2, 2, None),
    (Action.BET, Action.FOLD): (2, 1, 2),
    (Action.CHECK, Action.CHECK): (1, 1, None),
    (Action.CHECK, Action.BET, Action.CALL): (2, 2, None),
    (Action.CHECK, Action.BET, Action.FOLD): (1, 2, 1),
}

_HISTORY_CHARS = {
    Action.BET: "b",
    Action.CHECK: "x",
    Action.CALL: "c",
    Action.FOLD: "f",
}


def history_label(history: tuple[Action, ...]) -> str:
    return "".join(_HISTORY_CHARS[a] for a in history)


def compute_terminal_payoff(
    deal: Deal, outcome: tuple[Action, ...], flags: RoundFlags
) -> Fraction:
    """Exact payoff to player 1 at one betting terminal.

    Catch rules override the betting result: if both players caught
    each other the round is a wash; if exactly one player caught the
    other, the catcher wins the cheater's entire pot contribution at
    this terminal (ante plus any bet actually made).  Otherwise a fold
    forfeits the folder's contribution and a showdown transfers the
    loser's contribution to the winner.
    """

    try:
        contrib1, contrib2, folder = BETTING_TERMINALS[tuple(outcome)]
    except KeyError:
        raise ValueError(f"not a terminal betting history: {outcome!r}") from None
    if flags.p1_caught_p2 and flags.p2_caught_p1:
        return ZERO
    if flags.p1_caught_p2:
        return Fraction(contrib2)
    if flags.p2_caught_p1:
        return Fraction(-contrib1)
    if folder == 1:
        return Fraction(-contrib1)
    if folder == 2:
        return Fraction(contrib2)
    if deal.p1_wins_showdown:
        return Fraction(contrib2)
    return Fraction(-contrib1)


def _to_act(history: tuple[Action, ...]) -> tuple[int, tuple[Action, ...]]:
    """Player to move and their legal actions after ``history``."""

    if history == ():
        return 1, OPEN_ACTIONS
    if history == (Action.BET,):
        return 2, RESPONSE_ACTIONS
    if history == (Action.CHECK,):
        return 2, OPEN_ACTIONS
    if history == (Action.CHECK, Action.BET):
        return 1, RESPONSE_ACTIONS
    raise ValueError(f"not a decision point: {history!r}")


class _TreeAssembler:
    """Accumulates nodes and infosets in deterministic depth-first order."""

    def __init__(self) -> None:
        self.nodes: list[Node | None] = []
        self._iset_ids: dict[InfoSetKey, int] = {}
        self._iset_player: list[int] = []
        self._iset_key: list[InfoSetKey] = []
        self._iset_actions: list[tuple[Action, ...]] = []
        self._iset_members: list[list[int]] = []

    def new_id(self) -> int:
        self.nodes.append(None)
        return len(self.nodes) - 1

    def register(
        self, key: InfoSetKey, player: int, actions: tuple[Action, ...], node_id: int
    ) -> int:
        iset = self._iset_ids.get(key)
        if iset is None:
            iset = len(self._iset_ids)
            self._iset_ids[key] = iset
            self._iset_player.append(player)
            self._iset_key.append(key)
            self._iset_actions.append(actions)
            self._iset_members.append([])
        else:
            if self._iset_actions[iset] != actions or self._iset_player[iset] != player:
                raise ValueError(f"inconsistent reuse of infoset key {key!r}")
        self._iset_members[iset].append(node_id)
        return iset

    def chance(self, node_id: int, branches: list[tuple[str, Fraction, int]]) -> None:
        self.nodes[node_id] = ChanceNode(
            node_id, tuple(ChanceBranch(lbl, prob, child) for lbl, prob, child in branches)
        )

    def betting_subgame(self, deal: Deal, flags: RoundFlags) -> int:
        """Build the five-terminal betting round for one deal and flag set."""

        def describe(player: int) -> View:
            cheated = flags.p1_cheated if player == 1 else flags.p2_cheated
            caught = flags.p1_caught_p2 if player == 1 else flags.p2_caught_p1
            return View(
                card=deal.card_of(player),
                deal=deal if cheated else None,
                caught_opponent=caught,
            )

        def walk(history: tuple[Action, ...]) -> int:
            node_id = self.new_id()
            if history in BETTING_TERMINALS:
                self.nodes[node_id] = TerminalNode(
                    node_id,
                    payoff=compute_terminal_payoff(deal, history, flags),
                    deal=deal,
                    label=f"{deal}:{history_label(history)}",
                )
                return node_id
            player, actions = _to_act(history)
            key = (player, describe(player), history)
            iset = self.register(key, player, actions, node_id)
            children = tuple(walk(history + (a,)) for a in actions)
            self.nodes[node_id] = DecisionNode(node_id, player, iset, actions, children)
            return node_id

        return walk(())

    def deal_layer(self, flags_for_deal: Callable[[Deal], RoundFlags]) -> int:
        node_id = self.new_id()
        branches = []
        for deal in all_deals():
            child = self.betting_subgame(deal, flags_for_deal(deal))
            branches.append((deal.label(), Fraction(1, 6), child))
        self.chance(node_id, branches)
        return node_id

    def finish(self, variant: str, config: CheatConfig) -> GameTree:
        infosets = tuple(
            InfoSet(
                id=i,
                player=self._iset_player[i],
                key=self._iset_key[i],
                actions=self._iset_actions[i],
                nodes=tuple(self._iset_members[i]),
            )
            for i in range(len(self._iset_ids))
        )
        assert all(n is not None for n in self.nodes)
        return GameTree(tuple(self.nodes), infosets, variant, config)


def build_classic() -> GameTree:
    """Fair play: a uniform deal followed by one betting round."""

    asm = _TreeAssembler()
    asm.deal_layer(lambda deal: RoundFlags())
    return asm.finish("classic", CheatConfig.classic())


def _binary_layer(
    asm: _TreeAssembler,
    label_yes: str,
    label_no: str,
    prob: Fraction,
    build_child: Callable[[bool], int],
) -> int:
    node_id = asm.new_id()
    child_yes = build_child(True)
    child_no = build_child(False)
    asm.chance(node_id, [(label_yes, prob, child_yes), (label_no, 1 - prob, child_no)])
    return node_id


def build_cheating(config: CheatConfig, *, p2_layer_first: bool = False) -> GameTree:
    """Cheating without detection: cheat layers above the deal.

    ``p2_layer_first`` swaps the order of the two cheat layers; it
    exists to demonstrate the order does not matter.  Requires
    ``r1 == r2 == 0``; use :func:`build_detection` otherwise.
    """

    if config.r1 != 0 or config.r2 != 0:
        raise ValueError("build_cheating requires r1 == r2 == 0")
    asm = _TreeAssembler()

    def deals(c1: bool, c2: bool) -> int:
        flags = RoundFlags(p1_cheated=c1, p2_cheated=c2)
        return asm.deal_layer(lambda deal: flags)

    if p2_layer_first:
        _binary_layer(
            asm,
            "p2-cheat",
            "p2-fair",
            config.q,
            lambda c2: _binary_layer(
                asm, "p1-cheat", "p1-fair", config.p, lambda c1: deals(c1, c2)
            ),
        )
    else:
        _binary_layer(
            asm,
            "p1-cheat",
            "p1-fair",
            config.p,
            lambda c1: _binary_layer(
                asm, "p2-cheat", "p2-fair", config.q, lambda c2: deals(c1, c2)
            ),
        )
    return asm.finish("cheating", config)


def build_detection(config: CheatConfig) -> GameTree:
    """Cheating with probabilistic detection: four chance layers, then the deal.

    The detection layers are drawn for every round; a detection branch
    combined with a fair branch is vacuous and merges into the same
    information sets as a failed detection.
    """

    asm = _TreeAssembler()

    def deals(c1: bool, c2: bool, d1: bool, d2: bool) -> int:
        flags = RoundFlags(
            p1_cheated=c1,
            p2_cheated=c2,
            p1_caught_p2=d1 and c2,
            p2_caught_p1=d2 and c1,
        )
        return asm.deal_layer(lambda deal: flags)

    def layer4(c1: bool, c2: bool, d1: bool) -> int:
        return _binary_layer(
            asm, "p2-detect", "p2-miss", config.r2, lambda d2: deals(c1, c2, d1, d2)
        )

    def layer3(c1: bool, c2: bool) -> int:
        return _binary_layer(
            asm, "p1-detect", "p1-miss", config.r1, lambda d1: layer4(c1, c2, d1)
        )

    def layer2(c1: bool) -> int:
        return _binary_layer(asm, "p2-cheat", "p2-fair", config.q, lambda c2: layer3(c1, c2))

    _binary_layer(asm, "p1-cheat", "p1-fair", config.p, layer2)
    return asm.finish("detection", config)


def build_variant(config: CheatConfig) -> GameTree:
    """Pick the smallest variant tree that realizes ``config``.

    Zero detection probabilities give the cheating tree (or the classic
    tree when nobody can cheat); otherwise the detection tree.
    """

    if config.r1 == 0 and config.r2 == 0:
        if config.p == 0 and config.q == 0:
            return build_classic()
        return build_cheating(config)
    return build_detection(config)
