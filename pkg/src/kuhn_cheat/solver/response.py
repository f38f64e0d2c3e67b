"""Exact best response and exploitability."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..gametree import (
    Action,
    BehaviorProfile,
    ChanceNode,
    CoverageError,
    DecisionNode,
    GameTree,
    TerminalNode,
    own_sequence_map,
    expected_value,
    player_sequence,
)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class BestResponse:
    """Payoff to player 1 when the responder best-responds, plus the response."""

    value: Fraction
    profile: BehaviorProfile


def best_response(
    tree: GameTree, fixed: BehaviorProfile, responder: int
) -> BestResponse:
    """Exact pure best response against ``fixed``.

    ``fixed`` must cover every infoset of the other player; its entries
    for the responder, if any, are ignored.  Responder infosets are
    resolved deepest first by own-sequence length; action values are
    weighted by chance times the opponent's reach, and ties go to the
    first action in canonical order.  The returned profile is pure and
    covers every responder infoset, including unreachable ones.
    """

    if responder not in (1, 2):
        raise ValueError(f"responder must be 1 or 2, got {responder}")
    opponent = 2 if responder == 1 else 1
    for iset in tree.infosets:
        if iset.player == opponent and iset.id not in fixed.distributions:
            raise CoverageError(
                f"fixed profile does not cover infoset {iset.id} (key {iset.key!r})"
            )

    # reach of each node counting only chance and the fixed opponent
    reach_ext: dict[int, Fraction] = {tree.root: ONE}
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        node = tree.nodes[nid]
        r = reach_ext[nid]
        if isinstance(node, ChanceNode):
            for b in node.branches:
                reach_ext[b.child] = r * b.prob
                stack.append(b.child)
        elif isinstance(node, DecisionNode):
            for action, child in zip(node.actions, node.children):
                factor = (
                    fixed.prob(node.infoset, action)
                    if node.player == opponent
                    else ONE
                )
                reach_ext[child] = r * factor
                stack.append(child)

    sequences = own_sequence_map(tree)
    responder_isets = [s for s in tree.infosets if s.player == responder]
    depth_of = {
        s.id: len(player_sequence(sequences, s.nodes[0], responder))
        for s in responder_isets
    }
    responder_isets.sort(key=lambda s: (-depth_of[s.id], s.id))

    chosen: dict[int, int] = {}  # infoset id -> action index
    memo: dict[int, Fraction] = {}

    def node_value(nid: int) -> Fraction:
        if nid in memo:
            return memo[nid]
        node = tree.nodes[nid]
        if isinstance(node, TerminalNode):
            result = node.payoff
        elif isinstance(node, ChanceNode):
            result = sum(
                (b.prob * node_value(b.child) for b in node.branches if b.prob != 0),
                ZERO,
            )
        elif node.player == responder:
            result = node_value(node.children[chosen[node.infoset]])
        else:
            result = ZERO
            for action, child in zip(node.actions, node.children):
                p = fixed.prob(node.infoset, action)
                if p != 0:
                    result += p * node_value(child)
        memo[nid] = result
        return result

    sign = 1 if responder == 1 else -1
    for iset in responder_isets:
        best_idx = 0
        best_q: Fraction | None = None
        for idx in range(len(iset.actions)):
            q = ZERO
            for nid in iset.nodes:
                node = tree.nodes[nid]
                w = reach_ext[nid]
                if w != 0:
                    q += w * node_value(node.children[idx])
            q = sign * q
            if best_q is None or q > best_q:
                best_q = q
                best_idx = idx
        chosen[iset.id] = best_idx

    dists = {
        s.id: {
            a: (ONE if i == chosen[s.id] else ZERO) for i, a in enumerate(s.actions)
        }
        for s in responder_isets
    }
    return BestResponse(value=node_value(tree.root), profile=BehaviorProfile(dists))


def exploitability(tree: GameTree, profile: BehaviorProfile) -> Fraction:
    """Sum of both players' best-response gains; zero exactly at equilibrium."""

    value = expected_value(tree, profile)
    gain1 = best_response(tree, profile, responder=1).value - value
    gain2 = value - best_response(tree, profile, responder=2).value
    return gain1 + gain2
