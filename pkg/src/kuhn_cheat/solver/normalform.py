"""Normal-form enumeration: the brute-force cross-check solver.

Enumerates every pure strategy over the chance-reachable infosets of
each player, accumulates the exact payoff matrix, and solves the matrix
game by LP.  Exponential by construction; a size cap guards against
accidental use on trees where the enumeration would explode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

import numpy as np

from ..gametree import (
    Action,
    BehaviorProfile,
    ChanceNode,
    DecisionNode,
    GameTree,
    InfoSet,
    TerminalNode,
    complete_profile,
    own_sequence_map,
    player_sequence,
)
from .response import best_response
from .result import SolveResult
from .simplex import LinearConstraint, LPStatus, solve_linear_program

ZERO = Fraction(0)
ONE = Fraction(1)


class NormalFormSizeError(ValueError):
    """The pure-strategy space exceeds the enumeration cap."""


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Exact payoff matrix over pure-strategy profiles.

    ``strategies1[i]`` assigns an action index to each infoset id in
    ``infosets1`` (same order); likewise for player 2.  Entries are
    ``numerators[i, j] / scale``, payoffs to player 1.
    """

    infosets1: tuple[int, ...]
    infosets2: tuple[int, ...]
    strategies1: tuple[tuple[int, ...], ...]
    strategies2: tuple[tuple[int, ...], ...]
    numerators: np.ndarray
    scale: int

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.strategies1), len(self.strategies2))

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numerators[i, j]), self.scale)


def _reachable_infosets(tree: GameTree, player: int) -> list[InfoSet]:
    reachable: set[int] = set()
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        node = tree.nodes[nid]
        if isinstance(node, ChanceNode):
            stack.extend(b.child for b in node.branches if b.prob != 0)
        elif isinstance(node, DecisionNode):
            reachable.add(node.infoset)
            stack.extend(node.children)
    return [s for s in tree.infosets if s.player == player and s.id in reachable]


def enumerate_normal_form(tree: GameTree, cap: int = 1 << 20) -> NormalForm:
    """Exact normal form of ``tree`` over chance-reachable infosets.

    Raises :class:`NormalFormSizeError` (naming the counts) when either
    player's pure-strategy count exceeds ``cap``.
    """

    isets1 = _reachable_infosets(tree, 1)
    isets2 = _reachable_infosets(tree, 2)
    count1 = prod(len(s.actions) for s in isets1) if isets1 else 1
    count2 = prod(len(s.actions) for s in isets2) if isets2 else 1
    if count1 > cap or count2 > cap:
        raise NormalFormSizeError(
            f"pure-strategy space {count1} x {count2} exceeds cap {cap}"
        )

    local1 = {s.id: k for k, s in enumerate(isets1)}
    local2 = {s.id: k for k, s in enumerate(isets2)}
    cards1 = [len(s.actions) for s in isets1]
    cards2 = [len(s.actions) for s in isets2]
    strides1 = _strides(cards1)
    strides2 = _strides(cards2)

    # chance-reachable terminals with the infoset constraints on the path
    entries: list[tuple[Fraction, dict[int, int], dict[int, int]]] = []

    def walk(nid: int, chance: Fraction, a1: dict[int, int], a2: dict[int, int]) -> None:
        node = tree.nodes[nid]
        if isinstance(node, TerminalNode):
            if node.payoff != 0:
                entries.append((chance * node.payoff, a1, a2))
            return
        if isinstance(node, ChanceNode):
            for b in node.branches:
                if b.prob != 0:
                    walk(b.child, chance * b.prob, a1, a2)
            return
        for idx, child in enumerate(node.children):
            if node.player == 1:
                walk(child, chance, {**a1, local1[node.infoset]: idx}, a2)
            else:
                walk(child, chance, a1, {**a2, local2[node.infoset]: idx})

    walk(tree.root, ONE, {}, {})

    scale = lcm(1, *(w.denominator for w, _, _ in entries)) if entries else 1
    matrix = np.zeros((count1, count2), dtype=np.int64)
    for w, a1, a2 in entries:
        rows = _matching_indices(a1, cards1, strides1)
        cols = _matching_indices(a2, cards2, strides2)
        matrix[np.ix_(rows, cols)] += int(w * scale)

    strategies1 = tuple(itertools.product(*(range(c) for c in cards1)))
    strategies2 = tuple(itertools.product(*(range(c) for c in cards2)))
    return NormalForm(
        infosets1=tuple(s.id for s in isets1),
        infosets2=tuple(s.id for s in isets2),
        strategies1=strategies1,
        strategies2=strategies2,
        numerators=matrix,
        scale=scale,
    )


def _strides(cards: list[int]) -> list[int]:
    strides = [1] * len(cards)
    for k in range(len(cards) - 2, -1, -1):
        strides[k] = strides[k + 1] * cards[k + 1]
    return strides


def _matching_indices(
    assigned: dict[int, int], cards: list[int], strides: list[int]
) -> np.ndarray:
    base = 0
    for k, digit in assigned.items():
        base += digit * strides[k]
    indices = np.array([base], dtype=np.int64)
    for k in range(len(cards)):
        if k in assigned:
            continue
        offsets = np.arange(cards[k], dtype=np.int64) * strides[k]
        indices = (indices[:, None] + offsets[None, :]).reshape(-1)
    return indices


def _dedup(matrix: np.ndarray, axis: int) -> tuple[np.ndarray, list[int]]:
    """Drop duplicate rows (axis 0) or columns (axis 1), keeping first occurrences."""

    seen: dict[bytes, int] = {}
    keep: list[int] = []
    m = matrix if axis == 0 else matrix.T
    for i in range(m.shape[0]):
        key = m[i].tobytes()
        if key not in seen:
            seen[key] = i
            keep.append(i)
    out = m[keep]
    return (out if axis == 0 else out.T), keep


def _matrix_game_solve(
    matrix: np.ndarray, scale: int
) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact minimax of a matrix game (row player maximizes).

    One LP is solved with the shorter side providing the constraints;
    the other side's mix comes from the dual multipliers and both mixes
    are certified against the matrix before returning (value, row mix,
    column mix).
    """

    rows, cols = matrix.shape
    if rows < cols:
        value, col_mix, row_mix = _matrix_game_solve(-matrix.T, scale)
        return -value, row_mix, col_mix

    # max v s.t. sum_i x_i A[i][j] - v >= 0 for all j, sum x = 1
    constraints = [LinearConstraint({i: ONE for i in range(rows)}, "==", ONE)]
    for j in range(cols):
        coeffs: dict[int, Fraction] = {
            i: Fraction(int(matrix[i, j]), scale) for i in range(rows)
        }
        coeffs[rows] = -ONE
        constraints.append(LinearConstraint(coeffs, ">=", ZERO))
    result = solve_linear_program(
        rows + 1, {rows: -ONE}, constraints, free_vars=(rows,)
    )
    if result.status is not LPStatus.OPTIMAL:
        raise ArithmeticError(f"matrix game LP came back {result.status}")
    value = -result.objective
    row_mix = result.x[:rows]
    col_mix = result.duals[1:]

    # certify: x is a distribution achieving >= value against every
    # column (LP feasibility), y one achieving <= value against every row
    if sum(col_mix, ZERO) != ONE or any(w < 0 for w in col_mix):
        raise ArithmeticError("matrix game dual is not a distribution")
    for i in range(rows):
        row = matrix[i]
        payoff = sum(
            (Fraction(int(row[j]), scale) * w for j, w in enumerate(col_mix) if w),
            ZERO,
        )
        if payoff > value:
            raise ArithmeticError("matrix game dual mix fails its guarantee")
    return value, row_mix, col_mix


def minimax_value(nf: NormalForm) -> Fraction:
    """Exact value of the matrix game (deduplicated before the LP)."""

    matrix, _ = _dedup(nf.numerators, axis=0)
    matrix, _ = _dedup(matrix, axis=1)
    value, _, _ = _matrix_game_solve(matrix, nf.scale)
    return value


def _behavior_from_mixed(
    tree: GameTree,
    infoset_ids: tuple[int, ...],
    strategies: tuple[tuple[int, ...], ...],
    weights: dict[int, Fraction],
    player: int,
) -> dict[int, dict[Action, Fraction]]:
    """Realization-equivalent behavior strategy from a mixed strategy."""

    sequences = own_sequence_map(tree)
    local = {iset_id: k for k, iset_id in enumerate(infoset_ids)}
    dists: dict[int, dict[Action, Fraction]] = {}
    for iset_id in infoset_ids:
        iset = tree.infosets[iset_id]
        own_seq = player_sequence(sequences, iset.nodes[0], player)
        action_index = {a: i for i, a in enumerate(iset.actions)}
        required = [
            (local[prior_iset], action_index_of(tree, prior_iset, act))
            for prior_iset, act in own_seq
        ]
        reach_weight = ZERO
        act_weight = [ZERO] * len(iset.actions)
        for si, w in weights.items():
            if w == 0:
                continue
            strat = strategies[si]
            if all(strat[k] == idx for k, idx in required):
                reach_weight += w
                act_weight[strat[local[iset_id]]] += w
        if reach_weight > 0:
            dists[iset_id] = {
                a: act_weight[i] / reach_weight for i, a in enumerate(iset.actions)
            }
        else:
            dists[iset_id] = {
                a: (ONE if i == 0 else ZERO) for i, a in enumerate(iset.actions)
            }
    return dists


def action_index_of(tree: GameTree, infoset_id: int, action: Action) -> int:
    return tree.infosets[infoset_id].actions.index(action)


def solve_normal_form(tree: GameTree, cap: int = 1 << 20) -> SolveResult:
    """Equilibrium via full enumeration; certifies by exact best response."""

    nf = enumerate_normal_form(tree, cap)
    matrix, row_keep = _dedup(nf.numerators, axis=0)
    matrix, col_keep = _dedup(matrix, axis=1)
    value, mix_x, mix_y = _matrix_game_solve(matrix, nf.scale)

    weights1 = {row_keep[i]: w for i, w in enumerate(mix_x) if w != 0}
    weights2 = {col_keep[j]: w for j, w in enumerate(mix_y) if w != 0}
    dists = _behavior_from_mixed(tree, nf.infosets1, nf.strategies1, weights1, 1)
    dists.update(_behavior_from_mixed(tree, nf.infosets2, nf.strategies2, weights2, 2))
    profile = complete_profile(tree, BehaviorProfile(dists))

    gain1 = best_response(tree, profile, responder=1).value - value
    gain2 = value - best_response(tree, profile, responder=2).value
    return SolveResult(
        value=value,
        profile=profile,
        exploitability=gain1 + gain2,
        method="normal-form",
    )
