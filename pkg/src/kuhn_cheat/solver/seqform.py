"""Sequence-form linear programs for two-player zero-sum trees.

Realization plans over sequences (one per infoset action, plus the
empty sequence) turn equilibrium computation into a pair of mutually
dual LPs of size linear in the tree.  Infosets that chance alone makes
unreachable are left out of the programs; the extracted profile fills
them with the pure first action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..gametree import (
    Action,
    BehaviorProfile,
    ChanceNode,
    DecisionNode,
    GameTree,
    TerminalNode,
    complete_profile,
)
from .response import best_response
from .result import SolveResult
from .simplex import LinearConstraint, LPStatus, check_feasible, solve_linear_program

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PlayerSequences:
    """Sequence bookkeeping for one player.

    Sequence 0 is the empty sequence.  ``infosets[k]`` is the infoset id
    of local infoset ``k``; its parent sequence is ``parent_seq[k]`` and
    its actions map to the contiguous block starting at
    ``first_seq[k]``.
    """

    player: int
    infosets: tuple[int, ...]
    parent_seq: tuple[int, ...]
    first_seq: tuple[int, ...]
    n_seqs: int

    def seq_of(self, local_infoset: int, action_index: int) -> int:
        return self.first_seq[local_infoset] + action_index


@dataclass(frozen=True)
class SequenceFormLP:
    """Both players' sequence structure plus the reach-weighted payoffs."""

    p1: PlayerSequences
    p2: PlayerSequences
    payoff: Mapping[tuple[int, int], Fraction]  # (p1 seq, p2 seq) -> value to P1


class _SequenceTracker:
    def __init__(self, player: int) -> None:
        self.player = player
        self.infosets: list[int] = []
        self.parent_seq: list[int] = []
        self.first_seq: list[int] = []
        self.local_of: dict[int, int] = {}
        self.n_seqs = 1

    def visit(self, infoset_id: int, n_actions: int, current_seq: int) -> int:
        local = self.local_of.get(infoset_id)
        if local is None:
            local = len(self.infosets)
            self.local_of[infoset_id] = local
            self.infosets.append(infoset_id)
            self.parent_seq.append(current_seq)
            self.first_seq.append(self.n_seqs)
            self.n_seqs += n_actions
        elif self.parent_seq[local] != current_seq:
            raise ValueError(
                f"infoset {infoset_id} reached with two different own sequences"
            )
        return local

    def seq_of(self, local_infoset: int, action_index: int) -> int:
        return self.first_seq[local_infoset] + action_index

    def frozen(self) -> PlayerSequences:
        return PlayerSequences(
            self.player,
            tuple(self.infosets),
            tuple(self.parent_seq),
            tuple(self.first_seq),
            self.n_seqs,
        )


def build_sequence_form(tree: GameTree) -> SequenceFormLP:
    """Enumerate sequences over the chance-reachable part of ``tree``."""

    trackers = {1: _SequenceTracker(1), 2: _SequenceTracker(2)}
    payoff: dict[tuple[int, int], Fraction] = {}

    def walk(nid: int, seq1: int, seq2: int, chance: Fraction) -> None:
        node = tree.nodes[nid]
        if isinstance(node, TerminalNode):
            if node.payoff != 0:
                key = (seq1, seq2)
                payoff[key] = payoff.get(key, ZERO) + chance * node.payoff
            return
        if isinstance(node, ChanceNode):
            for branch in node.branches:
                if branch.prob != 0:
                    walk(branch.child, seq1, seq2, chance * branch.prob)
            return
        tracker = trackers[node.player]
        seq = seq1 if node.player == 1 else seq2
        local = tracker.visit(node.infoset, len(node.actions), seq)
        for idx, child in enumerate(node.children):
            child_seq = tracker.seq_of(local, idx)
            if node.player == 1:
                walk(child, child_seq, seq2, chance)
            else:
                walk(child, seq1, child_seq, chance)

    walk(tree.root, 0, 0, ONE)
    return SequenceFormLP(trackers[1].frozen(), trackers[2].frozen(), payoff)


def _children_of_seq(seqs: PlayerSequences) -> dict[int, list[int]]:
    """Map each sequence to the local infosets whose parent it is."""

    out: dict[int, list[int]] = {}
    for local, parent in enumerate(seqs.parent_seq):
        out.setdefault(parent, []).append(local)
    return out


def _realization_constraints(seqs: PlayerSequences) -> list[LinearConstraint]:
    """Plan constraints: empty sequence has weight 1, infosets conserve flow."""

    rows = [LinearConstraint({0: ONE}, "==", ONE)]
    for local in range(len(seqs.infosets)):
        coeffs: dict[int, Fraction] = {seqs.parent_seq[local]: -ONE}
        first = seqs.first_seq[local]
        width = (seqs.first_seq[local + 1] if local + 1 < len(seqs.first_seq) else seqs.n_seqs) - first
        for k in range(first, first + width):
            coeffs[k] = coeffs.get(k, ZERO) + ONE
        rows.append(LinearConstraint(coeffs, "==", ZERO))
    return rows


def _tightness_constraints(
    own: PlayerSequences,
    other_n_seqs: int,
    payoff_by_own_seq: dict[int, dict[int, Fraction]],
    children: dict[int, list[int]],
    payoff_sign: int,
) -> list[LinearConstraint]:
    """One inequality per own sequence, tying potentials to payoffs.

    Variables are laid out as [other player's plan, own potentials].
    Program A uses ``payoff_sign=-1`` (rows E^T u - A y >= 0); the
    mirrored program B uses ``payoff_sign=+1`` (rows A^T x - F^T w >= 0),
    so the potential coefficients always carry the opposite sign.
    """

    pot = Fraction(-payoff_sign)
    rows = []
    for seq in range(own.n_seqs):
        coeffs: dict[int, Fraction] = {}
        for j, value in payoff_by_own_seq.get(seq, {}).items():
            coeffs[j] = coeffs.get(j, ZERO) + payoff_sign * value
        if seq == 0:
            coeffs[other_n_seqs + 0] = pot
        else:
            owner = _owner_of_seq(own, seq)
            coeffs[other_n_seqs + 1 + owner] = pot
        for child in children.get(seq, []):
            col = other_n_seqs + 1 + child
            coeffs[col] = coeffs.get(col, ZERO) - pot
        rows.append(LinearConstraint(coeffs, ">=", ZERO))
    return rows


def _owner_of_seq(seqs: PlayerSequences, seq: int) -> int:
    # binary search over first_seq blocks
    lo, hi = 0, len(seqs.first_seq) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if seqs.first_seq[mid] <= seq:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _behavior_from_plan(
    tree: GameTree, seqs: PlayerSequences, plan: tuple[Fraction, ...]
) -> dict[int, dict[Action, Fraction]]:
    dists: dict[int, dict[Action, Fraction]] = {}
    for local, infoset_id in enumerate(seqs.infosets):
        iset = tree.infosets[infoset_id]
        parent = plan[seqs.parent_seq[local]]
        dist: dict[Action, Fraction] = {}
        if parent > 0:
            for idx, action in enumerate(iset.actions):
                dist[action] = plan[seqs.seq_of(local, idx)] / parent
        else:
            for idx, action in enumerate(iset.actions):
                dist[action] = ONE if idx == 0 else ZERO
        dists[infoset_id] = dist
    return dists


def solve_lp(tree: GameTree) -> SolveResult:
    """Exact equilibrium of ``tree`` via the sequence-form LP.

    Solves program A for player 2's plan, recovers player 1's plan from
    the exact dual multipliers, and certifies that pair by checking it
    against the mirrored program B (feasibility plus equal objective,
    which is optimality by weak duality).  The assembled profile is
    certified once more by exact best response; the reported
    exploitability is that certificate (zero at equilibrium).
    """

    sf = build_sequence_form(tree)
    n1, n2 = sf.p1.n_seqs, sf.p2.n_seqs
    m1 = 1 + len(sf.p1.infosets)
    m2 = 1 + len(sf.p2.infosets)

    by_seq1: dict[int, dict[int, Fraction]] = {}
    by_seq2: dict[int, dict[int, Fraction]] = {}
    for (s1, s2), value in sf.payoff.items():
        by_seq1.setdefault(s1, {})[s2] = value
        by_seq2.setdefault(s2, {})[s1] = value

    children1 = _children_of_seq(sf.p1)
    children2 = _children_of_seq(sf.p2)

    # program A: P2's plan y plus P1 potentials u; min u0 s.t. E^T u >= M y
    constraints_a: list[LinearConstraint] = []
    for con in _realization_constraints(sf.p2):
        constraints_a.append(con)
    constraints_a.extend(
        _tightness_constraints(sf.p1, n2, by_seq1, children1, payoff_sign=-1)
    )
    result_a = solve_linear_program(
        n_vars=n2 + m1,
        objective={n2 + 0: ONE},
        constraints=constraints_a,
        free_vars=range(n2, n2 + m1),
    )
    if result_a.status is not LPStatus.OPTIMAL:
        raise ArithmeticError(f"sequence-form LP (A) came back {result_a.status}")
    value_a = result_a.objective

    # program B mirrors A; its solution is A's dual vector, verified here
    # rather than re-solved: row i of A's constraints pairs with B's
    # variable i (first P2's realization rows giving w, then P1's
    # tightness rows giving the plan x).
    w = result_a.duals[:m2]
    x = result_a.duals[m2 : m2 + n1]
    point_b = list(x) + list(w)
    constraints_b: list[LinearConstraint] = []
    for con in _realization_constraints(sf.p1):
        constraints_b.append(con)
    constraints_b.extend(
        _tightness_constraints(sf.p2, n1, by_seq2, children2, payoff_sign=+1)
    )
    if w[0] != value_a or not check_feasible(point_b, constraints_b, nonneg=range(n1)):
        raise ArithmeticError(
            "dual of sequence-form LP failed the mirrored program's certificate"
        )

    y = result_a.x[:n2]
    dists = _behavior_from_plan(tree, sf.p1, x)
    dists.update(_behavior_from_plan(tree, sf.p2, y))
    profile = complete_profile(tree, BehaviorProfile(dists))

    gain1 = best_response(tree, profile, responder=1).value - value_a
    gain2 = value_a - best_response(tree, profile, responder=2).value
    return SolveResult(
        value=value_a,
        profile=profile,
        exploitability=gain1 + gain2,
        method="lp",
    )
