"""Counterfactual regret minimization on flattened trees.

Vanilla CFR with regret matching and reach-weighted strategy averaging.
The per-iteration work runs over flat numpy arrays (node order is the
builders' depth-first order, so parents always precede children); the
kernel is jitted with numba when available and falls back to pure
Python otherwise.  The average profile's exploitability shrinks like
one over the square root of the iteration count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..gametree import (
    BehaviorProfile,
    ChanceNode,
    DecisionNode,
    GameTree,
    TerminalNode,
    expected_value,
)
from .response import exploitability as _exact_exploitability
from .result import SolveResult

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(**_kwargs):
        def wrap(fn):
            return fn

        return wrap


_KIND_CHANCE, _KIND_DECISION, _KIND_TERMINAL = 0, 1, 2


@dataclass(frozen=True)
class _FlatTree:
    kind: np.ndarray  # int8 per node
    player: np.ndarray  # int8 per node, 0 for chance/terminal
    infoset: np.ndarray  # int32 per node, -1 for chance/terminal
    payoff: np.ndarray  # float64 per node, 0 for non-terminals
    child_off: np.ndarray  # int32, len n+1, offsets into child/edge arrays
    child: np.ndarray  # int32 flat child ids
    edge_prob: np.ndarray  # float64 per edge, chance probabilities
    iset_player: np.ndarray  # int8 per infoset
    slot_off: np.ndarray  # int32, len K+1, regret-array offsets per infoset


def _flatten(tree: GameTree) -> _FlatTree:
    n = len(tree.nodes)
    kind = np.zeros(n, dtype=np.int8)
    player = np.zeros(n, dtype=np.int8)
    infoset = np.full(n, -1, dtype=np.int32)
    payoff = np.zeros(n, dtype=np.float64)
    child_off = np.zeros(n + 1, dtype=np.int32)
    children: list[int] = []
    probs: list[float] = []
    for node in tree.nodes:
        child_off[node.id] = len(children)
        if isinstance(node, ChanceNode):
            kind[node.id] = _KIND_CHANCE
            for b in node.branches:
                children.append(b.child)
                probs.append(float(b.prob))
        elif isinstance(node, DecisionNode):
            kind[node.id] = _KIND_DECISION
            player[node.id] = node.player
            infoset[node.id] = node.infoset
            for c in node.children:
                children.append(c)
                probs.append(0.0)
        else:
            kind[node.id] = _KIND_TERMINAL
            payoff[node.id] = float(node.payoff)
    child_off[n] = len(children)

    k = len(tree.infosets)
    iset_player = np.zeros(k, dtype=np.int8)
    slot_off = np.zeros(k + 1, dtype=np.int32)
    total = 0
    for iset in tree.infosets:
        iset_player[iset.id] = iset.player
        slot_off[iset.id] = total
        total += len(iset.actions)
    slot_off[k] = total
    return _FlatTree(
        kind,
        player,
        infoset,
        payoff,
        child_off,
        np.asarray(children, dtype=np.int32),
        np.asarray(probs, dtype=np.float64),
        iset_player,
        slot_off,
    )


@njit(cache=True)
def _cfr_iterations(
    iterations,
    kind,
    player,
    infoset,
    payoff,
    child_off,
    child,
    edge_prob,
    iset_player,
    slot_off,
    regret,
    strat_sum,
):  # pragma: no cover - jit kernel, covered via solve_cfr
    n = kind.shape[0]
    k = iset_player.shape[0]
    n_slots = regret.shape[0]
    sigma = np.zeros(n_slots, dtype=np.float64)
    reach1 = np.zeros(n, dtype=np.float64)
    reach2 = np.zeros(n, dtype=np.float64)
    reachc = np.zeros(n, dtype=np.float64)
    val = np.zeros(n, dtype=np.float64)

    for _ in range(iterations):
        # current strategy by regret matching
        for i in range(k):
            lo, hi = slot_off[i], slot_off[i + 1]
            total = 0.0
            for s in range(lo, hi):
                if regret[s] > 0.0:
                    total += regret[s]
            if total > 0.0:
                for s in range(lo, hi):
                    sigma[s] = regret[s] / total if regret[s] > 0.0 else 0.0
            else:
                u = 1.0 / (hi - lo)
                for s in range(lo, hi):
                    sigma[s] = u

        # forward reaches (parents precede children in id order)
        reach1[0] = 1.0
        reach2[0] = 1.0
        reachc[0] = 1.0
        for v in range(n):
            kd = kind[v]
            if kd == 2:
                continue
            lo, hi = child_off[v], child_off[v + 1]
            if kd == 0:
                for e in range(lo, hi):
                    c = child[e]
                    reach1[c] = reach1[v]
                    reach2[c] = reach2[v]
                    reachc[c] = reachc[v] * edge_prob[e]
            else:
                base = slot_off[infoset[v]]
                pl = player[v]
                for e in range(lo, hi):
                    c = child[e]
                    p = sigma[base + (e - lo)]
                    if pl == 1:
                        reach1[c] = reach1[v] * p
                        reach2[c] = reach2[v]
                    else:
                        reach1[c] = reach1[v]
                        reach2[c] = reach2[v] * p
                    reachc[c] = reachc[v]

        # backward values (to player 1)
        for v in range(n - 1, -1, -1):
            kd = kind[v]
            if kd == 2:
                val[v] = payoff[v]
                continue
            lo, hi = child_off[v], child_off[v + 1]
            acc = 0.0
            if kd == 0:
                for e in range(lo, hi):
                    acc += edge_prob[e] * val[child[e]]
            else:
                base = slot_off[infoset[v]]
                for e in range(lo, hi):
                    acc += sigma[base + (e - lo)] * val[child[e]]
            val[v] = acc

        # regret and average-strategy accumulation
        for v in range(n):
            if kind[v] != 1:
                continue
            iset = infoset[v]
            base = slot_off[iset]
            lo, hi = child_off[v], child_off[v + 1]
            pl = player[v]
            if pl == 1:
                cf = reachc[v] * reach2[v]
                my = reach1[v]
                sign = 1.0
            else:
                cf = reachc[v] * reach1[v]
                my = reach2[v]
                sign = -1.0
            for e in range(lo, hi):
                s = base + (e - lo)
                regret[s] += sign * cf * (val[child[e]] - val[v])
                strat_sum[s] += my * sigma[s]


def _average_profile(tree: GameTree, strat_sum: np.ndarray, slot_off: np.ndarray) -> BehaviorProfile:
    dists = {}
    for iset in tree.infosets:
        lo = int(slot_off[iset.id])
        weights = [Fraction(float(strat_sum[lo + i])) for i in range(len(iset.actions))]
        total = sum(weights)
        if total == 0:
            uniform = Fraction(1, len(iset.actions))
            dists[iset.id] = {a: uniform for a in iset.actions}
        else:
            dists[iset.id] = {
                a: weights[i] / total for i, a in enumerate(iset.actions)
            }
    return BehaviorProfile(dists)


def solve_cfr(tree: GameTree, iterations: int = 100_000) -> SolveResult:
    """Approximate equilibrium by vanilla CFR self-play.

    Deterministic for a given tree and iteration count.  The returned
    value and exploitability are floating-point measurements of the
    exact-rational average profile (the profile itself is exact and can
    be fed to every exact operation).
    """

    if iterations < 1:
        raise ValueError("iterations must be positive")
    flat = _flatten(tree)
    n_slots = int(flat.slot_off[-1])
    regret = np.zeros(n_slots, dtype=np.float64)
    strat_sum = np.zeros(n_slots, dtype=np.float64)
    _cfr_iterations(
        iterations,
        flat.kind,
        flat.player,
        flat.infoset,
        flat.payoff,
        flat.child_off,
        flat.child,
        flat.edge_prob,
        flat.iset_player,
        flat.slot_off,
        regret,
        strat_sum,
    )
    profile = _average_profile(tree, strat_sum, flat.slot_off)
    value = float(expected_value(tree, profile))
    gap = float(_exact_exploitability(tree, profile))
    return SolveResult(value=value, profile=profile, exploitability=gap, method="cfr")
