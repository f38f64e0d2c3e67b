"""Common result type shared by the solvers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..gametree import BehaviorProfile


@dataclass(frozen=True)
class SolveResult:
    """Outcome of solving one game.

    ``value`` is the expected payoff to player 1 under ``profile``.
    Exact methods ("lp", "normal-form") report exact rationals and a
    certified exploitability of zero; "cfr" reports floating-point
    estimates.
    """

    value: Fraction | float
    profile: BehaviorProfile
    exploitability: Fraction | float
    method: str
