"""Exact and iterative solvers for two-player zero-sum trees."""

from .result import SolveResult
from .simplex import LPStatus, LPResult, LinearConstraint, solve_linear_program
from .seqform import SequenceFormLP, build_sequence_form, solve_lp
from .response import BestResponse, best_response, exploitability
from .cfr import solve_cfr
from .normalform import (
    NormalForm,
    NormalFormSizeError,
    enumerate_normal_form,
    minimax_value,
    solve_normal_form,
)

__all__ = [
    "SolveResult",
    "LPStatus",
    "LPResult",
    "LinearConstraint",
    "solve_linear_program",
    "SequenceFormLP",
    "build_sequence_form",
    "solve_lp",
    "BestResponse",
    "best_response",
    "exploitability",
    "solve_cfr",
    "NormalForm",
    "NormalFormSizeError",
    "enumerate_normal_form",
    "minimax_value",
    "solve_normal_form",
]
