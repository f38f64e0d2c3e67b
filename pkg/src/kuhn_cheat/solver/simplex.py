"""Exact linear programming via two-phase primal simplex.

The tableau is kept as Python integers with one shared denominator and
updated by fraction-free (Bareiss style) pivoting, so every quantity is
exact at all times.  Entering columns follow Dantzig's rule with a
permanent switch to Bland's rule after a run of degenerate pivots,
which guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

ZERO = Fraction(0)

#: consecutive degenerate pivots tolerated before switching to Bland's rule
_STALL_LIMIT = 40
_MAX_PIVOTS = 200_000


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeffs[j] * x[j]) <sense> rhs`` with sense one of <=, >=, ==."""

    coeffs: Mapping[int, Fraction]
    sense: str
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.sense not in ("<=", ">=", "=="):
            raise ValueError(f"bad sense {self.sense!r}")


@dataclass(frozen=True)
class LPResult:
    """Solver outcome; ``duals`` holds one multiplier per constraint.

    Dual sign convention: the objective equals ``sum(duals[i] * rhs[i])``
    and reduced costs ``c[j] - sum(duals[i] * A[i][j])`` are nonnegative
    (zero for free variables); multipliers of ``<=`` rows are
    nonpositive and of ``>=`` rows nonnegative.
    """

    status: LPStatus
    objective: Fraction | None
    x: tuple[Fraction, ...] | None
    duals: tuple[Fraction, ...] | None = None


def check_feasible(
    point: Sequence[Fraction],
    constraints: Sequence[LinearConstraint],
    nonneg: Iterable[int] = (),
) -> bool:
    """Exact feasibility of ``point`` (used to certify dual solutions)."""

    for j in nonneg:
        if point[j] < 0:
            return False
    for con in constraints:
        lhs = sum((point[j] * c for j, c in con.coeffs.items()), ZERO)
        if con.sense == "==" and lhs != con.rhs:
            return False
        if con.sense == ">=" and lhs < con.rhs:
            return False
        if con.sense == "<=" and lhs > con.rhs:
            return False
    return True


def solve_linear_program(
    n_vars: int,
    objective: Mapping[int, Fraction],
    constraints: Sequence[LinearConstraint],
    free_vars: Iterable[int] = (),
) -> LPResult:
    """Minimize ``objective . x`` subject to ``constraints``.

    Variables are nonnegative unless listed in ``free_vars``.  Exact:
    all inputs are rationals and the optimum is returned as rationals.
    """

    free = set(free_vars)
    col_plus: list[int] = []
    col_minus: list[int | None] = []
    n_std = 0
    for j in range(n_vars):
        col_plus.append(n_std)
        if j in free:
            col_minus.append(n_std + 1)
            n_std += 2
        else:
            col_minus.append(None)
            n_std += 1

    def to_std(coeffs: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for var, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            out[col_plus[var]] = out.get(col_plus[var], ZERO) + c
            minus = col_minus[var]
            if minus is not None:
                out[minus] = out.get(minus, ZERO) - c
        return out

    m = len(constraints)
    n_slack = sum(1 for con in constraints if con.sense != "==")
    width_vars = n_std + n_slack

    raw_rows: list[list[int]] = []
    raw_rhs: list[int] = []
    slack_col_of: list[int | None] = []
    row_scale: list[int] = []
    row_neg: list[int] = []
    next_slack = n_std
    for con in constraints:
        coeffs = to_std(con.coeffs)
        rhs = Fraction(con.rhs)
        scale = lcm(rhs.denominator, *(f.denominator for f in coeffs.values())) if coeffs else rhs.denominator
        row = [0] * width_vars
        for col, f in coeffs.items():
            row[col] = int(f * scale)
        b = int(rhs * scale)
        slack = None
        if con.sense == "<=":
            slack = next_slack
            row[slack] = 1
            next_slack += 1
        elif con.sense == ">=":
            slack = next_slack
            row[slack] = -1
            next_slack += 1
        neg = 1
        if b < 0:
            row = [-v for v in row]
            b = -b
            neg = -1
        raw_rows.append(row)
        raw_rhs.append(b)
        slack_col_of.append(slack)
        row_scale.append(scale)
        row_neg.append(neg)

    basis: list[int] = []
    art_cols: set[int] = set()
    art_of_row: list[int | None] = []
    next_col = width_vars
    for i in range(m):
        slack = slack_col_of[i]
        if slack is not None and raw_rows[i][slack] == 1:
            basis.append(slack)
            art_of_row.append(None)
        else:
            art_cols.add(next_col)
            art_of_row.append(next_col)
            basis.append(next_col)
            next_col += 1
    width = next_col  # columns excluding rhs

    T: list[list[int]] = []
    for i in range(m):
        row = raw_rows[i] + [0] * (width - width_vars) + [raw_rhs[i]]
        art = art_of_row[i]
        if art is not None:
            row[art] = 1
        T.append(row)

    obj_std = to_std(objective)
    obj_scale = lcm(1, *(f.denominator for f in obj_std.values())) if obj_std else 1
    z_row = [0] * (width + 1)
    for col, f in obj_std.items():
        z_row[col] = int(f * obj_scale)

    w_row = [0] * (width + 1)
    for i in range(m):
        if art_of_row[i] is not None:
            row = T[i]
            for j in range(width + 1):
                w_row[j] -= row[j]
    for a in art_cols:
        w_row[a] += 1

    d = 1
    frozen: set[int] = set()
    bland = False
    stall = 0
    pivots = 0
    in_basis = set(basis)

    def pick_entering(cost: list[int]) -> int | None:
        best = None
        best_val = 0
        for j in range(width):
            if j in frozen or j in in_basis:
                continue
            cj = cost[j]
            if cj < 0:
                if bland:
                    return j
                if cj < best_val:
                    best_val = cj
                    best = j
        return best

    def pick_leaving(s: int) -> int | None:
        r = None
        for i in range(m):
            tis = T[i][s]
            if tis <= 0:
                continue
            if r is None:
                r = i
                continue
            # compare b_i / tis against b_r / t_rs exactly
            lhs = T[i][width] * T[r][s]
            rhs = T[r][width] * tis
            if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                r = i
        return r

    def do_pivot(r: int, s: int, rows_extra: list[list[int]]) -> None:
        nonlocal d, stall, bland, pivots
        piv = T[r][s]
        assert piv > 0
        if T[r][width] == 0:
            stall += 1
            if stall > _STALL_LIMIT:
                bland = True
        else:
            stall = 0
        pivot_row = T[r]
        for row in T:
            if row is pivot_row:
                continue
            _update_row(row, pivot_row, row[s], piv, d)
        for row in rows_extra:
            _update_row(row, pivot_row, row[s], piv, d)
        in_basis.discard(basis[r])
        if basis[r] in art_cols:
            frozen.add(basis[r])
        basis[r] = s
        in_basis.add(s)
        d = piv
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise ArithmeticError("simplex exceeded pivot limit")

    # phase 1: drive artificials to zero
    if art_cols:
        while True:
            s = pick_entering(w_row)
            if s is None:
                break
            r = pick_leaving(s)
            if r is None:
                # phase-1 objective is bounded below by 0; this cannot happen
                raise ArithmeticError("phase 1 unbounded")
            do_pivot(r, s, [z_row, w_row])
        if w_row[width] != 0:
            return LPResult(LPStatus.INFEASIBLE, None, None)
        frozen.update(art_cols)

    # phase 2: optimize the real objective
    stall = 0
    bland = False
    while True:
        s = pick_entering(z_row)
        if s is None:
            break
        r = pick_leaving(s)
        if r is None:
            return LPResult(LPStatus.UNBOUNDED, None, None)
        do_pivot(r, s, [z_row])

    x_std = [ZERO] * n_std
    for i in range(m):
        col = basis[i]
        if col < n_std:
            x_std[col] = Fraction(T[i][width], d)
    x = []
    for j in range(n_vars):
        value = x_std[col_plus[j]]
        minus = col_minus[j]
        if minus is not None:
            value -= x_std[minus]
        x.append(value)
    objective_value = Fraction(-z_row[width], d) / obj_scale

    # Each row keeps an initial-identity column (artificial, slack, or
    # surplus); its final reduced cost recovers the row's multiplier.
    duals = []
    for i in range(m):
        art = art_of_row[i]
        if art is not None:
            pi_hat = Fraction(-z_row[art], d)
        else:
            slack = slack_col_of[i]
            pi_hat = Fraction(-row_neg[i] * z_row[slack], d)
            if constraints[i].sense == ">=":
                pi_hat = -pi_hat
        duals.append(pi_hat * row_neg[i] * row_scale[i] / obj_scale)
    return LPResult(LPStatus.OPTIMAL, objective_value, tuple(x), tuple(duals))


def _update_row(row: list[int], pivot_row: list[int], rs: int, piv: int, d: int) -> None:
    """One fraction-free pivot update; divisions are exact by construction."""

    if rs == 0:
        if piv != d:
            row[:] = [v * piv // d for v in row]
    else:
        row[:] = [(v * piv - rs * t) // d for v, t in zip(row, pivot_row)]
