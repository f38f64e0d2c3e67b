"""Grid sweeps of the game value over cheat or detection probabilities.

Each grid cell builds the implied variant and solves it exactly by LP,
producing a payoff surface for player 1.  Surfaces serialize to CSV or
JSON with byte-deterministic output: exact rationals plus a 12
significant digit decimal rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from enum import Enum
from fractions import Fraction

from .builder import CheatConfig, build_variant
from .solver import solve_lp

DECIMAL_DIGITS = 12

ZERO = Fraction(0)
ONE = Fraction(1)


class SweepMode(Enum):
    """Which pair of probabilities the grid varies."""

    CHEAT = "cheat"
    DETECT = "detect"


class SweepError(RuntimeError):
    """A grid cell failed to solve; the message names the cell."""


@dataclass(frozen=True)
class SweepSpec:
    """A sweep request: mode, per-axis resolution, and fixed parameters.

    In cheat mode the grid varies (p, q) and detection must be off.  In
    detect mode the grid varies (r1, r2) at fixed cheat probabilities.
    Axis values are i/(n-1) for i = 0..n-1.
    """

    mode: SweepMode
    n: int = 21
    p: Fraction = ZERO
    q: Fraction = ZERO
    r1: Fraction = ZERO
    r2: Fraction = ZERO
    fmt: str = "csv"

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"grid resolution must be at least 2, got {self.n}")
        for name in ("p", "q", "r1", "r2"):
            value = Fraction(getattr(self, name))
            object.__setattr__(self, name, value)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.mode is SweepMode.CHEAT and (self.r1 != 0 or self.r2 != 0):
            raise ValueError("cheat sweeps require r1 = r2 = 0")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown surface format {self.fmt!r}")


@dataclass(frozen=True)
class SurfaceCell:
    """One solved grid point: axis coordinates and the value to player 1."""

    axis1: Fraction
    axis2: Fraction
    value: Fraction
    method: str = "lp"

    def __post_init__(self) -> None:
        if abs(self.value) > 2:
            raise ValueError(f"cell value {self.value} outside the payoff range")

    @property
    def value_decimal(self) -> str:
        return format_decimal(self.value)


def format_decimal(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Render a rational as a decimal with ``digits`` significant digits."""

    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
    return str(quotient)


def grid_values(n: int) -> list[Fraction]:
    """The inclusive axis grid 0, 1/(n-1), ..., 1."""

    return [Fraction(i, n - 1) for i in range(n)]


def _cell_config(spec: SweepSpec, axis1: Fraction, axis2: Fraction) -> CheatConfig:
    if spec.mode is SweepMode.CHEAT:
        return CheatConfig(p=axis1, q=axis2, r1=ZERO, r2=ZERO)
    return CheatConfig(p=spec.p, q=spec.q, r1=axis1, r2=axis2)


def solve_cell(spec: SweepSpec, axis1: Fraction, axis2: Fraction) -> SurfaceCell:
    """Build and solve the variant at one grid point."""

    tree = build_variant(_cell_config(spec, axis1, axis2))
    try:
        result = solve_lp(tree)
    except Exception as exc:
        raise SweepError(
            f"solve failed at cell axis1={axis1} axis2={axis2}: {exc}"
        ) from exc
    return SurfaceCell(axis1=axis1, axis2=axis2, value=Fraction(result.value))


def run_sweep(spec: SweepSpec) -> list[SurfaceCell]:
    """Solve every grid cell, row-major by (axis1, axis2)."""

    values = grid_values(spec.n)
    return [solve_cell(spec, a1, a2) for a1 in values for a2 in values]


def emit_surface(cells: list[SurfaceCell], fmt: str = "csv") -> bytes:
    """Serialize cells (sorted by axis) to deterministic CSV or JSON bytes."""

    if not cells:
        raise ValueError("cannot emit an empty surface")
    ordered = sorted(cells, key=lambda c: (c.axis1, c.axis2))
    if fmt == "csv":
        lines = ["axis1,axis2,value_exact,value_decimal"]
        lines.extend(
            f"{c.axis1},{c.axis2},{c.value},{c.value_decimal}" for c in ordered
        )
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        payload = [
            {
                "axis1": str(c.axis1),
                "axis2": str(c.axis2),
                "value_exact": str(c.value),
                "value_decimal": c.value_decimal,
                "method": c.method,
            }
            for c in ordered
        ]
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")
    raise ValueError(f"unknown surface format {fmt!r}")


def parse_surface(data: bytes, fmt: str = "csv") -> list[SurfaceCell]:
    """Inverse of :func:`emit_surface` (CSV assumes the LP method)."""

    text = data.decode("utf-8")
    if fmt == "csv":
        lines = [line for line in text.splitlines() if line]
        if not lines or lines[0] != "axis1,axis2,value_exact,value_decimal":
            raise ValueError("malformed surface CSV header")
        cells = []
        for line in lines[1:]:
            fields = line.split(",")
            if len(fields) != 4:
                raise ValueError(f"malformed surface CSV row: {line!r}")
            cells.append(
                SurfaceCell(
                    axis1=Fraction(fields[0]),
                    axis2=Fraction(fields[1]),
                    value=Fraction(fields[2]),
                )
            )
        return cells
    if fmt == "json":
        return [
            SurfaceCell(
                axis1=Fraction(obj["axis1"]),
                axis2=Fraction(obj["axis2"]),
                value=Fraction(obj["value_exact"]),
                method=obj.get("method", "lp"),
            )
            for obj in json.loads(text)
        ]
    raise ValueError(f"unknown surface format {fmt!r}")


@dataclass(frozen=True)
class PatchDeviation:
    """Midpoint test of one grid square against its bilinear interpolant."""

    axis1: Fraction
    axis2: Fraction
    interpolated: Fraction
    solved: Fraction

    @property
    def deviation(self) -> Fraction:
        return abs(self.solved - self.interpolated)


def bilinear_patch_report(
    spec: SweepSpec, cells: list[SurfaceCell] | None = None
) -> list[PatchDeviation]:
    """Measure how far each grid square departs from a bilinear patch.

    For every square of the swept grid, the bilinear interpolant of its
    four corners is evaluated at the square's midpoint and compared with
    a fresh exact solve there.  A deviation of zero everywhere means the
    surface is piecewise bilinear at this resolution; no threshold is
    imposed, the deviations are simply reported.
    """

    if cells is None:
        cells = run_sweep(spec)
    lookup = {(c.axis1, c.axis2): c.value for c in cells}
    xs = grid_values(spec.n)
    report = []
    for i in range(spec.n - 1):
        for j in range(spec.n - 1):
            corners = (
                lookup[(xs[i], xs[j])],
                lookup[(xs[i], xs[j + 1])],
                lookup[(xs[i + 1], xs[j])],
                lookup[(xs[i + 1], xs[j + 1])],
            )
            mid1 = (xs[i] + xs[i + 1]) / 2
            mid2 = (xs[j] + xs[j + 1]) / 2
            interpolated = sum(corners, ZERO) / 4
            solved = solve_cell(spec, mid1, mid2).value
            report.append(
                PatchDeviation(
                    axis1=mid1,
                    axis2=mid2,
                    interpolated=interpolated,
                    solved=solved,
                )
            )
    return report
