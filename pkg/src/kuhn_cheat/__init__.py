"""Kuhn poker with cheating: exact trees, equilibria, and sweeps.

The package builds extensive-form trees for classic Kuhn poker and for
variants where either player may peek at the down card (and may in turn
be caught peeking), solves them exactly by sequence-form LP, and
reproduces the analytic fair-play strategy family and its value tables.
"""

from .analytic import (
    CLASSIC_VALUE,
    FAIR_PARAM_MAX,
    NaiveExploitation,
    fair_breakdown_formula,
    fair_profile,
    fair_strategy_keys,
    naive_exploitation,
)
from .builder import (
    CheatConfig,
    build_classic,
    build_cheating,
    build_detection,
    build_variant,
)
from .efg import EFGParseError, export_efg, parse_efg
from .gametree import (
    Action,
    BehaviorProfile,
    Card,
    ChanceNode,
    CoverageError,
    DealBreakdown,
    DecisionNode,
    Deal,
    GameTree,
    InfoSet,
    TerminalNode,
    TreeStats,
    UnsupportedVariantError,
    View,
    all_deals,
    complete_profile,
    expected_value,
    per_deal_breakdown,
    tree_stats,
    validate_tree,
)
from .solver import (
    BestResponse,
    SolveResult,
    best_response,
    exploitability,
    solve_cfr,
    solve_lp,
    solve_normal_form,
)
from .sweep import (
    SurfaceCell,
    SweepMode,
    SweepSpec,
    emit_surface,
    parse_surface,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BehaviorProfile",
    "BestResponse",
    "CLASSIC_VALUE",
    "Card",
    "ChanceNode",
    "CheatConfig",
    "CoverageError",
    "Deal",
    "DealBreakdown",
    "DecisionNode",
    "EFGParseError",
    "FAIR_PARAM_MAX",
    "GameTree",
    "InfoSet",
    "NaiveExploitation",
    "SolveResult",
    "SurfaceCell",
    "SweepMode",
    "SweepSpec",
    "TerminalNode",
    "TreeStats",
    "UnsupportedVariantError",
    "View",
    "all_deals",
    "best_response",
    "build_classic",
    "build_cheating",
    "build_detection",
    "build_variant",
    "complete_profile",
    "emit_surface",
    "expected_value",
    "exploitability",
    "export_efg",
    "fair_breakdown_formula",
    "fair_profile",
    "fair_strategy_keys",
    "naive_exploitation",
    "parse_efg",
    "parse_surface",
    "per_deal_breakdown",
    "run_sweep",
    "solve_cfr",
    "solve_lp",
    "solve_normal_form",
    "tree_stats",
    "validate_tree",
    "__version__",
]
