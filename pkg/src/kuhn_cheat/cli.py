"""Command-line front end: solve, eval, naive, sweep, export-efg, stats.

Every command is deterministic: identical flags produce byte-identical
stdout and files.  Probabilities are parsed to exact rationals, either
as fraction strings ("1/3") or decimal literals ("0.25"), so the exact
arithmetic pipeline is never broken by binary floats.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analytic import FAIR_PARAM_MAX, fair_profile, naive_exploitation
from .builder import CheatConfig, build_variant, history_label
from .efg import export_efg, parse_efg
from .gametree import (
    BehaviorProfile,
    DealBreakdown,
    GameTree,
    expected_value,
    per_deal_breakdown,
    tree_stats,
)
from .solver import exploitability, solve_cfr, solve_lp, solve_normal_form
from .sweep import SweepMode, SweepSpec, emit_surface, format_decimal, run_sweep

PROG = "kuhn-cheat"


def _fraction_arg(low: Fraction, high: Fraction, what: str):
    def parse(text: str) -> Fraction:
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(f"{what}: not a rational: {text!r}") from exc
        if not low <= value <= high:
            raise argparse.ArgumentTypeError(
                f"{what}: {value} outside [{low}, {high}]"
            )
        return value

    return parse


_prob = _fraction_arg(Fraction(0), Fraction(1), "probability")
_fair_a = _fraction_arg(Fraction(0), FAIR_PARAM_MAX, "fair parameter a")


def _min_int(minimum: int, what: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"{what}: not an integer: {text!r}") from exc
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{what}: must be at least {minimum}")
        return value

    return parse


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=_prob, default=Fraction(0), help="player 1 cheat probability")
    sub.add_argument("--q", type=_prob, default=Fraction(0), help="player 2 cheat probability")
    sub.add_argument("--r1", type=_prob, default=Fraction(0), help="player 1 detection probability")
    sub.add_argument("--r2", type=_prob, default=Fraction(0), help="player 2 detection probability")


def _config_from(args: argparse.Namespace) -> CheatConfig:
    return CheatConfig(p=args.p, q=args.q, r1=args.r1, r2=args.r2)


def _infoset_name(key) -> str:
    try:
        player, view, history = key
        return f"P{player} {view}:{history_label(tuple(history))}"
    except (TypeError, ValueError, KeyError):
        return repr(key)


def _strategy_rows(tree: GameTree, profile: BehaviorProfile, players=(1, 2)) -> list[dict]:
    rows = []
    for iset in tree.infosets:
        if iset.player not in players or iset.id not in profile.distributions:
            continue
        rows.append(
            {
                "player": iset.player,
                "infoset": _infoset_name(iset.key),
                "actions": {
                    str(a): str(profile.prob(iset.id, a)) for a in iset.actions
                },
            }
        )
    rows.sort(key=lambda r: (r["player"], r["infoset"]))
    return rows


def _breakdown_rows(breakdown: DealBreakdown) -> list[dict]:
    return [
        {
            "deal": str(row.deal),
            "p1_gross": str(row.p1_gross),
            "p2_gross": str(row.p2_gross),
            "net": str(row.net),
        }
        for row in breakdown.rows
    ]


def _print_pairs(pairs: list[tuple[str, object]]) -> None:
    for key, value in pairs:
        print(f"{key}={value}")


def _write_report(args: argparse.Namespace, report: dict) -> None:
    if getattr(args, "out", None):
        data = (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")
        Path(args.out).write_bytes(data)


def _bool_str(flag: bool) -> str:
    return "true" if flag else "false"


def cmd_solve(args: argparse.Namespace) -> int:
    config = _config_from(args)
    tree = build_variant(config)
    if args.algo == "lp":
        result = solve_lp(tree)
    elif args.algo == "cfr":
        result = solve_cfr(tree, iterations=args.iterations)
    else:
        result = solve_normal_form(tree)
    value = expected_value(tree, result.profile)
    gap = exploitability(tree, result.profile)
    breakdown = per_deal_breakdown(tree, result.profile)

    report = {
        "variant": tree.variant,
        "config": {"p": str(config.p), "q": str(config.q), "r1": str(config.r1), "r2": str(config.r2)},
        "method": result.method,
        "value_exact": str(value),
        "value_decimal": format_decimal(value),
        "exploitability": str(gap),
        "exploitability_decimal": format_decimal(gap),
        "breakdown": _breakdown_rows(breakdown),
        "strategy": _strategy_rows(tree, result.profile),
    }
    _print_pairs(
        [
            ("variant", tree.variant),
            ("p", config.p),
            ("q", config.q),
            ("r1", config.r1),
            ("r2", config.r2),
            ("method", result.method),
            ("value_exact", value),
            ("value_decimal", format_decimal(value)),
            ("exploitability_exact", gap),
            ("exploitability_decimal", format_decimal(gap)),
        ]
    )
    _write_report(args, report)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    tree = build_variant(CheatConfig.classic())
    profile = fair_profile(args.a, tree)
    value = expected_value(tree, profile)
    gap = exploitability(tree, profile)
    breakdown = per_deal_breakdown(tree, profile)

    report = {
        "variant": tree.variant,
        "config": {"p": "0", "q": "0", "r1": "0", "r2": "0", "a": str(args.a)},
        "method": "analytic-fair",
        "value_exact": str(value),
        "value_decimal": format_decimal(value),
        "exploitability": str(gap),
        "exploitability_decimal": format_decimal(gap),
        "breakdown": _breakdown_rows(breakdown),
        "strategy": _strategy_rows(tree, profile),
    }
    _print_pairs(
        [
            ("variant", tree.variant),
            ("a", args.a),
            ("method", "analytic-fair"),
            ("value_exact", value),
            ("value_decimal", format_decimal(value)),
            ("exploitability_exact", gap),
            ("exploitability_decimal", format_decimal(gap)),
        ]
    )
    _write_report(args, report)
    return 0


def cmd_naive(args: argparse.Namespace) -> int:
    result = naive_exploitation(args.cheater, args.a)
    p = "1" if args.cheater == 1 else "0"
    q = "1" if args.cheater == 2 else "0"

    report = {
        "variant": "cheating",
        "config": {"p": p, "q": q, "r1": "0", "r2": "0", "a": str(result.a), "cheater": args.cheater},
        "method": "naive",
        "value_exact": str(result.value),
        "value_decimal": format_decimal(result.value),
        "exploitability": str(result.exploitability),
        "exploitability_decimal": format_decimal(result.exploitability),
        "breakdown": _breakdown_rows(result.breakdown),
        "strategy": _strategy_rows(
            build_variant(CheatConfig(p=Fraction(p), q=Fraction(q))),
            result.cheater_strategy,
            players=(args.cheater,),
        ),
    }
    if not result.matches_published:
        report["paper_discrepancy"] = {
            "published_value": str(result.published_value),
            "computed_value": str(result.value),
            "rows": [
                {
                    "deal": "net" if d.deal is None else str(d.deal),
                    "side": d.side,
                    "computed": str(d.computed),
                    "published": str(d.published),
                }
                for d in result.discrepancies
            ],
        }
    _print_pairs(
        [
            ("variant", "cheating"),
            ("cheater", args.cheater),
            ("a", result.a),
            ("p", p),
            ("q", q),
            ("method", "naive"),
            ("value_exact", result.value),
            ("value_decimal", format_decimal(result.value)),
            ("exploitability_exact", result.exploitability),
            ("exploitability_decimal", format_decimal(result.exploitability)),
            ("published_value_exact", result.published_value),
            ("published_value_decimal", format_decimal(result.published_value)),
            ("matches_published", _bool_str(result.matches_published)),
            ("discrepancies", len(result.discrepancies)),
        ]
    )
    _write_report(args, report)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        spec = SweepSpec(
            mode=SweepMode(args.mode),
            n=args.n,
            p=args.p,
            q=args.q,
            r1=args.r1,
            r2=args.r2,
            fmt=args.format,
        )
    except ValueError as exc:
        args.parser.error(str(exc))
    cells = run_sweep(spec)
    data = emit_surface(cells, spec.fmt)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    tree = build_variant(_config_from(args))
    data = export_efg(tree, title=args.title)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    if args.from_file:
        tree = parse_efg(Path(args.from_file).read_bytes())
    else:
        tree = build_variant(_config_from(args))
    stats = tree_stats(tree)
    _print_pairs(
        [
            ("variant", tree.variant),
            ("total_nodes", stats.total_nodes),
            ("chance_nodes", stats.chance_nodes),
            ("decision_nodes", stats.decision_nodes),
            ("terminal_nodes", stats.terminal_nodes),
            ("infosets", sum(stats.infosets_per_player.values())),
            ("infosets_p1", stats.infosets_per_player.get(1, 0)),
            ("infosets_p2", stats.infosets_per_player.get(2, 0)),
        ]
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Kuhn poker with cheating: exact equilibria and sweeps.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("solve", help="solve a variant for its exact equilibrium")
    _add_config_flags(sp)
    sp.add_argument("--algo", choices=("lp", "cfr", "enum"), default="lp")
    sp.add_argument(
        "--iterations",
        type=_min_int(1, "iterations"),
        default=100_000,
        help="CFR iterations (cfr only)",
    )
    sp.add_argument("--out", help="write a JSON report here")
    sp.set_defaults(func=cmd_solve, parser=sp)

    sp = subs.add_parser("eval", help="evaluate the fair strategy pair on classic Kuhn")
    sp.add_argument("--a", type=_fair_a, default=Fraction(0), help="fair parameter in [0, 1/3]")
    sp.add_argument("--out", help="write a JSON report here")
    sp.set_defaults(func=cmd_eval, parser=sp)

    sp = subs.add_parser("naive", help="value of always cheating against fair play")
    sp.add_argument("--cheater", type=int, choices=(1, 2), required=True)
    sp.add_argument("--a", type=_fair_a, default=Fraction(0), help="fair parameter in [0, 1/3]")
    sp.add_argument("--out", help="write a JSON report here")
    sp.set_defaults(func=cmd_naive, parser=sp)

    sp = subs.add_parser("sweep", help="grid sweep of the game value")
    sp.add_argument("--mode", choices=("cheat", "detect"), default="cheat")
    sp.add_argument("--n", type=_min_int(2, "grid resolution"), default=21)
    _add_config_flags(sp)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", help="write the surface here instead of stdout")
    sp.set_defaults(func=cmd_sweep, parser=sp)

    sp = subs.add_parser("export-efg", help="export a variant tree in EFG format")
    _add_config_flags(sp)
    sp.add_argument("--title", default=None, help="EFG title string")
    sp.add_argument("--out", help="write the EFG file here instead of stdout")
    sp.set_defaults(func=cmd_export, parser=sp)

    sp = subs.add_parser("stats", help="node and infoset counts for a variant")
    _add_config_flags(sp)
    sp.add_argument("--from", dest="from_file", default=None, help="read an .efg file instead")
    sp.set_defaults(func=cmd_stats, parser=sp)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, RuntimeError, OSError, KeyError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
