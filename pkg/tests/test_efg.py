"""Unit tests for EFG serialization and the round-trip parser."""

from __future__ import annotations

from fractions import Fraction

import pytest

from kuhn_cheat.builder import CheatConfig, build_classic, build_variant
from kuhn_cheat.efg import EFGParseError, export_efg, parse_efg
from kuhn_cheat.gametree import tree_stats, validate_tree
from kuhn_cheat.solver import solve_lp

CONFIGS = [
    CheatConfig(),
    CheatConfig(p=Fraction(1)),
    CheatConfig(p=Fraction(1, 3), q=Fraction(2, 3)),
    CheatConfig(p=Fraction(1, 2), q=Fraction(1, 2), r1=Fraction(1, 4), r2=Fraction(3, 4)),
]


class TestExport:
    def test_header(self):
        data = export_efg(build_classic())
        first = data.split(b"\n", 1)[0]
        assert first.startswith(b'EFG 2 R')
        assert b'"Player 1" "Player 2"' in first

    def test_custom_title_is_quoted(self):
        data = export_efg(build_classic(), title='my "quoted" game')
        assert b'\\"quoted\\"' in data.split(b"\n", 1)[0]

    def test_deterministic_bytes(self):
        tree = build_variant(CONFIGS[3])
        assert export_efg(tree) == export_efg(tree)

    def test_one_line_per_node(self):
        tree = build_classic()
        # Header line, comment line, then exactly one line per node.
        body = export_efg(tree).decode().strip().split("\n")[2:]
        assert len(body) == tree_stats(tree).total_nodes


class TestRoundTrip:
    @pytest.mark.parametrize("config", CONFIGS, ids=lambda c: f"p={c.p},q={c.q},r1={c.r1},r2={c.r2}")
    def test_stats_survive(self, config):
        tree = build_variant(config)
        parsed = parse_efg(export_efg(tree))
        assert tree_stats(parsed) == tree_stats(tree)
        assert validate_tree(parsed) == []

    def test_payoffs_and_probabilities_survive(self):
        tree = build_variant(CheatConfig(p=Fraction(1, 3), q=Fraction(2, 3)))
        parsed = parse_efg(export_efg(tree))
        assert [t.payoff for t in parsed.terminals()] == [t.payoff for t in tree.terminals()]
        assert solve_lp(parsed).value == solve_lp(tree).value

    def test_double_round_trip_is_stable(self):
        # A second parse/export generation must preserve the structure
        # and payoffs of the first (names and title become synthetic).
        tree = build_classic()
        first = parse_efg(export_efg(tree))
        second = parse_efg(export_efg(first))
        assert first.variant == "efg:classic"
        assert tree_stats(second) == tree_stats(first)
        assert [t.payoff for t in second.terminals()] == [
            t.payoff for t in first.terminals()
        ]


class TestParseErrors:
    def test_bad_magic(self):
        with pytest.raises(EFGParseError):
            parse_efg(b'NFG 1 R "nope" { "a" "b" }\n')

    def test_truncated_body(self):
        data = export_efg(build_classic())
        truncated = b"\n".join(data.split(b"\n")[:5])
        with pytest.raises(EFGParseError):
            parse_efg(truncated)

    def test_garbage_token(self):
        data = export_efg(build_classic()).replace(b"t ", b"z ", 1)
        with pytest.raises(EFGParseError):
            parse_efg(data)
