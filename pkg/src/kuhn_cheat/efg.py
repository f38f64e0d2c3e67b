"""Serialization to and from the Gambit extensive-form (.efg) text format.

The writer emits nodes in depth-first order with exact rational
probabilities and payoffs, so output is byte-for-byte deterministic.
The reader accepts the same dialect (two-player, zero-sum payoffs) and
reconstructs a :class:`~kuhn_cheat.gametree.GameTree`; deal tags are
recovered from the outcome names the writer produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .gametree import (
    Action,
    Card,
    ChanceBranch,
    ChanceNode,
    Deal,
    DecisionNode,
    GameTree,
    InfoSet,
    Node,
    TerminalNode,
)


class EFGParseError(ValueError):
    """Malformed .efg input; message carries the line number."""


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _num(x: Fraction) -> str:
    return str(x)


def export_efg(tree: GameTree, title: str | None = None) -> bytes:
    """Render ``tree`` as Gambit .efg text (UTF-8 bytes)."""

    title = title if title is not None else tree.variant
    lines = [
        f"EFG 2 R {_quote(title)} {{ {_quote('Player 1')} {_quote('Player 2')} }}",
        _quote(""),
    ]
    # per-player infoset numbers, dense and 1-based in first-use order
    iset_number: dict[int, int] = {}
    counters = {1: 0, 2: 0}
    for iset in tree.infosets:
        counters[iset.player] += 1
        iset_number[iset.id] = counters[iset.player]
    chance_counter = 0
    outcome_counter = 0

    def emit(nid: int) -> None:
        nonlocal chance_counter, outcome_counter
        node = tree.nodes[nid]
        if isinstance(node, ChanceNode):
            chance_counter += 1
            entries = " ".join(
                f"{_quote(b.label)} {_num(b.prob)}" for b in node.branches
            )
            lines.append(f'c "" {chance_counter} "" {{ {entries} }} 0')
            for b in node.branches:
                emit(b.child)
        elif isinstance(node, DecisionNode):
            iset = tree.infosets[node.infoset]
            try:
                view, history = iset.key[1], iset.key[2]
                name = f"{view}:{''.join(str(a)[0].lower() for a in history)}"
            except (IndexError, TypeError):
                name = ""
            entries = " ".join(_quote(str(a)) for a in node.actions)
            lines.append(
                f'p "" {node.player} {iset_number[node.infoset]} {_quote(name)}'
                f" {{ {entries} }} 0"
            )
            for child in node.children:
                emit(child)
        else:
            outcome_counter += 1
            lines.append(
                f't "" {outcome_counter} {_quote(node.label)}'
                f" {{ {_num(node.payoff)}, {_num(-node.payoff)} }}"
            )

    emit(tree.root)
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _Token:
    text: str
    line: int
    is_string: bool


def _tokenize(data: str) -> Iterator[_Token]:
    line = 1
    i = 0
    n = len(data)
    while i < n:
        ch = data[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch.isspace():
            i += 1
        elif ch == '"':
            j = i + 1
            out = []
            while j < n and data[j] != '"':
                if data[j] == "\\" and j + 1 < n:
                    out.append(data[j + 1])
                    j += 2
                else:
                    out.append(data[j])
                    j += 1
            if j >= n:
                raise EFGParseError(f"line {line}: unterminated string")
            yield _Token("".join(out), line, True)
            i = j + 1
        elif ch in "{},":
            yield _Token(ch, line, False)
            i += 1
        else:
            j = i
            while j < n and not data[j].isspace() and data[j] not in '{},"':
                j += 1
            yield _Token(data[i:j], line, False)
            i = j


class _TokenStream:
    def __init__(self, data: str) -> None:
        self._tokens = list(_tokenize(data))
        self._pos = 0

    def peek(self) -> _Token | None:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def next(self, what: str = "token") -> _Token:
        tok = self.peek()
        if tok is None:
            last = self._tokens[-1].line if self._tokens else 1
            raise EFGParseError(f"line {last}: unexpected end of input, wanted {what}")
        self._pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next(repr(text))
        if tok.is_string or tok.text != text:
            raise EFGParseError(f"line {tok.line}: expected {text!r}, got {tok.text!r}")
        return tok

    def string(self) -> str:
        tok = self.next("string")
        if not tok.is_string:
            raise EFGParseError(f"line {tok.line}: expected quoted string, got {tok.text!r}")
        return tok.text

    def number(self) -> Fraction:
        tok = self.next("number")
        if tok.is_string:
            raise EFGParseError(f"line {tok.line}: expected number, got string")
        try:
            return Fraction(tok.text)
        except (ValueError, ZeroDivisionError):
            raise EFGParseError(f"line {tok.line}: bad number {tok.text!r}") from None

    def integer(self) -> int:
        tok = self.next("integer")
        try:
            return int(tok.text)
        except ValueError:
            raise EFGParseError(f"line {tok.line}: bad integer {tok.text!r}") from None


_ACTION_BY_NAME = {str(a): a for a in Action}

_CARD_BY_NAME = {c.name: c for c in Card}


def _deal_from_label(label: str) -> Deal | None:
    head = label.split(":", 1)[0]
    if len(head) == 2 and head[0] in _CARD_BY_NAME and head[1] in _CARD_BY_NAME:
        c1, c2 = _CARD_BY_NAME[head[0]], _CARD_BY_NAME[head[1]]
        if c1 != c2:
            return Deal(c1, c2)
    return None


def parse_efg(data: bytes) -> GameTree:
    """Parse writer-compatible .efg text back into a game tree.

    Restricted to two-player games whose terminal payoffs are zero sum.
    Infoset keys on the result are synthetic ``("efg", player, number)``
    tuples; deal tags are recovered from outcome names when present.
    """

    stream = _TokenStream(data.decode("utf-8"))
    stream.expect("EFG")
    version = stream.integer()
    if version != 2:
        raise EFGParseError(f"unsupported EFG version {version}")
    stream.expect("R")
    title = stream.string()
    stream.expect("{")
    players = []
    while True:
        tok = stream.peek()
        if tok is None:
            raise EFGParseError("unexpected end of input in player list")
        if not tok.is_string:
            break
        players.append(stream.string())
    stream.expect("}")
    if len(players) != 2:
        raise EFGParseError(f"need exactly 2 players, got {len(players)}")
    tok = stream.peek()
    if tok is not None and tok.is_string:
        stream.next()  # optional comment

    nodes: list[Node | None] = []
    iset_registry: dict[tuple[int, int], dict] = {}

    def parse_node() -> int:
        tok = stream.next("node tag")
        node_id = len(nodes)
        nodes.append(None)
        if tok.text == "c" and not tok.is_string:
            stream.string()  # node name
            stream.integer()  # chance infoset number (unique per node here)
            stream.string()  # infoset name
            stream.expect("{")
            entries: list[tuple[str, Fraction]] = []
            while True:
                nxt = stream.peek()
                if nxt is not None and not nxt.is_string and nxt.text == "}":
                    break
                label = stream.string()
                prob = stream.number()
                entries.append((label, prob))
            stream.expect("}")
            stream.integer()  # outcome number, 0 for our writer
            children = [parse_node() for _ in entries]
            nodes[node_id] = ChanceNode(
                node_id,
                tuple(
                    ChanceBranch(label, prob, child)
                    for (label, prob), child in zip(entries, children)
                ),
            )
            return node_id
        if tok.text == "p" and not tok.is_string:
            stream.string()  # node name
            player = stream.integer()
            if player not in (1, 2):
                raise EFGParseError(f"line {tok.line}: bad player {player}")
            iset_no = stream.integer()
            stream.string()  # infoset name
            stream.expect("{")
            action_names = []
            while True:
                nxt = stream.peek()
                if nxt is not None and not nxt.is_string and nxt.text == "}":
                    break
                action_names.append(stream.string())
            stream.expect("}")
            stream.integer()  # outcome number
            actions = []
            for name in action_names:
                if name not in _ACTION_BY_NAME:
                    raise EFGParseError(f"line {tok.line}: unknown action {name!r}")
                actions.append(_ACTION_BY_NAME[name])
            entry = iset_registry.setdefault(
                (player, iset_no),
                {"player": player, "actions": tuple(actions), "members": []},
            )
            if entry["actions"] != tuple(actions):
                raise EFGParseError(
                    f"line {tok.line}: infoset {iset_no} action list mismatch"
                )
            entry["members"].append(node_id)
            children = [parse_node() for _ in actions]
            nodes[node_id] = DecisionNode(
                node_id, player, (player, iset_no), tuple(actions), tuple(children)
            )
            return node_id
        if tok.text == "t" and not tok.is_string:
            stream.string()  # node name
            stream.integer()  # outcome number
            label = stream.string()
            stream.expect("{")
            pay1 = stream.number()
            nxt = stream.peek()
            if nxt is not None and not nxt.is_string and nxt.text == ",":
                stream.next()
            pay2 = stream.number()
            stream.expect("}")
            if pay1 + pay2 != 0:
                raise EFGParseError(
                    f"line {tok.line}: payoffs {pay1}, {pay2} are not zero sum"
                )
            nodes[node_id] = TerminalNode(
                node_id, payoff=pay1, deal=_deal_from_label(label), label=label
            )
            return node_id
        raise EFGParseError(f"line {tok.line}: expected node tag c/p/t, got {tok.text!r}")

    parse_node()
    if stream.peek() is not None:
        tok = stream.peek()
        raise EFGParseError(f"line {tok.line}: trailing content {tok.text!r}")

    # renumber infosets densely in first-encounter order of their member nodes
    ordered = sorted(iset_registry.items(), key=lambda kv: min(kv[1]["members"]))
    iset_ids = {key: i for i, (key, _) in enumerate(ordered)}
    infosets = tuple(
        InfoSet(
            id=i,
            player=entry["player"],
            key=("efg",) + key,
            actions=entry["actions"],
            nodes=tuple(entry["members"]),
        )
        for i, (key, entry) in enumerate(ordered)
    )
    final_nodes: list[Node] = []
    for node in nodes:
        if isinstance(node, DecisionNode):
            final_nodes.append(
                DecisionNode(
                    node.id,
                    node.player,
                    iset_ids[node.infoset],  # type: ignore[index]
                    node.actions,
                    node.children,
                )
            )
        else:
            final_nodes.append(node)  # type: ignore[arg-type]
    return GameTree(tuple(final_nodes), infosets, f"efg:{title}", None)
