"""Grammar-driven Nile parser with located syntax errors.

A backtracking recursive descent interprets the loaded BNF directly, so
the bundled grammar file stays the single source of truth. Failures
report the furthest position reached and the set of terminals that were
expected there.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from netlingua.errors import NileSyntaxError
from netlingua.nile.grammar import Grammar, Lit, Ref, Special, default_grammar
from netlingua.nile.model import Clause, Entity, NileIntent

_TOKEN_RE = re.compile(r"'([^']*)'|([A-Za-z_][A-Za-z0-9_\-.]*)|([(),:])|(\S)")


@dataclass(frozen=True)
class Token:
    text: str
    quoted: bool
    line: int
    column: int
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        newlines = text.count("\n", line_start, m.start())
        if newlines:
            line += newlines
            line_start = text.rfind("\n", 0, m.start()) + 1
        column = m.start() - line_start + 1
        if m.group(1) is not None:
            tokens.append(Token(m.group(1), True, line, column, m.start()))
        elif m.group(2) is not None:
            tokens.append(Token(m.group(2), False, line, column, m.start()))
        elif m.group(3) is not None:
            tokens.append(Token(m.group(3), False, line, column, m.start()))
        else:
            raise NileSyntaxError(f"bad character {m.group(4)!r}", line, column,
                                  expected=set())
    return tokens


@dataclass
class Node:
    rule: str
    children: list  # Node | Token


class _Parser:
    def __init__(self, grammar: Grammar, tokens: list[Token], source: str):
        self.grammar = grammar
        self.tokens = tokens
        self.source = source
        self.furthest = 0
        self.expected: set[str] = set()

    def _note(self, pos: int, expectation: str) -> None:
        if pos > self.furthest:
            self.furthest = pos
            self.expected = {expectation}
        elif pos == self.furthest:
            self.expected.add(expectation)

    def parse(self) -> Node:
        for node, pos in self._match_rule(self.grammar.start, 0):
            if pos == len(self.tokens):
                return node
            self._note(pos, "end of input")
        raise self._error()

    def _error(self) -> NileSyntaxError:
        if self.furthest < len(self.tokens):
            token = self.tokens[self.furthest]
            return NileSyntaxError(f"unexpected token {token.text!r}", token.line,
                                   token.column, expected=self.expected)
        line = self.source.count("\n") + 1
        column = len(self.source) - (self.source.rfind("\n") + 1) + 1
        return NileSyntaxError("unexpected end of input", line, column,
                               expected=self.expected)

    def _match_rule(self, name: str, pos: int) -> Iterator[tuple[Node, int]]:
        for alternative in self.grammar.rules[name]:
            yield from self._match_seq(name, alternative, 0, pos, [])

    def _match_seq(self, rule: str, items, index: int, pos: int,
                   acc: list) -> Iterator[tuple[Node, int]]:
        if index == len(items):
            yield Node(rule, list(acc)), pos
            return
        item = items[index]
        if isinstance(item, Lit):
            if pos < len(self.tokens) and not self.tokens[pos].quoted \
                    and self.tokens[pos].text == item.text:
                yield from self._match_seq(rule, items, index + 1, pos + 1,
                                           acc + [self.tokens[pos]])
            else:
                self._note(pos, f"'{item.text}'")
        elif isinstance(item, Special):
            token = self.tokens[pos] if pos < len(self.tokens) else None
            if item.name == "QUOTED":
                if token is not None and token.quoted:
                    yield from self._match_seq(rule, items, index + 1, pos + 1,
                                               acc + [token])
                else:
                    self._note(pos, "quoted value")
            else:  # IDENT
                if token is not None and not token.quoted \
                        and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-.]*", token.text):
                    yield from self._match_seq(rule, items, index + 1, pos + 1,
                                               acc + [token])
                else:
                    self._note(pos, "identifier")
        else:
            assert isinstance(item, Ref)
            for node, next_pos in self._match_rule(item.name, pos):
                yield from self._match_seq(rule, items, index + 1, next_pos,
                                           acc + [node])


def parse_nile(text: str, grammar: Optional[Grammar] = None) -> NileIntent:
    """Parse a Nile intent; raises NileSyntaxError with line/column/expected."""
    grammar = grammar or default_grammar()
    tokens = tokenize(text or "")
    if not tokens:
        raise NileSyntaxError("empty input", 1, 1, expected={"'define'"})
    tree = _Parser(grammar, tokens, text).parse()
    return _shape_intent(tree, tokens)


# --- parse-tree shaping into the typed AST ---


def _texts(node, out: list[Token]) -> None:
    for child in node.children:
        if isinstance(child, Token):
            out.append(child)
        else:
            _texts(child, out)


def _find_all(node: Node, rule: str, out: list[Node]) -> None:
    if node.rule == rule:
        out.append(node)
        return  # nested same-rule nodes are part of list recursion; handled by caller
    for child in node.children:
        if isinstance(child, Node):
            _find_all(child, rule, out)


def _flatten_list(node: Node, item_rule: str) -> list[Node]:
    """Collapse right-recursive list rules into the item sequence."""
    items: list[Node] = []
    current: Optional[Node] = node
    while current is not None:
        next_node: Optional[Node] = None
        for child in current.children:
            if isinstance(child, Node):
                if child.rule == current.rule:
                    next_node = child
                elif child.rule == item_rule:
                    items.append(child)
                else:
                    nested: list[Node] = []
                    _find_all(child, item_rule, nested)
                    items.extend(nested)
        current = next_node
    return items


def _shape_intent(tree: Node, tokens: list[Token]) -> NileIntent:
    name_token = next(t for t in tree.children if isinstance(t, Token)
                      and t.text not in ("define", "intent", ":"))
    clause_list = next(c for c in tree.children
                       if isinstance(c, Node) and c.rule == "clause-list")
    clauses = []
    for clause_node in _flatten_list(clause_list, "clause"):
        clauses.append(_shape_clause(clause_node))
    span = (tokens[0].offset, tokens[-1].offset + len(tokens[-1].text))
    return NileIntent(name=name_token.text, clauses=tuple(clauses), span=span)


def _shape_clause(clause: Node) -> Clause:
    inner = next(c for c in clause.children if isinstance(c, Node))
    rule = inner.rule
    if rule in ("origin", "destination"):
        kind = "from" if rule == "origin" else "to"
        return Clause(kind=kind, entities=(_shape_entity(_first(inner, "entity")),))
    if rule == "targets":
        items = _flatten_list(_first(inner, "entity-list"), "entity")
        return Clause(kind="for", entities=tuple(_shape_entity(e) for e in items))
    if rule == "mbox-rule":
        action = _literal(inner, 0)
        boxes = _flatten_list(_first(inner, "mbox-list"), "mbox")
        entities = tuple(Entity(kind="middlebox", value=_quoted_values(b)[0])
                         for b in boxes)
        return Clause(kind=action, entities=entities)
    if rule == "qos-rule":
        action = _literal(inner, 0)
        metric = _literal_of(_first(inner, "qos-metric"))
        values = tuple(_quoted_values(_first(inner, "value-list")))
        return Clause(kind=action, metric=metric, values=values)
    if rule == "traffic-rule":
        action = _literal(inner, 0)
        return Clause(kind=action, entities=(_shape_entity(_first(inner, "entity")),))
    assert rule == "time-rule", f"unknown clause rule {rule}"
    edge = _literal(inner, 0)
    unit = _literal_of(_first(inner, "time-unit"))
    values = tuple(_quoted_values(inner))
    return Clause(kind=edge, metric=unit, values=values)


def _first(node: Node, rule: str) -> Node:
    found: list[Node] = []
    _find_all(node, rule, found)
    return found[0]


def _literal(node: Node, index: int) -> str:
    child = node.children[index]
    if isinstance(child, Token):
        return child.text
    return _literal_of(child)


def _literal_of(node: Node) -> str:
    out: list[Token] = []
    _texts(node, out)
    return out[0].text


def _quoted_values(node: Node) -> list[str]:
    out: list[Token] = []
    _texts(node, out)
    return [t.text for t in out if t.quoted]


def _shape_entity(entity: Node) -> Entity:
    tokens: list[Token] = []
    _texts(entity, tokens)
    kind = tokens[0].text
    value = next(t.text for t in tokens if t.quoted)
    return Entity(kind=kind, value=value)
