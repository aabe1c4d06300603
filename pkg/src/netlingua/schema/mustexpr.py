"""Must-expression parsing and printing.

The expression language is the XPath fragment needed by the bundled
schemas: current(), parent steps '../', child steps, key predicates
[leaf=current()], string literals, and top-level equality. Anything else
is a parse error. Printing produces a normalized form; parsing that form
reproduces the same AST (parse-print-parse fixpoint).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from netlingua.errors import SchemaSyntaxError


@dataclass(frozen=True)
class Current:
    """current(): value of the context node."""

    def render(self) -> str:
        return "current()"


@dataclass(frozen=True)
class Literal:
    value: str

    def render(self) -> str:
        return f"'{self.value}'"


@dataclass(frozen=True)
class Step:
    """One child step, optionally filtered by a key predicate [leaf=expr]."""

    name: str
    predicate_leaf: Optional[str] = None
    predicate_value: Optional[Union[Current, Literal]] = None

    def render(self) -> str:
        if self.predicate_leaf is None:
            return self.name
        return f"{self.name}[{self.predicate_leaf}={self.predicate_value.render()}]"


@dataclass(frozen=True)
class PathExpr:
    """ups parent steps followed by child steps, relative to the context node."""

    ups: int
    steps: tuple[Step, ...]

    def render(self) -> str:
        return "../" * self.ups + "/".join(step.render() for step in self.steps)


Operand = Union[Current, Literal, PathExpr]


@dataclass(frozen=True)
class MustExpr:
    """Top-level equality comparison between two operands."""

    left: Operand
    right: Operand
    text: str  # normalized rendering, kept for error messages

    def render(self) -> str:
        return f"{self.left.render()} = {self.right.render()}"


_TOKEN_RE = re.compile(
    r"\s*(current\(\)|\.\./|'[^']*'|\"[^\"]*\"|[A-Za-z_][A-Za-z0-9_.:-]*|[=\[\]/])"
)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip():
                    raise SchemaSyntaxError(
                        f"bad character {text[pos:].strip()[0]!r} in must expression", 1, pos + 1
                    )
                break
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.index = 0

    def peek(self) -> Optional[str]:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def next(self) -> str:
        token = self.peek()
        if token is None:
            raise SchemaSyntaxError("unexpected end of must expression", 1, len(self.text) + 1)
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        got = self.next()
        if got != token:
            raise SchemaSyntaxError(f"expected {token!r}, got {got!r} in must expression", 1, 1)


def parse_must(text: str) -> MustExpr:
    """Parse a must expression into its AST."""
    tokens = _Tokens(text)
    left = _parse_operand(tokens)
    tokens.expect("=")
    right = _parse_operand(tokens)
    if tokens.peek() is not None:
        raise SchemaSyntaxError(
            f"trailing token {tokens.peek()!r} in must expression", 1, 1
        )
    expr = MustExpr(left=left, right=right, text="")
    # Re-render for the normalized text so identical ASTs share one message.
    object.__setattr__(expr, "text", expr.render())
    return expr


def _parse_operand(tokens: _Tokens) -> Operand:
    token = tokens.peek()
    if token is None:
        raise SchemaSyntaxError("missing operand in must expression", 1, 1)
    if token == "current()":
        tokens.next()
        return Current()
    if token.startswith(("'", '"')):
        tokens.next()
        return Literal(token[1:-1])
    return _parse_path(tokens)


def _parse_path(tokens: _Tokens) -> PathExpr:
    ups = 0
    while tokens.peek() == "../":
        tokens.next()
        ups += 1
    steps: list[Step] = []
    while True:
        token = tokens.peek()
        if token is None or token in ("=", "]"):
            break
        if token == "/":
            tokens.next()
            continue
        name = tokens.next()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.:-]*", name):
            raise SchemaSyntaxError(f"bad step name {name!r} in must expression", 1, 1)
        predicate_leaf = None
        predicate_value: Optional[Union[Current, Literal]] = None
        if tokens.peek() == "[":
            tokens.next()
            predicate_leaf = tokens.next()
            tokens.expect("=")
            value_token = tokens.next()
            if value_token == "current()":
                predicate_value = Current()
            elif value_token.startswith(("'", '"')):
                predicate_value = Literal(value_token[1:-1])
            else:
                raise SchemaSyntaxError(
                    f"predicate value must be current() or a literal, got {value_token!r}", 1, 1
                )
            tokens.expect("]")
        steps.append(Step(name, predicate_leaf, predicate_value))
    if not steps and ups == 0:
        raise SchemaSyntaxError("empty path in must expression", 1, 1)
    return PathExpr(ups=ups, steps=tuple(steps))
