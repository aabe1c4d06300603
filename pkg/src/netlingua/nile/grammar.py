"""BNF grammar loading and the exemplar walker.

The grammar file is plain BNF: one rule per line,
`<name> ::= item item | item ...` with "quoted" literal terminals, <rule>
references, and the special terminals IDENT and QUOTED.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from random import Random
from typing import Union

from netlingua.fixtures import NILE_DIR

SPECIALS = ("IDENT", "QUOTED")


@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Special:
    name: str  # IDENT | QUOTED


Sym = Union[Lit, Ref, Special]


@dataclass
class Grammar:
    start: str
    rules: dict[str, list[list[Sym]]]


_ITEM_RE = re.compile(r'"([^"]*)"|<([A-Za-z0-9_-]+)>|([A-Z][A-Z0-9_]*)')


def load_grammar(text: str, start: str = "intent") -> Grammar:
    rules: dict[str, list[list[Sym]]] = {}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "::=" not in line:
            raise ValueError(f"bad grammar line (no ::=): {line!r}")
        head, body = line.split("::=", 1)
        name_match = re.fullmatch(r"<([A-Za-z0-9_-]+)>", head.strip())
        if name_match is None:
            raise ValueError(f"bad rule head: {head.strip()!r}")
        name = name_match.group(1)
        alternatives = []
        for alt in body.split("|"):
            items: list[Sym] = []
            for m in _ITEM_RE.finditer(alt):
                if m.group(1) is not None:
                    items.append(Lit(m.group(1)))
                elif m.group(2) is not None:
                    items.append(Ref(m.group(2)))
                else:
                    special = m.group(3)
                    if special not in SPECIALS:
                        raise ValueError(f"unknown special terminal {special!r}")
                    items.append(Special(special))
            if not items:
                raise ValueError(f"empty alternative in rule <{name}>")
            alternatives.append(items)
        rules[name] = alternatives
    if start not in rules:
        raise ValueError(f"start rule <{start}> missing")
    return Grammar(start=start, rules=rules)


def default_grammar() -> Grammar:
    return load_grammar((NILE_DIR / "nile.bnf").read_text(encoding="utf-8"))


def grammar_text() -> str:
    return (NILE_DIR / "nile.bnf").read_text(encoding="utf-8")


_VOCAB = {
    "entity": ["gateway", "dorm", 'lab', "server_room", "guest_wifi", "database",
               "netflix", "dns", "all", "udp", "students", "professors", "visitors"],
    "middlebox": ["firewall", "dpi", "load_balancer", "ids", "nat"],
    "qos": ["max", "min", "100", "10", "mbps", "gbps", "monthly", "5gb"],
    "time": ["08:00", "18:00", "22:30", "06:15"],
}


def generate_exemplars(grammar: Grammar, count: int = 24, seed: int = 7,
                       max_list: int = 3, max_depth: int = 24) -> list[str]:
    """Walk production rules to emit `count` distinct grammar-conformant intents."""
    rng = Random(seed)
    seen: set[str] = set()
    out: list[str] = []
    attempts = 0
    while len(out) < count and attempts < count * 40:
        attempts += 1
        tokens = _expand(grammar, Ref(grammar.start), rng, max_list, max_depth, index=len(out))
        text = _join(tokens)
        if text not in seen:
            seen.add(text)
            out.append(text)
    return out


def _expand(grammar: Grammar, sym: Sym, rng: Random, max_list: int,
            depth: int, index: int) -> list[str]:
    if isinstance(sym, Lit):
        return [sym.text]
    if isinstance(sym, Special):
        if sym.name == "IDENT":
            return [f"intent_{index}_{rng.randrange(100)}"]
        pool = _VOCAB["entity"] + _VOCAB["middlebox"] + _VOCAB["qos"] + _VOCAB["time"]
        return [f"'{rng.choice(pool)}'"]
    alternatives = grammar.rules[sym.name]
    if depth <= 0:
        # Prefer the non-recursive alternative to terminate.
        alternatives = [a for a in alternatives
                        if not any(isinstance(i, Ref) and i.name == sym.name for i in a)] \
            or alternatives
    choice = rng.choice(alternatives)
    tokens: list[str] = []
    for item in choice:
        tokens.extend(_expand(grammar, item, rng, max_list, depth - 1, index))
    return tokens


def _join(tokens: list[str]) -> str:
    out = []
    for token in tokens:
        if token in (",", ")", ":"):
            out.append(token)
        elif token == "(" and out:
            out.append(token)
        else:
            if out and out[-1] != "(":
                out.append(" " + token)
            else:
                out.append(token)
    return "".join(out).strip()


def load_exemplars(path: Path | None = None) -> list[str]:
    import json

    target = path or (NILE_DIR / "exemplars.json")
    return json.loads(target.read_text(encoding="utf-8"))
