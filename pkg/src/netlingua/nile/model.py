"""Typed Nile intent AST with positional leaves and canonical rendering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

LeafPath = tuple
Leaf = tuple_item = tuple  # (path, value)


@dataclass(frozen=True)
class Entity:
    kind: str  # endpoint | group | service | traffic | protocol | middlebox
    value: str

    def render(self) -> str:
        return f"{self.kind}('{self.value}')"


@dataclass(frozen=True)
class Clause:
    """One intent clause; the unified shape covers every rule family.

    kind: from | to | for | add | remove | set | unset | allow | block | start | end
    entities: endpoints/targets/middleboxes for the entity-bearing kinds
    metric: quota|bandwidth for set/unset, hour|datetime|timestamp for start/end
    values: qos argument list or the single time value
    """

    kind: str
    entities: tuple[Entity, ...] = ()
    metric: Optional[str] = None
    values: tuple[str, ...] = ()

    def render(self) -> str:
        if self.kind in ("from", "to", "allow", "block"):
            return f"{self.kind} {self.entities[0].render()}"
        if self.kind == "for":
            return "for " + ", ".join(e.render() for e in self.entities)
        if self.kind in ("add", "remove"):
            return f"{self.kind} " + ", ".join(e.render() for e in self.entities)
        if self.kind in ("set", "unset"):
            args = ", ".join(f"'{v}'" for v in self.values)
            return f"{self.kind} {self.metric}({args})"
        # start | end
        return f"{self.kind} {self.metric}('{self.values[0]}')"


@dataclass(frozen=True)
class NileIntent:
    name: str
    clauses: tuple[Clause, ...]
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    def render(self) -> str:
        """Canonical text; parsing it reproduces an equal AST."""
        body = "\n".join("  " + clause.render() for clause in self.clauses)
        return f"define intent {self.name}:\n{body}"

    def leaves(self) -> list[tuple[LeafPath, str]]:
        """Ordered (structural position, value) pairs for fuzzy matching."""
        out: list[tuple[LeafPath, str]] = [(("name",), self.name)]
        for i, clause in enumerate(self.clauses):
            base = ("clauses", i)
            out.append((base + ("kind",), clause.kind))
            for j, entity in enumerate(clause.entities):
                out.append((base + ("entities", j, "kind"), entity.kind))
                out.append((base + ("entities", j, "value"), entity.value))
            if clause.metric is not None:
                out.append((base + ("metric",), clause.metric))
            for j, value in enumerate(clause.values):
                out.append((base + ("values", j), value))
        return out
