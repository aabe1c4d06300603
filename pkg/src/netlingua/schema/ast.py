"""Core schema data types: modules, nodes, type specs, and paths.

The schema language is a deliberately small YANG subset: modules contain
typedefs and a tree of containers, keyed lists, leaves, and leaf-lists.
Constraints live in TypeSpec (patterns, ranges, enums, leafrefs, IPv4
prefixes) and in must-expressions attached to nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from netlingua.errors import MalformedDocumentError

# Natural bounds for the built-in integer types.
INTEGER_BOUNDS = {
    "int8": (-128, 127),
    "int16": (-32768, 32767),
    "int32": (-(2**31), 2**31 - 1),
    "int64": (-(2**63), 2**63 - 1),
    "uint8": (0, 255),
    "uint16": (0, 65535),
    "uint32": (0, 2**32 - 1),
    "uint64": (0, 2**64 - 1),
}

_IP4_PREFIX_RE = re.compile(r"^(\d{1,3})\.(\d{1,3})\.(\d{1,3})\.(\d{1,3})/(\d{1,2})$")


def is_ip4_prefix(value: str) -> bool:
    """True when value is dotted-quad/length with octets 0..255 and length 0..32."""
    m = _IP4_PREFIX_RE.match(value)
    if not m:
        return False
    octets = [int(m.group(i)) for i in range(1, 5)]
    length = int(m.group(5))
    return all(0 <= o <= 255 for o in octets) and 0 <= length <= 32


@dataclass(frozen=True)
class SchemaPath:
    """An addressed location in the schema tree.

    segments: (prefix, name) pairs; prefix is None for unqualified segments.
    relative_ups: number of leading '../' steps; 0 means absolute.
    """

    segments: tuple[tuple[Optional[str], str], ...]
    relative_ups: int = 0

    def __post_init__(self) -> None:
        if not self.segments:
            raise MalformedDocumentError("schema path must have at least one segment")
        for _, name in self.segments:
            if not name:
                raise MalformedDocumentError("schema path contains an empty segment")

    @classmethod
    def from_string(cls, text: str) -> "SchemaPath":
        """Parse 'a/b/c', '/pfx:a/pfx:b', or '../../a/b' forms."""
        stripped = text.strip()
        ups = 0
        while stripped.startswith("../"):
            ups += 1
            stripped = stripped[3:]
        stripped = stripped.strip("/")
        if not stripped:
            raise MalformedDocumentError(f"empty schema path: {text!r}")
        segments = []
        for raw in stripped.split("/"):
            if not raw:
                raise MalformedDocumentError(f"empty segment in schema path: {text!r}")
            if ":" in raw:
                prefix, name = raw.split(":", 1)
                segments.append((prefix or None, name))
            else:
                segments.append((None, raw))
        return cls(segments=tuple(segments), relative_ups=ups)

    @classmethod
    def from_wire(cls, parts: list[str]) -> "SchemaPath":
        """Parse the wire form: a list of (optionally prefix-qualified) segment strings."""
        if not isinstance(parts, list) or not parts:
            raise MalformedDocumentError(f"wire path must be a non-empty list, got {parts!r}")
        segments = []
        for raw in parts:
            if not isinstance(raw, str) or not raw:
                raise MalformedDocumentError(f"bad wire path segment {raw!r}")
            if ":" in raw:
                prefix, name = raw.split(":", 1)
                segments.append((prefix or None, name))
            else:
                segments.append((None, raw))
        return cls(segments=tuple(segments))

    def to_wire(self) -> list[str]:
        return [f"{p}:{n}" if p else n for p, n in self.segments]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for _, name in self.segments)

    def __str__(self) -> str:
        body = "/".join(f"{p}:{n}" if p else n for p, n in self.segments)
        if self.relative_ups:
            return "../" * self.relative_ups + body
        return "/" + body


@dataclass(frozen=True)
class TypeSpec:
    """A concrete (resolved) leaf type.

    base selects which optional field is meaningful:
      string         -- no extras
      pattern-string -- pattern
      integer-range  -- range
      enumeration    -- enum_values
      leafref        -- leafref_path
      ip4-prefix     -- no extras
    """

    base: str
    pattern: Optional[str] = None
    range: Optional[tuple[int, int]] = None
    leafref_path: Optional[SchemaPath] = None
    enum_values: Optional[tuple[str, ...]] = None

    _REQUIRED = {
        "string": frozenset(),
        "pattern-string": frozenset({"pattern"}),
        "integer-range": frozenset({"range"}),
        "enumeration": frozenset({"enum_values"}),
        "leafref": frozenset({"leafref_path"}),
        "ip4-prefix": frozenset(),
    }

    def __post_init__(self) -> None:
        if self.base not in self._REQUIRED:
            raise MalformedDocumentError(f"unknown type base {self.base!r}")
        present = {
            name
            for name in ("pattern", "range", "leafref_path", "enum_values")
            if getattr(self, name) is not None
        }
        required = self._REQUIRED[self.base]
        if present != required:
            raise MalformedDocumentError(
                f"type base {self.base!r} requires fields {sorted(required)}, got {sorted(present)}"
            )

    def accepts(self, value: object) -> tuple[bool, str]:
        """Check a scalar against this type. Returns (ok, reason-if-not)."""
        if self.base == "string":
            return True, ""
        if self.base == "pattern-string":
            text = str(value)
            if re.fullmatch(self.pattern or "", text):
                return True, ""
            return False, f"value {text!r} does not match pattern {self.pattern!r}"
        if self.base == "integer-range":
            try:
                number = int(str(value))
            except ValueError:
                return False, f"value {value!r} is not an integer"
            lo, hi = self.range  # type: ignore[misc]
            if lo <= number <= hi:
                return True, ""
            return False, f"value {number} outside range {lo}..{hi}"
        if self.base == "enumeration":
            if str(value) in (self.enum_values or ()):
                return True, ""
            return False, f"value {value!r} not one of {list(self.enum_values or ())}"
        if self.base == "ip4-prefix":
            if is_ip4_prefix(str(value)):
                return True, ""
            return False, f"value {value!r} is not a valid IPv4 prefix (x.x.x.x/0..32)"
        # leafref: type conformance is checked against the referenced leaf's
        # type; reachability is an instance-level concern.
        return True, ""


@dataclass(frozen=True)
class TypeRef:
    """An unresolved reference to a typedef, kept only between parse and resolve."""

    name: str
    prefix: Optional[str] = None


@dataclass
class SchemaNode:
    """A node in the schema tree: container, list, leaf, or leaf-list."""

    kind: str  # container | list | leaf | leaf-list
    name: str
    children: list["SchemaNode"] = field(default_factory=list)
    key_leaves: tuple[str, ...] = ()
    type_spec: Optional[Union[TypeSpec, TypeRef]] = None
    must_exprs: list["MustExpr"] = field(default_factory=list)  # noqa: F821
    mandatory: bool = False
    description: str = ""
    module: str = ""  # owning module name, filled by the resolver

    def child(self, name: str) -> Optional["SchemaNode"]:
        for node in self.children:
            if node.name == name:
                return node
        return None

    def validate_structure(self) -> None:
        """Enforce node-shape invariants; raises MalformedDocumentError."""
        if self.kind in ("leaf", "leaf-list"):
            if self.children:
                raise MalformedDocumentError(f"{self.kind} '{self.name}' cannot have children")
            if self.type_spec is None:
                raise MalformedDocumentError(f"{self.kind} '{self.name}' has no type")
        if self.kind == "list":
            if not self.key_leaves:
                raise MalformedDocumentError(f"list '{self.name}' has no key leaves")
            for key in self.key_leaves:
                target = self.child(key)
                if target is None or target.kind != "leaf":
                    raise MalformedDocumentError(
                        f"list '{self.name}' key '{key}' does not name a direct child leaf"
                    )
        for child in self.children:
            child.validate_structure()


@dataclass
class SchemaModule:
    """A parsed schema module: typedefs plus the root node tree."""

    name: str
    prefix: str
    typedefs: dict[str, Union[TypeSpec, TypeRef]] = field(default_factory=dict)
    root_nodes: list[SchemaNode] = field(default_factory=list)
    imports: list[str] = field(default_factory=list)
    import_prefixes: dict[str, str] = field(default_factory=dict)  # prefix -> module name
    description: str = ""
