"""Per-device configuration databases and the network-wide state snapshot.

Instance trees mirror the resolved schema: containers are dicts keyed by
child name, lists are dicts keyed by the key tuple (a tuple of strings),
leaves are scalars. Config-DB documents use the SONiC style: a top-level
object of TABLE names, with list entries keyed by the "|"-joined key tuple.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional

from netlingua.errors import DuplicateKeyError, MalformedDocumentError
from netlingua.schema.ast import SchemaNode
from netlingua.schema.resolver import ResolvedSchema

KEY_JOIN = "|"

Scalar = Any  # str | int | bool as loaded from JSON


@dataclass
class DeviceState:
    """One device's configuration database instance tree."""

    device_name: str
    tree: dict[str, Any] = field(default_factory=dict)
    source_path: str = ""
    unknown_tables: dict[str, Any] = field(default_factory=dict)

    def deep_copy(self) -> "DeviceState":
        return DeviceState(
            device_name=self.device_name,
            tree=copy.deepcopy(self.tree),
            source_path=self.source_path,
            unknown_tables=copy.deepcopy(self.unknown_tables),
        )


@dataclass(frozen=True)
class Link:
    a: str
    a_port: str
    b: str
    b_port: str


@dataclass
class NetworkState:
    """Immutable-by-convention snapshot of every device plus topology."""

    devices: dict[str, DeviceState] = field(default_factory=dict)
    topology: list[Link] = field(default_factory=list)
    revision: int = 0

    def __post_init__(self) -> None:
        for link in self.topology:
            for end in (link.a, link.b):
                if end not in self.devices:
                    raise MalformedDocumentError(
                        f"topology link references unknown device '{end}'"
                    )

    def deep_copy(self) -> "NetworkState":
        return NetworkState(
            devices={name: dev.deep_copy() for name, dev in self.devices.items()},
            topology=list(self.topology),
            revision=self.revision,
        )


def _reject_duplicate_pairs(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    result: dict[str, Any] = {}
    for key, value in pairs:
        if key in result:
            raise DuplicateKeyError("(document)", key)
        result[key] = value
    return result


def load_device_state(schema: ResolvedSchema, source_text: str,
                      device_name: str, source_path: str = "") -> DeviceState:
    """Load a config-DB JSON document into a schema-aligned instance tree.

    Unknown top-level tables are retained verbatim and flagged; duplicate
    list keys raise DuplicateKeyError; structural problems raise
    MalformedDocumentError.
    """
    try:
        doc = json.loads(source_text, object_pairs_hook=_reject_duplicate_pairs)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"config DB for '{device_name}' is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise MalformedDocumentError(f"config DB for '{device_name}' must be a JSON object")

    state = DeviceState(device_name=device_name,
                        source_path=source_path or f"/{device_name}/config_db.json")
    for table, content in doc.items():
        table_node = schema.find_table(table)
        if table_node is None:
            state.unknown_tables[table] = content
            continue
        table_path = schema.table_path(table)
        assert table_path is not None
        root_name = table_path.names[0]
        root = state.tree.setdefault(root_name, {})
        root[table] = _load_table(table_node, table, content, device_name)
    return state


def _load_table(table_node: SchemaNode, table: str, content: Any,
                device_name: str) -> dict[str, Any]:
    if not isinstance(content, dict):
        raise MalformedDocumentError(
            f"table '{table}' on '{device_name}' must be a JSON object"
        )
    result: dict[str, Any] = {}
    for entry_key, entry_value in content.items():
        if isinstance(entry_value, dict):
            parts = entry_key.split(KEY_JOIN)
            target = _list_for_arity(table_node, table, len(parts))
            entries = result.setdefault(target.name, {})
            key_tuple = tuple(parts)
            if key_tuple in entries:
                raise DuplicateKeyError(table, entry_key)
            entry = dict(zip(target.key_leaves, parts))
            for fname, fvalue in entry_value.items():
                if fname in entry and str(fvalue) != entry[fname]:
                    raise MalformedDocumentError(
                        f"entry '{entry_key}' in '{table}' repeats key leaf "
                        f"'{fname}' with a different value"
                    )
                entry[fname] = fvalue
            entries[key_tuple] = entry
        else:
            # Scalar member: a direct leaf of the table container.
            result[entry_key] = entry_value
    return result


def _list_for_arity(table_node: SchemaNode, table: str, arity: int) -> SchemaNode:
    candidates = [
        child for child in table_node.children
        if child.kind == "list" and len(child.key_leaves) == arity
    ]
    if not candidates:
        raise MalformedDocumentError(
            f"table '{table}' has no list with {arity} key leaf(s)"
        )
    if len(candidates) > 1:
        raise MalformedDocumentError(
            f"table '{table}' has multiple lists with {arity} key leaf(s); entry is ambiguous"
        )
    return candidates[0]


def serialize_device_state(state: DeviceState, schema: ResolvedSchema) -> str:
    """Serialize back to config-DB JSON. load(serialize(s)) is deeply equal to s."""
    doc: dict[str, Any] = {}
    for root_name in sorted(state.tree):
        for table in sorted(state.tree[root_name]):
            table_node = schema.find_table(table)
            content = state.tree[root_name][table]
            out: dict[str, Any] = {}
            if table_node is None:
                continue
            for child_name, child_value in content.items():
                child_node = table_node.child(child_name)
                if child_node is not None and child_node.kind == "list":
                    for key_tuple, entry in sorted(child_value.items()):
                        entry_key = KEY_JOIN.join(key_tuple)
                        fields = {
                            k: v for k, v in entry.items()
                            if k not in child_node.key_leaves
                        }
                        out[entry_key] = fields
                else:
                    out[child_name] = child_value
            doc[table] = out
    for table, content in sorted(state.unknown_tables.items()):
        doc[table] = content
    return json.dumps(doc, indent=2, sort_keys=True)


def load_topology(source_text: str) -> list[Link]:
    """Parse the topology file: a JSON array of {a, a_port, b, b_port} links."""
    try:
        doc = json.loads(source_text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(f"topology file is not valid JSON: {exc}")
    if not isinstance(doc, list):
        raise MalformedDocumentError("topology file must be a JSON array of links")
    links = []
    for item in doc:
        try:
            links.append(Link(a=item["a"], a_port=item["a_port"],
                              b=item["b"], b_port=item["b_port"]))
        except (KeyError, TypeError):
            raise MalformedDocumentError(f"bad topology link entry: {item!r}")
    return links


_DEVICE_ROLE_RE = re.compile(r"^([SL])(\d+)$")


def display_name(device: str) -> str:
    """Fixture-friendly display name: S0 -> Spine0, L1 -> Leaf1, else the name itself."""
    m = _DEVICE_ROLE_RE.match(device)
    if m is None:
        return device
    role = "Spine" if m.group(1) == "S" else "Leaf"
    return f"{role}{m.group(2)}"
