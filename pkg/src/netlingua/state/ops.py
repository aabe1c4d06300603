"""Applying change sets to network state, and diffing states back into them.

apply_change_set is transactional per call: any op error aborts the whole
call and the input state stands (the input is never mutated either way).
"""

from __future__ import annotations

from typing import Any

from netlingua.errors import (
    AppendDuplicateKeyError,
    ChangeSetError,
    KeyLeafMissingError,
    RemoveNotFoundError,
    SchemaMismatchError,
    UnknownDeviceError,
)
from netlingua.schema.ast import SchemaNode, SchemaPath
from netlingua.schema.resolver import ResolvedSchema
from netlingua.state.changeset import ChangeOp, ChangeSet, DeviceChange
from netlingua.state.tree import DeviceState, NetworkState


class InvalidTargetError(ChangeSetError):
    def __init__(self, path: str, kind: str):
        super().__init__(f"change ops cannot target a {kind} node ({path})")
        self.path = path
        self.kind = kind


def apply_change_set(state: NetworkState, cs: ChangeSet,
                     schema: ResolvedSchema) -> NetworkState:
    """Apply a change set, returning a new state with revision + 1.

    append inserts a list entry (duplicate key tuple is an error); remove
    deletes the entry matching the key tuple, and any supplied non-key
    fields must match the stored entry exactly.
    """
    for entry in cs.entries:
        if entry.device not in state.devices:
            raise UnknownDeviceError(entry.device)
    new_state = state.deep_copy()
    for entry in cs.entries:
        device = new_state.devices[entry.device]
        for op in entry.config:
            _apply_op(device, op, schema)
    new_state.revision = state.revision + 1
    return new_state


def _apply_op(device: DeviceState, op: ChangeOp, schema: ResolvedSchema) -> None:
    node = schema.find_node(op.path)  # raises PathNotFoundError
    if node.kind in ("leaf", "leaf-list"):
        raise InvalidTargetError(str(op.path), node.kind)
    container = _navigate(device.tree, op.path, create=(op.action == "append"))
    if node.kind == "list":
        _apply_list_op(container, node, op)
    else:
        _apply_container_op(container, node, op)
    if op.action == "remove":
        _prune_empty(device.tree, [name for _, name in op.path.segments])


def _prune_empty(tree: dict[str, Any], names: list[str]) -> None:
    """Drop empty collections left along the path, so remove undoes append."""
    if not names:
        return
    head, rest = names[0], names[1:]
    child = tree.get(head)
    if isinstance(child, dict):
        _prune_empty(child, rest)
        if not child:
            del tree[head]


def _navigate(tree: dict[str, Any], path: SchemaPath, create: bool) -> dict[str, Any]:
    """Walk to the dict holding the addressed node's collection."""
    current = tree
    for _, name in path.segments:
        if name not in current:
            if not create:
                # Missing intermediate on remove: nothing to remove.
                raise RemoveNotFoundError(str(path), {})
            current[name] = {}
        current = current[name]
    return current


def _key_tuple(node: SchemaNode, op: ChangeOp) -> tuple[str, ...]:
    parts = []
    for key in node.key_leaves:
        if key not in op.value:
            raise KeyLeafMissingError(str(op.path), key)
        parts.append(str(op.value[key]))
    return tuple(parts)


def _apply_list_op(entries: dict[Any, Any], node: SchemaNode, op: ChangeOp) -> None:
    key = _key_tuple(node, op)
    if op.action == "append":
        if key in entries:
            raise AppendDuplicateKeyError(str(op.path), "|".join(key))
        entry = {k: str(v) if not isinstance(v, (dict, list)) else v
                 for k, v in op.value.items()}
        entries[key] = entry
    else:
        existing = entries.get(key)
        if existing is None:
            raise RemoveNotFoundError(str(op.path), op.value)
        for field_name, supplied in op.value.items():
            if field_name in node.key_leaves:
                continue
            if field_name not in existing or str(existing[field_name]) != str(supplied):
                raise RemoveNotFoundError(str(op.path), op.value)
        del entries[key]


def _apply_container_op(container: dict[str, Any], node: SchemaNode, op: ChangeOp) -> None:
    if op.action == "append":
        for leaf, value in op.value.items():
            if leaf in container:
                raise AppendDuplicateKeyError(str(op.path), leaf)
            container[leaf] = str(value)
    else:
        for leaf, value in op.value.items():
            if leaf not in container or str(container[leaf]) != str(value):
                raise RemoveNotFoundError(str(op.path), op.value)
            del container[leaf]


def diff_states(a: NetworkState, b: NetworkState, schema: ResolvedSchema) -> ChangeSet:
    """Produce a change set c with apply_change_set(a, c).tree == b.tree.

    Within one device and list, removes precede appends so that changed
    entries (same key, new fields) re-apply cleanly.
    """
    if set(a.devices) != set(b.devices):
        raise SchemaMismatchError(
            f"device sets differ: {sorted(a.devices)} vs {sorted(b.devices)}"
        )
    entries = []
    for device in sorted(a.devices):
        ops = _diff_device(a.devices[device], b.devices[device], schema)
        if ops:
            entries.append(DeviceChange(device=device, config=ops))
    return ChangeSet(entries=entries)


def _diff_device(a: DeviceState, b: DeviceState,
                 schema: ResolvedSchema) -> list[ChangeOp]:
    removes: list[ChangeOp] = []
    appends: list[ChangeOp] = []
    roots = sorted(set(a.tree) | set(b.tree))
    for root in roots:
        tables = sorted(set(a.tree.get(root, {})) | set(b.tree.get(root, {})))
        for table in tables:
            table_node = schema.find_table(table)
            if table_node is None:
                continue
            a_table = a.tree.get(root, {}).get(table, {})
            b_table = b.tree.get(root, {}).get(table, {})
            for child in sorted(set(a_table) | set(b_table)):
                child_node = table_node.child(child)
                path = SchemaPath(((None, root), (None, table), (None, child)))
                if child_node is not None and child_node.kind == "list":
                    _diff_list(a_table.get(child, {}), b_table.get(child, {}),
                               path, removes, appends)
                else:
                    container_path = SchemaPath(((None, root), (None, table)))
                    old = a_table.get(child)
                    new = b_table.get(child)
                    if old == new:
                        continue
                    if old is not None:
                        removes.append(ChangeOp("remove", container_path, {child: old}))
                    if new is not None:
                        appends.append(ChangeOp("append", container_path, {child: new}))
    return removes + appends


def _diff_list(a_entries: dict, b_entries: dict, path: SchemaPath,
               removes: list[ChangeOp], appends: list[ChangeOp]) -> None:
    for key in sorted(set(a_entries) | set(b_entries)):
        old = a_entries.get(key)
        new = b_entries.get(key)
        if old == new:
            continue
        if old is not None:
            removes.append(ChangeOp("remove", path, dict(old)))
        if new is not None:
            appends.append(ChangeOp("append", path, dict(new)))
