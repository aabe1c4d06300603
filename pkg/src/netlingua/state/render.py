"""Natural-language rendering of network state.

Facts render one per line as `<Device> — <node>: <sentence> [<source>]`,
preceded by a per-device header. Rendering is a pure function of
(state, scope) with deterministic ordering (device name, then path), and
every field value appears in its line, so distinct states render to
distinct strings.
"""

from __future__ import annotations

import json
from typing import Any, Iterable, Optional

from netlingua.schema.ast import SchemaPath
from netlingua.schema.resolver import ResolvedSchema
from netlingua.state.tree import DeviceState, NetworkState, display_name


def render_state_nl(state: NetworkState, schema: ResolvedSchema,
                    scope: Optional[Iterable[SchemaPath]] = None) -> str:
    scope_names = [p.names for p in scope] if scope is not None else None
    lines: list[str] = []
    for device_name in sorted(state.devices):
        device = state.devices[device_name]
        header = display_name(device_name)
        lines.append(f"{header} ({device_name})" if header != device_name else device_name)
        lines.extend(_device_lines(device, schema, scope_names))
    return "\n".join(lines)


def render_device_table_nl(device: DeviceState, schema: ResolvedSchema,
                           table: str) -> str:
    """Render a single device's single table (memory-store chunking granularity)."""
    header = display_name(device.device_name)
    name = device.device_name
    head = f"{header} ({name})" if header != name else name
    table_path = schema.table_path(table)
    scope_names = [table_path.names] if table_path is not None else [(table,)]
    body = list(_device_lines(device, schema, scope_names, only_table=table))
    return "\n".join([head] + body)


def _in_scope(path_names: tuple[str, ...], scope_names) -> bool:
    if scope_names is None:
        return True
    for names in scope_names:
        if path_names[: len(names)] == tuple(names):
            return True
    return False


def _device_lines(device: DeviceState, schema: ResolvedSchema,
                  scope_names, only_table: Optional[str] = None) -> Iterable[str]:
    source = device.source_path
    name = device.device_name
    for root in sorted(device.tree):
        for table in sorted(device.tree[root]):
            if only_table is not None and table != only_table:
                continue
            table_node = schema.find_table(table)
            content = device.tree[root][table]
            for child in sorted(content):
                child_node = table_node.child(child) if table_node else None
                if child_node is not None and child_node.kind == "list":
                    path_names = (root, table, child)
                    if not _in_scope(path_names, scope_names):
                        continue
                    for key in sorted(content[child]):
                        entry = content[child][key]
                        node_label = "|".join(key)
                        sentence = _entry_sentence(child, child_node.key_leaves, entry)
                        yield f"{name} — {node_label}: {sentence} [{source}]"
                else:
                    path_names = (root, table)
                    if not _in_scope(path_names, scope_names):
                        continue
                    yield f"{name} — {table}: {child} is {content[child]} [{source}]"
    for table in sorted(device.unknown_tables):
        if only_table is not None and table != only_table:
            continue
        if scope_names is not None:
            continue
        raw = json.dumps(device.unknown_tables[table], sort_keys=True)
        yield f"{name} — {table}: unrecognized table retained verbatim {raw} [{source}]"


def _entry_sentence(list_name: str, key_leaves: tuple[str, ...],
                    entry: dict[str, Any]) -> str:
    fields = {k: v for k, v in entry.items()}
    sentence = _special_sentence(list_name, fields)
    if sentence is None:
        keys = ", ".join(f"{k} {fields.pop(k)}" for k in key_leaves if k in fields)
        rest = ", ".join(f"{k} {v}" for k, v in sorted(fields.items()))
        body = "; ".join(part for part in (keys, rest) if part)
        return f"{list_name} entry with {body}" if body else f"{list_name} entry"
    leftovers = ", ".join(f"{k} {v}" for k, v in sorted(fields.items()))
    return f"{sentence}, {leftovers}" if leftovers else sentence


def _special_sentence(list_name: str, fields: dict[str, Any]) -> Optional[str]:
    """Templates for the common tables; consumed fields are popped."""
    if list_name == "PORT_LIST" and "speed" in fields and "mtu" in fields:
        fields.pop("name", None)
        status = fields.pop("admin_status", None)
        speed = fields.pop("speed")
        mtu = fields.pop("mtu")
        if status is not None:
            return f"Interface {status} with speed {speed} Mbps and MTU {mtu}"
        return f"Interface with speed {speed} Mbps and MTU {mtu}"
    if list_name == "INTERFACE_LIST" and "name" in fields:
        port = fields.pop("name")
        return f"Routing enabled on interface {port}"
    if list_name == "INTERFACE_IPPREFIX_LIST" and "name" in fields and "ip-prefix" in fields:
        port = fields.pop("name")
        prefix = fields.pop("ip-prefix")
        return f"IP prefix {prefix} assigned to interface {port}"
    if list_name == "BGP_NEIGHBOR_LIST" and "neighbor" in fields:
        peer = fields.pop("neighbor")
        asn = fields.pop("asn", None)
        if asn is not None:
            return f"BGP neighbor {peer} in AS {asn}"
        return f"BGP neighbor {peer}"
    if list_name == "ACL_TABLE_LIST" and "table_name" in fields:
        table = fields.pop("table_name")
        stage = fields.pop("stage", None)
        if stage is not None:
            return f"ACL table {table} bound at {stage} stage"
        return f"ACL table {table}"
    return None
