"""Network state snapshots and the append/remove change-set engine."""

from netlingua.state.changeset import ChangeOp, ChangeSet, DeviceChange
from netlingua.state.ops import apply_change_set, diff_states
from netlingua.state.render import render_device_table_nl, render_state_nl
from netlingua.state.tree import (
    DeviceState,
    Link,
    NetworkState,
    display_name,
    load_device_state,
    load_topology,
    serialize_device_state,
)

__all__ = [
    "ChangeOp",
    "ChangeSet",
    "DeviceChange",
    "DeviceState",
    "Link",
    "NetworkState",
    "apply_change_set",
    "diff_states",
    "display_name",
    "load_device_state",
    "load_topology",
    "render_device_table_nl",
    "render_state_nl",
    "serialize_device_state",
]
