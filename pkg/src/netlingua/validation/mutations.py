"""Mutation kit: systematic corruptions of known-good change sets.

Each mutation family takes a passing change set and produces a variant the
validator must reject. The kit doubles as a measured soundness check: the
detection rate over the bundled kit must be 100%, with zero false
positives on the clean corpus.
"""

from __future__ import annotations

from dataclasses import dataclass

from netlingua.schema.ast import SchemaPath
from netlingua.state.changeset import ChangeOp, ChangeSet, DeviceChange

CLOS_DEVICES = ("S0", "S1", "L0", "L1")
CLOS_PORTS = ("Ethernet0", "Ethernet4", "Ethernet8", "Ethernet12")

_INTERFACE_LIST = ["sonic-interface", "INTERFACE", "INTERFACE_LIST"]
_IPPREFIX_LIST = ["sonic-interface", "INTERFACE", "INTERFACE_IPPREFIX_LIST"]
_BGP_LIST = ["sonic-bgp", "BGP_NEIGHBOR", "BGP_NEIGHBOR_LIST"]


@dataclass(frozen=True)
class Mutation:
    name: str
    family: str
    change_set: ChangeSet


def _interface_cs(device: str, port: str, prefix: str) -> ChangeSet:
    return ChangeSet(entries=[DeviceChange(device=device, config=[
        ChangeOp("append", SchemaPath.from_wire(_INTERFACE_LIST), {"name": port}),
        ChangeOp("append", SchemaPath.from_wire(_IPPREFIX_LIST),
                 {"name": port, "ip-prefix": prefix}),
    ])])


def _bgp_cs(device: str, neighbor: str, asn: str) -> ChangeSet:
    return ChangeSet(entries=[DeviceChange(device=device, config=[
        ChangeOp("append", SchemaPath.from_wire(_BGP_LIST),
                 {"neighbor": neighbor, "asn": asn, "name": f"peer-of-{device}"}),
    ])])


def clean_corpus() -> list[ChangeSet]:
    """20 change sets that pass validate_after_apply on the Clos fixture."""
    corpus = []
    for d_index, device in enumerate(CLOS_DEVICES):
        for p_index, port in enumerate(CLOS_PORTS):
            if device == "S0" and port == "Ethernet8":
                # Ethernet8 on S0 is already routed in the fixture; reuse it
                # with just a fresh prefix to stay clean.
                corpus.append(ChangeSet(entries=[DeviceChange(device=device, config=[
                    ChangeOp("append", SchemaPath.from_wire(_IPPREFIX_LIST),
                             {"name": port, "ip-prefix": f"10.9.{d_index}.{4 * p_index}/30"}),
                ])]))
                continue
            corpus.append(_interface_cs(device, port, f"10.9.{d_index}.{4 * p_index}/30"))
    for d_index, device in enumerate(CLOS_DEVICES):
        corpus.append(_bgp_cs(device, f"10.8.0.{d_index + 1}", "65000"))
    return corpus


def _clone_ops(cs: ChangeSet) -> list[tuple[str, list[ChangeOp]]]:
    return [(entry.device, list(entry.config)) for entry in cs.entries]


def _rebuild(parts: list[tuple[str, list[ChangeOp]]]) -> ChangeSet:
    return ChangeSet(entries=[DeviceChange(device=d, config=ops) for d, ops in parts])


_KEY_LEAVES = {
    "INTERFACE_LIST": ("name",),
    "INTERFACE_IPPREFIX_LIST": ("name", "ip-prefix"),
    "BGP_NEIGHBOR_LIST": ("neighbor",),
    "ACL_TABLE_LIST": ("table_name",),
    "ACL_RULE_LIST": ("table_name", "rule_name"),
}


def delete_key_field(cs: ChangeSet) -> ChangeSet:
    """Drop one key leaf from the last op's value."""
    parts = _clone_ops(cs)
    device, ops = parts[-1]
    op = ops[-1]
    value = dict(op.value)
    keys = _KEY_LEAVES.get(op.path.names[-1], tuple(sorted(value)))
    value.pop(keys[0])
    ops[-1] = ChangeOp(op.action, op.path, value)
    return _rebuild(parts)


def corrupt_ip_prefix(cs: ChangeSet) -> ChangeSet:
    """Turn a valid ip-prefix into one with length 33 (or break another leaf's type)."""
    parts = _clone_ops(cs)
    device, ops = parts[-1]
    for index, op in enumerate(ops):
        if "ip-prefix" in op.value:
            value = dict(op.value)
            value["ip-prefix"] = str(value["ip-prefix"]).rsplit("/", 1)[0] + "/33"
            ops[index] = ChangeOp(op.action, op.path, value)
            return _rebuild(parts)
    # No prefix leaf: corrupt an integer-range leaf instead.
    op = ops[-1]
    value = dict(op.value)
    if "asn" in value:
        value["asn"] = "0"
    ops[-1] = ChangeOp(op.action, op.path, value)
    return _rebuild(parts)


def retarget_path_segment(cs: ChangeSet) -> ChangeSet:
    """Misspell the final path segment of the first op."""
    parts = _clone_ops(cs)
    device, ops = parts[0]
    op = ops[0]
    segments = list(op.path.segments)
    prefix, name = segments[-1]
    segments[-1] = (prefix, name + "X")
    ops[0] = ChangeOp(op.action, SchemaPath(tuple(segments)), op.value)
    return _rebuild(parts)


def orphan_leafref(cs: ChangeSet) -> ChangeSet:
    """Point a leafref leaf at a name that exists nowhere in the referenced list."""
    parts = _clone_ops(cs)
    device, ops = parts[-1]
    for index, op in enumerate(ops):
        if "name" in op.value and op.path.names[-1] in ("INTERFACE_LIST",
                                                        "INTERFACE_IPPREFIX_LIST"):
            value = dict(op.value)
            value["name"] = "Ethernet400"
            ops[index] = ChangeOp(op.action, op.path, value)
            return _rebuild(parts)
    # BGP change sets have no leafref; orphan the ACL rule table reference instead.
    ops.append(ChangeOp("append",
                        SchemaPath.from_wire(["sonic-acl", "ACL_RULE", "ACL_RULE_LIST"]),
                        {"table_name": "NO_SUCH_TABLE", "rule_name": "RULE_1",
                         "priority": "10", "packet_action": "DROP"}))
    return _rebuild(parts)


def duplicate_key(cs: ChangeSet) -> ChangeSet:
    """Repeat the final append so the second insert collides."""
    parts = _clone_ops(cs)
    device, ops = parts[-1]
    appends = [op for op in ops if op.action == "append"]
    ops.append(appends[-1])
    return _rebuild(parts)


FAMILIES = {
    "delete-key-field": delete_key_field,
    "corrupt-ip-prefix": corrupt_ip_prefix,
    "retarget-path-segment": retarget_path_segment,
    "orphan-leafref": orphan_leafref,
    "duplicate-key": duplicate_key,
}


def build_kit() -> list[Mutation]:
    """The bundled kit: each family applied to 8 corpus members (40 mutations)."""
    corpus = clean_corpus()
    kit = []
    for family_index, (family, mutate) in enumerate(sorted(FAMILIES.items())):
        for slot in range(8):
            base = corpus[(family_index * 3 + slot * 2) % len(corpus)]
            kit.append(Mutation(name=f"{family}-{slot}", family=family,
                                change_set=mutate(base)))
    return kit
