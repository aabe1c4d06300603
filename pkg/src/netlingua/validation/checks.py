"""Schema verification of change sets and instance trees.

All checks report findings instead of raising; reports are deterministic
(byte-identical for identical inputs) and ordered by (device, path, rule)
so repair prompts stay stable across runs.
"""

from __future__ import annotations

from typing import Any, Optional

from netlingua.errors import (
    AmbiguousPathError,
    AppendDuplicateKeyError,
    ChangeSetError,
    KeyLeafMissingError,
    PathNotFoundError,
    RemoveNotFoundError,
    UnknownDeviceError,
)
from netlingua.schema.ast import SchemaNode, SchemaPath, TypeSpec
from netlingua.schema.mustexpr import Current, Literal, MustExpr, PathExpr
from netlingua.schema.resolver import ResolvedSchema
from netlingua.state.changeset import ChangeSet
from netlingua.state.ops import InvalidTargetError, apply_change_set
from netlingua.state.tree import DeviceState, NetworkState
from netlingua.validation.report import Finding, VerificationReport


def validate_change_set(cs: ChangeSet, schema: ResolvedSchema,
                        iteration: int = 0) -> VerificationReport:
    """Structural and type checks on a change set, without any instance state."""
    findings: list[Finding] = []
    for entry in cs.entries:
        for op in entry.config:
            findings.extend(_check_op(entry.device, op, schema))
    return VerificationReport(findings=findings, iteration=iteration)


def _check_op(device: str, op, schema: ResolvedSchema) -> list[Finding]:
    try:
        node = schema.find_node(op.path)
    except (PathNotFoundError, AmbiguousPathError) as exc:
        return [Finding("error", device, op.path, "unknown-path", str(exc))]
    if node.kind in ("leaf", "leaf-list"):
        return [Finding("error", device, op.path, "syntax",
                        f"'{op.action}' cannot target a {node.kind} node")]
    findings: list[Finding] = []
    if node.kind == "list":
        for key in node.key_leaves:
            if key not in op.value:
                findings.append(Finding("error", device, op.path, "key-missing",
                                        f"value is missing key leaf '{key}'"))
    for field_name, field_value in sorted(op.value.items()):
        child = node.child(field_name)
        if child is None or child.kind not in ("leaf", "leaf-list"):
            findings.append(Finding("error", device, op.path, "unknown-path",
                                    f"'{field_name}' is not a leaf of {node.name}"))
            continue
        spec = _effective_type(child, schema)
        if spec is None:
            continue
        ok, reason = spec.accepts(field_value)
        if not ok:
            findings.append(Finding("error", device, op.path, "type-mismatch",
                                    f"leaf '{field_name}': {reason}"))
    return findings


def _effective_type(leaf: SchemaNode, schema: ResolvedSchema) -> Optional[TypeSpec]:
    """Follow leafrefs to the referenced leaf's concrete type for value checks."""
    spec = leaf.type_spec
    seen = 0
    while isinstance(spec, TypeSpec) and spec.base == "leafref" and seen < 8:
        try:
            target = schema.find_node(spec.leafref_path, context_module=leaf.module)
        except (PathNotFoundError, AmbiguousPathError):
            return None
        spec = target.type_spec
        seen += 1
    return spec if isinstance(spec, TypeSpec) else None


# --- instance validation ---


class _Frame:
    """One step of the schema-aligned instance walk (for must evaluation)."""

    __slots__ = ("node", "data", "parent")

    def __init__(self, node: Optional[SchemaNode], data: Any, parent: Optional["_Frame"]):
        self.node = node
        self.data = data
        self.parent = parent


def validate_instance(state: NetworkState, schema: ResolvedSchema,
                      iteration: int = 0) -> VerificationReport:
    """Leafref reachability, must conditions, key and type conformance."""
    findings: list[Finding] = []
    for device_name in sorted(state.devices):
        device = state.devices[device_name]
        findings.extend(_validate_device(device, schema))
        for table in sorted(device.unknown_tables):
            findings.append(Finding(
                "warning", device_name, None, "unknown-path",
                f"unknown top-level table '{table}' retained verbatim and excluded from validation",
            ))
    return VerificationReport(findings=findings, iteration=iteration)


def _validate_device(device: DeviceState, schema: ResolvedSchema) -> list[Finding]:
    findings: list[Finding] = []
    root_frame = _Frame(None, device.tree, None)
    for root_name in sorted(device.tree):
        candidates = [
            node for module in schema.modules.values()
            for node in module.root_nodes if node.name == root_name
        ]
        if not candidates:
            continue
        node = candidates[0]
        path = SchemaPath(((None, root_name),))
        frame = _Frame(node, device.tree[root_name], root_frame)
        _walk(device, node, device.tree[root_name], path, frame, schema, findings)
    return findings


def _walk(device: DeviceState, node: SchemaNode, data: Any, path: SchemaPath,
          frame: _Frame, schema: ResolvedSchema, findings: list[Finding]) -> None:
    if node.kind == "container":
        _check_musts(device, node, frame, path, findings)
        if not isinstance(data, dict):
            findings.append(Finding("error", device.device_name, path, "syntax",
                                    f"container '{node.name}' holds a non-object value"))
            return
        for child_name in sorted(data):
            child = node.child(child_name)
            if child is None:
                findings.append(Finding("warning", device.device_name, path, "unknown-path",
                                        f"'{child_name}' is not defined under {node.name}"))
                continue
            child_path = SchemaPath(path.segments + ((None, child_name),))
            if child.kind == "list":
                for key in sorted(data[child_name]):
                    entry = data[child_name][key]
                    entry_frame = _Frame(child, entry, frame)
                    _walk_entry(device, child, entry, child_path, entry_frame,
                                schema, findings)
            elif child.kind == "container":
                child_frame = _Frame(child, data[child_name], frame)
                _walk(device, child, data[child_name], child_path, child_frame,
                      schema, findings)
            else:
                leaf_frame = _Frame(child, data[child_name], frame)
                _check_leaf(device, child, data[child_name], child_path, leaf_frame,
                            schema, findings)


def _walk_entry(device: DeviceState, node: SchemaNode, entry: dict, path: SchemaPath,
                frame: _Frame, schema: ResolvedSchema, findings: list[Finding]) -> None:
    _check_musts(device, node, frame, path, findings)
    for key in node.key_leaves:
        if key not in entry:
            findings.append(Finding("error", device.device_name, path, "key-missing",
                                    f"list entry is missing key leaf '{key}'"))
    for field_name in sorted(entry):
        child = node.child(field_name)
        if child is None:
            findings.append(Finding("warning", device.device_name, path, "unknown-path",
                                    f"'{field_name}' is not a leaf of {node.name}"))
            continue
        if child.kind in ("leaf", "leaf-list"):
            leaf_frame = _Frame(child, entry[field_name], frame)
            leaf_path = SchemaPath(path.segments + ((None, field_name),))
            _check_leaf(device, child, entry[field_name], leaf_path, leaf_frame,
                        schema, findings)
        elif child.kind == "container":
            child_frame = _Frame(child, entry[field_name], frame)
            child_path = SchemaPath(path.segments + ((None, field_name),))
            _walk(device, child, entry[field_name], child_path, child_frame,
                  schema, findings)
        elif child.kind == "list":
            child_path = SchemaPath(path.segments + ((None, field_name),))
            for key in sorted(entry[field_name]):
                sub = entry[field_name][key]
                sub_frame = _Frame(child, sub, frame)
                _walk_entry(device, child, sub, child_path, sub_frame, schema, findings)


def _check_leaf(device: DeviceState, leaf: SchemaNode, value: Any, path: SchemaPath,
                frame: _Frame, schema: ResolvedSchema, findings: list[Finding]) -> None:
    spec = leaf.type_spec
    if isinstance(spec, TypeSpec):
        if spec.base == "leafref":
            target_values = _leafref_values(device, spec, schema, leaf.module)
            if str(value) not in target_values:
                findings.append(Finding(
                    "error", device.device_name, path, "leafref-unsatisfied",
                    f"leaf '{leaf.name}' value '{value}' not found at {spec.leafref_path}",
                ))
            concrete = _effective_type(leaf, schema)
            if concrete is not None:
                ok, reason = concrete.accepts(value)
                if not ok:
                    findings.append(Finding("error", device.device_name, path,
                                            "type-mismatch", f"leaf '{leaf.name}': {reason}"))
        else:
            ok, reason = spec.accepts(value)
            if not ok:
                findings.append(Finding("error", device.device_name, path,
                                        "type-mismatch", f"leaf '{leaf.name}': {reason}"))
    _check_musts(device, leaf, frame, path, findings)


def _leafref_values(device: DeviceState, spec: TypeSpec, schema: ResolvedSchema,
                    context_module: str) -> set[str]:
    """All values present at the leafref target path within this device."""
    assert spec.leafref_path is not None
    try:
        schema.find_node(spec.leafref_path, context_module=context_module)
    except (PathNotFoundError, AmbiguousPathError):
        return set()
    names = spec.leafref_path.names
    frontier: list[Any] = [device.tree]
    for index, name in enumerate(names):
        next_frontier: list[Any] = []
        last = index == len(names) - 1
        for data in frontier:
            if not isinstance(data, dict):
                continue
            if last:
                # The final segment names a leaf inside list entries or a container.
                for value in data.values():
                    if isinstance(value, dict) and name in value:
                        next_frontier.append(value[name])
                if name in data and not isinstance(data[name], dict):
                    next_frontier.append(data[name])
            elif name in data:
                next_frontier.append(data[name])
        frontier = next_frontier
    # One level of indirection: list collections are dicts keyed by tuple.
    values = set()
    for item in frontier:
        if isinstance(item, dict):
            values.update(str(v) for v in item.values() if not isinstance(v, (dict, list)))
        elif not isinstance(item, list):
            values.add(str(item))
    return values


def _check_musts(device: DeviceState, node: SchemaNode, frame: _Frame,
                 path: SchemaPath, findings: list[Finding]) -> None:
    for must in node.must_exprs:
        if not _eval_must(must, frame):
            findings.append(Finding(
                "error", device.device_name, path, "must-violation",
                f"Must condition ({must.text}) not satisfied",
            ))


def _eval_must(must: MustExpr, context: _Frame) -> bool:
    left = _eval_operand(must.left, context)
    right = _eval_operand(must.right, context)
    return any(str(l) == str(r) for l in left for r in right)


def _eval_operand(operand, context: _Frame) -> list[Any]:
    if isinstance(operand, Current):
        return [context.data] if not isinstance(context.data, dict) else []
    if isinstance(operand, Literal):
        return [operand.value]
    assert isinstance(operand, PathExpr)
    return _eval_path(operand, context)


def _eval_path(path: PathExpr, context: _Frame) -> list[Any]:
    frame: Optional[_Frame] = context
    for _ in range(path.ups):
        if frame is None:
            return []
        frame = frame.parent
    if frame is None:
        return []
    frames = [frame]
    for step in path.steps:
        next_frames: list[_Frame] = []
        for current in frames:
            data = current.data
            if not isinstance(data, dict):
                continue
            child_node = current.node.child(step.name) if current.node else None
            if child_node is None and step.name not in data:
                continue
            if child_node is not None and child_node.kind == "list":
                entries = data.get(step.name, {})
                for key in sorted(entries):
                    entry = entries[key]
                    if step.predicate_leaf is not None:
                        wanted = _predicate_value(step, context)
                        if wanted is None:
                            continue
                        if str(entry.get(step.predicate_leaf)) != str(wanted):
                            continue
                    next_frames.append(_Frame(child_node, entry, current))
            elif step.name in data:
                next_frames.append(_Frame(child_node, data[step.name], current))
        frames = next_frames
    return [f.data for f in frames if not isinstance(f.data, dict)]


def _predicate_value(step, context: _Frame) -> Any:
    if isinstance(step.predicate_value, Current):
        return context.data if not isinstance(context.data, dict) else None
    if isinstance(step.predicate_value, Literal):
        return step.predicate_value.value
    return None


def validate_after_apply(state: NetworkState, cs: ChangeSet, schema: ResolvedSchema,
                         iteration: int = 0) -> VerificationReport:
    """Change-set checks, then instance checks on the hypothetically applied state.

    Application errors surface as findings (duplicate-key, unknown-path,
    key-missing), never as exceptions.
    """
    cs_report = validate_change_set(cs, schema, iteration=iteration)
    if not cs_report.passed:
        return cs_report
    try:
        applied = apply_change_set(state, cs, schema)
    except AppendDuplicateKeyError as exc:
        finding = Finding("error", _device_of(cs, exc), None, "duplicate-key", str(exc))
    except KeyLeafMissingError as exc:
        finding = Finding("error", _device_of(cs, exc), None, "key-missing", str(exc))
    except (RemoveNotFoundError, UnknownDeviceError, PathNotFoundError) as exc:
        finding = Finding("error", _device_of(cs, exc), None, "unknown-path", str(exc))
    except (InvalidTargetError, ChangeSetError) as exc:
        finding = Finding("error", _device_of(cs, exc), None, "syntax", str(exc))
    else:
        report = validate_instance(applied, schema, iteration=iteration)
        merged = list(dict.fromkeys(cs_report.findings + report.findings))
        return VerificationReport(findings=merged, iteration=iteration)
    merged = list(dict.fromkeys(cs_report.findings + [finding]))
    return VerificationReport(findings=merged, iteration=iteration)


def _device_of(cs: ChangeSet, exc: Exception) -> str:
    device = getattr(exc, "device", None)
    if device:
        return device
    return cs.entries[0].device if cs.entries else "(unknown)"
