"""The change-set IR: ordered per-device append/remove operations.

Wire format (exact): a JSON array of
  {"device": <string>, "config": [{"action": "append"|"remove",
                                   "path": [<string>...],
                                   "value": {<string>: <scalar>...}}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from netlingua.errors import ChangeSetParseError, MalformedDocumentError
from netlingua.schema.ast import SchemaPath

ACTIONS = ("append", "remove")


@dataclass(frozen=True)
class ChangeOp:
    action: str
    path: SchemaPath
    value: dict[str, Any]

    def __post_init__(self) -> None:
        if self.action not in ACTIONS:
            raise MalformedDocumentError(
                f"change action must be one of {ACTIONS}, got {self.action!r}"
            )

    def to_wire(self) -> dict[str, Any]:
        return {"action": self.action, "path": self.path.to_wire(), "value": dict(self.value)}


@dataclass
class DeviceChange:
    device: str
    config: list[ChangeOp] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.device:
            raise MalformedDocumentError("change-set entry has an empty device name")


@dataclass
class ChangeSet:
    """Ordered list of per-device change operations; order is application order."""

    entries: list[DeviceChange] = field(default_factory=list)

    @classmethod
    def from_wire(cls, doc: Any) -> "ChangeSet":
        if not isinstance(doc, list):
            raise ChangeSetParseError(f"change set must be a JSON array, got {type(doc).__name__}")
        entries = []
        for item in doc:
            if not isinstance(item, dict) or "device" not in item or "config" not in item:
                raise ChangeSetParseError(f"bad change-set entry: {item!r}")
            device = item["device"]
            if not isinstance(device, str) or not device:
                raise ChangeSetParseError(f"bad device name: {device!r}")
            config = item["config"]
            if not isinstance(config, list):
                raise ChangeSetParseError(f"'config' for {device} must be a list")
            ops = []
            for raw in config:
                if not isinstance(raw, dict):
                    raise ChangeSetParseError(f"bad change op: {raw!r}")
                missing = {"action", "path", "value"} - set(raw)
                if missing:
                    raise ChangeSetParseError(f"change op missing {sorted(missing)}: {raw!r}")
                if raw["action"] not in ACTIONS:
                    raise ChangeSetParseError(f"bad action {raw['action']!r}")
                if not isinstance(raw["value"], dict):
                    raise ChangeSetParseError(f"'value' must be an object: {raw!r}")
                try:
                    path = SchemaPath.from_wire(raw["path"])
                except MalformedDocumentError as exc:
                    raise ChangeSetParseError(str(exc))
                ops.append(ChangeOp(action=raw["action"], path=path, value=dict(raw["value"])))
            entries.append(DeviceChange(device=device, config=ops))
        return cls(entries=entries)

    @classmethod
    def from_json(cls, text: str) -> "ChangeSet":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ChangeSetParseError(f"change set is not valid JSON: {exc}")
        return cls.from_wire(doc)

    def to_wire(self) -> list[dict[str, Any]]:
        return [
            {"device": entry.device, "config": [op.to_wire() for op in entry.config]}
            for entry in self.entries
        ]

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_wire(), indent=indent)

    def op_count(self) -> int:
        return sum(len(entry.config) for entry in self.entries)

    def devices(self) -> list[str]:
        return [entry.device for entry in self.entries]
