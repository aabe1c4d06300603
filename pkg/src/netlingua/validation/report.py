"""Verification reports: findings, status, and the error-log rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from netlingua.schema.ast import SchemaPath

RULES = (
    "syntax",
    "unknown-path",
    "key-missing",
    "type-mismatch",
    "leafref-unsatisfied",
    "must-violation",
    "duplicate-key",
)


@dataclass(frozen=True)
class Finding:
    severity: str  # error | warning
    device: str
    path: Optional[SchemaPath]
    rule: str
    message: str

    def __post_init__(self) -> None:
        assert self.severity in ("error", "warning")
        assert self.rule in RULES

    def sort_key(self) -> tuple:
        return (self.device, str(self.path) if self.path else "", self.rule, self.message)

    def to_wire(self) -> dict:
        return {
            "severity": self.severity,
            "device": self.device,
            "path": self.path.to_wire() if self.path else None,
            "rule": self.rule,
            "message": self.message,
        }


@dataclass
class VerificationReport:
    findings: list[Finding] = field(default_factory=list)
    iteration: int = 0

    def __post_init__(self) -> None:
        self.findings = sorted(self.findings, key=Finding.sort_key)

    @property
    def status(self) -> str:
        return "fail" if any(f.severity == "error" for f in self.findings) else "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def to_wire(self) -> dict:
        return {
            "status": self.status,
            "iteration": self.iteration,
            "findings": [f.to_wire() for f in self.findings],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_wire(), indent=2)

    def to_error_log(self) -> str:
        """Plain-text error log consumed verbatim by the repair prompt."""
        if not self.findings:
            return "(no findings)"
        lines = []
        for f in self.findings:
            location = f" path={f.path}" if f.path else ""
            lines.append(f"[{f.severity}] device={f.device}{location} rule={f.rule}: {f.message}")
        return "\n".join(lines)
