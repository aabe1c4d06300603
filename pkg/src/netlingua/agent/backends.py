"""LLM backend contract and implementations.

A backend takes (system prompt, user prompt, prior turns) and returns
text. Three implementations: a scripted mock (keyed by call index, with
optional pattern guards), a replay backend fed from recorded transcripts,
and a live HTTP chat-completions client (key via LLM_API_KEY).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

from netlingua.errors import BackendUnavailableError


class LLMBackend(Protocol):
    def complete(self, system: str, user: str,
                 history: Sequence[tuple[str, str]] = ()) -> str: ...


@dataclass
class MockScriptEntry:
    response: str
    expect: Optional[str] = None  # regex guard over system+user prompt


@dataclass
class MockBackend:
    """Deterministic scripted backend.

    entries are served by call index; with cycle=True the script repeats
    forever (always-failing loop tests). A guard regex that fails to match
    the prompt indicates a mis-scripted test and raises immediately.
    """

    entries: list[MockScriptEntry] = field(default_factory=list)
    cycle: bool = False
    calls: int = 0
    prompts: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def from_responses(cls, responses: Sequence[str], cycle: bool = False) -> "MockBackend":
        return cls(entries=[MockScriptEntry(response=r) for r in responses], cycle=cycle)

    def complete(self, system: str, user: str,
                 history: Sequence[tuple[str, str]] = ()) -> str:
        index = self.calls
        if self.cycle and self.entries:
            index = index % len(self.entries)
        if index >= len(self.entries):
            raise BackendUnavailableError(
                f"mock script exhausted after {len(self.entries)} calls"
            )
        entry = self.entries[index]
        if entry.expect is not None and not re.search(entry.expect, system + "\n" + user,
                                                      re.DOTALL):
            raise RuntimeError(
                f"mock guard {entry.expect!r} did not match prompt at call {self.calls}"
            )
        self.calls += 1
        self.prompts.append((system, user))
        return entry.response


@dataclass
class ReplayBackend:
    """Serves recorded model outputs in order (transcript replay)."""

    outputs: list[str]
    calls: int = 0

    def complete(self, system: str, user: str,
                 history: Sequence[tuple[str, str]] = ()) -> str:
        if self.calls >= len(self.outputs):
            raise BackendUnavailableError("replay transcript exhausted")
        output = self.outputs[self.calls]
        self.calls += 1
        return output


@dataclass
class LiveLLMBackend:
    """HTTP chat-completions client; reads its key from LLM_API_KEY."""

    endpoint: str
    model: str
    temperature: float = 0.0
    timeout: float = 120.0

    def complete(self, system: str, user: str,
                 history: Sequence[tuple[str, str]] = ()) -> str:
        import requests

        key = os.environ.get("LLM_API_KEY", "")
        if not key:
            raise BackendUnavailableError("LLM_API_KEY is not set")
        messages = [{"role": "system", "content": system}]
        for prior_user, prior_assistant in history:
            messages.append({"role": "user", "content": prior_user})
            messages.append({"role": "assistant", "content": prior_assistant})
        messages.append({"role": "user", "content": user})
        try:
            response = requests.post(
                self.endpoint,
                json={"model": self.model, "messages": messages,
                      "temperature": self.temperature},
                headers={"Authorization": f"Bearer {key}",
                         "Content-Type": "application/json"},
                timeout=self.timeout,
            )
            response.raise_for_status()
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except BackendUnavailableError:
            raise
        except Exception as exc:
            raise BackendUnavailableError(f"LLM backend failed: {exc}")
