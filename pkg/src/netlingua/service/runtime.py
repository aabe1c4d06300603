"""Service runtime: fixtures, the shared state store, and session registry.

The network state is a single-writer store of immutable snapshots: session
deployment swaps in the new snapshot (and re-ingests memory), while any
number of readers keep using the snapshot they hold.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from netlingua.agent.backends import LiveLLMBackend, MockBackend, MockScriptEntry
from netlingua.agent.loop import run_until_blocked, save_transcript, start_session, submit_user_reply
from netlingua.agent.session import CONFIRM, REJECT, AgentConfig, ConversationSession
from netlingua.errors import NetLinguaError, UnknownDeviceError
from netlingua.fixtures import load_clos_state, load_schema
from netlingua.memory.embed import OfflineHashEmbedding
from netlingua.memory.store import MemoryStore
from netlingua.service.config import AppConfig
from netlingua.state.ops import apply_change_set, diff_states
from netlingua.state.tree import NetworkState


def describe_op(device: str, op) -> str:
    """One plain-language line per change op (drives the UI diff panel)."""
    last = op.path.names[-1]
    value = op.value
    if last == "INTERFACE_IPPREFIX_LIST":
        if op.action == "append":
            return f"{device}: add IP {value.get('ip-prefix')} to {value.get('name')}"
        return f"{device}: remove IP {value.get('ip-prefix')} from {value.get('name')}"
    if last == "INTERFACE_LIST":
        verb = "enable" if op.action == "append" else "disable"
        return f"{device}: {verb} routing on {value.get('name')}"
    if last == "BGP_NEIGHBOR_LIST":
        if op.action == "append":
            return (f"{device}: add BGP neighbor {value.get('neighbor')}"
                    f" in AS {value.get('asn')}")
        return f"{device}: remove BGP neighbor {value.get('neighbor')}"
    values = ", ".join(f"{k}={v}" for k, v in sorted(value.items()))
    return f"{device}: {op.action} {last} ({values})"


def change_set_summary(cs) -> list[str]:
    lines = []
    for entry in cs.entries:
        for op in entry.config:
            lines.append(describe_op(entry.device, op))
    return lines


@dataclass
class SessionHandle:
    session: ConversationSession
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceRuntime:
    def __init__(self, config: AppConfig):
        self.config = config
        self.schema = load_schema(config.schema_dir)
        self._state = load_clos_state(self.schema, state_dir=config.state_dir)
        self.memory = MemoryStore(backend=OfflineHashEmbedding(dim=config.embedding_dim))
        self.memory.chunk_and_ingest(self._state, self.schema)
        self.sessions: dict[str, SessionHandle] = {}
        self._state_lock = threading.Lock()
        self.config.sessions_dir.mkdir(parents=True, exist_ok=True)

    # --- state store (single writer) ---

    @property
    def state(self) -> NetworkState:
        return self._state

    def commit_state(self, new_state: NetworkState) -> None:
        with self._state_lock:
            if new_state.revision <= self._state.revision:
                new_state.revision = self._state.revision + 1
            self._state = new_state
            self.memory.ingest_state(new_state, self.schema)

    # --- backends ---

    def make_backend(self):
        kind = self.config.backend_kind
        if kind in ("mock", "replay"):
            script = self.config.backend_script
            if script is None or not Path(script).exists():
                raise NetLinguaError(f"backend script not found: {script}")
            doc = json.loads(Path(script).read_text(encoding="utf-8"))
            entries = [MockScriptEntry(response=r) for r in doc.get("responses", [])]
            return MockBackend(entries=entries, cycle=bool(doc.get("cycle", False)))
        if kind == "live":
            return LiveLLMBackend(endpoint=self.config.live_endpoint,
                                  model=self.config.live_model)
        raise NetLinguaError(f"unsupported backend kind {kind!r}")

    def agent_config(self) -> AgentConfig:
        return AgentConfig(
            llm_backend=self.make_backend(),
            schema=self.schema,
            memory=self.memory,
            max_repair_iterations=self.config.max_repair_iterations,
            max_clarify_rounds=self.config.max_clarify_rounds,
            retrieval_k=self.config.retrieval_k,
            retrieval_mode=self.config.retrieval_mode,
            auto_confirm=self.config.auto_confirm,
        )

    # --- sessions ---

    def create_session(self, query: str) -> ConversationSession:
        session = start_session(query, self._state, self.agent_config())
        handle = SessionHandle(session=session)
        self.sessions[session.session_id] = handle
        with handle.lock:
            run_until_blocked(session)
            self._after_advance(session)
        return session

    def reply(self, session_id: str, reply: str) -> ConversationSession:
        handle = self.sessions.get(session_id)
        if handle is None:
            raise UnknownDeviceError(session_id)  # mapped to 404 by the app layer
        with handle.lock:
            session = handle.session
            submit_user_reply(session, reply)
            if not session.terminal:
                run_until_blocked(session)
            self._after_advance(session)
        return session

    def _after_advance(self, session: ConversationSession) -> None:
        self._persist(session)
        if session.phase == "done" and session.final_state is not None:
            self.commit_state(session.final_state)

    def _persist(self, session: ConversationSession) -> None:
        base = self.config.sessions_dir / session.session_id
        save_transcript(session, base.with_suffix(".jsonl"))
        meta = {"session_id": session.session_id, "phase": session.phase,
                "query": session.query, "failure_cause": session.failure_cause}
        base.with_suffix(".json").write_text(json.dumps(meta, indent=2),
                                             encoding="utf-8")

    def get_session(self, session_id: str) -> Optional[ConversationSession]:
        handle = self.sessions.get(session_id)
        return handle.session if handle else None

    def load_persisted_view(self, session_id: str) -> Optional[dict[str, Any]]:
        """Read-only view for sessions from a previous service run."""
        base = self.config.sessions_dir / session_id
        meta_path = base.with_suffix(".json")
        transcript_path = base.with_suffix(".jsonl")
        if not meta_path.exists() or not transcript_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        turns = [json.loads(line) for line in
                 transcript_path.read_text(encoding="utf-8").splitlines() if line.strip()]
        return {
            "session_id": session_id,
            "phase": meta.get("phase", "done"),
            "read_only": True,
            "transcript": turns,
            "pending_question": None,
            "proposed_change_set": None,
            "report": None,
        }

    # --- views ---

    def session_view(self, session: ConversationSession) -> dict[str, Any]:
        proposed = None
        if session.working_change_set is not None:
            cs = session.working_change_set
            try:
                applied = apply_change_set(session.state, cs, self.schema)
                preview = diff_states(session.state, applied, self.schema)
                diff_lines = change_set_summary(preview)
            except NetLinguaError:
                diff_lines = []
            proposed = {
                "wire": cs.to_wire(),
                "summary": change_set_summary(cs),
                "diff_preview": diff_lines,
            }
        return {
            "session_id": session.session_id,
            "phase": session.phase,
            "read_only": False,
            "transcript": [t.to_wire() for t in session.turns],
            "pending_question": session.pending_question(),
            "proposed_change_set": proposed,
            "report": session.last_report.to_wire() if session.last_report else None,
            "iteration": session.iteration,
            "latency": session.latency.to_wire(),
            "failure_cause": session.failure_cause,
        }


def parse_reply_payload(doc: dict) -> str:
    """Normalize {text}|{confirm}|{reject} bodies into loop reply values."""
    if doc.get("confirm") is True:
        return CONFIRM
    if doc.get("reject") is True:
        text = doc.get("text", "")
        return text if text else REJECT
    text = doc.get("text", "")
    if isinstance(text, str) and text.strip():
        return text.strip()
    raise ValueError("reply must carry text, confirm, or reject")
