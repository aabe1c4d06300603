"""Conversation sessions: dialogue state machine, transcript, latency ledger."""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from netlingua.memory.store import MemoryStore
from netlingua.schema.resolver import ResolvedSchema
from netlingua.state.changeset import ChangeSet
from netlingua.state.tree import NetworkState
from netlingua.validation.report import VerificationReport

PHASES = (
    "awaiting-query", "retrieving", "clarifying", "generating", "verifying",
    "awaiting-confirmation", "deploying", "done", "failed",
)

ACTIONS = (
    "Query", "RetrieveState", "RetrieveDocs", "AskUser", "UserReply", "ProposePlan",
    "Generate", "Verify", "RepairGenerate", "ConfirmRequest", "Confirm", "Reject",
    "Deploy",
)

CONFIRM = "<confirm>"
REJECT = "<reject>"


@dataclass
class TurnRecord:
    actor: str
    action: str
    payload: Any  # str for model outputs (verbatim), dict for structured turns
    wall_time: float = 0.0
    timestamp: float = field(default_factory=time.time)

    def to_wire(self) -> dict:
        return {
            "actor": self.actor,
            "action": self.action,
            "payload": self.payload,
            "wall_time": self.wall_time,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_wire(cls, doc: dict) -> "TurnRecord":
        return cls(actor=doc["actor"], action=doc["action"], payload=doc["payload"],
                   wall_time=doc.get("wall_time", 0.0), timestamp=doc.get("timestamp", 0.0))


@dataclass
class LatencyBreakdown:
    retrieval: float = 0.0
    generation: float = 0.0
    verification: float = 0.0
    repair: list[float] = field(default_factory=list)  # one slot per repair iteration
    user_wait: float = 0.0

    @property
    def total(self) -> float:
        return (self.retrieval + self.generation + self.verification
                + sum(self.repair) + self.user_wait)

    def to_wire(self) -> dict:
        return {
            "retrieval": self.retrieval,
            "generation": self.generation,
            "verification": self.verification,
            "repair": list(self.repair),
            "user_wait": self.user_wait,
            "total": self.total,
        }


@dataclass
class AgentConfig:
    """Wiring plus knobs for one session."""

    llm_backend: Any = None
    schema: Optional[ResolvedSchema] = None
    memory: Optional[MemoryStore] = None
    max_repair_iterations: int = 8
    max_clarify_rounds: int = 3
    retrieval_k: int = 8
    retrieval_mode: str = "nl"  # nl | raw
    auto_confirm: bool = False
    retrieval_enabled: bool = True
    repair_enabled: bool = True

    def __post_init__(self) -> None:
        if self.max_repair_iterations < 1:
            raise ValueError("max_repair_iterations must be >= 1")
        if self.retrieval_mode not in ("nl", "raw"):
            raise ValueError("retrieval_mode must be 'nl' or 'raw'")


@dataclass
class ConversationSession:
    session_id: str
    query: str
    state: NetworkState
    config: AgentConfig
    phase: str = "retrieving"
    turns: list[TurnRecord] = field(default_factory=list)
    working_change_set: Optional[ChangeSet] = None
    iteration: int = 0
    latency: LatencyBreakdown = field(default_factory=LatencyBreakdown)
    last_report: Optional[VerificationReport] = None
    final_state: Optional[NetworkState] = None
    failure_cause: str = ""

    # loop-internal bookkeeping
    awaiting_user: bool = False
    awaiting_since: float = 0.0
    pushback_rounds: int = 0
    user_feedback: list[str] = field(default_factory=list)
    retrieved_state_text: str = ""
    retrieved_docs_text: str = ""
    repair_docs_text: str = ""
    last_model_output: str = ""
    pending_repair: bool = False
    repair_docs_fetched: bool = False
    _retrieve_substep: int = 0

    @classmethod
    def new(cls, query: str, state: NetworkState, config: AgentConfig) -> "ConversationSession":
        return cls(session_id=uuid.uuid4().hex, query=query, state=state, config=config)

    @property
    def terminal(self) -> bool:
        return self.phase in ("done", "failed")

    @property
    def needs_user_input(self) -> bool:
        return self.awaiting_user and not self.terminal

    def record(self, actor: str, action: str, payload: Any, wall_time: float) -> TurnRecord:
        turn = TurnRecord(actor=actor, action=action, payload=payload, wall_time=wall_time)
        self.turns.append(turn)
        return turn

    def effective_request(self) -> str:
        """The user request plus any clarification/rejection feedback."""
        if not self.user_feedback:
            return self.query
        feedback = "\n".join(f"User feedback: {text}" for text in self.user_feedback)
        return f"{self.query}\n{feedback}"

    def pending_question(self) -> Optional[str]:
        if not self.needs_user_input:
            return None
        for turn in reversed(self.turns):
            if turn.action in ("ProposePlan", "AskUser", "ConfirmRequest"):
                return turn.payload if isinstance(turn.payload, str) else str(turn.payload)
        return None
