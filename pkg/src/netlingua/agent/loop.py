"""The core decision loop: retrieve, clarify, generate, verify, repair,
confirm, deploy.

step() advances a session by exactly one agent action (one TurnRecord).
Verification failures feed the repair loop: the verifier's error text is
re-embedded as the retrieval query for fresh IR documentation, then the
repair prompt regenerates the change set. The loop is bounded by
max_repair_iterations; the verifier therefore runs at most budget + 1
times per session.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Optional, Union

from netlingua.agent.extract import extract_change_set
from netlingua.agent.prompts import build_generation_prompt, build_plan_prompt, build_repair_prompt
from netlingua.agent.session import (
    CONFIRM,
    REJECT,
    AgentConfig,
    ConversationSession,
    TurnRecord,
)
from netlingua.errors import (
    BackendUnavailableError,
    ChangeSetError,
    ChangeSetParseError,
    MultipleBlocksError,
    NetLinguaError,
    NoFencedBlockError,
    WrongPhaseError,
)
from netlingua.state.ops import apply_change_set
from netlingua.state.tree import NetworkState
from netlingua.validation.checks import validate_after_apply
from netlingua.validation.report import Finding, VerificationReport

_RETRIEVAL_DISABLED_TEXT = "(retrieval disabled for this run)"


def start_session(query: str, state: NetworkState, config: AgentConfig) -> ConversationSession:
    """Create a session in phase `retrieving` with the user Query recorded."""
    if not query or not query.strip():
        raise ValueError("query must be non-empty")
    session = ConversationSession.new(query=query.strip(), state=state, config=config)
    session.record("user", "Query", session.query, 0.0)
    return session


def step(session: ConversationSession) -> ConversationSession:
    """Advance the session by one agent action."""
    if session.terminal:
        raise WrongPhaseError(session.phase, "an active phase")
    if session.needs_user_input:
        raise WrongPhaseError(session.phase, "submit_user_reply (awaiting user input)")
    started = time.perf_counter()
    try:
        _dispatch(session, started)
    except BackendUnavailableError as exc:
        session.failure_cause = str(exc)
        session.phase = "failed"
    return session


def _elapsed(started: float) -> float:
    return time.perf_counter() - started


def _dispatch(session: ConversationSession, started: float) -> None:
    phase = session.phase
    if phase == "retrieving":
        _step_retrieving(session, started)
    elif phase == "clarifying":
        _step_clarifying(session, started)
    elif phase == "generating":
        _step_generating(session, started)
    elif phase == "verifying":
        _step_verifying(session, started)
    elif phase == "awaiting-confirmation":
        session.record("agent", "ConfirmRequest",
                       _proposal_summary(session), _elapsed(started))
        session.awaiting_user = True
        session.awaiting_since = time.perf_counter()
    elif phase == "deploying":
        _step_deploying(session, started)
    else:
        raise WrongPhaseError(phase, "a steppable phase")


def _retrieve(session: ConversationSession, store_name: str, query: str) -> tuple[str, list[str]]:
    config = session.config
    if not config.retrieval_enabled or config.memory is None:
        return _RETRIEVAL_DISABLED_TEXT, []
    hits = config.memory.query_top_k(query, store_name, k=config.retrieval_k,
                                     mode=config.retrieval_mode)
    text = "\n\n".join(hit.document.text for hit in hits)
    return text, [hit.document.doc_id for hit in hits]


def _step_retrieving(session: ConversationSession, started: float) -> None:
    if session._retrieve_substep == 0:
        text, doc_ids = _retrieve(session, "state", session.effective_request())
        session.retrieved_state_text = text
        duration = _elapsed(started)
        session.latency.retrieval += duration
        session.record("memory", "RetrieveState",
                       {"query": session.effective_request(), "doc_ids": doc_ids,
                        "text": text}, duration)
        session._retrieve_substep = 1
        return
    text, doc_ids = _retrieve(session, "ir-doc", session.effective_request())
    session.retrieved_docs_text = text
    duration = _elapsed(started)
    session.latency.retrieval += duration
    session.record("memory", "RetrieveDocs",
                   {"query": session.effective_request(), "doc_ids": doc_ids,
                    "text": text}, duration)
    session._retrieve_substep = 0
    session.phase = "generating" if session.config.auto_confirm else "clarifying"


def _step_clarifying(session: ConversationSession, started: float) -> None:
    prompt = build_plan_prompt(session.retrieved_state_text or _RETRIEVAL_DISABLED_TEXT,
                               session.effective_request())
    output = session.config.llm_backend.complete(prompt.system, prompt.user)
    duration = _elapsed(started)
    session.latency.generation += duration
    session.record("agent", "ProposePlan", output, duration)
    session.awaiting_user = True
    session.awaiting_since = time.perf_counter()


def _step_generating(session: ConversationSession, started: float) -> None:
    config = session.config
    if session.pending_repair and not session.repair_docs_fetched:
        error_text = session.last_report.to_error_log() if session.last_report else ""
        text, doc_ids = _retrieve(session, "ir-doc", error_text or "verification error")
        session.repair_docs_text = text
        duration = _elapsed(started)
        _account_repair(session, duration)
        session.record("memory", "RetrieveDocs",
                       {"query": error_text, "doc_ids": doc_ids, "text": text}, duration)
        session.repair_docs_fetched = True
        return
    if session.pending_repair:
        error_log = session.last_report.to_error_log() if session.last_report else ""
        prompt = build_repair_prompt(
            faulty_config=session.last_model_output or "(no previous output)",
            error_logs=error_log,
            yang_modules=session.repair_docs_text or _RETRIEVAL_DISABLED_TEXT,
        )
        output = config.llm_backend.complete(prompt.system, prompt.user)
        duration = _elapsed(started)
        _account_repair(session, duration)
        session.record("generator", "RepairGenerate", output, duration)
    else:
        prompt = build_generation_prompt(
            network_state=session.retrieved_state_text or _RETRIEVAL_DISABLED_TEXT,
            yang_modules=session.retrieved_docs_text or _RETRIEVAL_DISABLED_TEXT,
            user_request=session.effective_request(),
        )
        output = config.llm_backend.complete(prompt.system, prompt.user)
        duration = _elapsed(started)
        session.latency.generation += duration
        session.record("generator", "Generate", output, duration)
    session.last_model_output = output
    session.phase = "verifying"


def _account_repair(session: ConversationSession, duration: float) -> None:
    while len(session.latency.repair) < session.iteration + 1:
        session.latency.repair.append(0.0)
    session.latency.repair[session.iteration] += duration


def _step_verifying(session: ConversationSession, started: float) -> None:
    config = session.config
    try:
        change_set = extract_change_set(session.last_model_output)
        report = validate_after_apply(session.state, change_set, config.schema,
                                      iteration=session.iteration)
    except (NoFencedBlockError, MultipleBlocksError, ChangeSetParseError) as exc:
        change_set = None
        report = VerificationReport(
            findings=[Finding("error", "(extraction)", None, "syntax", str(exc))],
            iteration=session.iteration,
        )
    duration = _elapsed(started)
    session.latency.verification += duration
    session.last_report = report
    session.record("verifier", "Verify",
                   {"report": report.to_wire(), "error_log": report.to_error_log()},
                   duration)
    if report.passed:
        session.working_change_set = change_set
        session.pending_repair = False
        session.repair_docs_fetched = False
        session.phase = "deploying" if config.auto_confirm else "awaiting-confirmation"
        return
    budget = config.max_repair_iterations if config.repair_enabled else 0
    if session.iteration >= budget:
        session.failure_cause = (
            f"verification still failing after {session.iteration} repair iteration(s)"
        )
        session.phase = "failed"
        return
    session.iteration += 1
    session.pending_repair = True
    session.repair_docs_fetched = False
    session.phase = "generating"


def _step_deploying(session: ConversationSession, started: float) -> None:
    assert session.working_change_set is not None
    try:
        session.final_state = apply_change_set(session.state, session.working_change_set,
                                               session.config.schema)
    except (ChangeSetError, NetLinguaError) as exc:
        session.failure_cause = f"deployment failed: {exc}"
        session.phase = "failed"
        session.record("agent", "Deploy", {"error": str(exc)}, _elapsed(started))
        return
    duration = _elapsed(started)
    session.record("agent", "Deploy",
                   {"revision": session.final_state.revision,
                    "ops": session.working_change_set.op_count()}, duration)
    session.phase = "done"


def _proposal_summary(session: ConversationSession) -> str:
    cs = session.working_change_set
    if cs is None:
        return "No change set proposed."
    lines = [f"Proposed change set ({cs.op_count()} operations):"]
    for entry in cs.entries:
        for op in entry.config:
            values = ", ".join(f"{k}={v}" for k, v in sorted(op.value.items()))
            lines.append(f"  {entry.device}: {op.action} {op.path.names[-1]} ({values})")
    lines.append("Confirm to deploy, or reject with feedback.")
    return "\n".join(lines)


def submit_user_reply(session: ConversationSession,
                      reply: Union[str, None]) -> ConversationSession:
    """Feed a user reply at a clarify or confirmation point.

    reply is free text, or the CONFIRM / REJECT sentinels. Rejections and
    clarification texts both count against max_clarify_rounds.
    """
    if session.phase not in ("clarifying", "awaiting-confirmation"):
        raise WrongPhaseError(session.phase, "clarifying or awaiting-confirmation")
    if not session.needs_user_input:
        raise WrongPhaseError(session.phase, "a pending question")
    session.latency.user_wait += time.perf_counter() - session.awaiting_since
    session.awaiting_user = False

    if session.phase == "clarifying":
        if reply == CONFIRM:
            session.record("user", "Confirm", CONFIRM, 0.0)
            session.phase = "generating"
            return session
        text = "" if reply in (None, REJECT) else str(reply)
        action = "Reject" if reply == REJECT else "UserReply"
        session.record("user", action, reply if reply == REJECT else text, 0.0)
        session.pushback_rounds += 1
        if text:
            session.user_feedback.append(text)
        if session.pushback_rounds >= session.config.max_clarify_rounds:
            session.failure_cause = "clarification budget exhausted"
            session.phase = "failed"
        return session

    # awaiting-confirmation
    if reply == CONFIRM:
        session.record("user", "Confirm", CONFIRM, 0.0)
        session.phase = "deploying"
        return session
    text = "" if reply in (None, REJECT) else str(reply)
    session.record("user", "Reject", text or REJECT, 0.0)
    session.pushback_rounds += 1
    if text:
        session.user_feedback.append(text)
    if session.pushback_rounds >= session.config.max_clarify_rounds:
        session.failure_cause = "confirmation budget exhausted"
        session.phase = "failed"
        return session
    session.pending_repair = False
    session.repair_docs_fetched = False
    session.phase = "generating"
    return session


def run_until_blocked(session: ConversationSession,
                      max_steps: int = 200) -> ConversationSession:
    """Step until the session terminates or needs user input."""
    steps = 0
    while not session.terminal and not session.needs_user_input:
        step(session)
        steps += 1
        if steps > max_steps:
            raise RuntimeError("session did not settle within the step budget")
    return session


# --- transcript persistence and replay ---


def save_transcript(session: ConversationSession, path: Path) -> None:
    """One TurnRecord per line (JSON lines)."""
    with open(path, "w", encoding="utf-8") as handle:
        for turn in session.turns:
            handle.write(json.dumps(turn.to_wire()) + "\n")


def load_transcript(path: Path) -> list[TurnRecord]:
    turns = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                turns.append(TurnRecord.from_wire(json.loads(line)))
    return turns


def replay_session(turns: list[TurnRecord], state: NetworkState,
                   config: AgentConfig) -> ConversationSession:
    """Re-run a recorded session: scripted backend outputs and user replies.

    With the same fixtures and config, the replay reproduces the recorded
    final change set byte-for-byte.
    """
    from netlingua.agent.backends import ReplayBackend

    outputs = [t.payload for t in turns
               if t.action in ("ProposePlan", "Generate", "RepairGenerate")]
    replies = []
    for t in turns:
        if t.action == "Confirm":
            replies.append(CONFIRM)
        elif t.action == "Reject":
            replies.append(REJECT if t.payload in (REJECT, "") else t.payload)
        elif t.action == "UserReply":
            replies.append(t.payload)
    queries = [t.payload for t in turns if t.action == "Query"]
    if not queries:
        raise ValueError("transcript has no Query turn")

    replay_config = AgentConfig(
        llm_backend=ReplayBackend(outputs=list(outputs)),
        schema=config.schema,
        memory=config.memory,
        max_repair_iterations=config.max_repair_iterations,
        max_clarify_rounds=config.max_clarify_rounds,
        retrieval_k=config.retrieval_k,
        retrieval_mode=config.retrieval_mode,
        auto_confirm=config.auto_confirm,
        retrieval_enabled=config.retrieval_enabled,
        repair_enabled=config.repair_enabled,
    )
    session = start_session(queries[0], state, replay_config)
    reply_index = 0
    guard = 0
    while not session.terminal:
        run_until_blocked(session)
        if session.terminal:
            break
        if reply_index >= len(replies):
            raise RuntimeError("replay ran out of recorded user replies")
        submit_user_reply(session, replies[reply_index])
        reply_index += 1
        guard += 1
        if guard > 50:
            raise RuntimeError("replay did not terminate")
    return session
