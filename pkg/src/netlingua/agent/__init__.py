"""The agent decision loop and its backends, prompts, and sessions."""

from netlingua.agent.backends import LiveLLMBackend, MockBackend, MockScriptEntry, ReplayBackend
from netlingua.agent.extract import extract_change_set
from netlingua.agent.loop import (
    load_transcript,
    replay_session,
    run_until_blocked,
    save_transcript,
    start_session,
    step,
    submit_user_reply,
)
from netlingua.agent.prompts import (
    Prompt,
    build_generation_prompt,
    build_plan_prompt,
    build_repair_prompt,
)
from netlingua.agent.session import (
    CONFIRM,
    REJECT,
    AgentConfig,
    ConversationSession,
    LatencyBreakdown,
    TurnRecord,
)

__all__ = [
    "CONFIRM",
    "REJECT",
    "AgentConfig",
    "ConversationSession",
    "LatencyBreakdown",
    "LiveLLMBackend",
    "MockBackend",
    "MockScriptEntry",
    "Prompt",
    "ReplayBackend",
    "TurnRecord",
    "build_generation_prompt",
    "build_plan_prompt",
    "build_repair_prompt",
    "extract_change_set",
    "load_transcript",
    "replay_session",
    "run_until_blocked",
    "save_transcript",
    "start_session",
    "step",
    "submit_user_reply",
]
