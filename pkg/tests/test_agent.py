import json

import pytest

from netlingua.agent import (
    CONFIRM,
    REJECT,
    AgentConfig,
    MockBackend,
    build_generation_prompt,
    build_repair_prompt,
    extract_change_set,
    load_transcript,
    replay_session,
    run_until_blocked,
    save_transcript,
    start_session,
    step,
    submit_user_reply,
)
from netlingua.errors import (
    MissingPlaceholderContentError,
    MultipleBlocksError,
    NoFencedBlockError,
    WrongPhaseError,
)

VALID_OUTPUT = """Sure, here you go.

```python
[
    {
        "device": "S0",
        "config": [
            {
                "action": "append",
                "path": ["sonic-bgp:sonic-bgp", "sonic-bgp:BGP_NEIGHBOR", "BGP_NEIGHBOR_LIST"],
                "value": {"name": "upstream", "neighbor": "192.0.2.77", "asn": "64900"}
            }
        ]
    }
]
```

Explanation: adds one BGP neighbor.
"""

INVALID_OUTPUT = """```python
[
    {
        "device": "S0",
        "config": [
            {"action": "append",
             "path": ["sonic-interface", "INTERFACE", "INTERFACE_IPPREFIX_LIST"],
             "value": {"name": "Ethernet4", "ip-prefix": "10.1.1.1/33"}}
    ]
    }
]
```"""


def make_config(backend, schema, memory, **kwargs):
    return AgentConfig(llm_backend=backend, schema=schema, memory=memory, **kwargs)


# --- start_session ---


def test_start_session_records_query(schema, memory, clos_state):
    config = make_config(MockBackend.from_responses([]), schema, memory)
    session = start_session("Connect Ethernet4 of each Leaf to Ethernet4 of each Spine",
                            clos_state, config)
    assert session.phase == "retrieving"
    assert session.turns[0].action == "Query"


def test_start_session_rejects_whitespace_query(schema, memory, clos_state):
    config = make_config(MockBackend.from_responses([]), schema, memory)
    with pytest.raises(ValueError):
        start_session("   \n", clos_state, config)


def test_session_ids_unique(schema, memory, clos_state):
    config = make_config(MockBackend.from_responses([]), schema, memory)
    a = start_session("query one", clos_state, config)
    b = start_session("query one", clos_state, config)
    assert a.session_id != b.session_id


# --- the step machine ---


def test_immediate_valid_output_zero_repairs(schema, memory, clos_state):
    backend = MockBackend.from_responses([VALID_OUTPUT])
    config = make_config(backend, schema, memory, auto_confirm=True)
    session = start_session("add an upstream BGP neighbor on S0", clos_state, config)
    run_until_blocked(session)
    assert session.phase == "done"
    assert session.iteration == 0
    assert [t.action for t in session.turns].count("Verify") == 1


def test_always_failing_mock_exhausts_budget(schema, memory, clos_state):
    backend = MockBackend.from_responses([INVALID_OUTPUT], cycle=True)
    config = make_config(backend, schema, memory, auto_confirm=True,
                         max_repair_iterations=3)
    session = start_session("assign something invalid", clos_state, config)
    run_until_blocked(session)
    assert session.phase == "failed"
    assert session.iteration == config.max_repair_iterations
    verifies = [t for t in session.turns if t.action == "Verify"]
    assert len(verifies) == config.max_repair_iterations + 1
    repairs = [t for t in session.turns if t.action == "RepairGenerate"]
    assert len(repairs) == config.max_repair_iterations
    assert session.last_report is not None and session.last_report.status == "fail"


def test_golden_flow_repairs_once(schema, memory, clos_state, golden_script):
    backend = MockBackend.from_responses(golden_script["responses"])
    config = make_config(backend, schema, memory)
    session = start_session(golden_script["query"], clos_state, config)
    replies = list(golden_script["replies"])
    while not session.terminal:
        run_until_blocked(session)
        if session.terminal:
            break
        submit_user_reply(session, replies.pop(0))
    assert session.phase == "done"
    assert session.iteration == 1
    verifies = [t for t in session.turns if t.action == "Verify"]
    assert verifies[0].payload["report"]["status"] == "fail"
    assert verifies[1].payload["report"]["status"] == "pass"


def test_step_refuses_terminal_session(schema, memory, clos_state):
    backend = MockBackend.from_responses([VALID_OUTPUT])
    config = make_config(backend, schema, memory, auto_confirm=True)
    session = start_session("add the neighbor", clos_state, config)
    run_until_blocked(session)
    with pytest.raises(WrongPhaseError):
        step(session)


def test_unparseable_output_consumes_repair_budget(schema, memory, clos_state):
    backend = MockBackend.from_responses(["no code here at all"], cycle=True)
    config = make_config(backend, schema, memory, auto_confirm=True,
                         max_repair_iterations=2)
    session = start_session("do something", clos_state, config)
    run_until_blocked(session)
    assert session.phase == "failed"
    verifies = [t for t in session.turns if t.action == "Verify"]
    assert len(verifies) == 3
    assert all(v.payload["report"]["findings"][0]["rule"] == "syntax"
               for v in verifies)


def test_backend_failure_fails_session_with_cause(schema, memory, clos_state):
    backend = MockBackend.from_responses([])  # exhausted immediately
    config = make_config(backend, schema, memory, auto_confirm=True)
    session = start_session("anything", clos_state, config)
    run_until_blocked(session)
    assert session.phase == "failed"
    assert "mock script exhausted" in session.failure_cause


# --- user replies ---


def test_clarify_override_lands_in_generation_prompt(schema, memory, clos_state,
                                                     golden_script):
    backend = MockBackend.from_responses(golden_script["responses"])
    config = make_config(backend, schema, memory)
    session = start_session(golden_script["query"], clos_state, config)
    run_until_blocked(session)
    submit_user_reply(session, "I prefer you use 10.1.1.0/30 subnet instead.")
    run_until_blocked(session)
    submit_user_reply(session, CONFIRM)
    run_until_blocked(session)
    generation_prompts = [u for s, u in backend.prompts
                          if "Natural language query:" in u]
    assert any("I prefer you use 10.1.1.0/30 subnet instead." in p
               for p in generation_prompts)


def test_confirm_at_confirmation_deploys(schema, memory, clos_state):
    backend = MockBackend.from_responses(["plan text", VALID_OUTPUT])
    config = make_config(backend, schema, memory)
    session = start_session("add the neighbor", clos_state, config)
    run_until_blocked(session)
    submit_user_reply(session, CONFIRM)  # accept the plan
    run_until_blocked(session)
    assert session.phase == "awaiting-confirmation"
    submit_user_reply(session, CONFIRM)
    run_until_blocked(session)
    assert session.phase == "done"
    assert session.final_state is not None


def test_three_rejects_fail_the_session(schema, memory, clos_state):
    responses = ["plan", VALID_OUTPUT, VALID_OUTPUT.replace("192.0.2.77", "192.0.2.78"),
                 VALID_OUTPUT.replace("192.0.2.77", "192.0.2.79")]
    backend = MockBackend.from_responses(responses)
    config = make_config(backend, schema, memory, max_clarify_rounds=3)
    session = start_session("add the neighbor", clos_state, config)
    run_until_blocked(session)
    submit_user_reply(session, CONFIRM)
    rejects = 0
    while not session.terminal:
        run_until_blocked(session)
        if session.terminal:
            break
        submit_user_reply(session, REJECT)
        rejects += 1
    assert session.phase == "failed"
    assert rejects == 3


def test_reply_in_wrong_phase_rejected(schema, memory, clos_state):
    backend = MockBackend.from_responses([VALID_OUTPUT])
    config = make_config(backend, schema, memory, auto_confirm=True)
    session = start_session("add the neighbor", clos_state, config)
    with pytest.raises(WrongPhaseError):
        submit_user_reply(session, CONFIRM)


# --- extraction ---


def test_extract_appendix_b_exemplar(appendix_b_wire):
    output = "```python\n" + json.dumps(appendix_b_wire, indent=4) + "\n```"
    cs = extract_change_set(output)
    assert cs.devices() == ["S0"]
    assert cs.op_count() == 2
    assert cs.entries[0].config[0].action == "remove"


def test_extract_tolerates_python_literals():
    body = """```python
[
    {
        'device': 'S0',
        'config': [
            {'action': 'append',
             'path': ['sonic-interface', 'INTERFACE', 'INTERFACE_LIST'],
             'value': {'name': 'Ethernet4'},},
        ],
    },
]
'''"""
    cs = extract_change_set(body)
    assert cs.op_count() == 1


def test_extract_no_fence():
    with pytest.raises(NoFencedBlockError):
        extract_change_set("just prose, no code")


def test_extract_multiple_blocks():
    text = "```python\n[]\n```\nand\n```python\n[]\n```"
    with pytest.raises(MultipleBlocksError):
        extract_change_set(text)


# --- prompts ---


def test_generation_prompt_contains_clos_system_text():
    prompt = build_generation_prompt("state text", "yang text", "request text")
    assert ("four devices in a 3-stage clos network, named `S0', `S1', `L0', `L1'"
            in prompt.system)
    assert "state text" in prompt.user and "request text" in prompt.user


def test_generation_prompt_requires_content():
    with pytest.raises(MissingPlaceholderContentError):
        build_generation_prompt("", "yang", "request")


def test_repair_prompt_contains_error_log_verbatim():
    log = ("[error] device=L0 path=/sonic-interface/INTERFACE/INTERFACE_IPPREFIX_LIST "
           "rule=must-violation: Must condition (current() = "
           "../../INTERFACE_LIST[name=current()]/name) not satisfied")
    prompt = build_repair_prompt("faulty", log, "modules")
    assert log in prompt.user
    assert "does not pass the YANG validator tests" in prompt.system


# --- invariants ---


def test_loop_bound_verifier_invocations(schema, memory, clos_state):
    for budget in (1, 2, 4):
        backend = MockBackend.from_responses([INVALID_OUTPUT], cycle=True)
        config = make_config(backend, schema, memory, auto_confirm=True,
                             max_repair_iterations=budget)
        session = start_session("bad request", clos_state, config)
        run_until_blocked(session)
        verifies = [t for t in session.turns if t.action == "Verify"]
        assert len(verifies) <= budget + 1


def test_transcript_completeness_and_replay(schema, memory, clos_state,
                                            golden_script, tmp_path):
    backend = MockBackend.from_responses(golden_script["responses"])
    config = make_config(backend, schema, memory)
    session = start_session(golden_script["query"], clos_state, config)
    replies = list(golden_script["replies"])
    while not session.terminal:
        run_until_blocked(session)
        if session.terminal:
            break
        submit_user_reply(session, replies.pop(0))
    # Every backend call appears as exactly one turn.
    model_turns = [t for t in session.turns
                   if t.action in ("ProposePlan", "Generate", "RepairGenerate")]
    assert len(model_turns) == backend.calls
    verify_turns = [t for t in session.turns if t.action == "Verify"]
    assert len(verify_turns) == 2

    path = tmp_path / "session.jsonl"
    save_transcript(session, path)
    replayed = replay_session(load_transcript(path), clos_state, config)
    assert replayed.phase == "done"
    assert (replayed.working_change_set.to_json()
            == session.working_change_set.to_json())


def test_no_deploy_without_pass_and_confirm(schema, memory, clos_state,
                                            golden_script):
    backend = MockBackend.from_responses(golden_script["responses"])
    config = make_config(backend, schema, memory)
    session = start_session(golden_script["query"], clos_state, config)
    replies = list(golden_script["replies"])
    while not session.terminal:
        run_until_blocked(session)
        if session.terminal:
            break
        submit_user_reply(session, replies.pop(0))
    actions = [t.action for t in session.turns]
    deploy_index = actions.index("Deploy")
    before = session.turns[:deploy_index]
    passes = [t for t in before if t.action == "Verify"
              and t.payload["report"]["status"] == "pass"]
    confirms = [t for t in before if t.action == "Confirm"]
    assert passes and confirms


def test_latency_total_equals_component_sum(schema, memory, clos_state):
    backend = MockBackend.from_responses([VALID_OUTPUT])
    config = make_config(backend, schema, memory, auto_confirm=True)
    session = start_session("add the neighbor", clos_state, config)
    run_until_blocked(session)
    latency = session.latency
    component_sum = (latency.retrieval + latency.generation + latency.verification
                     + sum(latency.repair) + latency.user_wait)
    assert abs(latency.total - component_sum) < 1e-9
