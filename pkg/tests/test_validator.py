import json

import pytest

from netlingua.state import ChangeSet, NetworkState, apply_change_set, load_device_state
from netlingua.validation import validate_after_apply, validate_change_set, validate_instance
from netlingua.validation.mutations import build_kit, clean_corpus

MUST_MESSAGE = ("Must condition (current() = "
                "../../INTERFACE_LIST[name=current()]/name) not satisfied")

IPP_PATH = ["sonic-interface", "INTERFACE", "INTERFACE_IPPREFIX_LIST"]
IFL_PATH = ["sonic-interface", "INTERFACE", "INTERFACE_LIST"]


def cs_of(*entries):
    return ChangeSet.from_wire(list(entries))


# --- change-set validation ---


def test_appendix_b_exemplar_passes(schema, appendix_b_wire):
    report = validate_change_set(ChangeSet.from_wire(appendix_b_wire), schema)
    assert report.status == "pass"


def test_empty_change_set_passes(schema):
    report = validate_change_set(ChangeSet(), schema)
    assert report.status == "pass" and report.findings == []


@pytest.mark.parametrize("prefix,ok", [
    ("10.1.1.1/33", False),   # length beyond the ip4 oracle's 0..32
    ("10.1.1.1/32", True),
    ("10.1.1.1/0", True),
    ("999.1.1.1/24", False),
    ("10.1.1/24", False),
    ("10.1.1.1", False),
])
def test_ip4_prefix_lengths(schema, prefix, ok):
    cs = cs_of({"device": "S0", "config": [
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet4", "ip-prefix": prefix}}]})
    report = validate_change_set(cs, schema)
    mismatches = [f for f in report.findings if f.rule == "type-mismatch"]
    assert (not mismatches) == ok


def test_unknown_path_finding(schema):
    cs = cs_of({"device": "S0", "config": [
        {"action": "append", "path": ["sonic-interface", "NOPE", "X"],
         "value": {"name": "Ethernet4"}}]})
    report = validate_change_set(cs, schema)
    assert report.status == "fail"
    assert report.findings[0].rule == "unknown-path"


def test_key_missing_finding(schema):
    cs = cs_of({"device": "S0", "config": [
        {"action": "append", "path": IPP_PATH, "value": {"name": "Ethernet4"}}]})
    report = validate_change_set(cs, schema)
    assert any(f.rule == "key-missing" for f in report.findings)


def test_action_on_leaf_is_syntax_finding(schema):
    cs = cs_of({"device": "S0", "config": [
        {"action": "append", "path": IFL_PATH + ["name"], "value": {"name": "x"}}]})
    report = validate_change_set(cs, schema)
    assert any(f.rule == "syntax" for f in report.findings)


# --- instance validation ---


def _state_with_interface(schema, with_interface_list: bool) -> NetworkState:
    doc = {
        "PORT": {"Ethernet4": {"speed": "100000", "mtu": "9100"}},
        "INTERFACE": {"Ethernet4|10.1.1.1/30": {}},
    }
    if with_interface_list:
        doc["INTERFACE"]["Ethernet4"] = {}
    device = load_device_state(schema, json.dumps(doc), "L0")
    return NetworkState(devices={"L0": device}, revision=1)


def test_must_violation_matches_transcript_message(schema):
    state = _state_with_interface(schema, with_interface_list=False)
    report = validate_instance(state, schema)
    assert report.status == "fail"
    musts = [f for f in report.findings if f.rule == "must-violation"]
    assert musts and musts[0].message == MUST_MESSAGE


def test_empty_state_passes(schema):
    state = NetworkState(devices={"L0": load_device_state(schema, "{}", "L0")},
                         revision=1)
    assert validate_instance(state, schema).status == "pass"


def test_matched_interface_lists_pass(schema):
    state = _state_with_interface(schema, with_interface_list=True)
    report = validate_instance(state, schema)
    # Brute-force oracle: every IPPREFIX name appears in INTERFACE_LIST.
    table = state.devices["L0"].tree["sonic-interface"]["INTERFACE"]
    ipprefix_names = {k[0] for k in table["INTERFACE_IPPREFIX_LIST"]}
    interface_names = {k[0] for k in table["INTERFACE_LIST"]}
    assert ipprefix_names <= interface_names
    assert report.status == "pass"


def test_leafref_unsatisfied(schema):
    doc = {"INTERFACE": {"Ethernet4": {}}}  # Ethernet4 not present in PORT
    device = load_device_state(schema, json.dumps(doc), "L0")
    state = NetworkState(devices={"L0": device}, revision=1)
    report = validate_instance(state, schema)
    assert any(f.rule == "leafref-unsatisfied" for f in report.findings)


# --- composition ---


def test_valid_cs_onto_valid_state_passes(schema, clos_state, appendix_b_wire):
    report = validate_after_apply(clos_state, ChangeSet.from_wire(appendix_b_wire),
                                  schema)
    assert report.status == "pass"


def test_appendix_a_repair_sequence(schema, clos_state):
    faulty = cs_of({"device": "L0", "config": [
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet4", "ip-prefix": "10.1.1.1/30"}}]})
    report = validate_after_apply(clos_state, faulty, schema)
    assert report.status == "fail"
    assert any(f.message == MUST_MESSAGE for f in report.findings)

    fixed = cs_of({"device": "L0", "config": [
        {"action": "append", "path": IFL_PATH, "value": {"name": "Ethernet4"}},
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet4", "ip-prefix": "10.1.1.1/30"}}]})
    assert validate_after_apply(clos_state, fixed, schema).status == "pass"


def test_duplicate_append_is_duplicate_key_finding(schema, clos_state):
    cs = cs_of({"device": "S0", "config": [
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet8", "ip-prefix": "10.0.2.1/24"}}]})
    report = validate_after_apply(clos_state, cs, schema)
    assert report.status == "fail"
    assert any(f.rule == "duplicate-key" for f in report.findings)


def test_reports_are_deterministic(schema, clos_state):
    faulty = cs_of({"device": "L0", "config": [
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet400", "ip-prefix": "10.1.1.1/33"}}]})
    first = validate_after_apply(clos_state, faulty, schema)
    second = validate_after_apply(clos_state, faulty, schema)
    assert first.to_json() == second.to_json()


def test_monotone_composition(schema, clos_state):
    bad = cs_of({"device": "L0", "config": [
        {"action": "append", "path": IPP_PATH,
         "value": {"name": "Ethernet4", "ip-prefix": "10.1.1.1/33"}}]})
    cs_report = validate_change_set(bad, schema)
    after_report = validate_after_apply(clos_state, bad, schema)
    assert cs_report.status == "fail" and after_report.status == "fail"
    assert set(cs_report.findings) <= set(after_report.findings)


def test_findings_ordered_by_device_path_rule(schema, clos_state):
    cs = cs_of(
        {"device": "S1", "config": [
            {"action": "append", "path": IPP_PATH,
             "value": {"name": "Ethernet4", "ip-prefix": "10.1.1.1/33"}}]},
        {"device": "L0", "config": [
            {"action": "append", "path": ["sonic-interface", "NOPE"],
             "value": {"x": "y"}}]},
    )
    report = validate_after_apply(clos_state, cs, schema)
    keys = [f.sort_key() for f in report.findings]
    assert keys == sorted(keys)


# --- mutation kit ---


def test_clean_corpus_has_no_false_positives(schema, clos_state):
    corpus = clean_corpus()
    assert len(corpus) == 20
    for cs in corpus:
        assert validate_after_apply(clos_state, cs, schema).status == "pass"


def test_mutation_kit_fully_detected(schema, clos_state):
    kit = build_kit()
    assert len(kit) == 40
    families = {m.family for m in kit}
    assert families == {"delete-key-field", "corrupt-ip-prefix",
                        "retarget-path-segment", "orphan-leafref", "duplicate-key"}
    detected = [m for m in kit
                if validate_after_apply(clos_state, m.change_set, schema).status == "fail"]
    assert len(detected) == len(kit)
