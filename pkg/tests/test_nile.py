import math

import pytest

from netlingua.agent.backends import MockBackend
from netlingua.errors import NileSyntaxError
from netlingua.nile import (
    SynonymTable,
    dataset_score,
    default_grammar,
    entity_prf,
    exact_match,
    fuzzy_match,
    generate_exemplars,
    iterative_repair_nile,
    load_exemplars,
    load_intent_dataset,
    parse_nile,
)
from netlingua.nile.datasets import alpha_sample_path, campi_sample_path
from netlingua.nile.parser import tokenize

INTENT = """define intent uni_block:
  from endpoint('gateway')
  to group('dorm')
  block service('netflix')
  start hour('08:00')
  end hour('18:00')"""


# --- parsing ---


def test_exemplar_set_parses():
    grammar = default_grammar()
    exemplars = load_exemplars()
    assert len(exemplars) >= 20
    for text in exemplars:
        parse_nile(text, grammar)


def test_frozen_exemplars_reproducible():
    regenerated = generate_exemplars(default_grammar(), count=24, seed=7)
    assert regenerated == load_exemplars()


def test_empty_string_errors_at_origin():
    with pytest.raises(NileSyntaxError) as exc:
        parse_nile("")
    assert exc.value.line == 1 and exc.value.column == 1


def test_parse_render_round_trip():
    intent = parse_nile(INTENT)
    assert parse_nile(intent.render()) == intent


def test_error_carries_location_and_expected_set():
    with pytest.raises(NileSyntaxError) as exc:
        parse_nile("define intent x:\n  from endpoint 'gateway' extra")
    assert exc.value.line == 2
    assert "'('" in exc.value.expected


def test_whitespace_is_immaterial():
    squashed = " ".join(INTENT.split())
    assert parse_nile(squashed) == parse_nile(INTENT)


# --- entity P/R/F1 ---


def test_prf_identical_nonempty():
    gold = {("group", "students"), ("service", "netflix")}
    assert entity_prf(gold, gold) == (1.0, 1.0, 1.0)


def test_prf_empty_prediction_convention():
    gold = {("group", "students")}
    precision, recall, f1 = entity_prf(set(), gold)
    assert (precision, recall, f1) == (0.0, 0.0, 0.0)


def test_prf_half_overlap():
    predicted = {("t", "A"), ("t", "B")}
    gold = {("t", "B"), ("t", "C")}
    precision, recall, f1 = entity_prf(predicted, gold)
    assert (precision, recall, f1) == (0.5, 0.5, 0.5)


# --- exact / fuzzy match ---


def test_identical_intents_match_exactly():
    a = parse_nile(INTENT)
    b = parse_nile(INTENT)
    assert exact_match(a, b) is True
    assert fuzzy_match(a, b) == 1.0


def test_capitalization_breaks_exact_but_not_fuzzy():
    a = parse_nile(INTENT)
    b = parse_nile(INTENT.replace("'gateway'", "'Gateway'"))
    assert exact_match(a, b) is False
    assert fuzzy_match(a, b) == 1.0


def test_synonyms_count_as_fuzzy_matches():
    table = SynonymTable.load()
    a = parse_nile(INTENT)
    b = parse_nile(INTENT.replace("'dorm'", "'residence hall'"))
    assert fuzzy_match(b, a, table) == 1.0
    assert fuzzy_match(b, a) < 1.0  # without the table the leaf differs


def test_fuzzy_fraction_counts_leaf_positions():
    a = parse_nile("define intent t:\n  from endpoint('a')\n  block service('x')")
    b = parse_nile("define intent t:\n  from endpoint('a')\n  block service('y')")
    leaves = a.leaves()
    differing = 1
    expected = (len(leaves) - differing) / len(leaves)
    assert fuzzy_match(b, a) == pytest.approx(expected)


def test_exact_implies_fuzzy_one():
    for text in load_exemplars()[:10]:
        intent = parse_nile(text)
        again = parse_nile(intent.render())
        if exact_match(intent, again):
            assert fuzzy_match(intent, again) == 1.0


def test_fuzzy_self_match_is_one():
    for text in load_exemplars():
        intent = parse_nile(text)
        assert fuzzy_match(intent, intent) == 1.0


def test_dataset_score_matches_summation_oracle():
    scores = [0.25, 1.0, 0.75, 0.0, 1.0, 0.5, 1 / 3]
    reported = dataset_score(scores)
    oracle = 100.0 * math.fsum(scores) / len(scores)
    assert abs(reported - oracle) <= 1e-9


# --- grammar mutation sensitivity ---


def _delete_token(text: str, index: int) -> str:
    tokens = tokenize(text)
    parts = []
    for position, token in enumerate(tokens):
        if position == index:
            continue
        parts.append(f"'{token.text}'" if token.quoted else token.text)
    return " ".join(parts)


def test_single_token_deletions_mostly_rejected():
    grammar = default_grammar()
    total = detected = 0
    for text in load_exemplars():
        for index in range(len(tokenize(text))):
            total += 1
            try:
                parse_nile(_delete_token(text, index), grammar)
            except NileSyntaxError:
                detected += 1
    assert total > 0
    assert detected / total >= 0.95


# --- repair loop ---


def test_repair_valid_first_try():
    backend = MockBackend.from_responses([INTENT])
    result = iterative_repair_nile("block netflix in the dorm", backend)
    assert result.succeeded and result.iterations_used == 0


def test_repair_succeeds_at_fourth_call():
    backend = MockBackend.from_responses(
        ["garbage one", "garbage two", "garbage three", INTENT])
    result = iterative_repair_nile("block netflix in the dorm", backend)
    assert result.succeeded
    assert result.iterations_used == 3
    assert backend.calls == 4


def test_repair_budget_exhausted_after_exactly_max_repairs():
    backend = MockBackend.from_responses(["still wrong"], cycle=True)
    result = iterative_repair_nile("utterance", backend, max_iter=8)
    assert not result.succeeded
    assert result.iterations_used == 8
    assert backend.calls == 9  # initial generation + 8 repairs
    assert result.error


def test_repair_prompt_carries_error_text():
    backend = MockBackend.from_responses(["broken output", INTENT])
    iterative_repair_nile("utterance", backend)
    repair_prompt = backend.prompts[1][1]
    assert "did not parse" in repair_prompt
    assert "broken output" in repair_prompt


# --- dataset loaders ---


def test_sample_datasets_load_and_parse():
    for path in (alpha_sample_path(), campi_sample_path()):
        records = load_intent_dataset(path)
        assert records
        for record in records:
            intent = parse_nile(record.gold_nile)
            assert intent.name
            assert all(isinstance(t, str) and isinstance(v, str)
                       for t, v in record.gold_entities)
