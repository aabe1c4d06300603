"""Nile intent language: grammar verification, metrics, and repair."""

from netlingua.nile.datasets import IntentRecord, load_intent_dataset
from netlingua.nile.grammar import default_grammar, generate_exemplars, load_exemplars, load_grammar
from netlingua.nile.metrics import (
    SynonymTable,
    dataset_score,
    entity_prf,
    exact_match,
    fuzzy_match,
)
from netlingua.nile.model import Clause, Entity, NileIntent
from netlingua.nile.parser import parse_nile
from netlingua.nile.repair import NileRepairResult, iterative_repair_nile

__all__ = [
    "Clause",
    "Entity",
    "IntentRecord",
    "NileIntent",
    "NileRepairResult",
    "SynonymTable",
    "dataset_score",
    "default_grammar",
    "entity_prf",
    "exact_match",
    "fuzzy_match",
    "generate_exemplars",
    "iterative_repair_nile",
    "load_exemplars",
    "load_grammar",
    "load_intent_dataset",
    "parse_nile",
]
