"""Entity tagging and intent matching metrics.

entity_prf is set overlap over exact (type, value) pairs. exact_match is
AST equality (whitespace never survives parsing). fuzzy_match credits each
gold leaf matched by the predicted leaf at the same structural position
after case folding, punctuation stripping, and synonym canonicalization.
"""

from __future__ import annotations

import json
import math
import string
from pathlib import Path
from typing import Iterable, Optional

from netlingua.fixtures import NILE_DIR
from netlingua.nile.model import NileIntent

EntityPair = tuple[str, str]

_PUNCT_TABLE = str.maketrans("", "", string.punctuation + " ")


def entity_prf(predicted: Iterable[EntityPair],
               gold: Iterable[EntityPair]) -> tuple[float, float, float]:
    """Precision/recall/F1 over exact (entity_type, value) pairs.

    Empty predicted set gives precision 0 by convention (not 1): an empty
    tagging carries no correct assertions to reward.
    """
    pred = {(t.strip(), v.strip()) for t, v in predicted}
    ref = {(t.strip(), v.strip()) for t, v in gold}
    overlap = len(pred & ref)
    precision = overlap / len(pred) if pred else 0.0
    recall = overlap / len(ref) if ref else 0.0
    f1 = (2 * precision * recall / (precision + recall)) if precision + recall > 0 else 0.0
    return precision, recall, f1


def exact_match(predicted: NileIntent, gold: NileIntent) -> bool:
    """AST equality; spans are excluded from comparison."""
    return predicted == gold


class SynonymTable:
    """Maps variant terms onto canonical ones; shipped as versioned data."""

    def __init__(self, canonical_to_variants: dict[str, list[str]], version: str = "0"):
        self.version = version
        self._canonical: dict[str, str] = {}
        for canonical, variants in canonical_to_variants.items():
            self._canonical[_normalize(canonical)] = _normalize(canonical)
            for variant in variants:
                self._canonical[_normalize(variant)] = _normalize(canonical)

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "SynonymTable":
        target = path or (NILE_DIR / "synonyms.json")
        doc = json.loads(target.read_text(encoding="utf-8"))
        return cls(doc.get("synonyms", {}), version=str(doc.get("version", "0")))

    def canonical(self, term: str) -> str:
        normalized = _normalize(term)
        return self._canonical.get(normalized, normalized)


def _normalize(text: str) -> str:
    return text.casefold().translate(_PUNCT_TABLE)


def fuzzy_match(predicted: NileIntent, gold: NileIntent,
                synonyms: Optional[SynonymTable] = None) -> float:
    """Fraction of gold AST leaves matched at the same position in predicted."""
    table = synonyms or SynonymTable({})
    predicted_leaves = dict(predicted.leaves())
    gold_leaves = gold.leaves()
    if not gold_leaves:
        return 1.0
    matched = 0
    for path, gold_value in gold_leaves:
        pred_value = predicted_leaves.get(path)
        if pred_value is None:
            continue
        if table.canonical(pred_value) == table.canonical(gold_value):
            matched += 1
    return matched / len(gold_leaves)


def dataset_score(per_intent_scores: Iterable[float]) -> float:
    """Dataset-level percentage: mean of per-intent scores times 100."""
    scores = list(per_intent_scores)
    if not scores:
        return 0.0
    return 100.0 * math.fsum(scores) / len(scores)
