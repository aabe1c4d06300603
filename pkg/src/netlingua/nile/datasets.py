"""Loaders for intent datasets (JSON lines).

Record shape: {"utterance": str, "gold_entities": [[type, value], ...],
"gold_nile": str}. The bundled alpha/campi samples are small stand-ins in
the published datasets' style, labeled as reconstructions in the files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from netlingua.errors import MalformedDocumentError
from netlingua.fixtures import NILE_DIR


@dataclass(frozen=True)
class IntentRecord:
    utterance: str
    gold_entities: frozenset[tuple[str, str]]
    gold_nile: str


def load_intent_dataset(path: Path) -> list[IntentRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                doc = json.loads(line)
                records.append(IntentRecord(
                    utterance=doc["utterance"],
                    gold_entities=frozenset((t, v) for t, v in doc["gold_entities"]),
                    gold_nile=doc["gold_nile"],
                ))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedDocumentError(f"{path}:{line_no}: bad intent record: {exc}")
    return records


def alpha_sample_path() -> Path:
    return NILE_DIR / "alpha_sample.jsonl"


def campi_sample_path() -> Path:
    return NILE_DIR / "campi_sample.jsonl"
