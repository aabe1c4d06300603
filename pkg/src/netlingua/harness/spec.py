"""Run specifications for the batch evaluation harness."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from netlingua.errors import MalformedDocumentError
from netlingua.fixtures import CLOS_DIR, DATASETS_DIR, SCHEMAS_DIR

# Pipeline variants, one per accuracy-table row.
VARIANTS = {
    "verifier-only": {"retrieval_enabled": False, "repair_enabled": True,
                      "retrieval_mode": "nl"},
    "retrieval-nl-only": {"retrieval_enabled": True, "repair_enabled": False,
                          "retrieval_mode": "nl"},
    "retrieval-raw+verifier": {"retrieval_enabled": True, "repair_enabled": True,
                               "retrieval_mode": "raw"},
    "retrieval-nl+verifier": {"retrieval_enabled": True, "repair_enabled": True,
                              "retrieval_mode": "nl"},
}

VARIANT_LABELS = {
    "verifier-only": "Verifier Only",
    "retrieval-nl-only": "State Retrieval (NL Output) Only",
    "retrieval-raw+verifier": "State Retrieval (Raw Output) + Verifier",
    "retrieval-nl+verifier": "State Retrieval (NL Output) + Verifier",
}


@dataclass
class RunSpec:
    dataset: Path = DATASETS_DIR / "clos_requests.jsonl"
    variants: list[str] = field(default_factory=lambda: list(VARIANTS))
    trials: int = 3
    backend: str = "mock"  # mock | replay | live
    mock_script: Optional[Path] = None
    live_endpoint: str = ""
    live_model: str = ""
    output_dir: Path = Path("eval-out")
    schema_dir: Path = SCHEMAS_DIR
    state_dir: Path = CLOS_DIR
    # Per-run repair cap for the YANG pipeline.
    max_repair_iterations: int = 5
    retrieval_k: int = 8
    judgment_file: Optional[Path] = None
    parallelism: int = 1

    def __post_init__(self) -> None:
        unknown = [v for v in self.variants if v not in VARIANTS]
        if unknown:
            raise MalformedDocumentError(f"unknown pipeline variant(s): {unknown}")
        if self.trials < 1:
            raise MalformedDocumentError("trials must be >= 1")


@dataclass(frozen=True)
class RequestRecord:
    request: str
    devices: tuple[str, ...]
    judgment_hint: str = ""


def load_requests(path: Path) -> list[RequestRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            doc = json.loads(line)
            records.append(RequestRecord(
                request=doc["request"],
                devices=tuple(doc.get("devices", ())),
                judgment_hint=doc.get("judgment_hint", ""),
            ))
    return records


def load_run_spec(path: Path) -> RunSpec:
    """Load a run spec from a TOML or JSON file."""
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        doc = json.loads(text)
    else:
        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        doc = tomllib.loads(text)
    run = doc.get("run", {})
    backend = doc.get("backend", {})
    base = RunSpec()

    def _path(value, default):
        return Path(value) if value else default

    return RunSpec(
        dataset=_path(run.get("dataset"), base.dataset),
        variants=list(run.get("variants", base.variants)),
        trials=int(run.get("trials", base.trials)),
        backend=backend.get("kind", base.backend),
        mock_script=_path(backend.get("script"), None),
        live_endpoint=backend.get("endpoint", ""),
        live_model=backend.get("model", ""),
        output_dir=_path(run.get("output_dir"), base.output_dir),
        schema_dir=_path(run.get("schema_dir"), base.schema_dir),
        state_dir=_path(run.get("state_dir"), base.state_dir),
        max_repair_iterations=int(run.get("max_repair_iterations",
                                          base.max_repair_iterations)),
        retrieval_k=int(run.get("retrieval_k", base.retrieval_k)),
        judgment_file=_path(run.get("judgment_file"), None),
        parallelism=int(run.get("parallelism", base.parallelism)),
    )
