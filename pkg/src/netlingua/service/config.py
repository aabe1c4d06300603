"""Service configuration: a TOML file selects backends, fixtures, and ports.

Secrets never live in the file; the live backends read LLM_API_KEY and
EMBED_API_KEY from the environment.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from netlingua.fixtures import CLOS_DIR, SCHEMAS_DIR, TRANSCRIPTS_DIR


@dataclass
class AppConfig:
    port: int = 8000
    state_dir: Path = CLOS_DIR
    schema_dir: Path = SCHEMAS_DIR
    sessions_dir: Path = Path("sessions")
    backend_kind: str = "mock"  # mock | replay | live
    backend_script: Optional[Path] = TRANSCRIPTS_DIR / "golden_ip_workflow.json"
    live_endpoint: str = ""
    live_model: str = ""
    retrieval_k: int = 8
    retrieval_mode: str = "nl"
    embedding_dim: int = 256
    max_repair_iterations: int = 8
    max_clarify_rounds: int = 3
    auto_confirm: bool = False
    bearer_token: str = ""  # optional static token for the HTTP API

    overrides: dict = field(default_factory=dict)


def load_config(path: Optional[Path] = None, **overrides) -> AppConfig:
    doc: dict = {}
    if path is not None:
        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        doc = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    service = doc.get("service", {})
    backend = doc.get("backend", {})
    retrieval = doc.get("retrieval", {})
    agent = doc.get("agent", {})
    base = AppConfig()
    config = AppConfig(
        port=int(service.get("port", base.port)),
        state_dir=Path(service.get("state_dir", base.state_dir)),
        schema_dir=Path(service.get("schema_dir", base.schema_dir)),
        sessions_dir=Path(service.get("sessions_dir", base.sessions_dir)),
        backend_kind=backend.get("kind", base.backend_kind),
        backend_script=Path(backend["script"]) if backend.get("script")
        else base.backend_script,
        live_endpoint=backend.get("endpoint", ""),
        live_model=backend.get("model", ""),
        retrieval_k=int(retrieval.get("k", base.retrieval_k)),
        retrieval_mode=retrieval.get("mode", base.retrieval_mode),
        embedding_dim=int(retrieval.get("dim", base.embedding_dim)),
        max_repair_iterations=int(agent.get("max_repair_iterations",
                                            base.max_repair_iterations)),
        max_clarify_rounds=int(agent.get("max_clarify_rounds", base.max_clarify_rounds)),
        auto_confirm=bool(agent.get("auto_confirm", base.auto_confirm)),
        bearer_token=service.get("bearer_token", ""),
    )
    for key, value in overrides.items():
        if value is not None and hasattr(config, key):
            setattr(config, key, value)
    return config
