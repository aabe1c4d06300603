"""The memory base: two stores (network state, IR documentation) with
exhaustive dense retrieval.

State documents are chunked per (device, top-level table) in both NL and
raw renderings; IR documents are schema subtrees of depth <= 2 printed as
source text. Ingestion atomically swaps the store snapshot, so concurrent
queries see either the old or the new revision, never a mix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from netlingua.errors import EmptyStoreError
from netlingua.memory.embed import OfflineHashEmbedding
from netlingua.memory.kernels import cosine_scores
from netlingua.schema.ast import SchemaModule
from netlingua.schema.printer import render_node
from netlingua.schema.resolver import ResolvedSchema
from netlingua.state.render import render_device_table_nl
from netlingua.state.tree import NetworkState

STORES = ("state", "ir-doc")
MODES = ("nl", "raw")
DEFAULT_K = 8


def _configdb_form(value):
    """Re-join tuple-keyed list collections into config-DB style objects."""
    if isinstance(value, dict):
        return {
            ("|".join(key) if isinstance(key, tuple) else key): _configdb_form(item)
            for key, item in value.items()
        }
    return value


@dataclass(frozen=True)
class Document:
    doc_id: str
    store: str
    text: str
    source: str
    revision: int
    mode: Optional[str] = None  # nl | raw for state documents, None for ir-docs

    def __post_init__(self) -> None:
        assert self.store in STORES
        assert self.text, "documents must have non-empty text"


@dataclass(frozen=True)
class RetrievalHit:
    document: Document
    score: float
    rank: int


@dataclass
class _Snapshot:
    documents: list[Document]
    matrix: np.ndarray  # (n, dim), rows L2-normalized, row i embeds documents[i]


class MemoryStore:
    """Both data stores plus the embedding backend used to index and query them."""

    def __init__(self, backend: Optional[OfflineHashEmbedding] = None):
        self.backend = backend or OfflineHashEmbedding()
        self._snapshots: dict[str, _Snapshot] = {}

    # --- ingestion ---

    def chunk_and_ingest(self, state: NetworkState, schema: ResolvedSchema,
                         schema_docs: Optional[list[SchemaModule]] = None) -> dict[str, int]:
        """(Re)build both stores from the given state and schema modules.

        Returns counts: {"state_documents": n, "ir_documents": m, "revision": r}.
        """
        state_docs = self._chunk_state(state, schema)
        self._swap("state", state_docs)
        modules = schema_docs if schema_docs is not None else list(schema.modules.values())
        ir_docs = self._chunk_ir_docs(modules, state.revision)
        self._swap("ir-doc", ir_docs)
        return {
            "state_documents": len(state_docs),
            "ir_documents": len(ir_docs),
            "revision": state.revision,
        }

    def ingest_state(self, state: NetworkState, schema: ResolvedSchema) -> int:
        docs = self._chunk_state(state, schema)
        self._swap("state", docs)
        return len(docs)

    def _chunk_state(self, state: NetworkState, schema: ResolvedSchema) -> list[Document]:
        docs: list[Document] = []
        for device_name in sorted(state.devices):
            device = state.devices[device_name]
            tables = sorted(
                {table for root in device.tree.values() for table in root}
                | set(device.unknown_tables)
            )
            for table in tables:
                nl_text = render_device_table_nl(device, schema, table)
                raw_text = self._raw_table_text(device, table)
                docs.append(Document(
                    doc_id=f"state/{device_name}/{table}/nl", store="state",
                    text=nl_text, source=device.source_path,
                    revision=state.revision, mode="nl",
                ))
                docs.append(Document(
                    doc_id=f"state/{device_name}/{table}/raw", store="state",
                    text=raw_text, source=device.source_path,
                    revision=state.revision, mode="raw",
                ))
        return docs

    @staticmethod
    def _raw_table_text(device, table: str) -> str:
        for root in device.tree.values():
            if table in root:
                body = json.dumps(_configdb_form(root[table]), sort_keys=True)
                return f"[{device.device_name}/{table}] {body}"
        body = json.dumps(device.unknown_tables.get(table), sort_keys=True)
        return f"[{device.device_name}/{table}] {body}"

    def _chunk_ir_docs(self, modules: list[SchemaModule], revision: int) -> list[Document]:
        docs: list[Document] = []
        for module in sorted(modules, key=lambda m: m.name):
            subtrees: list[tuple[tuple[str, ...], Any]] = []
            for root in module.root_nodes:
                subtrees.append(((root.name,), root))
                for child in root.children:
                    subtrees.append(((root.name, child.name), child))
                    for grandchild in child.children:
                        subtrees.append(((root.name, child.name, grandchild.name), grandchild))
            if not subtrees and module.typedefs:
                # Typedef-only modules still document their types.
                text = f"module {module.name}: " + ", ".join(sorted(module.typedefs))
                if module.description:
                    text += f"\n{module.description}"
                docs.append(Document(
                    doc_id=f"irdoc/{module.name}", store="ir-doc", text=text,
                    source=f"{module.name}.yang", revision=revision,
                ))
            for path, node in subtrees:
                docs.append(Document(
                    doc_id=f"irdoc/{module.name}/" + "/".join(path),
                    store="ir-doc",
                    text=render_node(node),
                    source=f"{module.name}.yang " + "/".join(path),
                    revision=revision,
                ))
        return docs

    def _swap(self, store: str, documents: list[Document]) -> None:
        if not documents:
            self._snapshots[store] = _Snapshot(documents=[], matrix=np.zeros((0, 0)))
            return
        matrix = self.backend.embed_batch([d.text for d in documents])
        self._snapshots[store] = _Snapshot(documents=documents, matrix=matrix)

    # --- queries ---

    def query_top_k(self, query: str, store: str, k: int = DEFAULT_K,
                    mode: str = "nl") -> list[RetrievalHit]:
        """Exhaustive cosine top-k; ties break by doc_id ascending."""
        if k < 1:
            raise ValueError("k must be >= 1")
        if store not in STORES:
            raise ValueError(f"unknown store {store!r}")
        snapshot = self._snapshots.get(store)
        if snapshot is None or not snapshot.documents:
            raise EmptyStoreError(store)
        if store == "state":
            indices = [i for i, d in enumerate(snapshot.documents) if d.mode == mode]
        else:
            indices = list(range(len(snapshot.documents)))
        if not indices:
            raise EmptyStoreError(f"{store}:{mode}")
        qvec = self.backend.embed(query)
        scores = cosine_scores(snapshot.matrix[indices], qvec)
        order = sorted(range(len(indices)),
                       key=lambda j: (-scores[j], snapshot.documents[indices[j]].doc_id))
        hits = []
        for rank, j in enumerate(order[:k], start=1):
            doc = snapshot.documents[indices[j]]
            hits.append(RetrievalHit(document=doc, score=float(scores[j]), rank=rank))
        return hits

    def documents(self, store: str) -> list[Document]:
        snapshot = self._snapshots.get(store)
        return list(snapshot.documents) if snapshot else []

    # --- persistence (JSON lines, one document + vector per line) ---

    def dump(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for store in STORES:
                snapshot = self._snapshots.get(store)
                if snapshot is None:
                    continue
                for doc, row in zip(snapshot.documents, snapshot.matrix):
                    record = {
                        "doc_id": doc.doc_id, "store": doc.store, "mode": doc.mode,
                        "text": doc.text, "source": doc.source, "revision": doc.revision,
                        "vector": [round(float(x), 12) for x in row],
                    }
                    handle.write(json.dumps(record) + "\n")

    def load(self, path: Path) -> None:
        by_store: dict[str, tuple[list[Document], list[list[float]]]] = {
            s: ([], []) for s in STORES
        }
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                if not line.strip():
                    continue
                record = json.loads(line)
                doc = Document(
                    doc_id=record["doc_id"], store=record["store"], mode=record.get("mode"),
                    text=record["text"], source=record["source"],
                    revision=record["revision"],
                )
                by_store[doc.store][0].append(doc)
                by_store[doc.store][1].append(record["vector"])
        for store, (docs, vectors) in by_store.items():
            if docs:
                self._snapshots[store] = _Snapshot(
                    documents=docs, matrix=np.asarray(vectors, dtype=np.float64)
                )
