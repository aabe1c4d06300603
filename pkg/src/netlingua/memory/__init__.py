"""Memory base: state + IR documentation stores with dense retrieval."""

from netlingua.memory.embed import DEFAULT_DIM, LiveEmbeddingBackend, OfflineHashEmbedding
from netlingua.memory.store import DEFAULT_K, Document, MemoryStore, RetrievalHit

__all__ = [
    "DEFAULT_DIM",
    "DEFAULT_K",
    "Document",
    "LiveEmbeddingBackend",
    "MemoryStore",
    "OfflineHashEmbedding",
    "RetrievalHit",
]
