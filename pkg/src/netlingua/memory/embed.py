"""Embedding backends: deterministic offline hashing and a live HTTP client.

The offline backend is the default everywhere determinism matters (tests,
replay, the harness): lowercased UTF-8 bytes, character 3-gram feature
hashing into `dim` buckets, then L2 normalization. The live backend speaks
the common JSON embeddings API and reads its key from EMBED_API_KEY.
"""

from __future__ import annotations

import os

import numpy as np

from netlingua.errors import BackendUnavailableError
from netlingua.memory.kernels import l2_normalize, trigram_counts

DEFAULT_DIM = 256


class OfflineHashEmbedding:
    """Pure-function embedding: same text, same vector, every time."""

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 8:
            raise ValueError("embedding dimension must be at least 8")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        if not text:
            raise ValueError("cannot embed empty text")
        data = text.lower().encode("utf-8")
        if len(data) < 3:
            data = data + b"   "[: 3 - len(data)]
        counts = trigram_counts(np.frombuffer(data, dtype=np.uint8), self.dim)
        return l2_normalize(counts)

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        return np.stack([self.embed(t) for t in texts])


class LiveEmbeddingBackend:
    """HTTP JSON embeddings client: POST {model, input} -> {data: [{embedding}]}.

    Auth token comes from the EMBED_API_KEY environment variable.
    """

    def __init__(self, endpoint: str, model: str, dim: int = 1536, timeout: float = 30.0):
        self.endpoint = endpoint
        self.model = model
        self.dim = dim
        self.timeout = timeout

    def _headers(self) -> dict[str, str]:
        key = os.environ.get("EMBED_API_KEY", "")
        if not key:
            raise BackendUnavailableError("EMBED_API_KEY is not set")
        return {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}

    def embed_batch(self, texts: list[str]) -> np.ndarray:
        import requests

        try:
            response = requests.post(
                self.endpoint,
                json={"model": self.model, "input": texts},
                headers=self._headers(),
                timeout=self.timeout,
            )
            response.raise_for_status()
            payload = response.json()
        except Exception as exc:
            raise BackendUnavailableError(f"embedding backend failed: {exc}")
        vectors = [item["embedding"] for item in payload["data"]]
        matrix = np.asarray(vectors, dtype=np.float64)
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return matrix / norms

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]
