"""Numeric kernels for the offline embedding backend.

The hot loop is character 3-gram feature hashing: every byte triple is
hashed into one of `dim` buckets and counted. Two implementations produce
bit-identical counts: a numba @njit kernel (default) and a pure-numpy
fallback. Selection: env NETLINGUA_NUMBA=0|off|false forces the numpy
path; numba failing to import also falls back. benchmarks/bench_embedding.py
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_HASH_BASE = 131
_DISABLED_VALUES = ("0", "off", "false", "no")


def numba_requested() -> bool:
    return os.environ.get("NETLINGUA_NUMBA", "1").lower() not in _DISABLED_VALUES


def trigram_counts_numpy(data: np.ndarray, dim: int) -> np.ndarray:
    """Vectorized 3-gram bucket counts. data: uint8 array of length >= 3."""
    b = data.astype(np.int64)
    buckets = (b[:-2] * (_HASH_BASE * _HASH_BASE) + b[1:-1] * _HASH_BASE + b[2:]) % dim
    return np.bincount(buckets, minlength=dim).astype(np.float64)


try:
    from numba import njit

    @njit(cache=True)
    def _trigram_counts_jit(data: np.ndarray, dim: int) -> np.ndarray:  # pragma: no cover
        counts = np.zeros(dim, dtype=np.float64)
        for i in range(data.shape[0] - 2):
            h = (np.int64(data[i]) * (_HASH_BASE * _HASH_BASE)
                 + np.int64(data[i + 1]) * _HASH_BASE
                 + np.int64(data[i + 2])) % dim
            counts[h] += 1.0
        return counts

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _trigram_counts_jit = None
    _HAVE_NUMBA = False


def trigram_counts(data: np.ndarray, dim: int, force: str | None = None) -> np.ndarray:
    """3-gram bucket counts via the active kernel.

    force: "numba" | "numpy" | None (None honors the env flag).
    """
    use_numba = _HAVE_NUMBA and numba_requested() if force is None else force == "numba"
    if use_numba:
        if not _HAVE_NUMBA:
            raise RuntimeError("numba kernel requested but numba is unavailable")
        return _trigram_counts_jit(data, dim)
    return trigram_counts_numpy(data, dim)


def active_kernel() -> str:
    return "numba" if (_HAVE_NUMBA and numba_requested()) else "numpy"


def l2_normalize(vector: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        return vector
    return vector / norm


def cosine_scores(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Dot products; with L2-normalized rows and query these are cosines."""
    return matrix @ query
