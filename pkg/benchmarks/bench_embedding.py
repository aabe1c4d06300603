"""Benchmark: numba kernel vs pure-numpy fallback for 3-gram hashing.

Run:  python benchmarks/bench_embedding.py [--dim 256] [--repeat 5]
The numba path needs one warmup call for JIT; the table reports steady-state
times over a synthetic corpus shaped like the fixture documents.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from netlingua.memory.kernels import trigram_counts

WORDS = ("ethernet", "interface", "prefix", "speed", "mtu", "neighbor", "acl",
         "route", "spine", "leaf", "10.1.1.0/30", "up", "append", "remove")


def make_corpus(n_docs: int, words_per_doc: int, seed: int = 0) -> list[np.ndarray]:
    rng = random.Random(seed)
    docs = []
    for _ in range(n_docs):
        text = " ".join(rng.choice(WORDS) for _ in range(words_per_doc))
        docs.append(np.frombuffer(text.encode(), dtype=np.uint8))
    return docs


def bench(kernel: str, corpus: list[np.ndarray], dim: int, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for data in corpus:
            trigram_counts(data, dim, force=kernel)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--docs", type=int, default=2000)
    parser.add_argument("--words", type=int, default=120)
    args = parser.parse_args()

    corpus = make_corpus(args.docs, args.words)
    total_bytes = sum(len(d) for d in corpus)

    # Warm up the JIT and check the two paths agree before timing.
    sample = corpus[0]
    assert np.array_equal(trigram_counts(sample, args.dim, force="numba"),
                          trigram_counts(sample, args.dim, force="numpy"))

    t_numba = bench("numba", corpus, args.dim, args.repeat)
    t_numpy = bench("numpy", corpus, args.dim, args.repeat)

    print(f"corpus: {args.docs} docs, {total_bytes / 1e6:.1f} MB, dim={args.dim}")
    print(f"{'kernel':<8} {'best time':>12} {'throughput':>14}")
    for name, t in (("numba", t_numba), ("numpy", t_numpy)):
        print(f"{name:<8} {t * 1e3:>10.1f} ms {total_bytes / t / 1e6:>10.1f} MB/s")
    print(f"speedup (numpy/numba): {t_numpy / t_numba:.2f}x")


if __name__ == "__main__":
    main()
