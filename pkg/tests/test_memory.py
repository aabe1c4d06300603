import json

import numpy as np
import pytest

from netlingua.errors import EmptyStoreError
from netlingua.memory import MemoryStore, OfflineHashEmbedding
from netlingua.memory.kernels import trigram_counts
from netlingua.state import NetworkState, load_device_state


def _two_table_state(schema, n_devices=4):
    doc = {
        "PORT": {"Ethernet4": {"speed": "100000", "mtu": "9100"}},
        "INTERFACE": {"Ethernet4": {}, "Ethernet4|10.0.0.1/30": {}},
    }
    devices = {}
    for i in range(n_devices):
        name = f"D{i}"
        devices[name] = load_device_state(schema, json.dumps(doc), name)
    return NetworkState(devices=devices, revision=1)


def test_chunk_counts_per_device_table_mode(schema):
    state = _two_table_state(schema)
    store = MemoryStore()
    stats = store.chunk_and_ingest(state, schema)
    # 4 devices x 2 tables x 2 modes
    assert stats["state_documents"] == 16


def test_empty_state_zero_documents(schema):
    store = MemoryStore()
    stats = store.chunk_and_ingest(NetworkState(devices={}, revision=1), schema)
    assert stats["state_documents"] == 0
    with pytest.raises(EmptyStoreError):
        store.query_top_k("anything", "state")


def test_reingestion_replaces_revisions(schema):
    state1 = _two_table_state(schema)
    store = MemoryStore()
    store.chunk_and_ingest(state1, schema)
    state2 = _two_table_state(schema)
    state2.revision = 2
    store.chunk_and_ingest(state2, schema)
    hits = store.query_top_k("Ethernet4 interface", "state", k=16)
    assert hits and all(h.document.revision == 2 for h in hits)


# --- embedding backend ---


def test_embed_deterministic():
    backend = OfflineHashEmbedding()
    a = backend.embed("Ethernet4 interface speed")
    b = backend.embed("Ethernet4 interface speed")
    assert np.array_equal(a, b)


def test_embed_normalized_self_similarity():
    backend = OfflineHashEmbedding()
    vec = backend.embed("connect the leaves to the spines")
    assert abs(float(np.linalg.norm(vec)) - 1.0) <= 1e-6
    assert abs(float(vec @ vec) - 1.0) <= 1e-6


def test_embed_related_text_ranks_above_unrelated(memory):
    backend = OfflineHashEmbedding()
    query = backend.embed("Ethernet4 interface speed")
    port_doc = next(d for d in memory.documents("state")
                    if d.doc_id == "state/S0/PORT/nl")
    acl_doc = next(d for d in memory.documents("state")
                   if d.doc_id == "state/S0/ACL_TABLE/nl")
    sim_port = float(query @ backend.embed(port_doc.text))
    sim_acl = float(query @ backend.embed(acl_doc.text))
    assert sim_port > sim_acl


def test_embed_rejects_empty():
    with pytest.raises(ValueError):
        OfflineHashEmbedding().embed("")


def test_kernels_agree_bit_for_bit():
    rng = np.random.default_rng(5)
    for length in (3, 17, 256, 4096):
        data = rng.integers(0, 255, size=length, dtype=np.uint8)
        assert np.array_equal(trigram_counts(data, 256, force="numba"),
                              trigram_counts(data, 256, force="numpy"))


# --- retrieval ---


def test_rank1_self_retrieval_all_documents(memory):
    for store_name in ("state", "ir-doc"):
        for doc in memory.documents(store_name):
            hits = memory.query_top_k(doc.text, store_name, k=1,
                                      mode=doc.mode or "nl")
            assert hits[0].document.doc_id == doc.doc_id


def test_verbatim_query_rank1_matches_exhaustive_oracle(memory):
    backend = memory.backend
    doc = memory.documents("state")[3]
    query_vec = backend.embed(doc.text)
    # Oracle: exhaustive cosine over every same-mode document.
    scored = []
    for candidate in memory.documents("state"):
        if candidate.mode != doc.mode:
            continue
        scored.append((float(query_vec @ backend.embed(candidate.text)),
                       candidate.doc_id))
    best = sorted(scored, key=lambda t: (-t[0], t[1]))[0]
    hits = memory.query_top_k(doc.text, "state", k=1, mode=doc.mode)
    assert hits[0].document.doc_id == best[1] == doc.doc_id


def test_k_saturation_returns_all(memory):
    nl_docs = [d for d in memory.documents("state") if d.mode == "nl"]
    hits = memory.query_top_k("anything at all", "state", k=10_000, mode="nl")
    assert len(hits) == len(nl_docs)
    assert [h.rank for h in hits] == list(range(1, len(nl_docs) + 1))


def test_appendix_a_query_hits_all_port_documents(memory):
    query = ("Connect Ethernet4 of each Leaf to Ethernet4 of each Spine and "
             "assign IP addresses to them to bring up connectivity")
    hits = memory.query_top_k(query, "state", k=8, mode="nl")
    got = {h.document.doc_id for h in hits}
    expected = {f"state/{d}/PORT/nl" for d in ("S0", "S1", "L0", "L1")}
    assert expected <= got


def test_scores_bounded_and_sorted(memory):
    hits = memory.query_top_k("ip prefix on the leaves", "state", k=16, mode="nl")
    scores = [h.score for h in hits]
    assert all(-1.0 - 1e-9 <= s <= 1.0 + 1e-9 for s in scores)
    assert scores == sorted(scores, reverse=True)


def test_store_isolation(memory):
    state_hits = memory.query_top_k("INTERFACE_IPPREFIX_LIST leafref", "state",
                                    k=50, mode="nl")
    ir_hits = memory.query_top_k("Ethernet4 speed", "ir-doc", k=50)
    assert all(h.document.store == "state" for h in state_hits)
    assert all(h.document.store == "ir-doc" for h in ir_hits)


def test_mode_filters_raw_vs_nl(memory):
    raw_hits = memory.query_top_k("Ethernet4", "state", k=50, mode="raw")
    assert all(h.document.mode == "raw" for h in raw_hits)


def test_dump_load_round_trip(memory, tmp_path):
    path = tmp_path / "store.jsonl"
    memory.dump(path)
    fresh = MemoryStore()
    fresh.load(path)
    for store_name in ("state", "ir-doc"):
        assert ([d.doc_id for d in fresh.documents(store_name)]
                == [d.doc_id for d in memory.documents(store_name)])
    query = "Connect Ethernet4 of each Leaf to Ethernet4 of each Spine"
    original = [h.document.doc_id for h in memory.query_top_k(query, "state", k=8)]
    reloaded = [h.document.doc_id for h in fresh.query_top_k(query, "state", k=8)]
    assert original == reloaded
