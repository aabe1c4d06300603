"""Batch runner: the agent pipeline over a request dataset, per variant.

Each trial runs a fresh auto-confirm session against the fixture snapshot.
Per-trial failures become outcome rows; nothing aborts the run. With
deterministic mock backends, trials are replicas and two runs of the same
spec produce identical reports up to wall-clock fields.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional

from netlingua.agent.backends import LiveLLMBackend, MockBackend, MockScriptEntry
from netlingua.agent.loop import run_until_blocked, start_session
from netlingua.agent.session import AgentConfig
from netlingua.errors import NetLinguaError
from netlingua.fixtures import load_clos_state, load_schema
from netlingua.harness.report import RunReport, TrialRow, merge_judgments
from netlingua.harness.spec import VARIANTS, RequestRecord, RunSpec, load_requests
from netlingua.memory.store import MemoryStore
from netlingua.nile.repair import iterative_repair_nile
from netlingua.validation.checks import validate_instance

BackendFactory = Callable[[], object]


def _mock_factory(spec: RunSpec) -> BackendFactory:
    if spec.mock_script is None:
        raise NetLinguaError("mock backend requires a script file (backend.script)")
    doc = json.loads(Path(spec.mock_script).read_text(encoding="utf-8"))
    entries = [MockScriptEntry(response=r) for r in doc.get("responses", [])]
    if not entries and "default_response" in doc:
        entries = [MockScriptEntry(response=doc["default_response"])]
    cycle = bool(doc.get("cycle", len(entries) == 1))
    return lambda: MockBackend(entries=list(entries), cycle=cycle)


def backend_factory(spec: RunSpec) -> BackendFactory:
    if spec.backend == "mock":
        return _mock_factory(spec)
    if spec.backend == "live":
        endpoint, model = spec.live_endpoint, spec.live_model
        return lambda: LiveLLMBackend(endpoint=endpoint, model=model)
    raise NetLinguaError(f"unsupported harness backend {spec.backend!r}")


def run(spec: RunSpec, factory: Optional[BackendFactory] = None) -> RunReport:
    """Execute the spec and return the report (transcripts land in output_dir)."""
    schema = load_schema(spec.schema_dir)
    base_state = load_clos_state(schema, state_dir=spec.state_dir)
    store = MemoryStore()
    store.chunk_and_ingest(base_state, schema)
    factory = factory or backend_factory(spec)
    requests = load_requests(spec.dataset)

    report = RunReport(spec_wire=_spec_wire(spec),
                       max_repair_iterations=spec.max_repair_iterations)
    jobs = [
        (variant, input_index, record, trial)
        for variant in spec.variants
        for input_index, record in enumerate(requests)
        for trial in range(1, spec.trials + 1)
    ]

    def _run_job(job) -> TrialRow:
        variant, input_index, record, trial = job
        return _run_trial(spec, schema, base_state, store, factory,
                          variant, input_index, record, trial)

    if spec.parallelism > 1:
        with ThreadPoolExecutor(max_workers=spec.parallelism) as pool:
            report.rows = list(pool.map(_run_job, jobs))
    else:
        report.rows = [_run_job(job) for job in jobs]

    if spec.judgment_file is not None:
        merge_judgments(report, spec.judgment_file)
    return report


def _spec_wire(spec: RunSpec) -> dict:
    return {
        "dataset": str(spec.dataset),
        "variants": list(spec.variants),
        "trials": spec.trials,
        "backend": spec.backend,
        "max_repair_iterations": spec.max_repair_iterations,
        "retrieval_k": spec.retrieval_k,
    }


def _run_trial(spec: RunSpec, schema, base_state, store, factory: BackendFactory,
               variant: str, input_index: int, record: RequestRecord,
               trial: int) -> TrialRow:
    flags = VARIANTS[variant]
    config = AgentConfig(
        llm_backend=factory(),
        schema=schema,
        memory=store,
        max_repair_iterations=spec.max_repair_iterations,
        retrieval_k=spec.retrieval_k,
        retrieval_mode=flags["retrieval_mode"],
        auto_confirm=True,
        retrieval_enabled=flags["retrieval_enabled"],
        repair_enabled=flags["repair_enabled"],
    )
    try:
        session = start_session(record.request, base_state, config)
        run_until_blocked(session)
    except Exception as exc:  # per-trial failures are outcomes, not aborts
        return TrialRow(variant=variant, input_index=input_index,
                        request=record.request, trial=trial, pass_syntax=False,
                        deployable=False, iterations=0, latency={"total": 0.0},
                        outcome="failed", error=str(exc))

    pass_syntax = bool(session.last_report and session.last_report.passed)
    deployable = False
    if session.phase == "done" and session.final_state is not None:
        deployable = validate_instance(session.final_state, schema).passed
    final_wire = (session.working_change_set.to_wire()
                  if session.working_change_set is not None else None)
    return TrialRow(
        variant=variant, input_index=input_index, request=record.request,
        trial=trial, pass_syntax=pass_syntax, deployable=deployable,
        iterations=session.iteration, latency=session.latency.to_wire(),
        final_change_set=final_wire,
        outcome="ok" if session.phase == "done" else "failed",
        error=session.failure_cause,
    )


def run_nile_repair(records, factory: BackendFactory,
                    max_iter: int = 8) -> dict[str, object]:
    """Repair-loop analysis over an intent dataset: histogram of iterations."""
    histogram = {str(i): 0 for i in range(max_iter + 1)}
    failures = 0
    rows = []
    for index, record in enumerate(records):
        result = iterative_repair_nile(record.utterance, factory(), max_iter=max_iter)
        histogram[str(min(result.iterations_used, max_iter))] += 1
        if not result.succeeded:
            failures += 1
        rows.append({
            "index": index,
            "utterance": record.utterance,
            "iterations_used": result.iterations_used,
            "succeeded": result.succeeded,
            "error": result.error,
        })
    return {"histogram": histogram, "failures": failures, "rows": rows,
            "dataset_size": len(rows)}
