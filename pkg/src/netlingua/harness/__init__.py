"""Batch evaluation harness: accuracy bookkeeping, histograms, latency."""

from netlingua.harness.report import RunReport, TrialRow, compute_aggregates, emit_report
from netlingua.harness.runner import run, run_nile_repair
from netlingua.harness.spec import VARIANT_LABELS, VARIANTS, RunSpec, load_requests, load_run_spec

__all__ = [
    "RunReport",
    "RunSpec",
    "TrialRow",
    "VARIANTS",
    "VARIANT_LABELS",
    "compute_aggregates",
    "emit_report",
    "load_requests",
    "load_run_spec",
    "run",
    "run_nile_repair",
]
