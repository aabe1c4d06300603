"""Run reports: per-trial rows, aggregates, and emission in three formats."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from netlingua.harness.spec import VARIANT_LABELS


@dataclass
class TrialRow:
    variant: str
    input_index: int
    request: str
    trial: int
    pass_syntax: bool
    deployable: bool
    iterations: int
    latency: dict[str, Any]
    final_change_set: Optional[list] = None
    outcome: str = "ok"  # ok | failed
    error: str = ""
    human_correct: Optional[bool] = None

    def to_wire(self) -> dict:
        return {
            "variant": self.variant,
            "input_index": self.input_index,
            "request": self.request,
            "trial": self.trial,
            "pass_syntax": self.pass_syntax,
            "deployable": self.deployable,
            "iterations": self.iterations,
            "latency": self.latency,
            "final_change_set": self.final_change_set,
            "outcome": self.outcome,
            "error": self.error,
            "human_correct": self.human_correct,
        }


def compute_aggregates(rows: list[TrialRow], max_iterations: int) -> dict[str, Any]:
    """Aggregate a single variant's rows; every figure is recomputable from rows."""
    n = len(rows)
    if n == 0:
        return {
            "trials": 0, "syntax_pass_rate": 0.0, "deployable_rate": 0.0,
            "mean_latency": 0.0, "fraction_needing_repair": 0.0,
            "iteration_histogram": {str(i): 0 for i in range(max_iterations + 1)},
            "human_accuracy": None,
        }
    histogram = {str(i): 0 for i in range(max_iterations + 1)}
    for row in rows:
        bucket = min(max(row.iterations, 0), max_iterations)
        histogram[str(bucket)] += 1
    judged = [r for r in rows if r.human_correct is not None]
    return {
        "trials": n,
        "syntax_pass_rate": sum(r.pass_syntax for r in rows) / n,
        "deployable_rate": sum(r.deployable for r in rows) / n,
        "mean_latency": math.fsum(r.latency.get("total", 0.0) for r in rows) / n,
        "fraction_needing_repair": sum(r.iterations >= 1 for r in rows) / n,
        "iteration_histogram": histogram,
        "human_accuracy": (sum(r.human_correct for r in judged) / len(judged))
        if judged else None,
    }


@dataclass
class RunReport:
    spec_wire: dict[str, Any]
    rows: list[TrialRow] = field(default_factory=list)
    max_repair_iterations: int = 5

    def rows_for(self, variant: str) -> list[TrialRow]:
        return [r for r in self.rows if r.variant == variant]

    def variants(self) -> list[str]:
        seen: list[str] = []
        for row in self.rows:
            if row.variant not in seen:
                seen.append(row.variant)
        return seen

    def aggregates(self) -> dict[str, dict[str, Any]]:
        return {
            variant: compute_aggregates(self.rows_for(variant), self.max_repair_iterations)
            for variant in self.variants()
        }

    def to_wire(self) -> dict:
        return {
            "spec": self.spec_wire,
            "max_repair_iterations": self.max_repair_iterations,
            "rows": [r.to_wire() for r in self.rows],
            "aggregates": self.aggregates(),
        }


_CSV_FIELDS = ["variant", "input_index", "trial", "pass_syntax", "deployable",
               "iterations", "latency_total", "outcome", "error", "request"]


def emit_report(report: RunReport, formats: tuple[str, ...] = ("json", "csv", "markdown"),
                output_dir: Path = Path("eval-out")) -> list[Path]:
    """Write report files; returns the paths written."""
    output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    aggregates = report.aggregates()

    if "json" in formats:
        path = output_dir / "report.json"
        path.write_text(json.dumps(report.to_wire(), indent=2), encoding="utf-8")
        written.append(path)

    if "csv" in formats:
        for variant in report.variants():
            path = output_dir / f"rows_{variant.replace('+', '_')}.csv"
            with open(path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(_CSV_FIELDS)
                for row in report.rows_for(variant):
                    writer.writerow([
                        row.variant, row.input_index, row.trial, int(row.pass_syntax),
                        int(row.deployable), row.iterations,
                        f"{row.latency.get('total', 0.0):.6f}",
                        row.outcome, row.error, row.request,
                    ])
            written.append(path)

    if "markdown" in formats:
        path = output_dir / "accuracy_table.md"
        lines = ["| Configuration Method | Accuracy (%) |", "| --- | --- |"]
        for variant in report.variants():
            agg = aggregates[variant]
            accuracy = agg["human_accuracy"] if agg["human_accuracy"] is not None \
                else agg["deployable_rate"]
            label = VARIANT_LABELS.get(variant, variant)
            lines.append(f"| {label} | {100.0 * accuracy:.2f} |")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

        for variant in report.variants():
            hist_path = output_dir / f"iteration_histogram_{variant.replace('+', '_')}.json"
            hist_path.write_text(
                json.dumps(aggregates[variant]["iteration_histogram"], indent=2),
                encoding="utf-8",
            )
            written.append(hist_path)

        latency_path = output_dir / "latency_breakdown.csv"
        with open(latency_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["variant", "input_index", "trial", "retrieval",
                             "generation", "verification", "repair", "user_wait",
                             "total"])
            for row in report.rows:
                lat = row.latency
                writer.writerow([
                    row.variant, row.input_index, row.trial,
                    f"{lat.get('retrieval', 0.0):.6f}",
                    f"{lat.get('generation', 0.0):.6f}",
                    f"{lat.get('verification', 0.0):.6f}",
                    f"{sum(lat.get('repair', [])):.6f}",
                    f"{lat.get('user_wait', 0.0):.6f}",
                    f"{lat.get('total', 0.0):.6f}",
                ])
        written.append(latency_path)
    return written


def merge_judgments(report: RunReport, path: Path) -> int:
    """Attach human correct/incorrect labels: {"labels": [{variant?, input, trial, correct}]}."""
    doc = json.loads(path.read_text(encoding="utf-8"))
    count = 0
    for label in doc.get("labels", []):
        for row in report.rows:
            if (row.input_index == label["input"] and row.trial == label["trial"]
                    and row.variant == label.get("variant", row.variant)):
                row.human_correct = bool(label["correct"])
                count += 1
    return count
