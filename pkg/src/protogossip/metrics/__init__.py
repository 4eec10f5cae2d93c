"""Prequential scoring, metrics records and cross-seed aggregation."""

from protogossip.metrics.records import (
    CSV_FIELDS,
    RECORD_FIELDS,
    MetricsRecord,
    RunSummary,
    aggregate_runs,
    efficiency_ratio,
    final_records,
    render_aggregate_csv,
    render_run_csv,
    summarize_run,
    write_run_csv,
)
from protogossip.metrics.scores import PrequentialCounter, f1_score, prequential_update

__all__ = [
    "CSV_FIELDS",
    "RECORD_FIELDS",
    "MetricsRecord",
    "PrequentialCounter",
    "RunSummary",
    "aggregate_runs",
    "efficiency_ratio",
    "f1_score",
    "final_records",
    "prequential_update",
    "render_aggregate_csv",
    "render_run_csv",
    "summarize_run",
    "write_run_csv",
]
