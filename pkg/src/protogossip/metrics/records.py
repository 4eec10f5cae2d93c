"""Metrics records, their CSV form, and cross-seed aggregation.

A :class:`MetricsRecord` is one node's cumulative state at one simulation
time. Run CSVs have one header row with the record fields followed by
``seed`` and ``scenario``; floats are written with ``repr`` so equal runs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

BYTES_PER_MB = 1_000_000


@dataclass(frozen=True, slots=True)
class MetricsRecord:
    """Cumulative metrics of one node at one time.

    ``tp``, ``fp`` and ``fn`` are per-class counts formatted ``label=count``
    and joined by ``;``.
    """

    time: float
    node: int
    tp: str
    fp: str
    fn: str
    f1: float
    prototypes_trained: int
    bytes_sent: int
    model_size: int
    mean_staleness: float


RECORD_FIELDS: tuple[str, ...] = tuple(f.name for f in fields(MetricsRecord))
CSV_FIELDS: tuple[str, ...] = (*RECORD_FIELDS, "seed", "scenario")


def _cell(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_run_csv(records: Iterable[MetricsRecord], *, seed: int, scenario: str) -> str:
    """The run CSV as text."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for record in records:
        row = {k: _cell(v) for k, v in asdict(record).items()}
        row["seed"] = str(seed)
        row["scenario"] = scenario
        writer.writerow(row)
    return buffer.getvalue()


def write_run_csv(
    path: Path, records: Iterable[MetricsRecord], *, seed: int, scenario: str
) -> str:
    """Write a run CSV and return its text."""
    text = render_run_csv(records, seed=seed, scenario=scenario)
    path.write_text(text, encoding="utf-8")
    return text


def final_records(records: Sequence[MetricsRecord]) -> dict[int, MetricsRecord]:
    """Last record of every node."""
    last: dict[int, MetricsRecord] = {}
    for record in records:
        last[record.node] = record
    return last


@dataclass(frozen=True, slots=True)
class RunSummary:
    """Node-averaged final metrics of one run.

    Attributes:
        seed: Seed of the run.
        duration: Simulated seconds covered.
        f1: Mean final F1 across nodes.
        prototypes_trained: Mean trained prototypes per node.
        bytes_sent: Mean cumulative bytes sent per node.
        bandwidth_rate: Mean bytes per second per node.
        model_size: Mean final |G|.
        mean_staleness: Mean time-averaged staleness.

    """

    seed: int
    duration: float
    f1: float
    prototypes_trained: float
    bytes_sent: float
    bandwidth_rate: float
    model_size: float
    mean_staleness: float

    @property
    def efficiency(self) -> float:
        return efficiency_ratio(self.f1, self.bandwidth_rate)


SUMMARY_METRICS = (
    "f1",
    "prototypes_trained",
    "bytes_sent",
    "bandwidth_rate",
    "model_size",
    "mean_staleness",
)


def summarize_run(records: Sequence[MetricsRecord], *, seed: int, duration: float) -> RunSummary:
    """Average each node's final record."""
    last = list(final_records(records).values())
    if not last:
        return RunSummary(seed, duration, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def mean(values: Iterable[float]) -> float:
        return math.fsum(values) / len(last)

    bytes_sent = mean(r.bytes_sent for r in last)
    return RunSummary(
        seed=seed,
        duration=duration,
        f1=mean(r.f1 for r in last),
        prototypes_trained=mean(r.prototypes_trained for r in last),
        bytes_sent=bytes_sent,
        bandwidth_rate=bytes_sent / duration if duration > 0 else 0.0,
        model_size=mean(r.model_size for r in last),
        mean_staleness=mean(r.mean_staleness for r in last),
    )


def aggregate_runs(summaries: Sequence[RunSummary]) -> dict[str, tuple[float, float]]:
    """Mean and (population) standard deviation of every summary metric."""
    out: dict[str, tuple[float, float]] = {}
    for metric in SUMMARY_METRICS:
        values = np.array([getattr(s, metric) for s in summaries], dtype=float)
        if values.size == 0:
            out[metric] = (0.0, 0.0)
        else:
            out[metric] = (float(values.mean()), float(values.std()))
    return out


def render_aggregate_csv(
    aggregate: dict[str, tuple[float, float]], *, runs: int, scenario: str
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("metric", "mean", "std", "runs", "scenario"))
    for metric, (mean, std) in aggregate.items():
        writer.writerow((metric, repr(mean), repr(std), runs, scenario))
    return buffer.getvalue()


def efficiency_ratio(f1: float, bandwidth_rate: float) -> float:
    """F1 in percent per MB/s of bandwidth (inf when nothing was sent)."""
    mb_per_s = bandwidth_rate / BYTES_PER_MB
    if mb_per_s <= 0:
        return math.inf if f1 > 0 else 0.0
    return 100.0 * f1 / mb_per_s


__all__ = [
    "CSV_FIELDS",
    "RECORD_FIELDS",
    "SUMMARY_METRICS",
    "MetricsRecord",
    "RunSummary",
    "aggregate_runs",
    "efficiency_ratio",
    "final_records",
    "render_aggregate_csv",
    "render_run_csv",
    "summarize_run",
    "write_run_csv",
]
