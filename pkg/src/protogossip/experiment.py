"""Seed sweeps and their output files.

:func:`run_experiment` runs one simulation per seed, serially or in a process
pool, and then writes from the parent process, in seed order:

- ``run-<scenario>-seed<k>.csv``: the MetricsRecord stream of seed k
- ``aggregate-<scenario>.csv``: mean and std of every summary metric
- ``summary-<scenario>.yaml``: headline numbers, queueing checks and the
  SHA-256 of every run CSV

A Th_prot sweep runs the clustering scenario once per limit, each into its
own ``th-prot-<limit>`` subdirectory.

Thread Safety:
    Each run owns all of its state. Worker processes only return values;
    nothing is written until every run has finished.

"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import yaml

from protogossip.config import ExperimentConfig
from protogossip.data import DatasetSpec
from protogossip.errors import InvalidParameterError
from protogossip.metrics.records import (
    BYTES_PER_MB,
    RunSummary,
    aggregate_runs,
    efficiency_ratio,
    render_aggregate_csv,
    render_run_csv,
    summarize_run,
)
from protogossip.sim.engine import run_simulation
from protogossip.sim.lemmas import lemma1_stable, lemma2_bound
from protogossip.sim.staleness import mean_batch_length
from protogossip.utils.hashing import hash_file, hash_str
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TH_PROT_SWEEP = (50, 150, 250, 500)


@dataclass(frozen=True, slots=True)
class SeedOutcome:
    """What one seed hands back to the parent process."""

    seed: int
    csv_text: str
    summary: RunSummary
    mean_batch_length: float
    largest_message: int
    messages_sent: int
    gate_suppressed: int


@dataclass(frozen=True, slots=True)
class ExperimentReport:
    """Result of one experiment after its files were written."""

    config: ExperimentConfig
    outcomes: tuple[SeedOutcome, ...]
    aggregate: dict[str, tuple[float, float]]
    run_files: tuple[Path, ...]
    aggregate_file: Path
    summary_file: Path
    summary: dict[str, Any]

    @property
    def mean_f1(self) -> float:
        return self.aggregate["f1"][0]

    @property
    def mean_bytes_sent(self) -> float:
        return self.aggregate["bytes_sent"][0]


def run_seed(config: ExperimentConfig, seed: int) -> SeedOutcome:
    """Run one seed and summarize it (module-level so worker processes can import it)."""
    result = run_simulation(config, seed)
    return SeedOutcome(
        seed=seed,
        csv_text=render_run_csv(result.records, seed=seed, scenario=config.scenario),
        summary=summarize_run(result.records, seed=seed, duration=result.end_time),
        mean_batch_length=mean_batch_length(result.tracker),
        largest_message=result.largest_message,
        messages_sent=sum(n.messages_sent for n in result.nodes),
        gate_suppressed=sum(n.gate_suppressed for n in result.nodes),
    )


def run_seeds(config: ExperimentConfig) -> tuple[SeedOutcome, ...]:
    """Every seed of ``config``, ordered by seed."""
    config.check()
    seeds = config.seed_list
    if config.workers == 1 or len(seeds) == 1:
        return tuple(run_seed(config, seed) for seed in seeds)
    workers = min(config.workers, len(seeds))
    logger.info("Running %d seeds on %d worker processes", len(seeds), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(run_seed, [config] * len(seeds), seeds))
    return tuple(sorted(outcomes, key=lambda o: o.seed))


def _queueing_checks(config: ExperimentConfig, outcomes: Sequence[SeedOutcome]) -> dict[str, Any]:
    batch = math.fsum(o.mean_batch_length for o in outcomes) / len(outcomes)
    checks: dict[str, Any] = {
        "mean_batch_length": batch,
        "stable": lemma1_stable(config.lambda_s, config.fanout, config.t_share, batch, config.mu),
    }
    if config.fanout > 0 and config.t_share > 0:
        checks["staleness_bound"] = lemma2_bound(
            config.mu, config.lambda_s, config.fanout, config.t_share, config.nodes
        )
    return checks


def _dataset_entry(spec: DatasetSpec) -> dict[str, Any]:
    """Where the samples came from; CSV sources also get the SHA-256 of the file."""
    return {
        "source": spec.source,
        "size": spec.size,
        "start": "random" if spec.random_start else spec.start,
        "sha256": None if spec.is_synthetic else hash_file(Path(spec.source)),
    }


def build_summary(
    config: ExperimentConfig,
    outcomes: Sequence[SeedOutcome],
    aggregate: dict[str, tuple[float, float]],
    fingerprints: dict[str, str],
) -> dict[str, Any]:
    """The summary document written next to the CSVs."""
    f1 = aggregate["f1"][0]
    rate = aggregate["bandwidth_rate"][0]
    return {
        "scenario": config.scenario,
        "runs": len(outcomes),
        "seeds": list(config.seed_list),
        "nodes": config.nodes,
        "fanout": config.fanout,
        "t_share": config.t_share,
        "th_jsd": config.th_jsd,
        "th_prot": config.th_prot,
        "dataset": _dataset_entry(config.dataset),
        "mean_f1": f1,
        "mean_bytes_sent": aggregate["bytes_sent"][0],
        "bandwidth_rate_bytes_per_s": rate,
        "bandwidth_rate_mb_per_s": rate / BYTES_PER_MB,
        "efficiency_ratio": efficiency_ratio(f1, rate),
        "mean_staleness": aggregate["mean_staleness"][0],
        "largest_message": max(o.largest_message for o in outcomes),
        "messages_sent": sum(o.messages_sent for o in outcomes),
        "gate_suppressed": sum(o.gate_suppressed for o in outcomes),
        "queueing": _queueing_checks(config, outcomes),
        "fingerprints": fingerprints,
    }


def write_outputs(config: ExperimentConfig, outcomes: Sequence[SeedOutcome]) -> ExperimentReport:
    """Write run CSVs, the aggregate CSV and the summary for ``outcomes``.

    Raises:
        InvalidParameterError: If ``outcomes`` is empty.
        OSError: If the output directory cannot be written.

    """
    if not outcomes:
        raise InvalidParameterError("no runs to write")
    out_dir = config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = config.scenario

    run_files = []
    fingerprints = {}
    for outcome in outcomes:
        path = out_dir / f"run-{scenario}-seed{outcome.seed}.csv"
        path.write_text(outcome.csv_text, encoding="utf-8")
        run_files.append(path)
        fingerprints[path.name] = hash_str(outcome.csv_text)

    aggregate = aggregate_runs([o.summary for o in outcomes])
    aggregate_file = out_dir / f"aggregate-{scenario}.csv"
    aggregate_file.write_text(
        render_aggregate_csv(aggregate, runs=len(outcomes), scenario=scenario), encoding="utf-8"
    )

    summary = build_summary(config, outcomes, aggregate, fingerprints)
    summary_file = out_dir / f"summary-{scenario}.yaml"
    summary_file.write_text(yaml.safe_dump(summary, sort_keys=False), encoding="utf-8")
    logger.info(
        "Wrote %d runs of %s to %s (F1 %.4f, %.1f bytes/node)",
        len(outcomes),
        scenario,
        out_dir,
        summary["mean_f1"],
        summary["mean_bytes_sent"],
    )
    return ExperimentReport(
        config=config,
        outcomes=tuple(outcomes),
        aggregate=aggregate,
        run_files=tuple(run_files),
        aggregate_file=aggregate_file,
        summary_file=summary_file,
        summary=summary,
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every seed of ``config`` and write its output files.

    Raises:
        ConfigError: If the configuration is invalid.

    """
    return write_outputs(config, run_seeds(config))


def run_th_prot_sweep(
    config: ExperimentConfig, limits: Sequence[int] = DEFAULT_TH_PROT_SWEEP
) -> tuple[ExperimentReport, ...]:
    """Run the clustering scenario once per Th_prot limit."""
    reports = []
    for limit in limits:
        swept = replace(
            config,
            scenario="clustering",
            th_prot=limit,
            out_dir=config.out_dir / f"th-prot-{limit}",
        )
        reports.append(run_experiment(swept))
    return tuple(reports)


__all__ = [
    "DEFAULT_TH_PROT_SWEEP",
    "ExperimentReport",
    "SeedOutcome",
    "build_summary",
    "run_experiment",
    "run_seed",
    "run_seeds",
    "run_th_prot_sweep",
    "write_outputs",
]
