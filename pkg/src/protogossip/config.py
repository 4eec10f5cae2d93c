"""Configuration dataclasses for Protogossip.

Every parameter bundle is a frozen, slotted dataclass so it can be shared
between node actors and worker processes without copying. Bundles are built
either directly, from a dict (``from_dict``, unknown keys ignored), or from the
CLI / YAML config file via :mod:`protogossip.cli`.

Bundles:
    IlvqConfig: incremental LVQ hyperparameters
    KdeConfig: kernel density estimation / evaluation grid
    CompressionConfig: adaptive DBSCAN compression
    QueuePolicy: per-neighbor LIFO queue limits
    NodeConfig: everything one node actor needs (resolved from a scenario)
    ExperimentConfig: one experiment (scenario, network, rates, dataset, seeds)

Usage:
    >>> cfg = ExperimentConfig.from_dict({"scenario": "jsd", "nodes": 5, "fanout": 4})
    >>> cfg.validate()
    []

"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Self

from protogossip.data.dataset import DatasetSpec
from protogossip.errors import ConfigError
from protogossip.utils.fields import field_type_problems

# Defaults; DESIGN.md records where each value comes from.
DEFAULT_MAX_EDGE_AGE = 50
DEFAULT_DENOISE_PERIOD = 100
DEFAULT_TH_JSD = 0.05
DEFAULT_TH_PROT = 500
DEFAULT_QUEUE_CAP = 10_000
DEFAULT_LAMBDA_S = 10.0
DEFAULT_MU = 200.0
DEFAULT_SEEDS = 50


def _from_dict[T](cls: type[T], config_dict: dict[str, Any]) -> T:
    """Create ``cls`` from the keys of ``config_dict`` that name its fields.

    Raises:
        ConfigError: A value does not fit its field's type.

    """
    valid_fields = {f.name for f in fields(cls)}  # type: ignore[arg-type]
    filtered = {k: v for k, v in config_dict.items() if k in valid_fields}
    problems = field_type_problems(cls, filtered)
    if problems:
        raise ConfigError(problems)
    return cls(**filtered)


@dataclass(frozen=True, slots=True)
class IlvqConfig:
    """Incremental LVQ hyperparameters.

    Attributes:
        max_edge_age: Edges whose age reaches this value are removed.
        denoise_period: Absorbed samples between denoising passes.
        min_learning_rate: Floor for the winner rate 1 / (1 + relevance).
        neighbor_rate_ratio: Neighbor rate as a fraction of the winner rate.

    """

    max_edge_age: int = DEFAULT_MAX_EDGE_AGE
    denoise_period: int = DEFAULT_DENOISE_PERIOD
    min_learning_rate: float = 0.01
    neighbor_rate_ratio: float = 0.1

    def __post_init__(self) -> None:
        problems = []
        if self.max_edge_age < 1:
            problems.append("max_edge_age must be >= 1")
        if self.denoise_period < 1:
            problems.append("denoise_period must be >= 1")
        if not 0 < self.min_learning_rate <= 1:
            problems.append("min_learning_rate must be in (0, 1]")
        if not 0 <= self.neighbor_rate_ratio <= 1:
            problems.append("neighbor_rate_ratio must be in [0, 1]")
        if problems:
            raise ConfigError(problems)

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> Self:
        return _from_dict(cls, config_dict)


@dataclass(frozen=True, slots=True)
class KdeConfig:
    """Kernel density estimation and evaluation-grid settings.

    Attributes:
        base_points: B_points, the base number of grid points.
        min_points: Floor for the grid size (also the size of a degenerate grid).
        max_points: Ceiling for the grid size, guarding against huge value ranges.
        bandwidth: Fixed bandwidth h; None selects Scott's rule per set.

    """

    base_points: int = 1000
    min_points: int = 100
    max_points: int = 20_000
    bandwidth: float | None = None

    def __post_init__(self) -> None:
        problems = []
        if self.base_points < 1:
            problems.append("base_points must be >= 1")
        if self.min_points < 1:
            problems.append("min_points must be >= 1")
        if self.max_points < self.min_points:
            problems.append("max_points must be >= min_points")
        if self.bandwidth is not None and self.bandwidth <= 0:
            problems.append("bandwidth must be positive")
        if problems:
            raise ConfigError(problems)

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> Self:
        return _from_dict(cls, config_dict)


@dataclass(frozen=True, slots=True)
class CompressionConfig:
    """Adaptive per-label DBSCAN compression settings.

    Attributes:
        limit_size: Th_prot; compression runs when |G| exceeds it.
        target_range: (lo, hi) fractions of the per-label quota.
        eps_initial: First DBSCAN radius tried for every label.
        eps_up: Multiplier applied when there are too many clusters.
        eps_down: Multiplier applied when there are too few clusters.
        max_iterations: DBSCAN passes allowed per label.
        min_pts: DBSCAN core-point threshold (1 keeps every prototype).

    """

    limit_size: int = DEFAULT_TH_PROT
    target_range: tuple[float, float] = (0.725, 0.775)
    eps_initial: float = 0.5
    eps_up: float = 1.25
    eps_down: float = 0.8
    max_iterations: int = 50
    min_pts: int = 1

    def __post_init__(self) -> None:
        problems = []
        lo, hi = self.target_range
        if self.limit_size < 1:
            problems.append("limit_size must be >= 1")
        if not 0 < lo < hi <= 1:
            problems.append("target_range must satisfy 0 < lo < hi <= 1")
        if self.eps_initial <= 0:
            problems.append("eps_initial must be positive")
        if not self.eps_up > 1:
            problems.append("eps_up must be > 1")
        if not 0 < self.eps_down < 1:
            problems.append("eps_down must be in (0, 1)")
        if self.max_iterations < 1:
            problems.append("max_iterations must be >= 1")
        if self.min_pts < 1:
            problems.append("min_pts must be >= 1")
        if problems:
            raise ConfigError(problems)

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> Self:
        data = dict(config_dict)
        if isinstance(data.get("target_range"), list):
            data["target_range"] = tuple(data["target_range"])
        return _from_dict(cls, data)


@dataclass(frozen=True, slots=True)
class QueuePolicy:
    """Limits of one per-neighbor LIFO queue.

    Attributes:
        max_sets: Batches kept per neighbor (None = unlimited; 1 = replace).
        max_prototypes: Total prototypes kept per neighbor (None = unlimited).

    """

    max_sets: int | None = None
    max_prototypes: int | None = None

    def __post_init__(self) -> None:
        problems = []
        if self.max_sets is not None and self.max_sets < 1:
            problems.append("queue max_sets must be >= 1")
        if self.max_prototypes is not None and self.max_prototypes < 1:
            problems.append("queue max_prototypes must be >= 1")
        if problems:
            raise ConfigError(problems)


@dataclass(frozen=True, slots=True)
class NodeConfig:
    """Everything a node actor needs, resolved from an experiment and scenario.

    Attributes:
        nodes: Network size N (complete graph).
        fanout: s, neighbors drawn per sharing round.
        t_share: Sharing probability per local update.
        th_jsd: Jensen-Shannon threshold for the worthiness gate.
        gate_enabled: Whether the worthiness gate runs (off = always worthy).
        queue: Per-neighbor queue limits.
        compress_on_queue: Compress after each absorbed peer prototype.
        compress_on_share: Compress the snapshot before it is sent.
        staleness_only: Skip ILVQ work; keep versioning and service semantics.
        batch_length: Prototypes per message in staleness-only mode.

    """

    nodes: int = 5
    fanout: int = 4
    t_share: float = 1.0
    th_jsd: float = DEFAULT_TH_JSD
    gate_enabled: bool = False
    queue: QueuePolicy = field(default_factory=QueuePolicy)
    compress_on_queue: bool = False
    compress_on_share: bool = False
    staleness_only: bool = False
    batch_length: int = 5
    ilvq: IlvqConfig = field(default_factory=IlvqConfig)
    kde: KdeConfig = field(default_factory=KdeConfig)
    compression: CompressionConfig = field(default_factory=CompressionConfig)

    def __post_init__(self) -> None:
        problems = []
        if self.nodes < 2:
            problems.append(f"nodes must be >= 2, got {self.nodes}")
        if not 0 <= self.fanout <= self.nodes - 1:
            problems.append(f"fanout s={self.fanout} must be in [0, N-1={self.nodes - 1}]")
        if not 0.0 <= self.t_share <= 1.0:
            problems.append(f"t_share must be in [0, 1], got {self.t_share}")
        if self.batch_length < 1:
            problems.append("batch_length must be >= 1")
        if problems:
            raise ConfigError(problems)


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """One experiment: scenario, network, rates, dataset and seed sweep.

    Queue limits left as None are taken from the scenario's flag bundle.

    Attributes:
        scenario: Registered scenario name (base, jsd, limit-queue, clustering).
        nodes: N.
        fanout: s.
        t_share: T_share.
        th_jsd: Th_JSD.
        th_prot: Th_prot (compression limit).
        queue_max_protos: Override of the scenario's per-neighbor prototype cap.
        queue_max_sets: Override of the scenario's per-neighbor batch cap.
        lambda_s: Sensor arrival rate (samples / second).
        mu: Service rate (train_one completions / second).
        dataset: Data source.
        horizon: Simulated seconds (None = until the dataset is exhausted).
        seeds: Number of independent runs.
        seed_offset: First seed of the sweep.
        metrics_period: Simulated seconds between metrics records.
        latency: Transport latency in seconds.
        staleness_only: Skip learning, keep queueing and versioning.
        batch_length: Prototypes per message in staleness-only mode.
        out_dir: Directory for CSV / summary output.
        workers: Worker processes for the seed sweep.

    """

    scenario: str = "base"
    nodes: int = 5
    fanout: int = 4
    t_share: float = 1.0
    th_jsd: float = DEFAULT_TH_JSD
    th_prot: int = DEFAULT_TH_PROT
    queue_max_protos: int | None = None
    queue_max_sets: int | None = None
    lambda_s: float = DEFAULT_LAMBDA_S
    mu: float = DEFAULT_MU
    dataset: DatasetSpec = field(default_factory=DatasetSpec)
    horizon: float | None = 60.0
    seeds: int = DEFAULT_SEEDS
    seed_offset: int = 0
    metrics_period: float = 1.0
    latency: float = 0.0
    staleness_only: bool = False
    batch_length: int = 5
    out_dir: Path = Path("results")
    workers: int = 1
    ilvq: IlvqConfig = field(default_factory=IlvqConfig)
    kde: KdeConfig = field(default_factory=KdeConfig)
    compression: CompressionConfig | None = None

    def validate(self) -> list[str]:
        """Return every violation found (empty list when the config is valid)."""
        from protogossip.scenarios import DEFAULT_SCENARIOS

        problems: list[str] = []
        if self.scenario not in DEFAULT_SCENARIOS:
            known = ", ".join(DEFAULT_SCENARIOS.names)
            problems.append(f"unknown scenario {self.scenario!r} (known: {known})")
        if self.nodes < 2:
            problems.append(f"nodes must be >= 2, got {self.nodes}")
        if self.fanout < 0 or self.fanout > self.nodes - 1:
            problems.append(f"s={self.fanout} must satisfy 0 <= s <= N-1={self.nodes - 1}")
        if not 0.0 <= self.t_share <= 1.0:
            problems.append(f"t_share must be in [0, 1], got {self.t_share}")
        if self.th_jsd < 0:
            problems.append(f"th_jsd must be >= 0, got {self.th_jsd}")
        if self.th_prot < 1:
            problems.append(f"th_prot must be >= 1, got {self.th_prot}")
        if self.queue_max_protos is not None and self.queue_max_protos < 1:
            problems.append("queue_max_protos must be >= 1")
        if self.queue_max_sets is not None and self.queue_max_sets < 1:
            problems.append("queue_max_sets must be >= 1")
        if self.lambda_s <= 0:
            problems.append(f"lambda_s must be positive, got {self.lambda_s}")
        if self.mu <= 0:
            problems.append(f"mu must be positive, got {self.mu}")
        if self.horizon is not None and self.horizon <= 0:
            problems.append(f"horizon must be positive, got {self.horizon}")
        if self.horizon is None and self.staleness_only:
            problems.append("staleness-only runs need a finite horizon")
        if self.seeds < 1:
            problems.append(f"seeds must be >= 1, got {self.seeds}")
        if self.metrics_period <= 0:
            problems.append("metrics_period must be positive")
        if self.latency < 0:
            problems.append("latency must be >= 0")
        if self.batch_length < 1:
            problems.append("batch_length must be >= 1")
        if self.workers < 1:
            problems.append("workers must be >= 1")
        if not self.staleness_only:
            problems.extend(self.dataset.validate(self.nodes))
        return problems

    def check(self) -> None:
        """Raise :class:`ConfigError` listing every violation, if any."""
        problems = self.validate()
        if problems:
            raise ConfigError(problems)

    @property
    def seed_list(self) -> tuple[int, ...]:
        return tuple(range(self.seed_offset, self.seed_offset + self.seeds))

    def compression_config(self) -> CompressionConfig:
        """Compression settings with ``limit_size`` bound to ``th_prot``."""
        if self.compression is None:
            return CompressionConfig(limit_size=self.th_prot)
        if self.compression.limit_size != self.th_prot:
            return CompressionConfig.from_dict(
                {f.name: getattr(self.compression, f.name) for f in fields(self.compression)}
                | {"limit_size": self.th_prot}
            )
        return self.compression

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> Self:
        """Create ExperimentConfig from a flat or nested dictionary.

        Nested bundles (``dataset``, ``ilvq``, ``kde``, ``compression``) may be
        given as dicts. Unknown keys are silently ignored.

        Example:
            >>> ExperimentConfig.from_dict({"nodes": 8, "unknown_key": 1}).nodes
            8

        """
        data = dict(config_dict)
        if isinstance(data.get("dataset"), dict):
            data["dataset"] = DatasetSpec.from_dict(data["dataset"])
        if isinstance(data.get("ilvq"), dict):
            data["ilvq"] = IlvqConfig.from_dict(data["ilvq"])
        if isinstance(data.get("kde"), dict):
            data["kde"] = KdeConfig.from_dict(data["kde"])
        if isinstance(data.get("compression"), dict):
            data["compression"] = CompressionConfig.from_dict(data["compression"])
        if isinstance(data.get("out_dir"), str):
            data["out_dir"] = Path(data["out_dir"])
        return _from_dict(cls, data)


__all__ = [
    "CompressionConfig",
    "ExperimentConfig",
    "IlvqConfig",
    "KdeConfig",
    "NodeConfig",
    "QueuePolicy",
]
