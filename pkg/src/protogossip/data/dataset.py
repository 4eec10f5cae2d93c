"""Dataset ingestion and the strided per-node partition.

A dataset is a CSV file with a header row (comma delimiter, label in the last
column unless configured otherwise) or the name of a built-in synthetic
generator. Node ``m`` of ``N`` receives the strided index set

    I_m = { R + i*N + m  |  i = 0 .. S-1 },   S = D // N

so every node sees an equitable, order-preserving slice of the same stream.

Thread Safety:
    Everything here is a pure function over immutable inputs; loaded streams
    are tuples and may be shared between node actors.

"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Self

import numpy as np

from protogossip.data.synthetic import synth_drift_stream
from protogossip.errors import ConfigError, DatasetError, InvalidParameterError
from protogossip.prototypes import LabeledSample
from protogossip.utils.fields import field_type_problems
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

SYNTHETIC_PREFIX = "synthetic:"
SYNTHETIC_SOURCES = frozenset({"synthetic:drift"})


@dataclass(frozen=True, slots=True)
class DatasetSpec:
    """Where a stream comes from and which slice of it the experiment uses.

    Attributes:
        source: CSV path or a synthetic generator name (``synthetic:drift``).
        size: D, the number of samples used across all nodes.
        start: R, the first index used (ignored when ``random_start`` is set).
        random_start: Draw R uniformly from [0, source_length - D] per run.
        feature_columns: Header names of the feature columns (None = all but label).
        label_column: Header name of the label column (None = last column).
        normalize: Per-node min-max scaling of features into [0, 1].
        synthetic_n: Stream length produced by a synthetic generator.
        drift_at: Index of the concept swap in ``synthetic:drift``. None puts it
            halfway through the used slice, R + D // 2, or at n // 2 with a
            random R.

    """

    source: str = "synthetic:drift"
    size: int = 1000
    start: int = 0
    random_start: bool = False
    feature_columns: tuple[str, ...] | None = None
    label_column: str | None = None
    normalize: bool = True
    synthetic_n: int = 2000
    drift_at: int | None = None

    @property
    def is_synthetic(self) -> bool:
        return self.source.startswith(SYNTHETIC_PREFIX)

    @property
    def resolved_drift_at(self) -> int:
        if self.drift_at is not None:
            return self.drift_at
        if self.random_start:
            return self.synthetic_n // 2
        return self.start + self.size // 2

    def validate(self, nodes: int) -> list[str]:
        """Return the problems that prevent ``nodes`` nodes from using this spec."""
        problems: list[str] = []
        if self.size < 2 * nodes:
            problems.append(
                f"dataset size D={self.size} must be >= 2*N={2 * nodes} "
                "so every node can initialize"
            )
        if self.start < 0:
            problems.append(f"dataset start R={self.start} must be >= 0")
        if self.is_synthetic:
            if self.source not in SYNTHETIC_SOURCES:
                problems.append(f"unknown synthetic source {self.source!r}")
            if not 0 < self.resolved_drift_at < self.synthetic_n:
                problems.append(
                    f"drift_at={self.resolved_drift_at} must satisfy "
                    f"0 < drift_at < n={self.synthetic_n}"
                )
            if not self.random_start and self.start + self.size > self.synthetic_n:
                problems.append(
                    f"R + D = {self.start + self.size} exceeds synthetic length {self.synthetic_n}"
                )
            elif self.size > self.synthetic_n:
                problems.append(f"D={self.size} exceeds synthetic length {self.synthetic_n}")
        elif not Path(self.source).is_file():
            problems.append(f"dataset file not found: {self.source}")
        return problems

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> Self:
        """Create a spec from a dict, ignoring unknown keys.

        Raises:
            ConfigError: A value does not fit its field's type.

        """
        valid = {
            "source",
            "size",
            "start",
            "random_start",
            "feature_columns",
            "label_column",
            "normalize",
            "synthetic_n",
            "drift_at",
        }
        data = {k: v for k, v in config_dict.items() if k in valid}
        if isinstance(data.get("source"), Path):
            data["source"] = str(data["source"])
        problems = field_type_problems(cls, data)
        if problems:
            raise ConfigError(problems)
        if data.get("feature_columns") is not None:
            data["feature_columns"] = tuple(data["feature_columns"])
        return cls(**data)


def partition_indices(
    m: int,
    nodes: int,
    per_node: int,
    start: int = 0,
    source_length: int | None = None,
) -> tuple[int, ...]:
    """Indices of node ``m``'s slice: ``start + i*nodes + m`` for i < per_node.

    Raises:
        InvalidParameterError: If ``m`` is not in [0, nodes) or ``per_node`` < 1.
        DatasetError: If an index falls outside ``source_length``.

    """
    if nodes < 1 or not 0 <= m < nodes:
        raise InvalidParameterError(f"node index m={m} must satisfy 0 <= m < N={nodes}")
    if per_node < 1:
        raise InvalidParameterError(f"samples per node S={per_node} must be >= 1")
    if start < 0:
        raise InvalidParameterError(f"start R={start} must be >= 0")
    indices = tuple(start + i * nodes + m for i in range(per_node))
    if source_length is not None and indices[-1] >= source_length:
        raise DatasetError(
            f"partition index {indices[-1]} out of range for a source of length {source_length}"
        )
    return indices


def read_csv(
    path: str | Path,
    *,
    feature_columns: Sequence[str] | None = None,
    label_column: str | None = None,
) -> tuple[LabeledSample, ...]:
    """Parse a headed CSV file into labeled samples.

    Raises:
        DatasetError: Missing file, unknown column, or a malformed row (the
            error names the 1-indexed data row).

    """
    path = Path(path)
    source_file = str(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"cannot open dataset: {e.strerror}", source_file=source_file) from e

    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header:
            raise DatasetError("missing header row", source_file=source_file)
        header = [h.strip() for h in header]
        label_name = label_column if label_column is not None else header[-1]
        if label_name not in header:
            raise DatasetError(f"unknown label column {label_name!r}", source_file=source_file)
        label_idx = header.index(label_name)
        if feature_columns is None:
            feature_idx = [i for i in range(len(header)) if i != label_idx]
        else:
            missing = [c for c in feature_columns if c not in header]
            if missing:
                raise DatasetError(
                    f"unknown feature columns {missing!r}", source_file=source_file
                )
            feature_idx = [header.index(c) for c in feature_columns]
        if not feature_idx:
            raise DatasetError("no feature columns", source_file=source_file)

        samples: list[LabeledSample] = []
        for row_number, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DatasetError(
                    f"expected {len(header)} cells, found {len(row)}",
                    row=row_number,
                    source_file=source_file,
                )
            try:
                vector = tuple(float(row[i]) for i in feature_idx)
            except ValueError as e:
                raise DatasetError(
                    f"non-numeric feature cell: {e}", row=row_number, source_file=source_file
                ) from e
            raw_label = row[label_idx].strip()
            try:
                label = int(float(raw_label))
            except ValueError as e:
                raise DatasetError(
                    f"label {raw_label!r} is not an integer",
                    row=row_number,
                    source_file=source_file,
                ) from e
            samples.append(LabeledSample(vector=vector, label=label))

    logger.debug("Loaded %d rows from %s", len(samples), source_file)
    return tuple(samples)


def minmax_normalize(samples: Sequence[LabeledSample]) -> tuple[LabeledSample, ...]:
    """Scale every feature into [0, 1]; constant columns map to 0."""
    if not samples:
        return ()
    data = np.array([s.vector for s in samples], dtype=float)
    lo = data.min(axis=0)
    span = data.max(axis=0) - lo
    scaled = np.zeros_like(data)
    nonconstant = span > 0
    scaled[:, nonconstant] = (data[:, nonconstant] - lo[nonconstant]) / span[nonconstant]
    np.clip(scaled, 0.0, 1.0, out=scaled)
    return tuple(
        LabeledSample(vector=tuple(row.tolist()), label=s.label)
        for row, s in zip(scaled, samples, strict=True)
    )


def load_source(spec: DatasetSpec, rng: np.random.Generator) -> tuple[LabeledSample, ...]:
    """Materialize the whole source stream (CSV rows or synthetic samples)."""
    if spec.is_synthetic:
        if spec.source not in SYNTHETIC_SOURCES:
            raise DatasetError(f"unknown synthetic source {spec.source!r}")
        return synth_drift_stream(spec.synthetic_n, spec.resolved_drift_at, rng)
    return read_csv(
        spec.source,
        feature_columns=spec.feature_columns,
        label_column=spec.label_column,
    )


def resolve_start(spec: DatasetSpec, source_length: int, rng: np.random.Generator) -> int:
    """R for this run: fixed, or uniform over [0, source_length - D]."""
    if source_length < spec.size:
        raise DatasetError(f"source has {source_length} rows, fewer than D={spec.size}")
    if spec.random_start:
        return int(rng.integers(0, source_length - spec.size + 1))
    if spec.start + spec.size > source_length:
        raise DatasetError(
            f"R + D = {spec.start + spec.size} exceeds source length {source_length}"
        )
    return spec.start


def load_stream(
    spec: DatasetSpec,
    m: int,
    nodes: int,
    *,
    source: Sequence[LabeledSample] | None = None,
    start: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[LabeledSample, ...]:
    """Node ``m``'s ordered sample stream.

    Args:
        spec: Dataset description.
        m: Node index.
        nodes: Network size N.
        source: Already loaded source stream (loaded from ``spec`` when None).
        start: R for this run (resolved from ``spec`` when None).
        rng: Stream for synthetic generation and random R (seed 0 when None).

    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if source is None:
        source = load_source(spec, rng)
    if start is None:
        start = resolve_start(spec, len(source), rng)
    per_node = spec.size // nodes
    indices = partition_indices(m, nodes, per_node, start, len(source))
    stream = tuple(source[i] for i in indices)
    if spec.normalize:
        stream = minmax_normalize(stream)
    return stream


__all__ = [
    "DatasetSpec",
    "load_source",
    "load_stream",
    "minmax_normalize",
    "partition_indices",
    "read_csv",
    "resolve_start",
]
