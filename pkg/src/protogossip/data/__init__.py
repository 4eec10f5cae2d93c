"""Data pipeline: CSV ingestion, strided partition, synthetic drift streams."""

from protogossip.data.dataset import (
    DatasetSpec,
    load_source,
    load_stream,
    minmax_normalize,
    partition_indices,
    read_csv,
    resolve_start,
)
from protogossip.data.synthetic import synth_drift_stream

__all__ = [
    "DatasetSpec",
    "load_source",
    "load_stream",
    "minmax_normalize",
    "partition_indices",
    "read_csv",
    "resolve_start",
    "synth_drift_stream",
]
