"""Model compression: adaptive per-label DBSCAN with centroid merging."""

from protogossip.compression.clustering import (
    ClusterResult,
    ClusterStatus,
    adaptive_cluster_label,
    compress_model,
    compress_with_report,
    merge_cluster,
    rebuild_edges,
)
from protogossip.compression.dbscan import dbscan, dbscan_from_distances

__all__ = [
    "ClusterResult",
    "ClusterStatus",
    "adaptive_cluster_label",
    "compress_model",
    "compress_with_report",
    "dbscan",
    "dbscan_from_distances",
    "merge_cluster",
    "rebuild_edges",
]
