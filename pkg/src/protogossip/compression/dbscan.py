"""DBSCAN over Euclidean distance, keeping noise points as singleton clusters.

Cluster ids are assigned in order of first appearance (the cluster holding
point 0 is cluster 0), so the output is a canonical partition and two
assignments can be compared with ``==``.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist

from protogossip.errors import InvalidParameterError


def _canonical(labels: np.ndarray) -> np.ndarray:
    """Relabel so cluster ids follow first appearance."""
    mapping: dict[int, int] = {}
    out = np.empty(labels.size, dtype=int)
    for i, raw in enumerate(labels.tolist()):
        out[i] = mapping.setdefault(raw, len(mapping))
    return out


def dbscan_from_distances(distances: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """DBSCAN on a precomputed (n, n) distance matrix."""
    if not eps > 0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    if min_pts < 1:
        raise InvalidParameterError(f"min_pts must be >= 1, got {min_pts}")
    n = distances.shape[0]
    if n == 0:
        return np.empty(0, dtype=int)

    adjacency = distances <= eps
    # Neighborhood counts include the point itself.
    core = adjacency.sum(axis=1) >= min_pts
    core_idx = np.flatnonzero(core)

    labels = np.full(n, -1, dtype=int)
    if core_idx.size:
        core_graph = csr_matrix(adjacency[np.ix_(core_idx, core_idx)])
        _, components = connected_components(core_graph, directed=False)
        labels[core_idx] = components
        for i in np.flatnonzero(~core):
            reachable = core_idx[adjacency[i, core_idx]]
            if reachable.size:
                # Border point joins the cluster of its lowest-index core neighbor.
                labels[i] = labels[reachable[0]]

    next_id = int(labels.max()) + 1
    for i in np.flatnonzero(labels < 0):
        labels[i] = next_id
        next_id += 1
    return _canonical(labels)


def dbscan(points: ArrayLike, eps: float, min_pts: int = 1) -> np.ndarray:
    """Cluster id per point.

    With ``min_pts = 1`` every point is a core point and clusters are the
    connected components of the eps-neighborhood graph.

    Raises:
        InvalidParameterError: If ``eps <= 0`` or ``min_pts < 1``.

    """
    data = np.asarray(points, dtype=float)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    if data.shape[0] == 0:
        return dbscan_from_distances(np.empty((0, 0)), eps, min_pts)
    return dbscan_from_distances(cdist(data, data), eps, min_pts)


__all__ = ["dbscan", "dbscan_from_distances"]
