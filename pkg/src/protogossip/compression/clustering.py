"""Model compression: per-label adaptive DBSCAN, centroid merging, edge rebuild.

When a model grows past ``limit_size`` prototypes, each label gets an equal
share of the budget (``quota = limit_size / labels``). The label's prototypes
are clustered with DBSCAN, growing eps while there are too many clusters and
shrinking it while there are too few, until the cluster count lands inside
``target_range * quota``. Each multi-member cluster is replaced by its
centroid, whose relevance is the sum of its members'; single-member clusters
keep their original prototype. Finally every prototype is linked to its two
nearest neighbors.

If a label does not converge within ``max_iterations`` passes the iterate
closest to the window is used and a warning is logged; the node never stops
because of compression.

Thread Safety:
    Pure transformations; the input model is never mutated.

"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist

from protogossip.compression.dbscan import dbscan_from_distances
from protogossip.config import CompressionConfig
from protogossip.errors import ConvergenceError, InvalidParameterError
from protogossip.prototypes import Prototype, PrototypeModel, edge_key
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)


class ClusterStatus(Enum):
    """How adaptive clustering of one label ended."""

    CONVERGED = "converged"
    UNDER_QUOTA = "under-quota"
    FALLBACK = "fallback"


@dataclass(frozen=True, slots=True)
class ClusterResult:
    """Outcome of clustering one label.

    Attributes:
        prototypes: Merged prototypes, in cluster order.
        eps: Radius that produced them.
        iterations: DBSCAN passes performed.
        status: Whether the count landed in the window.
        next_id: First id not used by a merged prototype.

    """

    prototypes: tuple[Prototype, ...]
    eps: float
    iterations: int
    status: ClusterStatus
    next_id: int

    @property
    def converged(self) -> bool:
        return self.status is not ClusterStatus.FALLBACK


def merge_cluster(members: Sequence[Prototype], new_id: int) -> Prototype:
    """Centroid of ``members`` carrying their summed relevance.

    The centroid is computed with exact summation, so it does not depend on
    member order.

    Raises:
        InvalidParameterError: If ``members`` is empty or mixes labels.

    """
    if not members:
        raise InvalidParameterError("cannot merge an empty cluster")
    labels = {p.label for p in members}
    if len(labels) != 1:
        raise InvalidParameterError(f"cluster mixes labels {sorted(labels)}")
    n = len(members)
    dimension = members[0].dimension
    centroid = tuple(math.fsum(p.vector[k] for p in members) / n for k in range(dimension))
    return Prototype(
        id=new_id,
        vector=centroid,
        label=members[0].label,
        relevance=sum(p.relevance for p in members),
        creation_tick=max(p.creation_tick for p in members),
    )


def _merge_assignment(
    prototypes: Sequence[Prototype],
    assignment: np.ndarray,
    next_id: int,
) -> tuple[tuple[Prototype, ...], int]:
    clusters: dict[int, list[Prototype]] = {}
    for proto, cluster in zip(prototypes, assignment.tolist(), strict=True):
        clusters.setdefault(cluster, []).append(proto)
    merged: list[Prototype] = []
    for members in clusters.values():
        if len(members) == 1:
            merged.append(members[0])
        else:
            merged.append(merge_cluster(members, next_id))
            next_id += 1
    return tuple(merged), next_id


def _window_distance(count: int, lo: float, hi: float) -> float:
    return max(lo - count, count - hi, 0.0)


def adaptive_cluster_label(
    prototypes: Sequence[Prototype],
    cfg: CompressionConfig,
    quota: float,
    *,
    next_id: int = 0,
) -> ClusterResult:
    """Cluster one label's prototypes until the count fits ``target_range * quota``.

    eps grows by ``eps_up`` while there are too many clusters and shrinks by
    ``eps_down`` while there are too few. Once both sides have been seen, the
    search bisects between the closest eps on each side.

    Raises:
        InvalidParameterError: If ``prototypes`` is empty or mixes labels.
        ConvergenceError: If ``max_iterations`` passes never hit the window.
            The error carries the iterate closest to the window.

    """
    if not prototypes:
        raise InvalidParameterError("adaptive clustering needs at least one prototype")
    label = prototypes[0].label
    if any(p.label != label for p in prototypes):
        raise InvalidParameterError("adaptive clustering runs on one label at a time")

    lo, hi = cfg.target_range[0] * quota, cfg.target_range[1] * quota
    n = len(prototypes)
    if n < lo:
        return ClusterResult(
            tuple(prototypes), cfg.eps_initial, 0, ClusterStatus.UNDER_QUOTA, next_id
        )
    if n <= hi:
        return ClusterResult(
            tuple(prototypes), cfg.eps_initial, 1, ClusterStatus.CONVERGED, next_id
        )

    vectors = np.array([p.vector for p in prototypes], dtype=float)
    distances = cdist(vectors, vectors)
    eps = cfg.eps_initial
    best_assignment: np.ndarray | None = None
    best_eps = eps
    best_gap = math.inf
    # Largest eps seen with too many clusters and smallest with too few.
    too_fine: float | None = None
    too_coarse: float | None = None

    for iteration in range(1, cfg.max_iterations + 1):
        assignment = dbscan_from_distances(distances, eps, cfg.min_pts)
        count = int(assignment.max()) + 1
        gap = _window_distance(count, lo, hi)
        if gap < best_gap:
            best_assignment, best_eps, best_gap = assignment, eps, gap
        if gap == 0.0:
            merged, after = _merge_assignment(prototypes, assignment, next_id)
            return ClusterResult(merged, eps, iteration, ClusterStatus.CONVERGED, after)
        if count > hi:
            too_fine = eps if too_fine is None else max(too_fine, eps)
        else:
            too_coarse = eps if too_coarse is None else min(too_coarse, eps)
        if too_fine is not None and too_coarse is not None:
            eps = 0.5 * (too_fine + too_coarse)
        else:
            eps = eps * cfg.eps_up if count > hi else eps * cfg.eps_down

    assert best_assignment is not None
    best, _ = _merge_assignment(prototypes, best_assignment, next_id)
    raise ConvergenceError(label, cfg.max_iterations, best, best_eps)


def rebuild_edges(prototypes: Iterable[Prototype]) -> dict[tuple[int, int], int]:
    """Link every prototype to its two nearest others (age 0, mutual pairs once)."""
    protos = sorted(prototypes, key=lambda p: p.id)
    if len(protos) < 2:
        return {}
    vectors = np.array([p.vector for p in protos], dtype=float)
    distances = cdist(vectors, vectors)
    np.fill_diagonal(distances, np.inf)
    k = min(2, len(protos) - 1)
    edges: dict[tuple[int, int], int] = {}
    for row, proto in enumerate(protos):
        nearest = np.argsort(distances[row], kind="stable")[:k]
        for col in nearest.tolist():
            edges[edge_key(proto.id, protos[col].id)] = 0
    return edges


def compress_with_report(
    model: PrototypeModel,
    cfg: CompressionConfig,
) -> tuple[PrototypeModel, dict[int, ClusterResult]]:
    """Compress every label of ``model`` and report what happened per label."""
    by_label: dict[int, list[Prototype]] = {}
    for proto in model:
        by_label.setdefault(proto.label, []).append(proto)
    if not by_label:
        return model.copy(), {}
    quota = cfg.limit_size / len(by_label)

    next_id = model.next_id
    kept: list[Prototype] = []
    results: dict[int, ClusterResult] = {}
    for label in sorted(by_label):
        try:
            result = adaptive_cluster_label(by_label[label], cfg, quota, next_id=next_id)
        except ConvergenceError as e:
            logger.warning(
                "Compression of label %d did not converge after %d iterations; "
                "keeping %d prototypes",
                e.label,
                e.iterations,
                len(e.best),
            )
            after = max((p.id for p in e.best), default=next_id - 1) + 1
            result = ClusterResult(
                e.best, e.best_eps, e.iterations, ClusterStatus.FALLBACK, max(after, next_id)
            )
        results[label] = result
        kept.extend(result.prototypes)
        next_id = result.next_id

    compressed = PrototypeModel.from_prototypes(
        kept, model.dimension, class_counts=model.class_counts
    )
    compressed.next_id = max(compressed.next_id, next_id)
    compressed.samples_absorbed = model.samples_absorbed
    compressed.last_denoise = model.last_denoise
    compressed.edges = rebuild_edges(compressed)
    return compressed, results


def compress_model(model: PrototypeModel, cfg: CompressionConfig) -> PrototypeModel:
    """Return ``model`` itself when |G| <= limit_size, else a compressed copy."""
    if len(model) <= cfg.limit_size:
        return model
    compressed, _ = compress_with_report(model, cfg)
    logger.debug("Compressed model from %d to %d prototypes", len(model), len(compressed))
    return compressed


__all__ = [
    "ClusterResult",
    "ClusterStatus",
    "adaptive_cluster_label",
    "compress_model",
    "compress_with_report",
    "merge_cluster",
    "rebuild_edges",
]
