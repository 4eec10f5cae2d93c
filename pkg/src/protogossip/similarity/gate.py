"""Worthiness gate: share a model only with peers whose view differs enough."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike

from protogossip.config import KdeConfig
from protogossip.errors import EmptyModelError
from protogossip.prototypes import Prototype, PrototypeModel
from protogossip.similarity.divergence import js_distance
from protogossip.similarity.kde import pmf_pair
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

type PrototypeSet = PrototypeModel | Sequence[Prototype] | ArrayLike


def vectors_of(prototypes: PrototypeSet) -> np.ndarray:
    """Prototype vectors as an (m, d) array."""
    if isinstance(prototypes, PrototypeModel):
        return prototypes.matrix()
    if isinstance(prototypes, Sequence) and prototypes and isinstance(prototypes[0], Prototype):
        return np.array([p.vector for p in prototypes], dtype=float)  # type: ignore[union-attr]
    return np.asarray(prototypes, dtype=float)


def js_divergence_between(
    set_a: PrototypeSet,
    set_b: PrototypeSet,
    cfg: KdeConfig,
    rng: np.random.Generator,
) -> float:
    """JS distance between the KDE pmfs of two prototype sets."""
    p, q = pmf_pair(vectors_of(set_a), vectors_of(set_b), cfg, rng)
    return js_distance(p, q)


def is_it_worthy(
    local: PrototypeSet,
    peer_snapshot: PrototypeSet | None,
    th_jsd: float,
    cfg: KdeConfig,
    rng: np.random.Generator,
) -> bool:
    """True when the local model differs from what the peer is known to hold.

    An unknown or empty peer snapshot is always worthy.

    Raises:
        EmptyModelError: If the local model is empty.

    """
    local_vectors = vectors_of(local)
    if local_vectors.size == 0:
        raise EmptyModelError("cannot gate an empty local model")
    if peer_snapshot is None:
        return True
    peer_vectors = vectors_of(peer_snapshot)
    if peer_vectors.size == 0:
        return True
    distance = js_divergence_between(local_vectors, peer_vectors, cfg, rng)
    logger.debug("JS distance %.6f against threshold %.6f", distance, th_jsd)
    return distance > th_jsd


__all__ = ["PrototypeSet", "is_it_worthy", "js_divergence_between", "vectors_of"]
