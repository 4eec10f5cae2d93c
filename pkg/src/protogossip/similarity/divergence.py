"""Kullback-Leibler divergence and Jensen-Shannon distance in bits.

Both accept a :class:`~protogossip.similarity.kde.DiscretePmf` or a plain
sequence of masses. Logarithms are base 2, so the JS distance lies in [0, 1].
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from scipy.special import rel_entr

from protogossip.errors import GridMismatchError
from protogossip.similarity.kde import DiscretePmf

type PmfLike = DiscretePmf | Sequence[float] | np.ndarray

_LN2 = math.log(2.0)


def _masses(pmf: PmfLike) -> np.ndarray:
    if isinstance(pmf, DiscretePmf):
        return pmf.masses
    return np.asarray(pmf, dtype=float)


def _aligned(p: PmfLike, q: PmfLike) -> tuple[np.ndarray, np.ndarray]:
    pm, qm = _masses(p), _masses(q)
    if pm.shape != qm.shape:
        raise GridMismatchError(pm.size, qm.size)
    return pm, qm


def kl_divergence(p: PmfLike, q: PmfLike) -> float:
    """D_KL(P || Q) in bits; +inf when P has mass where Q has none."""
    pm, qm = _aligned(p, q)
    return float(rel_entr(pm, qm).sum() / _LN2)


def js_distance(p: PmfLike, q: PmfLike) -> float:
    """sqrt(0.5 * D_KL(P || M) + 0.5 * D_KL(Q || M)) with M = (P + Q) / 2."""
    pm, qm = _aligned(p, q)
    m = 0.5 * (pm + qm)
    divergence = 0.5 * kl_divergence(pm, m) + 0.5 * kl_divergence(qm, m)
    # Rounding can push the divergence slightly outside [0, 1].
    return math.sqrt(min(max(divergence, 0.0), 1.0))


__all__ = ["PmfLike", "js_distance", "kl_divergence"]
