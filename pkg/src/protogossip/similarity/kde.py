"""Epanechnikov kernel density estimation on a shared random grid.

The density of a prototype set is estimated with a product of 1-D
Epanechnikov kernels sharing one bandwidth h (Scott's rule by default):

    f(x) = 1 / (m * h^d) * sum_i prod_k K((x_k - X_ik) / h)

Two sets are compared on the same grid of uniformly drawn points inside the
bounding box of their union, so their discretized pmfs line up point by point.

Thread Safety:
    Pure functions. Randomness comes only from the ``rng`` argument.

"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from protogossip.config import KdeConfig
from protogossip.errors import (
    EmptyModelError,
    InvalidBandwidthError,
    InvalidParameterError,
    RejectedInputError,
)

# Upper bound on elements of the (points, samples) block evaluated at once.
_CHUNK_ELEMENTS = 1 << 20


def epanechnikov(u: ArrayLike) -> np.ndarray | float:
    """K(u) = 0.75 * (1 - u^2) on |u| <= 1, zero elsewhere."""
    arr = np.asarray(u, dtype=float)
    out = np.where(np.abs(arr) <= 1.0, 0.75 * (1.0 - arr * arr), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def scott_bandwidth(m: int, d: int) -> float:
    """Scott's rule, h = m^(-1/(d+4))."""
    if m < 1 or d < 1:
        raise EmptyModelError(f"bandwidth needs m >= 1 and d >= 1, got m={m}, d={d}")
    return float(m ** (-1.0 / (d + 4)))


def _as_matrix(vectors: ArrayLike, what: str) -> np.ndarray:
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 1)
    if arr.shape[0] == 0:
        raise EmptyModelError(f"{what} is empty")
    return arr


def kde_evaluate(samples: ArrayLike, points: ArrayLike, h: float) -> np.ndarray:
    """Density of ``samples`` at every row of ``points``.

    The product kernel is built one dimension at a time on (points, samples)
    blocks, with the 0.75^d constant applied once at the end.
    """
    if not h > 0:
        raise InvalidBandwidthError(f"bandwidth must be positive, got {h}")
    data = _as_matrix(samples, "sample set")
    queries = np.asarray(points, dtype=float)
    if queries.ndim == 1:
        queries = queries.reshape(-1, data.shape[1])
    if queries.shape[1] != data.shape[1]:
        raise RejectedInputError(data.shape[1], queries.shape[1], "query")
    m, d = data.shape
    scaled_data = data / h
    scaled_queries = queries / h
    out = np.empty(queries.shape[0], dtype=float)
    chunk = max(1, _CHUNK_ELEMENTS // m)
    for lo in range(0, queries.shape[0], chunk):
        block = scaled_queries[lo : lo + chunk]
        weights = np.ones((block.shape[0], m), dtype=float)
        for k in range(d):
            u = block[:, k, None] - scaled_data[None, :, k]
            factor = 1.0 - u * u
            np.maximum(factor, 0.0, out=factor)
            weights *= factor
        out[lo : lo + chunk] = weights.sum(axis=1)
    out *= 0.75**d / (m * h**d)
    return out


def kde_density(samples: ArrayLike, query: ArrayLike, h: float) -> float:
    """Density of ``samples`` at a single ``query`` vector."""
    data = _as_matrix(samples, "sample set")
    q = np.asarray(query, dtype=float).reshape(1, data.shape[1])
    return float(kde_evaluate(data, q, h)[0])


def grid_size(d: int, t_range: float, cfg: KdeConfig) -> int:
    """floor(B * 2^(d/2) * T_range / (2d)), clamped to [min_points, max_points]."""
    raw = math.floor(cfg.base_points * 2 ** (d / 2) * (t_range / (2 * d)))
    return min(max(raw, cfg.min_points), cfg.max_points)


def evaluation_grid(
    set_a: ArrayLike,
    set_b: ArrayLike,
    cfg: KdeConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Uniform random points inside the bounding box of both sets.

    Raises:
        EmptyModelError: If either set is empty.
        RejectedInputError: If the sets differ in dimension.

    """
    a = _as_matrix(set_a, "first prototype set")
    b = _as_matrix(set_b, "second prototype set")
    if a.shape[1] != b.shape[1]:
        raise RejectedInputError(a.shape[1], b.shape[1], "prototype set")
    union = np.vstack((a, b))
    lo = union.min(axis=0)
    hi = union.max(axis=0)
    d = union.shape[1]
    t_range = float((hi - lo).sum())
    if t_range == 0.0:
        return np.tile(lo, (cfg.min_points, 1))
    n_points = grid_size(d, t_range, cfg)
    return rng.uniform(lo, hi, size=(n_points, d))


@dataclass(frozen=True, slots=True, eq=False)
class DiscretePmf:
    """A pmf over evaluation points: ``masses[j]`` is the probability of ``points[j]``."""

    points: np.ndarray
    masses: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.masses.ndim != 1 or self.masses.size < 1:
            raise EmptyModelError("a pmf needs at least one point")
        if self.points.shape[0] != self.masses.size:
            raise RejectedInputError(self.points.shape[0], self.masses.size, "pmf masses")
        if (self.masses < 0).any() or abs(float(self.masses.sum()) - 1.0) > 1e-9:
            raise InvalidParameterError("pmf masses must be non-negative and sum to 1")

    def __len__(self) -> int:
        return int(self.masses.size)

    @classmethod
    def from_density(cls, points: np.ndarray, density: np.ndarray) -> DiscretePmf:
        """Normalize densities on ``points``; all-zero density becomes uniform."""
        total = float(density.sum())
        if total > 0.0:
            masses = density / total
        else:
            masses = np.full(density.size, 1.0 / density.size)
        return cls(points=points, masses=masses)


def pmf_pair(
    set_a: ArrayLike,
    set_b: ArrayLike,
    cfg: KdeConfig,
    rng: np.random.Generator,
) -> tuple[DiscretePmf, DiscretePmf]:
    """Discretized densities of both sets on one shared grid."""
    a = _as_matrix(set_a, "first prototype set")
    b = _as_matrix(set_b, "second prototype set")
    grid = evaluation_grid(a, b, cfg, rng)
    d = a.shape[1]
    h_a = cfg.bandwidth if cfg.bandwidth is not None else scott_bandwidth(a.shape[0], d)
    h_b = cfg.bandwidth if cfg.bandwidth is not None else scott_bandwidth(b.shape[0], d)
    p = DiscretePmf.from_density(grid, kde_evaluate(a, grid, h_a))
    q = DiscretePmf.from_density(grid, kde_evaluate(b, grid, h_b))
    return p, q


__all__ = [
    "DiscretePmf",
    "epanechnikov",
    "evaluation_grid",
    "grid_size",
    "kde_density",
    "kde_evaluate",
    "pmf_pair",
    "scott_bandwidth",
]
