"""Similarity gate: KDE pmfs, KL / Jensen-Shannon divergence, worthiness check."""

from protogossip.similarity.divergence import js_distance, kl_divergence
from protogossip.similarity.gate import is_it_worthy, js_divergence_between, vectors_of
from protogossip.similarity.kde import (
    DiscretePmf,
    epanechnikov,
    evaluation_grid,
    grid_size,
    kde_density,
    kde_evaluate,
    pmf_pair,
    scott_bandwidth,
)

__all__ = [
    "DiscretePmf",
    "epanechnikov",
    "evaluation_grid",
    "grid_size",
    "is_it_worthy",
    "js_distance",
    "js_divergence_between",
    "kde_density",
    "kde_evaluate",
    "kl_divergence",
    "pmf_pair",
    "scott_bandwidth",
    "vectors_of",
]
