"""Closed-form checks from the queueing analysis of the gossip protocol.

- effective update rate: lambda_u = min(lambda * (s*T*L + 1), mu)
- stability: queues are stable when lambda * (s*T*L + 1) < mu
- staleness bound: E[S] <= mu / (lambda*s*T) * H(N-1), H the harmonic number
"""

from __future__ import annotations

import math

from protogossip.errors import InvalidParameterError


def harmonic_number(k: int) -> float:
    """1 + 1/2 + ... + 1/k, summed exactly (0 for k = 0)."""
    if k < 0:
        raise InvalidParameterError(f"harmonic number needs k >= 0, got {k}")
    return math.fsum(1.0 / i for i in range(1, k + 1))


def offered_load(lam: float, s: float, t_share: float, mean_batch: float) -> float:
    """lambda * (s*T*L + 1): sensor samples plus received prototypes per second."""
    return lam * (s * t_share * mean_batch + 1.0)


def effective_update_rate(
    lam: float, s: float, t_share: float, mean_batch: float, mu: float
) -> float:
    if not mu > 0:
        raise InvalidParameterError(f"service rate must be positive, got {mu}")
    return min(offered_load(lam, s, t_share, mean_batch), mu)


def lemma1_stable(lam: float, s: float, t_share: float, mean_batch: float, mu: float) -> bool:
    """Whether every node's input queue is stable."""
    if not mu > 0:
        raise InvalidParameterError(f"service rate must be positive, got {mu}")
    return offered_load(lam, s, t_share, mean_batch) < mu


def lemma2_bound(mu: float, lam: float, s: float, t_share: float, nodes: int) -> float:
    """Upper bound on the expected pairwise staleness."""
    if not (lam > 0 and s > 0 and t_share > 0):
        raise InvalidParameterError("staleness bound needs lambda, s and T_share > 0")
    if nodes < 2:
        raise InvalidParameterError(f"staleness bound needs N >= 2, got {nodes}")
    return mu / (lam * s * t_share) * harmonic_number(nodes - 1)


__all__ = [
    "effective_update_rate",
    "harmonic_number",
    "lemma1_stable",
    "lemma2_bound",
    "offered_load",
]
