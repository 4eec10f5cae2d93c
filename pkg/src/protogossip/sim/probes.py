"""Staleness as the network grows, with the sensor rate scaled like log N.

:func:`lemma3_probe` builds a homogeneous staleness-only configuration for
every N, runs a few seeds and reports the mean staleness per N next to the
closed-form bound for that N.

Fanout modes:
    ``fixed``: the same s for every N (``fanout`` argument). The log N
        scaling result is stated for this setting.
    ``scaled``: s = round((N-1) / log2 N), growing slower than N.

Versions only move on direct delivery, so with a fixed s the measured
staleness grows roughly like (N-1) / ln N instead of staying flat.

"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

from protogossip.config import ExperimentConfig
from protogossip.errors import InvalidParameterError
from protogossip.scenarios import node_config_for
from protogossip.sim.engine import Simulation
from protogossip.sim.lemmas import lemma1_stable, lemma2_bound
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

type FanoutMode = Literal["scaled", "fixed"]


@dataclass(frozen=True, slots=True)
class ScalingPoint:
    """Measured staleness for one network size."""

    nodes: int
    fanout: int
    rate: float
    mean_staleness: float
    bound: float = math.inf

    @property
    def under_bound(self) -> bool:
        return self.mean_staleness <= self.bound


@dataclass(frozen=True, slots=True)
class ScalingProbe:
    points: tuple[ScalingPoint, ...]

    @property
    def ratio(self) -> float:
        """Largest over smallest mean staleness (inf if one is zero)."""
        values = [p.mean_staleness for p in self.points]
        lo = min(values)
        return max(values) / lo if lo > 0 else math.inf

    def within(self, factor: float) -> bool:
        return self.ratio <= factor


def scaled_fanout(nodes: int) -> int:
    """round((N-1) / log2 N), at least 1 and at most N-1."""
    if nodes < 2:
        raise InvalidParameterError(f"fanout needs N >= 2, got {nodes}")
    return max(1, min(nodes - 1, round((nodes - 1) / math.log2(nodes))))


def lemma3_probe(
    node_counts: Sequence[int] = (4, 8, 16, 32),
    base_rate: float = 2.0,
    *,
    mu: float = 200.0,
    t_share: float = 1.0,
    batch_length: int = 5,
    horizon: float = 200.0,
    seeds: int = 3,
    seed_offset: int = 0,
    fanout_mode: FanoutMode = "fixed",
    fanout: int = 2,
) -> ScalingProbe:
    """Mean staleness per N with lambda = base_rate * ln N / ln N0.

    N0 is the smallest entry of ``node_counts``. Peer queues hold a single
    batch per neighbor so a saturated node always learns the freshest model.
    The default mu keeps every N stable: at N=32 the offered load is
    5 * (2 * 5 + 1) = 55 updates/s.

    Raises:
        InvalidParameterError: If ``node_counts`` is empty or holds N < 2.

    """
    if not node_counts:
        raise InvalidParameterError("scaling needs at least one network size")
    if min(node_counts) < 2:
        raise InvalidParameterError("network sizes must be >= 2")
    reference = math.log(min(node_counts))
    points = []
    for n in node_counts:
        s = scaled_fanout(n) if fanout_mode == "scaled" else min(fanout, n - 1)
        rate = base_rate * math.log(n) / reference
        if not lemma1_stable(rate, s, t_share, batch_length, mu):
            logger.warning("Scaling N=%d: mu=%.1f does not exceed the offered load", n, mu)
        config = ExperimentConfig(
            nodes=n,
            fanout=s,
            t_share=t_share,
            lambda_s=rate,
            mu=mu,
            horizon=horizon,
            seeds=seeds,
            seed_offset=seed_offset,
            metrics_period=horizon,
            staleness_only=True,
            batch_length=batch_length,
            queue_max_sets=1,
        )
        node_config = node_config_for(config)
        means = [
            Simulation(config, seed, node_config=node_config).run().mean_staleness
            for seed in config.seed_list
        ]
        point = ScalingPoint(
            nodes=n,
            fanout=s,
            rate=rate,
            mean_staleness=math.fsum(means) / len(means),
            bound=lemma2_bound(mu, rate, s, t_share, n),
        )
        logger.debug(
            "Scaling N=%d s=%d lambda=%.3f staleness=%.3f", n, s, rate, point.mean_staleness
        )
        points.append(point)
    return ScalingProbe(points=tuple(points))


__all__ = ["FanoutMode", "ScalingPoint", "ScalingProbe", "lemma3_probe", "scaled_fanout"]
