"""Age-of-information bookkeeping.

``versions[j, i]`` is the version of node i's model known at node j; the
diagonal holds every node's own logical clock. The staleness of i's model at
j is ``S[j, i] = versions[i, i] - versions[j, i]``, integrated over time so
the tracker can report time-averaged staleness per pair, per node and
overall.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from protogossip.sim.lemmas import effective_update_rate, lemma1_stable, lemma2_bound


@dataclass(frozen=True, slots=True)
class ModelUpdate:
    """Node ``node`` now runs model version ``version``."""

    node: int
    version: int
    time: float


@dataclass(frozen=True, slots=True)
class Delivery:
    """``receiver`` got version ``version`` of ``sender``'s model."""

    receiver: int
    sender: int
    version: int
    time: float


type StalenessEffect = ModelUpdate | Delivery


@dataclass(slots=True)
class StalenessTracker:
    """Version matrix plus time-integrated staleness.

    Attributes:
        nodes: N.
        lam: Sensor rate lambda used by the bound checkers.
        mu: Service rate.
        fanout: s.
        t_share: T_share.

    """

    nodes: int
    lam: float = 0.0
    mu: float = 1.0
    fanout: int = 0
    t_share: float = 0.0
    start_time: float = 0.0
    versions: np.ndarray = field(init=False)
    integral: np.ndarray = field(init=False)
    last_time: float = field(init=False)
    batch_total: int = field(init=False, default=0)
    batch_count: int = field(init=False, default=0)
    max_pre_cluster: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        self.versions = np.zeros((self.nodes, self.nodes), dtype=np.int64)
        self.integral = np.zeros((self.nodes, self.nodes), dtype=float)
        self.last_time = self.start_time

    def staleness(self) -> np.ndarray:
        """Current S[j, i] (zero diagonal)."""
        own = np.diag(self.versions)
        return own[None, :] - self.versions

    def advance(self, time: float) -> None:
        """Accumulate staleness up to ``time``."""
        dt = time - self.last_time
        if dt > 0:
            self.integral += self.staleness() * dt
            self.last_time = time

    def update(self, node: int, version: int, time: float) -> None:
        self.advance(time)
        self.versions[node, node] = version

    def deliver(self, receiver: int, sender: int, version: int, time: float) -> None:
        self.advance(time)
        if version > self.versions[receiver, sender]:
            self.versions[receiver, sender] = version

    def record_batch(self, length: int, pre_cluster_length: int | None = None) -> None:
        """Note a transmitted batch for the mean batch length estimate."""
        self.batch_total += length
        self.batch_count += 1
        self.max_pre_cluster = max(self.max_pre_cluster, pre_cluster_length or length)

    @property
    def elapsed(self) -> float:
        return self.last_time - self.start_time

    def pair_means(self) -> np.ndarray:
        """Time-averaged S[j, i] (zero before any time has passed)."""
        if self.elapsed <= 0:
            return np.zeros_like(self.integral)
        return self.integral / self.elapsed

    def node_mean(self, node: int) -> float:
        """Time-averaged staleness of node ``node``'s view of the others."""
        if self.nodes < 2:
            return 0.0
        return float(self.pair_means()[node].sum() / (self.nodes - 1))

    def mean(self) -> float:
        """Time-averaged staleness over all ordered pairs."""
        if self.nodes < 2:
            return 0.0
        return float(self.pair_means().sum() / (self.nodes * (self.nodes - 1)))

    def effective_rate(self) -> float:
        return effective_update_rate(
            self.lam, self.fanout, self.t_share, mean_batch_length(self), self.mu
        )

    def stable(self) -> bool:
        return lemma1_stable(self.lam, self.fanout, self.t_share, mean_batch_length(self), self.mu)

    def bound(self) -> float:
        return lemma2_bound(self.mu, self.lam, self.fanout, self.t_share, self.nodes)


def mean_batch_length(tracker: StalenessTracker) -> float:
    """Running mean of sent batch lengths, else the largest pre-compression size."""
    if tracker.batch_count:
        return tracker.batch_total / tracker.batch_count
    return float(tracker.max_pre_cluster)


def track_staleness(tracker: StalenessTracker, effect: StalenessEffect) -> StalenessTracker:
    """Apply a model update or a delivery to the tracker and return it."""
    match effect:
        case ModelUpdate(node=node, version=version, time=time):
            tracker.update(node, version, time)
        case Delivery(receiver=receiver, sender=sender, version=version, time=time):
            tracker.deliver(receiver, sender, version, time)
    return tracker


__all__ = [
    "Delivery",
    "ModelUpdate",
    "StalenessEffect",
    "StalenessTracker",
    "mean_batch_length",
    "track_staleness",
]
