"""Per-neighbor LIFO queue of received prototype batches.

The most recently received batch sits on top and is served first. Limits:

- ``max_sets``: at most this many batches; the oldest go first (``1`` means a
  new batch replaces the unprocessed one).
- ``max_prototypes``: at most this many prototypes in total; oldest batches
  are evicted first, and a single batch larger than the cap keeps only its
  first ``max_prototypes`` prototypes.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from protogossip.config import QueuePolicy
from protogossip.prototypes import Prototype


class PeerQueue:
    """LIFO stack of prototype batches received from one neighbor."""

    __slots__ = ("_batches", "dropped_prototypes", "evictions", "policy", "total_prototypes")

    def __init__(self, policy: QueuePolicy | None = None) -> None:
        self.policy = policy or QueuePolicy()
        self._batches: list[list[Prototype]] = []
        self.total_prototypes = 0
        self.evictions = 0
        self.dropped_prototypes = 0

    def __len__(self) -> int:
        """Number of batches held."""
        return len(self._batches)

    def __bool__(self) -> bool:
        return self.total_prototypes > 0

    @property
    def batches(self) -> tuple[tuple[Prototype, ...], ...]:
        """Batches from oldest (bottom) to newest (top)."""
        return tuple(tuple(b) for b in self._batches)

    def _evict_oldest(self) -> None:
        evicted = self._batches.pop(0)
        self.total_prototypes -= len(evicted)
        self.dropped_prototypes += len(evicted)
        self.evictions += 1

    def push(self, batch: Sequence[Prototype]) -> None:
        """Put a batch on top, then evict from the bottom until the limits hold."""
        if not batch:
            return
        cap = self.policy.max_prototypes
        items = list(batch)
        if cap is not None and len(items) > cap:
            self.dropped_prototypes += len(items) - cap
            items = items[:cap]
        self._batches.append(items)
        self.total_prototypes += len(items)

        if self.policy.max_sets is not None:
            while len(self._batches) > self.policy.max_sets:
                self._evict_oldest()
        if cap is not None:
            while self.total_prototypes > cap:
                self._evict_oldest()

    def pop_random(self, rng: np.random.Generator) -> Prototype | None:
        """Remove and return a uniformly chosen prototype of the top batch."""
        if not self._batches:
            return None
        top = self._batches[-1]
        proto = top.pop(int(rng.integers(len(top))))
        self.total_prototypes -= 1
        if not top:
            self._batches.pop()
        return proto


__all__ = ["PeerQueue"]
