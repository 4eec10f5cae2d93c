"""Node actor: sensor-first training, round-robin peer queues, gated sharing.

A :class:`NodeState` owns one node's model, its N-1 peer queues, the logical
clock and the per-peer bookkeeping used by the worthiness gate. The simulation
engine calls three entry points:

- :meth:`NodeState.on_sensor_sample`: predict, train, tick the clock, share.
- :meth:`NodeState.idle_step`: learn one prototype from the next non-empty
  peer queue in round-robin order.
- :meth:`NodeState.enqueue_peer_model`: store a received batch.

Sharing (:meth:`NodeState.try_share`) returns the messages to deliver; the
node never talks to the transport itself.

The logical clock is 1 once the model is initialized and grows by one per
completed training step, whether the sample came from the sensor or a peer.

Thread Safety:
    A NodeState is an actor: only the event loop that owns it may call it.
    Messages it emits are immutable.

"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from protogossip.compression import compress_model
from protogossip.config import NodeConfig
from protogossip.errors import ConfigError, ProtocolError, RejectedInputError
from protogossip.ilvq import init_model, record_prediction, train_one
from protogossip.metrics.scores import PrequentialCounter
from protogossip.prototypes import LabeledSample, Prototype, PrototypeModel
from protogossip.runtime.codec import encoded_size
from protogossip.runtime.messages import GossipMessage
from protogossip.runtime.queues import PeerQueue
from protogossip.similarity import is_it_worthy, vectors_of
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(slots=True)
class NodeCounters:
    """Monotone per-node counters."""

    bytes_sent: int = 0
    messages_sent: int = 0
    prototypes_trained: int = 0
    samples_dropped: int = 0
    gate_suppressed: int = 0
    prototypes_sent: int = 0
    max_pre_cluster_length: int = 0


class NodeState:
    """One node of the gossip network.

    Attributes:
        id: Node id in [0, N).
        config: Resolved node settings (fanout, T_share, gate, queues, compression).
        rng: This node's private random stream.
        model: The ILVQ model, None until two sensor samples arrived
            (always None in staleness-only mode).
        peer_order: Neighbor ids in ascending order; queue i belongs to peer_order[i].
        peer_queues: Neighbor id to its LIFO queue.
        rr_cursor: Index into ``peer_order`` of the queue served last.
        logical_clock: Version counter of this node's model.
        known_versions: Neighbor id to the highest version received from it.
        peer_snapshots: Neighbor id to the last prototype set exchanged with it.
        prequential: Test-then-train confusion counts for the sensor stream.
        counters: Traffic and work counters.

    """

    __slots__ = (
        "_pending",
        "_placeholder_batch",
        "config",
        "counters",
        "id",
        "known_versions",
        "logical_clock",
        "model",
        "peer_order",
        "peer_queues",
        "peer_snapshots",
        "prequential",
        "rng",
        "rr_cursor",
    )

    def __init__(self, node_id: int, config: NodeConfig, rng: np.random.Generator) -> None:
        if not 0 <= node_id < config.nodes:
            raise ConfigError([f"node id {node_id} outside [0, {config.nodes})"])
        if config.fanout > config.nodes - 1:
            raise ConfigError([f"fanout s={config.fanout} exceeds N-1={config.nodes - 1}"])
        self.id = node_id
        self.config = config
        self.rng = rng
        self.model: PrototypeModel | None = None
        self._pending: list[LabeledSample] = []
        self.peer_order = tuple(j for j in range(config.nodes) if j != node_id)
        self.peer_queues = {j: PeerQueue(config.queue) for j in self.peer_order}
        self.rr_cursor = 0
        self.logical_clock = 0
        self.known_versions: dict[int, int] = {}
        self.peer_snapshots: dict[int, tuple[Prototype, ...]] = {}
        self.prequential = PrequentialCounter()
        self.counters = NodeCounters()
        self._placeholder_batch = tuple(
            Prototype(id=i, vector=(0.0,), label=0) for i in range(config.batch_length)
        )

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def initialized(self) -> bool:
        return self.config.staleness_only or self.model is not None

    @property
    def model_size(self) -> int:
        return len(self.model) if self.model is not None else 0

    def queued_prototypes(self) -> int:
        """Prototypes waiting across all peer queues."""
        return sum(q.total_prototypes for q in self.peer_queues.values())

    def has_peer_work(self) -> bool:
        return any(self.peer_queues.values())

    def mean_sent_batch_length(self) -> float | None:
        """Mean prototypes per sent message, None before the first send."""
        c = self.counters
        return c.prototypes_sent / c.messages_sent if c.messages_sent else None

    def snapshot(self) -> tuple[Prototype, ...]:
        """The prototype set this node would send right now (uncompressed)."""
        if self.config.staleness_only:
            return self._placeholder_batch
        return self.model.prototypes if self.model is not None else ()

    # ------------------------------------------------------------------
    # Sensor path
    # ------------------------------------------------------------------

    def on_sensor_sample(
        self, sample: LabeledSample, now: float = 0.0
    ) -> list[tuple[int, GossipMessage]]:
        """Predict, train, advance the clock and try to share.

        The first two samples only initialize the model. A sample of the wrong
        dimension is logged and dropped without touching the clock.

        Returns:
            Messages to deliver, as (recipient, message) pairs.

        """
        if self.config.staleness_only:
            self._complete_update()
            return self.try_share(now)

        if self.model is None:
            if self._pending and self._pending[0].dimension != sample.dimension:
                expected = self._pending[0].dimension
                self._drop(sample, f"dimension {sample.dimension}, expected {expected}")
                return []
            self._pending.append(sample)
            if len(self._pending) == 2:
                self.model = init_model(*self._pending, tick=now)
                self._pending.clear()
                self.logical_clock = 1
            return []

        try:
            self.model.check_dimension(sample.vector, "sample")
        except RejectedInputError as e:
            self._drop(sample, str(e))
            return []
        predicted = record_prediction(self.model, sample)
        self.prequential.update(sample.label, predicted)
        train_one(self.model, sample, config=self.config.ilvq, tick=now)
        self._complete_update()
        return self.try_share(now)

    def _drop(self, sample: LabeledSample, reason: str) -> None:
        self.counters.samples_dropped += 1
        logger.warning(
            "Node %d dropped sensor sample (label %d): %s", self.id, sample.label, reason
        )

    def _complete_update(self) -> None:
        self.logical_clock += 1
        self.counters.prototypes_trained += 1

    # ------------------------------------------------------------------
    # Peer path
    # ------------------------------------------------------------------

    def enqueue_peer_model(self, msg: GossipMessage) -> None:
        """Store a received snapshot on top of the sender's queue.

        Raises:
            ProtocolError: If the message comes from this node or a non-neighbor.

        """
        if msg.sender == self.id:
            raise ProtocolError(f"node {self.id} received its own message")
        queue = self.peer_queues.get(msg.sender)
        if queue is None:
            raise ProtocolError(f"node {self.id} has no neighbor {msg.sender}")
        queue.push(msg.prototypes)
        self.known_versions[msg.sender] = max(self.known_versions.get(msg.sender, 0), msg.version)
        self.peer_snapshots[msg.sender] = msg.prototypes

    def idle_step(self, now: float = 0.0) -> bool:
        """Learn one prototype from the next non-empty peer queue.

        Scans the queues cyclically starting after the one served last.

        Returns:
            True iff a prototype was taken from a queue.

        """
        if not self.initialized:
            return False
        n_queues = len(self.peer_order)
        start = (self.rr_cursor + 1) % n_queues
        for k in range(n_queues):
            index = (start + k) % n_queues
            queue = self.peer_queues[self.peer_order[index]]
            if queue:
                self.rr_cursor = index
                proto = queue.pop_random(self.rng)
                assert proto is not None
                self._learn_from_peer(proto, now)
                return True
        self.rr_cursor = start
        return False

    def _learn_from_peer(self, proto: Prototype, now: float) -> None:
        if self.config.staleness_only:
            self._complete_update()
            return
        assert self.model is not None
        try:
            train_one(
                self.model,
                proto.as_sample(),
                config=self.config.ilvq,
                tick=now,
                relevance=proto.relevance,
            )
        except RejectedInputError as e:
            logger.warning("Node %d dropped peer prototype: %s", self.id, e)
            return
        self._complete_update()
        if self.config.compress_on_queue and len(self.model) > self.config.compression.limit_size:
            self.model = compress_model(self.model, self.config.compression)

    # ------------------------------------------------------------------
    # Sharing
    # ------------------------------------------------------------------

    def _outgoing_snapshot(self) -> tuple[Prototype, ...]:
        snapshot = self.snapshot()
        c = self.counters
        c.max_pre_cluster_length = max(c.max_pre_cluster_length, len(snapshot))
        if (
            self.config.compress_on_share
            and self.model is not None
            and len(self.model) > self.config.compression.limit_size
        ):
            snapshot = compress_model(self.model, self.config.compression).prototypes
        return snapshot

    def try_share(self, now: float = 0.0) -> list[tuple[int, GossipMessage]]:
        """Gossip the current model to up to ``fanout`` random neighbors.

        With probability T_share, draws ``fanout`` distinct neighbors and sends
        each one the snapshot unless the gate finds it not worth sending.

        Returns:
            Messages to deliver, as (recipient, message) pairs.

        """
        if self.rng.random() >= self.config.t_share:
            return []
        if self.config.fanout == 0 or not self.initialized or self.logical_clock < 1:
            return []
        recipients = self.rng.choice(len(self.peer_order), size=self.config.fanout, replace=False)
        snapshot = self._outgoing_snapshot()
        if not snapshot:
            return []
        gate = self.config.gate_enabled and not self.config.staleness_only
        local_vectors = vectors_of(snapshot) if gate else None

        outgoing: list[tuple[int, GossipMessage]] = []
        # Gate verdicts for this share, by peer snapshot identity.
        verdicts: list[tuple[tuple[Prototype, ...] | None, bool]] = []
        for index in recipients.tolist():
            neighbor = self.peer_order[index]
            if gate and not self._worth_sending(local_vectors, neighbor, verdicts):
                self.counters.gate_suppressed += 1
                logger.debug("Node %d: model not worth sending to %d", self.id, neighbor)
                continue
            msg = GossipMessage(
                sender=self.id, version=self.logical_clock, prototypes=snapshot, send_tick=now
            )
            c = self.counters
            c.bytes_sent += encoded_size(msg)
            c.messages_sent += 1
            c.prototypes_sent += len(snapshot)
            self.peer_snapshots[neighbor] = snapshot
            outgoing.append((neighbor, msg))
        return outgoing

    def _worth_sending(
        self,
        local_vectors: np.ndarray | None,
        neighbor: int,
        verdicts: list[tuple[tuple[Prototype, ...] | None, bool]],
    ) -> bool:
        """Gate one recipient, reusing the verdict of any recipient with the same snapshot.

        Recipients of the previous share all hold that share's snapshot, so
        the sender's density is usually estimated once per share.
        """
        known = self.peer_snapshots.get(neighbor)
        for seen, verdict in verdicts:
            if seen is known:
                return verdict
        verdict = is_it_worthy(local_vectors, known, self.config.th_jsd, self.config.kde, self.rng)
        verdicts.append((known, verdict))
        return verdict

    def __repr__(self) -> str:
        return (
            f"NodeState(id={self.id}, clock={self.logical_clock}, |G|={self.model_size}, "
            f"queued={self.queued_prototypes()})"
        )


__all__ = ["NodeCounters", "NodeState"]
