"""Deterministic discrete-event engine for a gossip network.

Each node is a single server with exponential service times (rate mu). A
sensor sample arriving at an idle node starts service immediately; arriving
at a busy node it waits in the node's sensor backlog. When a service
completes the node receives an idle tick and picks its next job: a waiting
sensor sample first, otherwise one prototype from its peer queues. Messages
produced while serving a sensor sample are delivered when that service
completes (plus the configured latency), in order per sender-receiver pair.

All randomness comes from ``numpy.random.SeedSequence(seed)``, spawned into
independent streams for the data source and for every node's arrivals,
service times and protocol decisions, so a run is a pure function of its
configuration and seed.

Thread Safety:
    A :class:`Simulation` owns all its state and is single-threaded.
    Independent simulations may run in parallel processes.

"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from protogossip.config import ExperimentConfig, NodeConfig
from protogossip.data.dataset import load_source, load_stream, resolve_start
from protogossip.metrics.records import MetricsRecord
from protogossip.prototypes import LabeledSample
from protogossip.runtime.messages import GossipMessage
from protogossip.runtime.node import NodeState
from protogossip.scenarios import node_config_for
from protogossip.sim.arrivals import schedule_poisson_arrivals, service_time
from protogossip.sim.calendar import EventCalendar, IdleTick, MessageDelivery, SensorArrival
from protogossip.sim.staleness import StalenessTracker
from protogossip.tracing import EventTrace, get_event_trace
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

_PLACEHOLDER_SAMPLE = LabeledSample(vector=(0.0,), label=0)
_STREAMS_PER_NODE = 3


@dataclass(slots=True)
class _Server:
    backlog: deque[int] = field(default_factory=deque)
    # True while an IdleTick for this node is scheduled.
    busy: bool = False


@dataclass(slots=True)
class OccupancyMonitor:
    """Total prototypes queued across the network over time.

    Attributes:
        horizon: Run length; the second half starts at horizon / 2.
        current: Prototypes queued right now.
        max_second_half: Largest value observed at or after horizon / 2.
        series: (time, total) samples taken at every metrics period.

    """

    horizon: float | None
    current: int = 0
    max_second_half: int = 0
    series: list[tuple[float, int]] = field(default_factory=list)

    def change(self, time: float, delta: int) -> None:
        self.current += delta
        if self.horizon is not None and time >= self.horizon / 2:
            self.max_second_half = max(self.max_second_half, self.current)

    def sample(self, time: float) -> None:
        self.series.append((time, self.current))


@dataclass(frozen=True, slots=True)
class NodeSummary:
    """Final state of one node."""

    node: int
    logical_clock: int
    model_size: int
    prototypes_trained: int
    bytes_sent: int
    messages_sent: int
    gate_suppressed: int
    samples_dropped: int
    queued_prototypes: int
    f1: float

    @classmethod
    def of(cls, node: NodeState) -> NodeSummary:
        c = node.counters
        return cls(
            node=node.id,
            logical_clock=node.logical_clock,
            model_size=node.model_size,
            prototypes_trained=c.prototypes_trained,
            bytes_sent=c.bytes_sent,
            messages_sent=c.messages_sent,
            gate_suppressed=c.gate_suppressed,
            samples_dropped=c.samples_dropped,
            queued_prototypes=node.queued_prototypes(),
            f1=node.prequential.f1(),
        )


@dataclass(frozen=True, slots=True)
class SimulationResult:
    """Everything one run produced.

    Attributes:
        seed: Seed of the run.
        end_time: Simulated time at which the run stopped.
        records: Periodic metrics, ordered by time then node.
        nodes: Final per-node summaries.
        tracker: Staleness tracker at the end of the run.
        occupancy: (time, total queued prototypes) at every metrics period.
        max_occupancy_second_half: Peak total occupancy in the second half.
        final_occupancy: Total occupancy at the end.
        largest_message: Largest message (in prototypes) sent during the run.

    """

    seed: int
    end_time: float
    records: tuple[MetricsRecord, ...]
    nodes: tuple[NodeSummary, ...]
    tracker: StalenessTracker
    occupancy: tuple[tuple[float, int], ...]
    max_occupancy_second_half: int
    final_occupancy: int
    largest_message: int

    @property
    def mean_staleness(self) -> float:
        return self.tracker.mean()

    @property
    def total_bytes(self) -> int:
        return sum(n.bytes_sent for n in self.nodes)

    @property
    def mean_f1(self) -> float:
        return float(np.mean([n.f1 for n in self.nodes])) if self.nodes else 0.0


class Simulation:
    """One seeded run of an experiment."""

    def __init__(
        self,
        config: ExperimentConfig,
        seed: int,
        *,
        node_config: NodeConfig | None = None,
    ) -> None:
        config.check()
        self.config = config
        self.seed = seed
        self.node_config = node_config or node_config_for(config)
        n = config.nodes
        children = np.random.SeedSequence(seed).spawn(1 + _STREAMS_PER_NODE * n)
        data_rng = np.random.default_rng(children[0])
        self._arrival_rngs = [np.random.default_rng(children[1 + 3 * i]) for i in range(n)]
        self._service_rngs = [np.random.default_rng(children[2 + 3 * i]) for i in range(n)]
        self.nodes = [
            NodeState(i, self.node_config, np.random.default_rng(children[3 + 3 * i]))
            for i in range(n)
        ]
        self.streams = self._load_streams(data_rng)
        self.calendar = EventCalendar()
        self.servers = [_Server() for _ in range(n)]
        self.tracker = StalenessTracker(
            nodes=n,
            lam=config.lambda_s,
            mu=config.mu,
            fanout=config.fanout,
            t_share=config.t_share,
        )
        self.occupancy = OccupancyMonitor(horizon=config.horizon)
        self.records: list[MetricsRecord] = []
        self.largest_message = 0
        self._next_report = config.metrics_period
        self._trace: EventTrace | None = None

    def _load_streams(self, rng: np.random.Generator) -> list[tuple[LabeledSample, ...]]:
        if self.config.staleness_only:
            return [() for _ in self.nodes]
        spec = self.config.dataset
        source = load_source(spec, rng)
        start = resolve_start(spec, len(source), rng)
        return [
            load_stream(spec, i, self.config.nodes, source=source, start=start)
            for i in range(self.config.nodes)
        ]

    # ------------------------------------------------------------------
    # Scheduling
    # ------------------------------------------------------------------

    def _schedule_arrivals(self) -> None:
        for i in range(self.config.nodes):
            max_events = None if self.config.staleness_only else len(self.streams[i])
            times = schedule_poisson_arrivals(
                self.config.lambda_s,
                self.config.horizon,
                self._arrival_rngs[i],
                max_events=max_events,
            )
            for index, time in enumerate(times.tolist()):
                self.calendar.schedule(time, SensorArrival(node=i, index=index))

    def _begin_service(self, i: int, now: float) -> float:
        """Occupy node i for one Exp(mu) service; returns the completion time."""
        done = now + service_time(self.config.mu, self._service_rngs[i])
        self.servers[i].busy = True
        self.calendar.schedule(done, IdleTick(node=i))
        return done

    def _send(
        self, i: int, outgoing: list[tuple[int, GossipMessage]], now: float, done: float
    ) -> None:
        if not outgoing:
            return
        pre_cluster = self.nodes[i].counters.max_pre_cluster_length
        arrival = done + self.config.latency
        for recipient, msg in outgoing:
            self.calendar.schedule(arrival, MessageDelivery(node=recipient, message=msg))
            self.tracker.record_batch(len(msg), pre_cluster)
            self.largest_message = max(self.largest_message, len(msg))
            if self._trace is not None:
                self._trace.record(
                    now, "send", i, f"to={recipient} version={msg.version} protos={len(msg)}"
                )

    # ------------------------------------------------------------------
    # Event handlers
    # ------------------------------------------------------------------

    def _serve_sensor(self, i: int, index: int, now: float) -> None:
        node = self.nodes[i]
        sample = _PLACEHOLDER_SAMPLE if self.config.staleness_only else self.streams[i][index]
        before = node.logical_clock
        outgoing = node.on_sensor_sample(sample, now)
        if node.logical_clock != before:
            self.tracker.update(i, node.logical_clock, now)
        if self._trace is not None:
            self._trace.record(now, "sensor", i, f"sample={index} clock={node.logical_clock}")
        done = self._begin_service(i, now)
        self._send(i, outgoing, now, done)

    def _on_sensor_arrival(self, event: SensorArrival, now: float) -> None:
        server = self.servers[event.node]
        if server.busy:
            server.backlog.append(event.index)
        else:
            self._serve_sensor(event.node, event.index, now)

    def _on_delivery(self, event: MessageDelivery, now: float) -> None:
        node = self.nodes[event.node]
        msg = event.message
        before = node.queued_prototypes()
        node.enqueue_peer_model(msg)
        self.occupancy.change(now, node.queued_prototypes() - before)
        self.tracker.deliver(event.node, msg.sender, msg.version, now)
        if self._trace is not None:
            summary = f"from={msg.sender} version={msg.version} protos={len(msg)}"
            self._trace.record(now, "deliver", event.node, summary)
        server = self.servers[event.node]
        if not server.busy:
            server.busy = True
            self.calendar.schedule(now, IdleTick(node=event.node))

    def _on_idle_tick(self, event: IdleTick, now: float) -> None:
        i = event.node
        server = self.servers[i]
        server.busy = False
        if server.backlog:
            self._serve_sensor(i, server.backlog.popleft(), now)
            return
        node = self.nodes[i]
        before_queue = node.queued_prototypes()
        before_clock = node.logical_clock
        worked = node.idle_step(now)
        if self._trace is not None:
            self._trace.record(now, "idle", i, "worked" if worked else "empty")
        if not worked:
            return
        self.occupancy.change(now, node.queued_prototypes() - before_queue)
        if node.logical_clock != before_clock:
            self.tracker.update(i, node.logical_clock, now)
        self._begin_service(i, now)

    # ------------------------------------------------------------------
    # Metrics
    # ------------------------------------------------------------------

    def _report(self, time: float) -> None:
        self.tracker.advance(time)
        self.occupancy.sample(time)
        for node in self.nodes:
            tp, fp, fn = node.prequential.formatted()
            self.records.append(
                MetricsRecord(
                    time=time,
                    node=node.id,
                    tp=tp,
                    fp=fp,
                    fn=fn,
                    f1=node.prequential.f1(),
                    prototypes_trained=node.counters.prototypes_trained,
                    bytes_sent=node.counters.bytes_sent,
                    model_size=node.model_size,
                    mean_staleness=self.tracker.node_mean(node.id),
                )
            )

    def _report_until(self, time: float) -> None:
        while self._next_report <= time:
            self._report(self._next_report)
            self._next_report += self.config.metrics_period

    # ------------------------------------------------------------------
    # Main loop
    # ------------------------------------------------------------------

    def run(self) -> SimulationResult:
        """Execute the calendar until the horizon or until no events remain."""
        self._trace = get_event_trace()
        self._schedule_arrivals()
        horizon = self.config.horizon
        logger.info(
            "Run seed=%d scenario=%s N=%d s=%d T=%.3f",
            self.seed,
            self.config.scenario,
            self.config.nodes,
            self.config.fanout,
            self.config.t_share,
        )
        while self.calendar:
            next_time = self.calendar.peek_time()
            assert next_time is not None
            if horizon is not None and next_time > horizon:
                break
            self._report_until(next_time)
            now, event = self.calendar.pop()
            match event:
                case SensorArrival():
                    self._on_sensor_arrival(event, now)
                case MessageDelivery():
                    self._on_delivery(event, now)
                case IdleTick():
                    self._on_idle_tick(event, now)

        end_time = horizon if horizon is not None else max(self.calendar.now, 0.0)
        self._report_until(end_time)
        if not self.records or self.records[-1].time < end_time:
            self._report(end_time)
        self.tracker.advance(end_time)
        logger.info("Finished seed=%d at t=%.3f", self.seed, end_time)
        return SimulationResult(
            seed=self.seed,
            end_time=end_time,
            records=tuple(self.records),
            nodes=tuple(NodeSummary.of(n) for n in self.nodes),
            tracker=self.tracker,
            occupancy=tuple(self.occupancy.series),
            max_occupancy_second_half=self.occupancy.max_second_half,
            final_occupancy=self.occupancy.current,
            largest_message=self.largest_message,
        )


def run_simulation(config: ExperimentConfig, seed: int | None = None) -> SimulationResult:
    """Run one seed of ``config`` (its first seed when ``seed`` is None).

    Raises:
        ConfigError: If the configuration is invalid; every violation is listed.

    """
    return Simulation(config, config.seed_offset if seed is None else seed).run()


__all__ = [
    "NodeSummary",
    "OccupancyMonitor",
    "Simulation",
    "SimulationResult",
    "run_simulation",
]
