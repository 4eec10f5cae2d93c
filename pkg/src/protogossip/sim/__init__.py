"""Discrete-event simulation: calendar, arrivals, staleness and queueing checks."""

from protogossip.sim.arrivals import schedule_poisson_arrivals, service_time
from protogossip.sim.calendar import (
    Event,
    EventCalendar,
    EventKind,
    IdleTick,
    MessageDelivery,
    SensorArrival,
)
from protogossip.sim.engine import (
    NodeSummary,
    OccupancyMonitor,
    Simulation,
    SimulationResult,
    run_simulation,
)
from protogossip.sim.lemmas import (
    effective_update_rate,
    harmonic_number,
    lemma1_stable,
    lemma2_bound,
    offered_load,
)
from protogossip.sim.probes import ScalingPoint, ScalingProbe, lemma3_probe, scaled_fanout
from protogossip.sim.staleness import (
    Delivery,
    ModelUpdate,
    StalenessTracker,
    mean_batch_length,
    track_staleness,
)

__all__ = [
    "Delivery",
    "Event",
    "EventCalendar",
    "EventKind",
    "IdleTick",
    "MessageDelivery",
    "ModelUpdate",
    "NodeSummary",
    "OccupancyMonitor",
    "ScalingPoint",
    "ScalingProbe",
    "SensorArrival",
    "Simulation",
    "SimulationResult",
    "StalenessTracker",
    "effective_update_rate",
    "harmonic_number",
    "lemma1_stable",
    "lemma2_bound",
    "lemma3_probe",
    "mean_batch_length",
    "offered_load",
    "run_simulation",
    "scaled_fanout",
    "schedule_poisson_arrivals",
    "service_time",
    "track_staleness",
]
