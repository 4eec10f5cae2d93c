"""Global event calendar of the discrete-event engine.

Events are ordered by (time, kind priority, insertion sequence). At equal
times a sensor arrival is handled before a message delivery, and both before
an idle tick, so a node that has a sensor sample and peer work pending at the
same instant always takes the sensor sample first.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import IntEnum

from protogossip.runtime.messages import GossipMessage


class EventKind(IntEnum):
    """Event types; the value is the tie-break priority at equal times."""

    SENSOR_ARRIVAL = 0
    MESSAGE_DELIVERY = 1
    IDLE_TICK = 2


@dataclass(frozen=True, slots=True)
class SensorArrival:
    node: int
    index: int

    kind = EventKind.SENSOR_ARRIVAL


@dataclass(frozen=True, slots=True)
class MessageDelivery:
    node: int
    message: GossipMessage

    kind = EventKind.MESSAGE_DELIVERY


@dataclass(frozen=True, slots=True)
class IdleTick:
    node: int

    kind = EventKind.IDLE_TICK


type Event = SensorArrival | MessageDelivery | IdleTick


class EventCalendar:
    """Priority queue of timed events with deterministic tie-breaking.

    Raises AssertionError if an event would be dequeued before the one
    dequeued last.
    """

    __slots__ = ("_heap", "_last_time", "_seq")

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, int, Event]] = []
        self._seq = 0
        self._last_time = float("-inf")

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    @property
    def now(self) -> float:
        """Time of the event dequeued last (-inf before the first)."""
        return self._last_time

    def schedule(self, time: float, event: Event) -> None:
        heapq.heappush(self._heap, (time, int(event.kind), self._seq, event))
        self._seq += 1

    def peek_time(self) -> float | None:
        return self._heap[0][0] if self._heap else None

    def pop(self) -> tuple[float, Event]:
        time, _, _, event = heapq.heappop(self._heap)
        assert time >= self._last_time, f"event at {time} dequeued after {self._last_time}"
        self._last_time = time
        return time, event


__all__ = [
    "Event",
    "EventCalendar",
    "EventKind",
    "IdleTick",
    "MessageDelivery",
    "SensorArrival",
]
