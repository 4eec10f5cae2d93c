"""Opt-in event trace for simulation runs.

When a trace is active the engine records one line per handled event:

    <time>\\t<type>\\t<node>\\t<summary>

with time printed to nine decimals. No trace is active by default, and
:func:`get_event_trace` then returns None and the engine records nothing.

Example:
    from protogossip.tracing import traced_run

    with traced_run() as trace:
        run_simulation(config, seed=0)

    Path("run.trace").write_text(trace.render())

Thread Safety:
    The active trace is held in a ContextVar, so concurrent runs in separate
    contexts never share a trace.

"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar, Token
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(slots=True)
class EventTrace:
    """Accumulated trace lines of one or more runs.

    Attributes:
        lines: Formatted trace lines, in handling order.
        counts: Number of events recorded per type.

    """

    lines: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def record(self, time: float, kind: str, node: int, summary: str = "") -> None:
        """Append one event."""
        self.lines.append(f"{time:.9f}\t{kind}\t{node}\t{summary}")
        self.counts[kind] = self.counts.get(kind, 0) + 1

    def render(self) -> str:
        return "".join(f"{line}\n" for line in self.lines)

    def write(self, path: Path) -> None:
        path.write_text(self.render(), encoding="utf-8")

    def summary(self) -> dict[str, int]:
        """Event counts per type plus the total."""
        return {**dict(sorted(self.counts.items())), "total": len(self.lines)}


_trace: ContextVar[EventTrace | None] = ContextVar("event_trace", default=None)


def get_event_trace() -> EventTrace | None:
    """The active trace, or None when tracing is off."""
    return _trace.get()


@contextmanager
def traced_run() -> Iterator[EventTrace]:
    """Record the events of every run started inside the ``with`` block."""
    trace = EventTrace()
    token: Token[EventTrace | None] = _trace.set(trace)
    try:
        yield trace
    finally:
        _trace.reset(token)


__all__ = ["EventTrace", "get_event_trace", "traced_run"]
