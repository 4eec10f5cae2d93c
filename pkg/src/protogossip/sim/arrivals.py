"""Poisson arrival times and exponential service times."""

from __future__ import annotations

import math

import numpy as np

from protogossip.errors import InvalidParameterError


def schedule_poisson_arrivals(
    rate: float,
    horizon: float | None,
    rng: np.random.Generator,
    *,
    max_events: int | None = None,
) -> np.ndarray:
    """Arrival times of a Poisson process of ``rate`` events per second.

    Gaps are i.i.d. Exp(rate). Generation stops at ``horizon`` or after
    ``max_events`` arrivals, whichever comes first; at least one of the two
    must be given.

    Raises:
        InvalidParameterError: If ``rate <= 0`` or neither bound is given.

    """
    if not rate > 0:
        raise InvalidParameterError(f"arrival rate must be positive, got {rate}")
    if horizon is None and max_events is None:
        raise InvalidParameterError("arrivals need a horizon or a maximum event count")
    if max_events is not None and max_events <= 0:
        return np.empty(0)

    if horizon is None:
        assert max_events is not None
        return np.cumsum(rng.exponential(1.0 / rate, size=max_events))

    expected = rate * horizon
    batch = max(16, math.ceil(expected + 6.0 * math.sqrt(expected)))
    times = np.cumsum(rng.exponential(1.0 / rate, size=batch))
    while times[-1] <= horizon:
        more = np.cumsum(rng.exponential(1.0 / rate, size=batch)) + times[-1]
        times = np.concatenate((times, more))
    times = times[times <= horizon]
    if max_events is not None:
        times = times[:max_events]
    return times


def service_time(mu: float, rng: np.random.Generator) -> float:
    """One Exp(mu) service duration."""
    return float(rng.exponential(1.0 / mu))


__all__ = ["schedule_poisson_arrivals", "service_time"]
