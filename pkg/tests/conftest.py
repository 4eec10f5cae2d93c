"""Test-wide Hypothesis settings.

Strategies here build KDE grids and prototype models, which can be slow to
generate when the suite runs under ``-n auto``. Generation-cost health checks
are therefore off; falsified properties still fail.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "protogossip",
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    deadline=None,
)
settings.load_profile("protogossip")
