"""Named experiment scenarios and their flag bundles.

Scenarios build on each other:

- ``base``: no gate, unbounded LIFO queues, no compression.
- ``jsd``: ``base`` plus the Jensen-Shannon worthiness gate.
- ``limit-queue``: ``jsd`` plus a 10,000-prototype cap per neighbor queue.
- ``clustering``: ``limit-queue`` plus one batch per neighbor and DBSCAN
  compression on both the queue and the sharing path.

:class:`ScenarioRegistry` is immutable (``__slots__`` + ``MappingProxyType``)
and built via :class:`ScenarioRegistryBuilder` (``.register()`` chains,
raising ``ValueError`` on a duplicate name and ``TypeError`` on a nameless
scenario).

Thread Safety:
    ``ScenarioRegistry`` and ``Scenario`` are immutable and safe to share.

Example:
    >>> registry = create_default_scenario_registry()
    >>> registry.get("jsd").gate_enabled
    True

"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING

from protogossip.config import DEFAULT_QUEUE_CAP, NodeConfig, QueuePolicy
from protogossip.errors import ConfigError

if TYPE_CHECKING:
    from protogossip.config import ExperimentConfig


@dataclass(frozen=True, slots=True)
class Scenario:
    """Flag bundle selected by ``--scenario``."""

    name: str
    description: str = ""
    gate_enabled: bool = False
    queue: QueuePolicy = field(default_factory=QueuePolicy)
    compress_on_queue: bool = False
    compress_on_share: bool = False

    @property
    def compression_enabled(self) -> bool:
        return self.compress_on_queue or self.compress_on_share


class ScenarioRegistry:
    """Immutable registry of scenarios keyed by name."""

    __slots__ = ("_by_name", "_scenarios")

    _scenarios: tuple[Scenario, ...]
    _by_name: Mapping[str, Scenario]

    def __init__(self, scenarios: tuple[Scenario, ...], by_name: dict[str, Scenario]) -> None:
        """Use :class:`ScenarioRegistryBuilder` to create instances."""
        self._scenarios = scenarios
        self._by_name = MappingProxyType(by_name)

    def get(self, name: str) -> Scenario | None:
        return self._by_name.get(name)

    def resolve(self, name: str) -> Scenario:
        """Scenario called ``name``.

        Raises:
            ConfigError: If no scenario has that name.

        """
        scenario = self._by_name.get(name)
        if scenario is None:
            known = ", ".join(self.names)
            raise ConfigError([f"unknown scenario {name!r} (known: {known})"])
        return scenario

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self._scenarios)

    @property
    def scenarios(self) -> tuple[Scenario, ...]:
        """All scenarios in registration order."""
        return self._scenarios

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_name)


class ScenarioRegistryBuilder:
    """Mutable builder for :class:`ScenarioRegistry`."""

    __slots__ = ("_by_name", "_scenarios")

    def __init__(self) -> None:
        self._scenarios: list[Scenario] = []
        self._by_name: dict[str, Scenario] = {}

    def register(self, scenario: Scenario) -> ScenarioRegistryBuilder:
        """Register a scenario.

        Returns:
            Self for chaining.

        Raises:
            TypeError: If ``scenario`` has no name.
            ValueError: If the name is already registered.

        """
        if not getattr(scenario, "name", None):
            msg = f"Scenario {scenario!r} has no name"
            raise TypeError(msg)
        if scenario.name in self._by_name:
            msg = f"Scenario '{scenario.name}' already registered"
            raise ValueError(msg)
        self._by_name[scenario.name] = scenario
        self._scenarios.append(scenario)
        return self

    def register_all(self, scenarios: Iterable[Scenario]) -> ScenarioRegistryBuilder:
        for scenario in scenarios:
            self.register(scenario)
        return self

    def build(self) -> ScenarioRegistry:
        return ScenarioRegistry(scenarios=tuple(self._scenarios), by_name=dict(self._by_name))

    def __len__(self) -> int:
        return len(self._scenarios)


def create_default_scenario_registry() -> ScenarioRegistry:
    """Registry holding ``base``, ``jsd``, ``limit-queue`` and ``clustering``."""
    capped = QueuePolicy(max_prototypes=DEFAULT_QUEUE_CAP)
    return (
        ScenarioRegistryBuilder()
        .register(Scenario("base", "gossip without gate, queue limits or compression"))
        .register(Scenario("jsd", "base + Jensen-Shannon worthiness gate", gate_enabled=True))
        .register(
            Scenario(
                "limit-queue",
                "jsd + 10,000-prototype cap per neighbor queue",
                gate_enabled=True,
                queue=capped,
            )
        )
        .register(
            Scenario(
                "clustering",
                "limit-queue + one batch per neighbor + DBSCAN compression",
                gate_enabled=True,
                queue=QueuePolicy(max_sets=1, max_prototypes=DEFAULT_QUEUE_CAP),
                compress_on_queue=True,
                compress_on_share=True,
            )
        )
        .build()
    )


DEFAULT_SCENARIOS = create_default_scenario_registry()


def node_config_for(
    config: ExperimentConfig,
    registry: ScenarioRegistry = DEFAULT_SCENARIOS,
) -> NodeConfig:
    """Resolve an experiment's scenario and overrides into per-node settings.

    Raises:
        ConfigError: Unknown scenario or invalid resulting settings.

    """
    scenario = registry.resolve(config.scenario)
    queue = QueuePolicy(
        max_sets=(
            config.queue_max_sets if config.queue_max_sets is not None else scenario.queue.max_sets
        ),
        max_prototypes=(
            config.queue_max_protos
            if config.queue_max_protos is not None
            else scenario.queue.max_prototypes
        ),
    )
    return NodeConfig(
        nodes=config.nodes,
        fanout=config.fanout,
        t_share=config.t_share,
        th_jsd=config.th_jsd,
        gate_enabled=scenario.gate_enabled,
        queue=queue,
        compress_on_queue=scenario.compress_on_queue,
        compress_on_share=scenario.compress_on_share,
        staleness_only=config.staleness_only,
        batch_length=config.batch_length,
        ilvq=config.ilvq,
        kde=config.kde,
        compression=config.compression_config(),
    )


__all__ = [
    "DEFAULT_SCENARIOS",
    "Scenario",
    "ScenarioRegistry",
    "ScenarioRegistryBuilder",
    "create_default_scenario_registry",
    "node_config_for",
]
