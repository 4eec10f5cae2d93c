"""Gossip message: one prototype snapshot sent from one node to another."""

from __future__ import annotations

from dataclasses import dataclass

from protogossip.errors import ProtocolError
from protogossip.prototypes import Prototype


@dataclass(frozen=True, slots=True)
class GossipMessage:
    """A sender's prototype snapshot, stamped with its logical-clock version.

    Attributes:
        sender: Id of the sending node.
        version: Sender's logical clock when the snapshot was taken (>= 1).
        prototypes: The snapshot, possibly compressed (non-empty).
        send_tick: Simulation time of sending.

    """

    sender: int
    version: int
    prototypes: tuple[Prototype, ...]
    send_tick: float = 0.0

    def __post_init__(self) -> None:
        if not self.prototypes:
            raise ProtocolError("a gossip message must carry at least one prototype")
        if self.version < 1:
            raise ProtocolError(f"message version must be >= 1, got {self.version}")

    @property
    def dimension(self) -> int:
        return self.prototypes[0].dimension

    def __len__(self) -> int:
        return len(self.prototypes)


__all__ = ["GossipMessage"]
