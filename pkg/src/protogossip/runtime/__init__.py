"""Node runtime: gossip messages, wire codec, peer queues and the node actor."""

from protogossip.runtime.codec import (
    HEADER_SIZE,
    decode_message,
    encode_message,
    encoded_size,
    prototype_size,
)
from protogossip.runtime.messages import GossipMessage
from protogossip.runtime.node import NodeCounters, NodeState
from protogossip.runtime.queues import PeerQueue

__all__ = [
    "HEADER_SIZE",
    "GossipMessage",
    "NodeCounters",
    "NodeState",
    "PeerQueue",
    "decode_message",
    "encode_message",
    "encoded_size",
    "prototype_size",
]
