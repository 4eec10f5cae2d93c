"""Canonical little-endian wire encoding of gossip messages.

Layout::

    header   sender u32 | version u64 | count u32 | dimension u32      (20 bytes)
    body     count x ( d x f64 vector | i32 label | u64 relevance )   (8d + 12 each)

Prototype ids and creation ticks are local to a node and are not sent;
decoding numbers prototypes 0..count-1. Bandwidth counters use
:func:`encoded_size`, which equals ``len(encode_message(msg))`` without
building the bytes.

Thread Safety:
    All functions are pure.

"""

from __future__ import annotations

import struct

import numpy as np

from protogossip.errors import ProtocolError
from protogossip.prototypes import Prototype
from protogossip.runtime.messages import GossipMessage

_HEADER = struct.Struct("<IQII")
HEADER_SIZE = _HEADER.size


def _body_dtype(dimension: int) -> np.dtype:
    return np.dtype(
        [("vector", "<f8", (dimension,)), ("label", "<i4"), ("relevance", "<u8")]
    )


def prototype_size(dimension: int) -> int:
    """Bytes per encoded prototype of dimension ``dimension``."""
    return 8 * dimension + 12


def encoded_size(msg: GossipMessage) -> int:
    return HEADER_SIZE + len(msg.prototypes) * prototype_size(msg.dimension)


def encode_message(msg: GossipMessage) -> bytes:
    """Serialize ``msg`` into its canonical byte form."""
    d = msg.dimension
    body = np.empty(len(msg.prototypes), dtype=_body_dtype(d))
    for row, proto in enumerate(msg.prototypes):
        if proto.dimension != d:
            raise ProtocolError(
                f"prototype {proto.id} has dimension {proto.dimension}, expected {d}"
            )
        body[row] = (proto.vector, proto.label, proto.relevance)
    header = _HEADER.pack(msg.sender, msg.version, len(msg.prototypes), d)
    return header + body.tobytes()


def decode_message(data: bytes, *, send_tick: float = 0.0) -> GossipMessage:
    """Parse bytes produced by :func:`encode_message`.

    Raises:
        ProtocolError: If the buffer is truncated or has trailing bytes.

    """
    if len(data) < HEADER_SIZE:
        raise ProtocolError(f"message shorter than its {HEADER_SIZE}-byte header")
    sender, version, count, dimension = _HEADER.unpack_from(data)
    expected = HEADER_SIZE + count * prototype_size(dimension)
    if len(data) != expected:
        raise ProtocolError(f"message is {len(data)} bytes, header announces {expected}")
    body = np.frombuffer(data, dtype=_body_dtype(dimension), count=count, offset=HEADER_SIZE)
    prototypes = tuple(
        Prototype(
            id=i,
            vector=tuple(float(v) for v in row["vector"]),
            label=int(row["label"]),
            relevance=int(row["relevance"]),
        )
        for i, row in enumerate(body)
    )
    return GossipMessage(sender=sender, version=version, prototypes=prototypes, send_tick=send_tick)


__all__ = ["HEADER_SIZE", "decode_message", "encode_message", "encoded_size", "prototype_size"]
