"""Prototype and dictionary types.

A :class:`Prototype` is a labeled representative vector; a
:class:`PrototypeModel` is one node's dictionary: the prototype set, the
topological edge set with ages, and per-class sample counts.

Prototypes are frozen dataclasses (vectors stored as float tuples), so a
snapshot of a model is just a tuple of prototypes and can be handed to other
nodes without copying. The model itself is mutable and owned by exactly one
node actor; it keeps a lazily built numpy matrix of its vectors for distance
queries.

Thread Safety:
    Prototype and LabeledSample are immutable. PrototypeModel is not
    thread-safe; confine each instance to a single actor and use
    :meth:`PrototypeModel.copy` to hand a model to another context.

"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, replace

import numpy as np

from protogossip.errors import RejectedInputError


@dataclass(frozen=True, slots=True)
class LabeledSample:
    """One labeled feature vector from a data stream."""

    vector: tuple[float, ...]
    label: int

    @classmethod
    def of(cls, vector: Iterable[float], label: int) -> LabeledSample:
        """Build a sample from any iterable of numbers."""
        return cls(vector=tuple(float(v) for v in vector), label=int(label))

    @property
    def dimension(self) -> int:
        return len(self.vector)


@dataclass(frozen=True, slots=True)
class Prototype:
    """A labeled prototype vector.

    Attributes:
        id: Identifier, unique within one model.
        vector: Feature coordinates (length d).
        label: Class identifier.
        relevance: Number of successful predictions credited to this prototype.
        creation_tick: Simulation time at which the prototype was created.

    """

    id: int
    vector: tuple[float, ...]
    label: int
    relevance: int = 0
    creation_tick: float = 0.0

    @property
    def dimension(self) -> int:
        return len(self.vector)

    def as_sample(self) -> LabeledSample:
        """View this prototype as a training sample (used for peer prototypes)."""
        return LabeledSample(vector=self.vector, label=self.label)


def edge_key(a: int, b: int) -> tuple[int, int]:
    """Canonical key for the unordered edge {a, b}."""
    return (a, b) if a < b else (b, a)


class PrototypeModel:
    """A node's ILVQ dictionary: prototypes G, edges E, and class counts.

    Prototypes are kept in insertion order, which is also increasing id order
    because ids come from a monotonic counter.

    Attributes:
        dimension: Feature dimension d shared by every prototype.
        edges: Map from canonical edge key to age.
        class_counts: Map from label to absorbed-sample count.
        samples_absorbed: Total samples absorbed via training.
        last_denoise: Value of ``samples_absorbed`` at the last denoising pass.

    """

    __slots__ = (
        "_matrix",
        "_prototypes",
        "class_counts",
        "dimension",
        "edges",
        "last_denoise",
        "next_id",
        "samples_absorbed",
    )

    def __init__(self, dimension: int) -> None:
        self.dimension = dimension
        self._prototypes: dict[int, Prototype] = {}
        self.edges: dict[tuple[int, int], int] = {}
        self.class_counts: dict[int, int] = {}
        self.next_id = 0
        self.samples_absorbed = 0
        self.last_denoise = 0
        self._matrix: np.ndarray | None = None

    # ------------------------------------------------------------------
    # Prototype set
    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._prototypes)

    def __iter__(self) -> Iterator[Prototype]:
        return iter(self._prototypes.values())

    def __contains__(self, pid: int) -> bool:
        return pid in self._prototypes

    @property
    def prototypes(self) -> tuple[Prototype, ...]:
        """Snapshot of the prototype set in id order."""
        return tuple(self._prototypes.values())

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(self._prototypes)

    def get(self, pid: int) -> Prototype:
        return self._prototypes[pid]

    def check_dimension(self, vector: Sequence[float], context: str = "input") -> None:
        """Raise :class:`RejectedInputError` unless ``vector`` has dimension d."""
        if len(vector) != self.dimension:
            raise RejectedInputError(self.dimension, len(vector), context)

    def add_prototype(
        self,
        vector: Sequence[float],
        label: int,
        *,
        relevance: int = 0,
        creation_tick: float = 0.0,
    ) -> Prototype:
        """Insert a new prototype with a fresh id."""
        self.check_dimension(vector, "prototype")
        proto = Prototype(
            id=self.next_id,
            vector=tuple(float(v) for v in vector),
            label=int(label),
            relevance=relevance,
            creation_tick=creation_tick,
        )
        self.next_id += 1
        self._prototypes[proto.id] = proto
        self._matrix = None
        return proto

    def replace(self, proto: Prototype) -> None:
        """Store an updated version of an existing prototype (same id)."""
        self._prototypes[proto.id] = proto
        if self._matrix is not None:
            row = self.ids.index(proto.id)
            self._matrix[row] = proto.vector

    def move(self, pid: int, vector: np.ndarray) -> None:
        """Set a prototype's position."""
        self.replace(replace(self._prototypes[pid], vector=tuple(float(v) for v in vector)))

    def credit(self, pid: int, amount: int = 1) -> None:
        """Increase a prototype's relevance."""
        proto = self._prototypes[pid]
        self._prototypes[pid] = replace(proto, relevance=proto.relevance + amount)

    def remove_prototype(self, pid: int) -> None:
        """Remove a prototype and every edge incident to it."""
        del self._prototypes[pid]
        for key in [k for k in self.edges if pid in k]:
            del self.edges[key]
        self._matrix = None

    def matrix(self) -> np.ndarray:
        """All prototype vectors as a (|G|, d) array, rows in id order."""
        if self._matrix is None:
            if self._prototypes:
                self._matrix = np.array(
                    [p.vector for p in self._prototypes.values()], dtype=float
                )
            else:
                self._matrix = np.empty((0, self.dimension), dtype=float)
        return self._matrix

    # ------------------------------------------------------------------
    # Edge set
    # ------------------------------------------------------------------

    def add_edge(self, a: int, b: int, age: int = 0) -> None:
        self.edges[edge_key(a, b)] = age

    def has_edge(self, a: int, b: int) -> bool:
        return edge_key(a, b) in self.edges

    def neighbors(self, pid: int) -> tuple[int, ...]:
        """Ids connected to ``pid`` by an edge, in ascending order."""
        found = [b if a == pid else a for (a, b) in self.edges if pid in (a, b)]
        return tuple(sorted(found))

    # ------------------------------------------------------------------
    # Whole-model helpers
    # ------------------------------------------------------------------

    @property
    def labels(self) -> tuple[int, ...]:
        """Distinct labels present in the prototype set, ascending."""
        return tuple(sorted({p.label for p in self._prototypes.values()}))

    @property
    def total_relevance(self) -> int:
        return sum(p.relevance for p in self._prototypes.values())

    def copy(self) -> PrototypeModel:
        """Independent copy (prototypes are immutable and shared)."""
        clone = PrototypeModel(self.dimension)
        clone._prototypes = dict(self._prototypes)
        clone.edges = dict(self.edges)
        clone.class_counts = dict(self.class_counts)
        clone.next_id = self.next_id
        clone.samples_absorbed = self.samples_absorbed
        clone.last_denoise = self.last_denoise
        return clone

    @classmethod
    def from_prototypes(
        cls,
        prototypes: Iterable[Prototype],
        dimension: int,
        *,
        class_counts: dict[int, int] | None = None,
    ) -> PrototypeModel:
        """Build a model around existing prototypes, keeping their ids."""
        model = cls(dimension)
        for proto in sorted(prototypes, key=lambda p: p.id):
            model.check_dimension(proto.vector, "prototype")
            model._prototypes[proto.id] = proto
            model.next_id = max(model.next_id, proto.id + 1)
        model.class_counts = dict(class_counts or {})
        return model

    def __repr__(self) -> str:
        return (
            f"PrototypeModel(d={self.dimension}, |G|={len(self)}, "
            f"|E|={len(self.edges)}, classes={dict(sorted(self.class_counts.items()))})"
        )


__all__ = [
    "LabeledSample",
    "Prototype",
    "PrototypeModel",
    "edge_key",
]
