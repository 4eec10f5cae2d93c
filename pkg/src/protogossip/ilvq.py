"""Incremental Learning Vector Quantization.

One call to :func:`train_one` runs one pass of the ILVQ loop body over a
:class:`~protogossip.prototypes.PrototypeModel`:

1. find the winner s1 and runner-up s2;
2. insert x as a new prototype when its label is new or it lies outside the
   adaptive insertion threshold of s1 or s2, and stop;
3. otherwise connect s1-s2, age s1's edges, pull s1 toward x (or push it away
   on a label mismatch), move s1's neighbors the opposite way, drop edges that
   reached ``max_edge_age`` and periodically remove isolated prototypes.

Everything is deterministic: ties between equidistant prototypes go to the
lowest id and no randomness is consumed.

Thread Safety:
    The functions mutate the model passed in; a model must be owned by a
    single actor.

"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum

import numpy as np

from protogossip.config import IlvqConfig
from protogossip.errors import InsufficientModelError, NoModelError, RejectedInputError
from protogossip.prototypes import LabeledSample, PrototypeModel

DEFAULT_ILVQ_CONFIG = IlvqConfig()


class TrainOutcome(Enum):
    """What :func:`train_one` did with a sample."""

    INSERTED = "inserted"
    ADAPTED = "adapted"


def init_model(
    sample_a: LabeledSample,
    sample_b: LabeledSample,
    *,
    tick: float = 0.0,
) -> PrototypeModel:
    """Seed a model with its first two samples (duplicates allowed).

    Raises:
        RejectedInputError: If the samples differ in dimension or are empty.

    """
    if sample_a.dimension < 1:
        raise RejectedInputError(1, sample_a.dimension, "initial sample")
    if sample_b.dimension != sample_a.dimension:
        raise RejectedInputError(sample_a.dimension, sample_b.dimension, "initial sample")
    model = PrototypeModel(sample_a.dimension)
    for sample in (sample_a, sample_b):
        model.add_prototype(sample.vector, sample.label, creation_tick=tick)
        model.class_counts[sample.label] = model.class_counts.get(sample.label, 0) + 1
        model.samples_absorbed += 1
    return model


def _distances(model: PrototypeModel, x: Sequence[float]) -> np.ndarray:
    return np.linalg.norm(model.matrix() - np.asarray(x, dtype=float), axis=1)


def find_winners(model: PrototypeModel, x: Sequence[float]) -> tuple[int, int]:
    """Ids of the nearest and second-nearest prototypes to ``x``.

    Raises:
        InsufficientModelError: If the model holds fewer than two prototypes.
        RejectedInputError: If ``x`` has the wrong dimension.

    """
    if len(model) < 2:
        raise InsufficientModelError(f"winner search needs 2 prototypes, model has {len(model)}")
    model.check_dimension(x, "sample")
    # Stable sort over id-ordered rows: equal distances resolve to the lower id.
    order = np.argsort(_distances(model, x), kind="stable")
    ids = model.ids
    return ids[int(order[0])], ids[int(order[1])]


def insertion_threshold(model: PrototypeModel, pid: int) -> float:
    """Adaptive threshold of prototype ``pid``.

    The largest distance to an edge neighbor, or the distance to the nearest
    other prototype when ``pid`` has no edges.
    """
    vector = np.asarray(model.get(pid).vector, dtype=float)
    neighbors = model.neighbors(pid)
    if neighbors:
        others = np.array([model.get(n).vector for n in neighbors], dtype=float)
        return float(np.linalg.norm(others - vector, axis=1).max())
    others = np.array([p.vector for p in model if p.id != pid], dtype=float)
    if others.size == 0:
        return 0.0
    return float(np.linalg.norm(others - vector, axis=1).min())


def should_insert(
    model: PrototypeModel,
    sample: LabeledSample,
    winner: int,
    runner_up: int,
) -> bool:
    """Whether ``sample`` becomes a new prototype instead of adapting the model."""
    if sample.label not in model.class_counts:
        return True
    x = np.asarray(sample.vector, dtype=float)
    for pid in (winner, runner_up):
        distance = float(np.linalg.norm(x - np.asarray(model.get(pid).vector, dtype=float)))
        if distance > insertion_threshold(model, pid):
            return True
    return False


def learning_rates(relevance: int, config: IlvqConfig = DEFAULT_ILVQ_CONFIG) -> tuple[float, float]:
    """Winner and neighbor rates for a winner with the given relevance."""
    winner_rate = max(1.0 / (1.0 + relevance), config.min_learning_rate)
    return winner_rate, winner_rate * config.neighbor_rate_ratio


def _count(model: PrototypeModel, label: int) -> None:
    model.class_counts[label] = model.class_counts.get(label, 0) + 1
    model.samples_absorbed += 1


def _denoise(model: PrototypeModel) -> None:
    isolated = [pid for pid in model.ids if not model.neighbors(pid)]
    if isolated and len(model) - len(isolated) >= 2:
        for pid in isolated:
            model.remove_prototype(pid)
    model.last_denoise = model.samples_absorbed


def train_one(
    model: PrototypeModel,
    sample: LabeledSample,
    *,
    config: IlvqConfig = DEFAULT_ILVQ_CONFIG,
    tick: float = 0.0,
    relevance: int = 0,
) -> TrainOutcome:
    """Absorb one labeled sample into ``model``.

    Args:
        model: Initialized model (at least two prototypes).
        sample: Labeled vector to learn from.
        config: Edge-age, denoising and learning-rate settings.
        tick: Simulation time, stamped on inserted prototypes.
        relevance: Relevance carried by ``sample`` when it is a peer's prototype;
            kept if the sample is inserted.

    Returns:
        INSERTED when ``sample`` joined the prototype set, ADAPTED otherwise.

    Raises:
        RejectedInputError: If the sample has the wrong dimension.
        InsufficientModelError: If the model was never initialized.

    """
    model.check_dimension(sample.vector, "sample")
    s1, s2 = find_winners(model, sample.vector)

    if should_insert(model, sample, s1, s2):
        model.add_prototype(sample.vector, sample.label, relevance=relevance, creation_tick=tick)
        _count(model, sample.label)
        return TrainOutcome.INSERTED

    if not model.has_edge(s1, s2):
        model.add_edge(s1, s2)
    for key in [k for k in model.edges if s1 in k]:
        model.edges[key] += 1
    _count(model, sample.label)

    winner = model.get(s1)
    winner_rate, neighbor_rate = learning_rates(winner.relevance, config)
    x = np.asarray(sample.vector, dtype=float)
    w = np.asarray(winner.vector, dtype=float)
    matches = winner.label == sample.label
    if matches:
        model.move(s1, w + winner_rate * (x - w))
    else:
        model.move(s1, w - winner_rate * (x - w))
    for nid in model.neighbors(s1):
        neighbor = model.get(nid)
        n = np.asarray(neighbor.vector, dtype=float)
        if matches and neighbor.label != sample.label:
            model.move(nid, n - neighbor_rate * (x - n))
        elif not matches and neighbor.label == sample.label:
            model.move(nid, n + neighbor_rate * (x - n))
    if matches:
        model.credit(s1)

    for key in [k for k, age in model.edges.items() if age >= config.max_edge_age]:
        del model.edges[key]
    if model.samples_absorbed - model.last_denoise >= config.denoise_period:
        _denoise(model)
    return TrainOutcome.ADAPTED


def nearest(model: PrototypeModel, x: Sequence[float]) -> int:
    """Id of the prototype closest to ``x`` (lowest id on ties).

    Raises:
        NoModelError: If the model is empty.

    """
    if len(model) == 0:
        raise NoModelError("cannot predict with an empty model")
    model.check_dimension(x, "query")
    return model.ids[int(np.argmin(_distances(model, x)))]


def predict(model: PrototypeModel, x: Sequence[float]) -> int:
    """Label of the nearest prototype."""
    return model.get(nearest(model, x)).label


def record_prediction(model: PrototypeModel, sample: LabeledSample) -> int:
    """Predict ``sample``'s label and credit the nearest prototype if correct."""
    pid = nearest(model, sample.vector)
    predicted = model.get(pid).label
    if predicted == sample.label:
        model.credit(pid)
    return predicted


__all__ = [
    "TrainOutcome",
    "find_winners",
    "init_model",
    "insertion_threshold",
    "learning_rates",
    "nearest",
    "predict",
    "record_prediction",
    "should_insert",
    "train_one",
]
