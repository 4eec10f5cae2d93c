"""Tests for incremental LVQ training and prediction."""

import numpy as np
import pytest

from protogossip.config import IlvqConfig
from protogossip.errors import InsufficientModelError, NoModelError, RejectedInputError
from protogossip.ilvq import (
    TrainOutcome,
    find_winners,
    init_model,
    insertion_threshold,
    learning_rates,
    nearest,
    predict,
    record_prediction,
    should_insert,
    train_one,
)
from protogossip.prototypes import LabeledSample, Prototype, PrototypeModel


def _model(*protos: Prototype) -> PrototypeModel:
    counts: dict[int, int] = {}
    for p in protos:
        counts[p.label] = counts.get(p.label, 0) + 1
    return PrototypeModel.from_prototypes(protos, protos[0].dimension, class_counts=counts)


def _sample(x: float, y: float, label: int) -> LabeledSample:
    return LabeledSample((x, y), label)


class TestInitModel:
    def test_two_prototypes_and_counts(self) -> None:
        model = init_model(_sample(0, 0, 0), _sample(1, 1, 1), tick=2.5)
        assert len(model) == 2
        assert model.class_counts == {0: 1, 1: 1}
        assert model.samples_absorbed == 2
        assert all(p.creation_tick == 2.5 for p in model)

    def test_duplicates_allowed(self) -> None:
        model = init_model(_sample(1, 1, 0), _sample(1, 1, 0))
        assert len(model) == 2
        assert model.class_counts == {0: 2}

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(RejectedInputError):
            init_model(LabeledSample((0.0,), 0), _sample(0, 0, 0))


class TestFindWinners:
    def test_nearest_and_runner_up(self) -> None:
        model = _model(
            Prototype(0, (0.0, 0.0), 0), Prototype(1, (5.0, 0.0), 0), Prototype(2, (1.0, 0.0), 1)
        )
        assert find_winners(model, (0.4, 0.0)) == (0, 2)

    def test_ties_go_to_lowest_id(self) -> None:
        model = _model(Prototype(0, (1.0, 0.0), 0), Prototype(1, (-1.0, 0.0), 0))
        assert find_winners(model, (0.0, 0.0)) == (0, 1)

    def test_needs_two_prototypes(self) -> None:
        model = _model(Prototype(0, (1.0, 0.0), 0))
        with pytest.raises(InsufficientModelError):
            find_winners(model, (0.0, 0.0))

    def test_wrong_dimension(self) -> None:
        model = _model(Prototype(0, (1.0, 0.0), 0), Prototype(1, (2.0, 0.0), 0))
        with pytest.raises(RejectedInputError):
            find_winners(model, (0.0,))


class TestInsertion:
    def test_threshold_without_edges_is_nearest_distance(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (3.0, 0.0), 0))
        assert insertion_threshold(model, 0) == pytest.approx(3.0)

    def test_threshold_with_edges_is_farthest_neighbor(self) -> None:
        model = _model(
            Prototype(0, (0.0, 0.0), 0), Prototype(1, (1.0, 0.0), 0), Prototype(2, (0.0, 4.0), 0)
        )
        model.add_edge(0, 2)
        assert insertion_threshold(model, 0) == pytest.approx(4.0)

    def test_new_label_inserts(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (1.0, 0.0), 0))
        assert should_insert(model, _sample(0.1, 0, 7), 0, 1)
        outcome = train_one(model, _sample(0.1, 0, 7), relevance=3, tick=1.0)
        assert outcome is TrainOutcome.INSERTED
        inserted = model.get(2)
        assert inserted.label == 7
        assert inserted.relevance == 3
        assert inserted.creation_tick == 1.0
        assert model.class_counts[7] == 1

    def test_far_sample_inserts(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (1.0, 0.0), 0))
        assert train_one(model, _sample(5, 0, 0)) is TrainOutcome.INSERTED
        assert len(model) == 3
        assert model.edges == {}


class TestAdaptation:
    def test_matching_winner_moves_closer(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0, relevance=9), Prototype(1, (3.0, 0.0), 0))
        outcome = train_one(model, _sample(1, 0, 0))
        assert outcome is TrainOutcome.ADAPTED
        np.testing.assert_allclose(model.get(0).vector, (0.1, 0.0))
        assert model.get(1).vector == (3.0, 0.0)
        assert model.get(0).relevance == 10
        assert model.edges == {(0, 1): 1}
        assert model.class_counts == {0: 3}

    def test_mismatching_winner_moves_away(self) -> None:
        model = _model(
            Prototype(0, (0.0, 0.0), 1, relevance=9),
            Prototype(1, (0.0, 2.0), 0),
            Prototype(2, (0.0, 10.0), 0),
        )
        model.add_edge(1, 2)
        outcome = train_one(model, _sample(1, 0, 0))
        assert outcome is TrainOutcome.ADAPTED
        np.testing.assert_allclose(model.get(0).vector, (-0.1, 0.0))
        # Same-label neighbor of a wrong winner is pulled toward the sample.
        np.testing.assert_allclose(model.get(1).vector, (0.01, 1.98))
        assert model.get(0).relevance == 9

    def test_old_edges_removed(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (3.0, 0.0), 0))
        train_one(model, _sample(1, 0, 0), config=IlvqConfig(max_edge_age=1))
        assert model.edges == {}

    def test_denoise_removes_isolated(self) -> None:
        model = _model(
            Prototype(0, (0.0, 0.0), 0),
            Prototype(1, (3.0, 0.0), 0),
            Prototype(2, (0.0, -50.0), 0),
        )
        train_one(model, _sample(1, 0, 0), config=IlvqConfig(denoise_period=1))
        assert model.ids == (0, 1)
        assert model.last_denoise == model.samples_absorbed

    def test_denoise_keeps_two_prototypes(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (3.0, 0.0), 0))
        train_one(model, _sample(1, 0, 0), config=IlvqConfig(max_edge_age=1, denoise_period=1))
        assert len(model) == 2


class TestLearningRates:
    def test_decays_with_relevance(self) -> None:
        assert learning_rates(0) == (1.0, 0.1)
        assert learning_rates(9) == pytest.approx((0.1, 0.01))

    def test_floor(self) -> None:
        assert learning_rates(10_000) == pytest.approx((0.01, 0.001))


class TestPrediction:
    def test_predict_nearest_label(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (1.0, 1.0), 1))
        assert predict(model, (0.9, 0.8)) == 1
        assert nearest(model, (0.1, 0.0)) == 0

    def test_empty_model(self) -> None:
        with pytest.raises(NoModelError):
            predict(PrototypeModel(2), (0.0, 0.0))

    def test_record_prediction_credits_correct(self) -> None:
        model = _model(Prototype(0, (0.0, 0.0), 0), Prototype(1, (1.0, 1.0), 1))
        assert record_prediction(model, _sample(0, 0, 0)) == 0
        assert record_prediction(model, _sample(0, 0, 1)) == 0
        assert model.get(0).relevance == 1
