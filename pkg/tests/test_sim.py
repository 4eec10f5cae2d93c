"""Tests for the event calendar, arrivals, queueing formulas and the engine."""

import math

import numpy as np
import pytest

from protogossip.config import ExperimentConfig
from protogossip.data import DatasetSpec
from protogossip.errors import ConfigError, InvalidParameterError
from protogossip.metrics import render_run_csv
from protogossip.prototypes import Prototype
from protogossip.runtime import GossipMessage
from protogossip.sim import (
    Delivery,
    EventCalendar,
    IdleTick,
    MessageDelivery,
    ModelUpdate,
    OccupancyMonitor,
    ScalingPoint,
    ScalingProbe,
    SensorArrival,
    Simulation,
    StalenessTracker,
    effective_update_rate,
    harmonic_number,
    lemma1_stable,
    lemma2_bound,
    lemma3_probe,
    mean_batch_length,
    run_simulation,
    scaled_fanout,
    schedule_poisson_arrivals,
    service_time,
    track_staleness,
)


def _small_config(**overrides: object) -> ExperimentConfig:
    values: dict[str, object] = {
        "nodes": 3,
        "fanout": 2,
        "horizon": 5.0,
        "seeds": 1,
        "dataset": DatasetSpec(size=300, synthetic_n=400),
    }
    values.update(overrides)
    return ExperimentConfig(**values)  # type: ignore[arg-type]


class TestEventCalendar:
    def test_time_then_kind_then_sequence(self) -> None:
        calendar = EventCalendar()
        msg = GossipMessage(1, 1, (Prototype(0, (0.0,), 0),))
        calendar.schedule(2.0, SensorArrival(node=0, index=0))
        calendar.schedule(1.0, IdleTick(node=0))
        calendar.schedule(1.0, MessageDelivery(node=0, message=msg))
        calendar.schedule(1.0, SensorArrival(node=1, index=0))
        calendar.schedule(1.0, SensorArrival(node=2, index=0))
        order = []
        while calendar:
            time, event = calendar.pop()
            order.append((time, type(event).__name__, event.node))
        assert order == [
            (1.0, "SensorArrival", 1),
            (1.0, "SensorArrival", 2),
            (1.0, "MessageDelivery", 0),
            (1.0, "IdleTick", 0),
            (2.0, "SensorArrival", 0),
        ]
        assert calendar.now == 2.0

    def test_rejects_time_travel(self) -> None:
        calendar = EventCalendar()
        calendar.schedule(5.0, IdleTick(node=0))
        calendar.pop()
        calendar.schedule(1.0, IdleTick(node=0))
        with pytest.raises(AssertionError):
            calendar.pop()

    def test_peek(self) -> None:
        calendar = EventCalendar()
        assert calendar.peek_time() is None
        calendar.schedule(3.0, IdleTick(node=0))
        assert calendar.peek_time() == 3.0
        assert len(calendar) == 1


class TestArrivals:
    def test_count_within_three_sigma(self) -> None:
        for seed in range(10):
            times = schedule_poisson_arrivals(10.0, 100.0, np.random.default_rng(seed))
            assert abs(len(times) - 1000) <= 3 * math.sqrt(1000)
            assert times[-1] <= 100.0
            assert (np.diff(times) >= 0).all()

    def test_mean_gap(self) -> None:
        times = schedule_poisson_arrivals(
            10.0, None, np.random.default_rng(0), max_events=20_000
        )
        assert len(times) == 20_000
        assert times[-1] / len(times) == pytest.approx(0.1, rel=0.05)

    def test_event_cap(self) -> None:
        times = schedule_poisson_arrivals(10.0, 100.0, np.random.default_rng(0), max_events=7)
        assert len(times) == 7
        assert len(schedule_poisson_arrivals(1.0, 1.0, np.random.default_rng(0), max_events=0)) == 0

    def test_deterministic(self) -> None:
        a = schedule_poisson_arrivals(5.0, 10.0, np.random.default_rng(3))
        b = schedule_poisson_arrivals(5.0, 10.0, np.random.default_rng(3))
        np.testing.assert_array_equal(a, b)

    def test_errors(self) -> None:
        with pytest.raises(InvalidParameterError):
            schedule_poisson_arrivals(0.0, 10.0, np.random.default_rng(0))
        with pytest.raises(InvalidParameterError):
            schedule_poisson_arrivals(1.0, None, np.random.default_rng(0))

    def test_service_time_positive(self) -> None:
        rng = np.random.default_rng(0)
        assert all(service_time(200.0, rng) > 0 for _ in range(100))


class TestQueueingFormulas:
    def test_effective_update_rate(self) -> None:
        assert effective_update_rate(1.0, 2, 0.5, 1.0, 100.0) == 2.0
        assert effective_update_rate(3.0, 0, 0.5, 10.0, 100.0) == 3.0
        assert effective_update_rate(3.0, 2, 0.0, 10.0, 100.0) == 3.0
        assert effective_update_rate(10.0, 4, 1.0, 50.0, 100.0) == 100.0

    def test_stability(self) -> None:
        assert lemma1_stable(10.0, 4, 1.0, 50.0, 2500.0)
        assert not lemma1_stable(10.0, 4, 1.0, 50.0, 2000.0)
        assert lemma1_stable(0.0, 4, 1.0, 50.0, 1.0)

    def test_staleness_bound(self) -> None:
        expected = 100 * (1 + 1 / 2 + 1 / 3 + 1 / 4)
        assert lemma2_bound(100.0, 1.0, 2, 0.5, 5) == pytest.approx(expected)
        assert lemma2_bound(100.0, 1.0, 2, 0.5, 2) == pytest.approx(100.0)
        assert lemma2_bound(100.0, 1.0, 4, 0.5, 5) == pytest.approx(
            lemma2_bound(100.0, 1.0, 2, 0.5, 5) / 2
        )

    def test_formula_errors(self) -> None:
        with pytest.raises(InvalidParameterError):
            lemma2_bound(100.0, 1.0, 0, 0.5, 5)
        with pytest.raises(InvalidParameterError):
            lemma2_bound(100.0, 1.0, 2, 0.5, 1)
        with pytest.raises(InvalidParameterError):
            lemma1_stable(1.0, 1, 1.0, 1.0, 0.0)
        with pytest.raises(InvalidParameterError):
            harmonic_number(-1)

    def test_harmonic(self) -> None:
        assert harmonic_number(0) == 0.0
        assert harmonic_number(4) == pytest.approx(25 / 12)


class TestStalenessTracker:
    def test_delivery_clears_staleness(self) -> None:
        tracker = StalenessTracker(nodes=3)
        tracker.update(0, 1, 0.0)
        tracker.update(0, 2, 0.0)
        assert tracker.staleness()[1, 0] == 2
        assert tracker.staleness()[2, 0] == 2
        tracker.deliver(1, 0, 2, 0.0)
        assert tracker.staleness()[1, 0] == 0
        assert (tracker.staleness() >= 0).all()

    def test_old_version_does_not_regress(self) -> None:
        tracker = StalenessTracker(nodes=2)
        tracker.update(0, 3, 0.0)
        tracker.deliver(1, 0, 3, 0.0)
        tracker.deliver(1, 0, 1, 0.0)
        assert tracker.versions[1, 0] == 3

    def test_time_average(self) -> None:
        tracker = StalenessTracker(nodes=2)
        track_staleness(tracker, ModelUpdate(node=0, version=1, time=0.0))
        track_staleness(tracker, Delivery(receiver=1, sender=0, version=1, time=2.0))
        tracker.advance(4.0)
        assert tracker.pair_means()[1, 0] == pytest.approx(0.5)
        assert tracker.node_mean(1) == pytest.approx(0.5)
        assert tracker.node_mean(0) == 0.0
        assert tracker.mean() == pytest.approx(0.25)

    def test_mean_batch_length(self) -> None:
        tracker = StalenessTracker(nodes=2)
        assert mean_batch_length(tracker) == 0.0
        tracker.record_batch(5, pre_cluster_length=9)
        tracker.record_batch(3)
        assert mean_batch_length(tracker) == 4.0
        assert tracker.max_pre_cluster == 9

    def test_checks_use_configured_rates(self) -> None:
        tracker = StalenessTracker(nodes=5, lam=1.0, mu=100.0, fanout=2, t_share=0.5)
        tracker.record_batch(1)
        assert tracker.effective_rate() == 2.0
        assert tracker.stable()
        assert tracker.bound() == pytest.approx(208.3333, abs=1e-3)


class TestOccupancyMonitor:
    def test_second_half_peak(self) -> None:
        monitor = OccupancyMonitor(horizon=10.0)
        monitor.change(1.0, 50)
        monitor.change(2.0, -45)
        monitor.change(6.0, 3)
        monitor.change(7.0, -2)
        assert monitor.current == 6
        assert monitor.max_second_half == 8


class TestSimulation:
    def test_rejects_fanout_equal_to_network_size(self) -> None:
        with pytest.raises(ConfigError):
            Simulation(_small_config(nodes=5, fanout=5), seed=0)

    def test_deterministic_per_seed(self) -> None:
        a = run_simulation(_small_config(), seed=4)
        b = run_simulation(_small_config(), seed=4)
        assert a.records == b.records
        text_a = render_run_csv(a.records, seed=4, scenario="base")
        assert text_a == render_run_csv(b.records, seed=4, scenario="base")

    def test_different_seeds_differ(self) -> None:
        a = run_simulation(_small_config(), seed=1)
        b = run_simulation(_small_config(), seed=2)
        assert a.records != b.records

    def test_periodic_records(self) -> None:
        result = run_simulation(_small_config(), seed=0)
        assert result.end_time == 5.0
        assert len(result.records) == 5 * 3
        assert [r.time for r in result.records[::3]] == [1.0, 2.0, 3.0, 4.0, 5.0]
        for node in range(3):
            series = [r for r in result.records if r.node == node]
            assert all(a.bytes_sent <= b.bytes_sent for a, b in zip(series, series[1:]))
            assert all(
                a.prototypes_trained <= b.prototypes_trained for a, b in zip(series, series[1:])
            )
            assert all(0.0 <= r.f1 <= 1.0 for r in series)

    def test_nodes_learn_and_share(self) -> None:
        result = run_simulation(_small_config(), seed=0)
        assert result.total_bytes > 0
        assert all(n.model_size >= 2 for n in result.nodes)
        assert result.largest_message >= 2
        assert 0.0 <= result.mean_f1 <= 1.0

    def test_runs_until_exhausted_without_horizon(self) -> None:
        config = _small_config(horizon=None, dataset=DatasetSpec(size=60, synthetic_n=100))
        result = run_simulation(config, seed=0)
        assert math.isfinite(result.end_time)
        per_node = 60 // 3
        for node in result.nodes:
            assert node.prototypes_trained >= per_node - 2
            assert node.queued_prototypes == 0

    def test_staleness_only(self) -> None:
        config = _small_config(staleness_only=True, horizon=20.0, metrics_period=5.0)
        result = run_simulation(config, seed=0)
        assert len(result.records) == 4 * 3
        assert all(n.model_size == 0 for n in result.nodes)
        assert all(n.logical_clock > 0 for n in result.nodes)
        assert (result.tracker.staleness() >= 0).all()
        assert result.mean_staleness >= 0.0

    def test_no_sharing_means_no_bytes(self) -> None:
        result = run_simulation(_small_config(t_share=0.0), seed=0)
        assert result.total_bytes == 0
        assert result.final_occupancy == 0


class TestScalingProbe:
    @pytest.mark.parametrize(("nodes", "fanout"), [(2, 1), (4, 2), (8, 2), (16, 4), (32, 6)])
    def test_scaled_fanout(self, nodes: int, fanout: int) -> None:
        assert scaled_fanout(nodes) == fanout

    def test_scaled_fanout_needs_two_nodes(self) -> None:
        with pytest.raises(InvalidParameterError):
            scaled_fanout(1)

    def test_ratio(self) -> None:
        scaling = ScalingProbe((ScalingPoint(4, 2, 2.0, 1.0), ScalingPoint(8, 2, 3.0, 1.5)))
        assert scaling.ratio == 1.5
        assert scaling.within(2.0)
        zero = ScalingProbe((ScalingPoint(4, 2, 2.0, 0.0), ScalingPoint(8, 2, 3.0, 1.5)))
        assert zero.ratio == math.inf

    def test_rates_scale_with_log_n(self) -> None:
        scaling = lemma3_probe((4, 16), base_rate=2.0, horizon=10.0, seeds=1)
        assert [p.nodes for p in scaling.points] == [4, 16]
        assert [p.fanout for p in scaling.points] == [2, 2]
        assert scaling.points[1].rate == pytest.approx(4.0)
        assert all(p.mean_staleness >= 0 for p in scaling.points)
        # mu / (lambda s T) * H_{N-1} with mu=200
        assert scaling.points[0].bound == pytest.approx(200 / 4 * (1 + 1 / 2 + 1 / 3))

    def test_scaled_fanout_mode(self) -> None:
        scaling = lemma3_probe((4, 16), horizon=10.0, seeds=1, fanout_mode="scaled")
        assert [p.fanout for p in scaling.points] == [2, 4]

    def test_point_under_bound(self) -> None:
        assert ScalingPoint(4, 2, 2.0, 10.0, bound=12.0).under_bound
        assert not ScalingPoint(4, 2, 2.0, 13.0, bound=12.0).under_bound
        assert ScalingPoint(4, 2, 2.0, 13.0).under_bound

    def test_invalid_network_sizes(self) -> None:
        with pytest.raises(InvalidParameterError):
            lemma3_probe(())
        with pytest.raises(InvalidParameterError):
            lemma3_probe((1, 4))
