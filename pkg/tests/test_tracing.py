"""Tests for the opt-in event trace."""

from pathlib import Path

from protogossip.config import ExperimentConfig
from protogossip.sim import run_simulation
from protogossip.tracing import EventTrace, get_event_trace, traced_run


class TestEventTrace:
    def test_line_format(self) -> None:
        trace = EventTrace()
        trace.record(1.5, "sensor", 2, "sample=0 clock=1")
        assert trace.render() == "1.500000000\tsensor\t2\tsample=0 clock=1\n"

    def test_summary_counts(self) -> None:
        trace = EventTrace()
        trace.record(0.0, "send", 0)
        trace.record(0.0, "deliver", 1)
        trace.record(0.1, "send", 0)
        assert trace.summary() == {"deliver": 1, "send": 2, "total": 3}

    def test_write(self, tmp_path: Path) -> None:
        trace = EventTrace()
        trace.record(0.0, "idle", 0, "empty")
        path = tmp_path / "run.trace"
        trace.write(path)
        assert path.read_text(encoding="utf-8") == trace.render()


class TestTracedRun:
    def test_off_by_default(self) -> None:
        assert get_event_trace() is None

    def test_context_scoped(self) -> None:
        with traced_run() as trace:
            assert get_event_trace() is trace
        assert get_event_trace() is None

    def test_records_simulation_events(self) -> None:
        config = ExperimentConfig(
            nodes=3, fanout=1, horizon=2.0, staleness_only=True, metrics_period=1.0
        )
        with traced_run() as trace:
            run_simulation(config, seed=0)
        assert trace.counts["sensor"] > 0
        assert trace.counts["send"] > 0
        assert 0 < trace.counts["deliver"] <= trace.counts["send"]
        times = [float(line.split("\t")[0]) for line in trace.lines]
        assert times == sorted(times)

    def test_trace_does_not_change_results(self) -> None:
        config = ExperimentConfig(nodes=3, fanout=2, horizon=2.0, staleness_only=True)
        plain = run_simulation(config, seed=1)
        with traced_run():
            traced = run_simulation(config, seed=1)
        assert plain.records == traced.records
