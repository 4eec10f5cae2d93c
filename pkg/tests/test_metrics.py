"""Tests for prequential scoring, run CSVs and aggregation."""

import csv
import io
import math
from pathlib import Path

import pytest

from protogossip.metrics import (
    CSV_FIELDS,
    MetricsRecord,
    PrequentialCounter,
    RunSummary,
    aggregate_runs,
    efficiency_ratio,
    f1_score,
    final_records,
    prequential_update,
    render_aggregate_csv,
    render_run_csv,
    summarize_run,
    write_run_csv,
)


def _record(time: float, node: int, f1: float = 0.5, bytes_sent: int = 100) -> MetricsRecord:
    return MetricsRecord(
        time=time,
        node=node,
        tp="0=1;1=2",
        fp="0=0;1=1",
        fn="0=1;1=0",
        f1=f1,
        prototypes_trained=10,
        bytes_sent=bytes_sent,
        model_size=4,
        mean_staleness=1.5,
    )


class TestF1:
    @pytest.mark.parametrize(
        ("tp", "fp", "fn", "expected"),
        [(5, 0, 0, 1.0), (0, 3, 2, 0.0), (3, 1, 2, 0.6667), (2, 1, 1, 0.6667)],
    )
    def test_values(self, tp: int, fp: int, fn: int, expected: float) -> None:
        assert f1_score(tp, fp, fn) == pytest.approx(expected, abs=1e-4)


class TestPrequentialCounter:
    def test_binary_uses_positive_class(self) -> None:
        counter = PrequentialCounter()
        for true, predicted in [(1, 1), (1, 1), (1, 0), (0, 1), (0, 0)]:
            prequential_update(counter, true, predicted)
        assert counter.is_binary
        assert counter.f1() == pytest.approx(2 / 3)
        assert counter.accuracy() == pytest.approx(0.6)
        assert counter.formatted() == ("0=1;1=2", "0=1;1=1", "0=1;1=1")

    def test_multiclass_is_macro(self) -> None:
        counter = PrequentialCounter()
        for true, predicted in [(0, 0), (1, 1), (2, 2), (2, 1)]:
            counter.update(true, predicted)
        assert not counter.is_binary
        expected = (1.0 + f1_score(1, 1, 0) + f1_score(1, 0, 1)) / 3
        assert counter.f1() == pytest.approx(expected)

    def test_empty(self) -> None:
        counter = PrequentialCounter()
        assert counter.f1() == 0.0
        assert counter.accuracy() == 0.0
        assert counter.formatted() == ("", "", "")


class TestRunCsv:
    def test_header_and_rows(self) -> None:
        text = render_run_csv([_record(1.0, 0), _record(1.0, 1)], seed=3, scenario="jsd")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0]) == CSV_FIELDS
        assert len(rows) == 2
        assert rows[1]["node"] == "1"
        assert rows[0]["seed"] == "3"
        assert rows[0]["scenario"] == "jsd"
        assert rows[0]["tp"] == "0=1;1=2"

    def test_floats_round_trip_exactly(self) -> None:
        text = render_run_csv([_record(0.1 + 0.2, 0, f1=1 / 3)], seed=0, scenario="base")
        row = next(csv.DictReader(io.StringIO(text)))
        assert float(row["time"]) == 0.1 + 0.2
        assert float(row["f1"]) == 1 / 3

    def test_write(self, tmp_path: Path) -> None:
        path = tmp_path / "run.csv"
        text = write_run_csv(path, [_record(1.0, 0)], seed=0, scenario="base")
        assert path.read_text(encoding="utf-8") == text


class TestSummaries:
    def test_final_records(self) -> None:
        records = [_record(1.0, 0, f1=0.1), _record(1.0, 1), _record(2.0, 0, f1=0.9)]
        last = final_records(records)
        assert last[0].f1 == 0.9
        assert set(last) == {0, 1}

    def test_summarize_run(self) -> None:
        records = [
            _record(2.0, 0, f1=0.4, bytes_sent=100),
            _record(2.0, 1, f1=0.8, bytes_sent=300),
        ]
        summary = summarize_run(records, seed=1, duration=4.0)
        assert summary.f1 == pytest.approx(0.6)
        assert summary.bytes_sent == 200.0
        assert summary.bandwidth_rate == 50.0
        assert summary.model_size == 4.0

    def test_summarize_empty(self) -> None:
        assert summarize_run([], seed=0, duration=1.0).f1 == 0.0

    def test_aggregate_mean_and_population_std(self) -> None:
        a = RunSummary(0, 1.0, 0.4, 1.0, 10.0, 10.0, 2.0, 1.0)
        b = RunSummary(1, 1.0, 0.8, 3.0, 30.0, 30.0, 4.0, 3.0)
        agg = aggregate_runs([a, b])
        assert agg["f1"] == pytest.approx((0.6, 0.2))
        assert agg["bytes_sent"] == pytest.approx((20.0, 10.0))
        text = render_aggregate_csv(agg, runs=2, scenario="base")
        assert text.splitlines()[0] == "metric,mean,std,runs,scenario"
        assert len(text.splitlines()) == 1 + len(agg)


class TestEfficiency:
    def test_percent_per_megabyte(self) -> None:
        assert efficiency_ratio(0.5, 2_000_000) == pytest.approx(25.0)

    def test_nothing_sent(self) -> None:
        assert efficiency_ratio(0.5, 0.0) == math.inf
        assert efficiency_ratio(0.0, 0.0) == 0.0

    def test_summary_property(self) -> None:
        summary = RunSummary(0, 1.0, 0.5, 0.0, 0.0, 1_000_000.0, 0.0, 0.0)
        assert summary.efficiency == pytest.approx(50.0)
