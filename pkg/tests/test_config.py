"""Tests for configuration bundles and error formatting."""

from pathlib import Path

import pytest

from protogossip.config import (
    CompressionConfig,
    ExperimentConfig,
    IlvqConfig,
    KdeConfig,
    NodeConfig,
    QueuePolicy,
)
from protogossip.data import DatasetSpec
from protogossip.errors import ConfigError, DatasetError


class TestErrorFormatting:
    def test_config_error_lists_every_violation(self) -> None:
        err = ConfigError(["first", "second"])
        assert err.violations == ("first", "second")
        assert str(err) == "Invalid configuration:\n  - first\n  - second"

    def test_dataset_error_location(self) -> None:
        assert str(DatasetError("bad", row=3, source_file="d.csv")) == "d.csv:3: bad"
        assert str(DatasetError("bad", source_file="d.csv")) == "d.csv: bad"
        assert str(DatasetError("bad")) == "bad"


class TestBundleValidation:
    def test_ilvq(self) -> None:
        with pytest.raises(ConfigError) as exc:
            IlvqConfig(max_edge_age=0, denoise_period=0)
        assert len(exc.value.violations) == 2

    def test_kde(self) -> None:
        with pytest.raises(ConfigError):
            KdeConfig(min_points=10, max_points=5)
        with pytest.raises(ConfigError):
            KdeConfig(bandwidth=0.0)

    def test_compression(self) -> None:
        with pytest.raises(ConfigError):
            CompressionConfig(target_range=(0.8, 0.7))
        with pytest.raises(ConfigError):
            CompressionConfig(eps_up=1.0, eps_down=1.0)

    def test_queue_policy(self) -> None:
        with pytest.raises(ConfigError):
            QueuePolicy(max_sets=0)

    def test_node_fanout_bound(self) -> None:
        with pytest.raises(ConfigError):
            NodeConfig(nodes=5, fanout=5)
        assert NodeConfig(nodes=5, fanout=0).fanout == 0


class TestExperimentConfig:
    def test_defaults_are_valid(self) -> None:
        assert ExperimentConfig().validate() == []

    def test_fanout_must_be_below_network_size(self) -> None:
        problems = ExperimentConfig(nodes=5, fanout=5).validate()
        assert problems == ["s=5 must satisfy 0 <= s <= N-1=4"]

    def test_collects_all_problems(self) -> None:
        cfg = ExperimentConfig(scenario="nope", lambda_s=0, mu=-1, seeds=0)
        problems = cfg.validate()
        assert len(problems) == 4
        assert problems[0].startswith("unknown scenario 'nope'")

    def test_check_raises(self) -> None:
        with pytest.raises(ConfigError):
            ExperimentConfig(workers=0).check()

    def test_staleness_only_needs_horizon(self) -> None:
        problems = ExperimentConfig(staleness_only=True, horizon=None).validate()
        assert any("finite horizon" in p for p in problems)

    def test_staleness_only_skips_dataset(self, tmp_path: Path) -> None:
        missing = DatasetSpec(source=str(tmp_path / "none.csv"))
        assert ExperimentConfig(dataset=missing).validate()
        assert ExperimentConfig(dataset=missing, staleness_only=True).validate() == []

    def test_seed_list(self) -> None:
        assert ExperimentConfig(seeds=3, seed_offset=10).seed_list == (10, 11, 12)

    def test_compression_limit_follows_th_prot(self) -> None:
        assert ExperimentConfig(th_prot=50).compression_config().limit_size == 50
        custom = CompressionConfig(limit_size=7, eps_initial=0.2)
        cfg = ExperimentConfig(th_prot=80, compression=custom).compression_config()
        assert cfg.limit_size == 80
        assert cfg.eps_initial == 0.2

    def test_from_dict_nested(self) -> None:
        cfg = ExperimentConfig.from_dict(
            {
                "scenario": "jsd",
                "nodes": 8,
                "dataset": {"size": 400},
                "ilvq": {"max_edge_age": 10},
                "kde": {"base_points": 200},
                "compression": {"target_range": [0.6, 0.7]},
                "out_dir": "out",
                "unknown_key": 1,
            }
        )
        assert cfg.scenario == "jsd"
        assert cfg.dataset.size == 400
        assert cfg.ilvq.max_edge_age == 10
        assert cfg.kde.base_points == 200
        assert cfg.compression == CompressionConfig(target_range=(0.6, 0.7))
        assert cfg.out_dir == Path("out")
