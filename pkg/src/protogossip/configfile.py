"""YAML experiment files.

An experiment file is a YAML mapping with one key per command-line flag,
dashes replaced by underscores::

    scenario: clustering
    n: 5
    s: 4
    t_share: 1.0
    th_prot: 250
    dataset: synthetic:drift
    d_size: 1000
    r_random: true
    seeds: 10

Nested ``ilvq``, ``kde`` and ``compression`` mappings set the hyperparameter
bundles. Values given on the command line override the file. See
``docs/config-file.md`` for every key.
"""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml

from protogossip.config import ExperimentConfig
from protogossip.errors import ConfigError

# Flag name (underscored) -> ExperimentConfig field.
EXPERIMENT_KEYS: Mapping[str, str] = {
    "scenario": "scenario",
    "n": "nodes",
    "s": "fanout",
    "t_share": "t_share",
    "th_jsd": "th_jsd",
    "th_prot": "th_prot",
    "queue_max_protos": "queue_max_protos",
    "queue_max_sets": "queue_max_sets",
    "lambda_s": "lambda_s",
    "mu": "mu",
    "horizon": "horizon",
    "seeds": "seeds",
    "seed_offset": "seed_offset",
    "metrics_period": "metrics_period",
    "latency": "latency",
    "staleness_only": "staleness_only",
    "batch_length": "batch_length",
    "out_dir": "out_dir",
    "workers": "workers",
}

# Flag name (underscored) -> DatasetSpec field.
DATASET_KEYS: Mapping[str, str] = {
    "dataset": "source",
    "d_size": "size",
    "r_start": "start",
    "r_random": "random_start",
    "feature_columns": "feature_columns",
    "label_column": "label_column",
    "normalize": "normalize",
    "synthetic_n": "synthetic_n",
    "drift_at": "drift_at",
}

NESTED_KEYS = frozenset({"ilvq", "kde", "compression"})

# ``horizon: none`` runs until every node has consumed its slice.
UNTIL_EXHAUSTED = "none"


def _normalize_key(key: object) -> str:
    return str(key).strip().lstrip("-").replace("-", "_")


def parse_config_text(text: str, *, source: str = "<string>") -> dict[str, Any]:
    """Parse experiment-file text into underscored flag keys.

    Raises:
        ConfigError: Invalid YAML, a top level that is not a mapping, or
            unknown keys.

    """
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError([f"{source}: invalid YAML: {e}"]) from e
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError([f"{source}: expected a mapping, got {type(raw).__name__}"])

    options = {_normalize_key(k): v for k, v in raw.items()}
    known = EXPERIMENT_KEYS.keys() | DATASET_KEYS.keys() | NESTED_KEYS
    unknown = sorted(options.keys() - known)
    if unknown:
        raise ConfigError([f"{source}: unknown key {key!r}" for key in unknown])
    for key in NESTED_KEYS & options.keys():
        if not isinstance(options[key], dict):
            raise ConfigError([f"{source}: {key!r} must be a mapping"])
    return options


def load_config_file(path: Path) -> dict[str, Any]:
    """Read and parse an experiment file.

    Raises:
        ConfigError: The file cannot be read or does not parse.

    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError([f"{path}: cannot read config file: {e.strerror or e}"]) from e
    return parse_config_text(text, source=str(path))


def options_to_config(options: Mapping[str, Any]) -> ExperimentConfig:
    """Build an ExperimentConfig from underscored flag keys.

    Keys whose value is None are left at their defaults; a horizon of
    ``"none"`` selects a run until the dataset is exhausted.
    """
    experiment: dict[str, Any] = {}
    dataset: dict[str, Any] = {}
    for key, value in options.items():
        if value is None:
            continue
        if key == "horizon" and str(value).lower() == UNTIL_EXHAUSTED:
            experiment["horizon"] = None
        elif key in EXPERIMENT_KEYS:
            experiment[EXPERIMENT_KEYS[key]] = value
        elif key in DATASET_KEYS:
            dataset[DATASET_KEYS[key]] = value
        elif key in NESTED_KEYS:
            experiment[key] = dict(value)
    if dataset:
        experiment["dataset"] = dataset
    return ExperimentConfig.from_dict(experiment)


__all__ = [
    "DATASET_KEYS",
    "EXPERIMENT_KEYS",
    "UNTIL_EXHAUSTED",
    "load_config_file",
    "options_to_config",
    "parse_config_text",
]
