"""
Protogossip — gossip-based decentralized prototype learning, simulated.

Every node of a fully connected network learns an incremental LVQ model
from its own sensor stream and pushes snapshots of that model to random
peers. A Jensen-Shannon gate suppresses snapshots that would tell a peer
nothing new, and adaptive DBSCAN compression keeps the models small. A
deterministic discrete-event engine runs the network and tracks how stale
each node's view of the others is.

Quick Start:
    >>> from protogossip import ExperimentConfig, run_simulation
    >>> config = ExperimentConfig(scenario="jsd", nodes=5, fanout=4, horizon=10.0)
    >>> result = run_simulation(config, seed=0)
    >>> result.records[-1].f1  # doctest: +SKIP
    0.87

Seed sweeps with output files:
    >>> from protogossip import run_experiment
    >>> report = run_experiment(config)  # doctest: +SKIP

Command line:
    protogossip --scenario clustering --n 5 --s 4 --th-prot 500 --seeds 10
"""

from protogossip.compression import adaptive_cluster_label, compress_model, dbscan
from protogossip.config import (
    CompressionConfig,
    ExperimentConfig,
    IlvqConfig,
    KdeConfig,
    NodeConfig,
    QueuePolicy,
)
from protogossip.data import DatasetSpec, load_stream, partition_indices, synth_drift_stream
from protogossip.errors import (
    ConfigError,
    ConvergenceError,
    DatasetError,
    ProtocolError,
    ProtogossipError,
    RejectedInputError,
)
from protogossip.experiment import ExperimentReport, run_experiment, run_th_prot_sweep
from protogossip.ilvq import find_winners, init_model, predict, train_one
from protogossip.metrics import MetricsRecord, PrequentialCounter, f1_score
from protogossip.prototypes import LabeledSample, Prototype, PrototypeModel
from protogossip.runtime import GossipMessage, NodeState, PeerQueue
from protogossip.scenarios import DEFAULT_SCENARIOS, Scenario, ScenarioRegistry
from protogossip.similarity import is_it_worthy, js_distance, kde_density
from protogossip.sim import (
    SimulationResult,
    StalenessTracker,
    lemma1_stable,
    lemma2_bound,
    lemma3_probe,
    run_simulation,
)
from protogossip.tracing import EventTrace, traced_run

__version__ = "0.1.0"

__all__ = [  # noqa: RUF022 - grouped by category
    "__version__",
    # Model
    "LabeledSample",
    "Prototype",
    "PrototypeModel",
    "find_winners",
    "init_model",
    "predict",
    "train_one",
    # Similarity and compression
    "adaptive_cluster_label",
    "compress_model",
    "dbscan",
    "is_it_worthy",
    "js_distance",
    "kde_density",
    # Runtime
    "GossipMessage",
    "NodeState",
    "PeerQueue",
    # Configuration
    "CompressionConfig",
    "DatasetSpec",
    "ExperimentConfig",
    "IlvqConfig",
    "KdeConfig",
    "NodeConfig",
    "QueuePolicy",
    "DEFAULT_SCENARIOS",
    "Scenario",
    "ScenarioRegistry",
    # Data
    "load_stream",
    "partition_indices",
    "synth_drift_stream",
    # Simulation
    "EventTrace",
    "SimulationResult",
    "StalenessTracker",
    "lemma1_stable",
    "lemma2_bound",
    "lemma3_probe",
    "run_simulation",
    "traced_run",
    # Experiments
    "ExperimentReport",
    "MetricsRecord",
    "PrequentialCounter",
    "f1_score",
    "run_experiment",
    "run_th_prot_sweep",
    # Errors
    "ConfigError",
    "ConvergenceError",
    "DatasetError",
    "ProtocolError",
    "ProtogossipError",
    "RejectedInputError",
]
