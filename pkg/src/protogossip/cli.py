"""Command-line entry point: ``protogossip`` / ``python -m protogossip``.

Runs one experiment (every seed of one scenario) or a Th_prot sweep of the
clustering scenario, and writes the CSV and summary files described in
:mod:`protogossip.experiment`.

Exit codes:
    0: success
    1: a run failed (dataset or I/O error)
    2: invalid command line or configuration

"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from contextlib import nullcontext
from dataclasses import replace
from pathlib import Path
from typing import Any

from protogossip import __version__
from protogossip.configfile import UNTIL_EXHAUSTED, load_config_file, options_to_config
from protogossip.errors import ConfigError, DatasetError, ProtogossipError
from protogossip.experiment import (
    DEFAULT_TH_PROT_SWEEP,
    ExperimentReport,
    run_experiment,
    run_th_prot_sweep,
)
from protogossip.scenarios import DEFAULT_SCENARIOS
from protogossip.tracing import traced_run
from protogossip.utils.logger import get_logger

logger = get_logger(__name__)

# argparse dests that are not experiment options.
_CONTROL_DESTS = frozenset({"config", "trace", "th_prot_sweep", "verbose", "quiet"})


def _horizon(value: str) -> float | str:
    if value.lower() == UNTIL_EXHAUSTED:
        return UNTIL_EXHAUSTED
    return float(value)


def _int_list(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from e


def build_parser() -> argparse.ArgumentParser:
    """Parser for every experiment flag; unset flags stay None so files can fill them."""
    parser = argparse.ArgumentParser(
        prog="protogossip",
        description="Simulate gossip-based decentralized prototype learning.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="YAML experiment file (flags override it)")

    net = parser.add_argument_group("network and protocol")
    net.add_argument("--scenario", choices=DEFAULT_SCENARIOS.names, help="flag bundle")
    net.add_argument("--n", type=int, help="number of nodes N")
    net.add_argument("--s", type=int, help="fanout s (0 <= s <= N-1)")
    net.add_argument("--t-share", type=float, help="sharing probability T_share")
    net.add_argument("--th-jsd", type=float, help="Jensen-Shannon gate threshold")
    net.add_argument("--th-prot", type=int, help="compression limit Th_prot")
    net.add_argument(
        "--th-prot-sweep",
        type=_int_list,
        nargs="?",
        const=DEFAULT_TH_PROT_SWEEP,
        help="run the clustering scenario once per limit (default 50,150,250,500)",
    )
    net.add_argument("--queue-max-protos", type=int, help="prototype cap per neighbor queue")
    net.add_argument("--queue-max-sets", type=int, help="batch cap per neighbor queue")
    net.add_argument("--latency", type=float, help="transport latency in seconds")

    rates = parser.add_argument_group("rates and timing")
    rates.add_argument("--lambda-s", type=float, help="sensor arrival rate (samples/s)")
    rates.add_argument("--mu", type=float, help="service rate (updates/s)")
    rates.add_argument("--horizon", type=_horizon, help="simulated seconds, or 'none'")
    rates.add_argument("--metrics-period", type=float, help="seconds between metrics records")
    rates.add_argument(
        "--staleness-only",
        action="store_true",
        default=None,
        help="skip learning; keep queueing and versioning",
    )
    rates.add_argument("--batch-length", type=int, help="prototypes per message (staleness-only)")

    data = parser.add_argument_group("dataset")
    data.add_argument("--dataset", help="CSV path or synthetic:drift")
    data.add_argument("--d-size", type=int, help="samples D used across all nodes")
    start = data.add_mutually_exclusive_group()
    start.add_argument("--r-start", type=int, help="first sample index R")
    start.add_argument(
        "--r-random", action="store_true", default=None, help="draw R at random per run"
    )
    data.add_argument("--label-column", help="header name of the label column")

    runs = parser.add_argument_group("runs and output")
    runs.add_argument("--seeds", type=int, help="number of seeds")
    runs.add_argument("--seed-offset", type=int, help="first seed")
    runs.add_argument("--workers", type=int, help="worker processes for the seed sweep")
    runs.add_argument("--out-dir", type=Path, help="directory for CSV and summary files")
    runs.add_argument("--trace", type=Path, help="write an event trace to this file")

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _merged_options(args: argparse.Namespace) -> dict[str, Any]:
    options: dict[str, Any] = load_config_file(args.config) if args.config else {}
    for dest, value in vars(args).items():
        if dest in _CONTROL_DESTS or value is None:
            continue
        options[dest] = value
    return options


def _report_line(report: ExperimentReport) -> str:
    s = report.summary
    return (
        f"{s['scenario']} (th_prot={s['th_prot']}, {s['runs']} runs): "
        f"F1 {s['mean_f1']:.4f}, {s['mean_bytes_sent']:.0f} bytes/node, "
        f"staleness {s['mean_staleness']:.3f} -> {report.summary_file}"
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)

    try:
        config = options_to_config(_merged_options(args))
        config.check()
    except ConfigError as e:
        logger.error("%s", e)
        return 2

    if args.trace is not None and config.workers > 1:
        logger.warning("--trace runs seeds in-process; ignoring --workers %d", config.workers)
        config = replace(config, workers=1)

    tracing = traced_run() if args.trace is not None else nullcontext()
    try:
        with tracing as trace:
            if args.th_prot_sweep:
                reports = run_th_prot_sweep(config, args.th_prot_sweep)
            else:
                reports = (run_experiment(config),)
        if trace is not None:
            trace.write(args.trace)
            logger.info("Trace: %s", trace.summary())
    except ConfigError as e:
        logger.error("%s", e)
        return 2
    except (DatasetError, OSError, ProtogossipError) as e:
        logger.error("Run failed: %s", e)
        return 1

    for report in reports:
        print(_report_line(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
