"""Exception classes for Protogossip.

Provides standardized exceptions for error handling throughout Protogossip.
Pure functions raise these; actor loops (node runtime, compression hook) catch
the specific subclass, log it, and keep the node alive.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from protogossip.prototypes import Prototype


class ProtogossipError(Exception):
    """Base exception for all Protogossip errors.

    Subclass this for specific error categories.
    """


class RejectedInputError(ProtogossipError):
    """A vector whose dimension does not match the model's dimension."""

    def __init__(self, expected: int, actual: int, context: str = "input") -> None:
        """Initialize with the two dimensions involved.

        Args:
            expected: Dimension the model was built with
            actual: Dimension of the rejected vector
            context: What was rejected (e.g. "sample", "peer prototype")
        """
        self.expected = expected
        self.actual = actual
        super().__init__(f"{context} has dimension {actual}, expected {expected}")


class InsufficientModelError(ProtogossipError):
    """Winner search needs at least two prototypes."""


class NoModelError(ProtogossipError):
    """Prediction was requested from a model without prototypes."""


class InvalidBandwidthError(ProtogossipError):
    """Kernel bandwidth must be strictly positive."""


class EmptyModelError(ProtogossipError):
    """A density estimate or evaluation grid was requested for an empty set."""


class GridMismatchError(ProtogossipError):
    """Two pmfs were compared that are not defined on the same grid."""

    def __init__(self, left: int, right: int) -> None:
        self.left = left
        self.right = right
        super().__init__(f"pmf lengths differ: {left} != {right}")


class InvalidParameterError(ProtogossipError):
    """A numeric parameter or precondition is out of its valid range."""


class ConvergenceError(ProtogossipError):
    """Adaptive clustering hit its iteration limit without landing in range.

    Carries the best iterate seen so callers can fall back to it instead of
    aborting.
    """

    def __init__(
        self,
        label: int,
        iterations: int,
        best: tuple[Prototype, ...],
        best_eps: float,
    ) -> None:
        """Initialize convergence error.

        Args:
            label: Class label whose clustering did not converge
            iterations: Number of DBSCAN passes performed
            best: Merged prototypes of the iterate closest to the target window
            best_eps: Epsilon that produced ``best``
        """
        self.label = label
        self.iterations = iterations
        self.best = best
        self.best_eps = best_eps
        super().__init__(
            f"Label {label}: cluster count not in target range after {iterations} iterations"
        )


class ProtocolError(ProtogossipError):
    """A gossip message violates the protocol (e.g. a node messaging itself)."""


class ConfigError(ProtogossipError):
    """Experiment configuration failed validation.

    All violations are collected and reported together.
    """

    def __init__(self, violations: list[str] | tuple[str, ...]) -> None:
        """Initialize with every violation found.

        Args:
            violations: Human-readable descriptions, one per problem
        """
        self.violations = tuple(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"Invalid configuration:\n{lines}")


class DatasetError(ProtogossipError):
    """Error while loading or partitioning a dataset.

    Formats its location the same way across the data pipeline:
    ``file:row: message``.
    """

    def __init__(
        self,
        message: str,
        row: int | None = None,
        source_file: str | None = None,
    ) -> None:
        """Initialize dataset error with optional location.

        Args:
            message: Error description
            row: Data row number where the error occurred (1-indexed, header excluded)
            source_file: Path to the source file (optional)
        """
        self.message = message
        self.row = row
        self.source_file = source_file

        location = ""
        if source_file:
            location = f"{source_file}:"
        if row is not None:
            location += f"{row}:"
        if location:
            location = location.rstrip(":") + ": "

        super().__init__(f"{location}{message}")
