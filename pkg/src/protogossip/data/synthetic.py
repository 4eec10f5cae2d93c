"""Synthetic concept-drift stream.

Two 2-D Gaussian blobs, one per class. Labels are Bernoulli(0.5); at index
``drift_at`` the class means swap, so a model trained on the first concept
misclassifies the second until it adapts.
"""

from __future__ import annotations

import numpy as np

from protogossip.errors import InvalidParameterError
from protogossip.prototypes import LabeledSample

# Class means before the drift; swapped afterwards.
BLOB_MEANS = np.array([[0.25, 0.25], [0.75, 0.75]])
BLOB_STD = 0.1


def synth_drift_stream(
    n: int,
    drift_at: int,
    rng: np.random.Generator,
    *,
    std: float = BLOB_STD,
) -> tuple[LabeledSample, ...]:
    """Generate ``n`` labeled samples whose class means swap at ``drift_at``.

    Raises:
        InvalidParameterError: Unless 0 < drift_at < n.

    """
    if not 0 < drift_at < n:
        raise InvalidParameterError(f"drift_at={drift_at} must satisfy 0 < drift_at < n={n}")
    labels = rng.integers(0, 2, size=n)
    noise = rng.normal(0.0, std, size=(n, 2))
    concept = (np.arange(n) >= drift_at).astype(int)
    means = BLOB_MEANS[labels ^ concept]
    points = means + noise
    return tuple(
        LabeledSample(vector=tuple(row.tolist()), label=int(label))
        for row, label in zip(points, labels, strict=True)
    )


__all__ = ["BLOB_MEANS", "synth_drift_stream"]
