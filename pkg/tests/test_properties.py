"""Property suites for the numeric building blocks.

* Jensen-Shannon distance is a bounded metric on pmfs.
* KDE pmfs on a shared grid are normalized.
* DBSCAN with min_pts = 1 equals brute-force eps-connected components.
* Compression conserves relevance and labels and never grows a model.
* The strided partition is a disjoint, order-preserving cover.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import cdist

from protogossip.compression import ClusterStatus, compress_with_report, dbscan
from protogossip.config import CompressionConfig, KdeConfig
from protogossip.data import partition_indices
from protogossip.prototypes import Prototype, PrototypeModel
from protogossip.similarity import js_distance, pmf_pair

pytestmark = pytest.mark.property


@st.composite
def _pmfs(draw: st.DrawFn, count: int) -> list[np.ndarray]:
    size = draw(st.integers(min_value=2, max_value=8))
    out = []
    for _ in range(count):
        weights = draw(st.lists(st.integers(0, 100), min_size=size, max_size=size))
        if sum(weights) == 0:
            weights[0] = 1
        w = np.array(weights, dtype=float)
        out.append(w / w.sum())
    return out


_coords = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)


def _connected_components(points: np.ndarray, eps: float) -> np.ndarray:
    distances = cdist(points, points)
    n = len(points)
    labels = [-1] * n
    next_label = 0
    for seed in range(n):
        if labels[seed] >= 0:
            continue
        labels[seed] = next_label
        stack = [seed]
        while stack:
            i = stack.pop()
            for j in range(n):
                if labels[j] < 0 and distances[i, j] <= eps:
                    labels[j] = next_label
                    stack.append(j)
        next_label += 1
    return np.array(labels)


class TestJensenShannonMetric:
    @given(pmfs=_pmfs(2))
    @settings(max_examples=1000, deadline=None)
    def test_symmetric_and_bounded(self, pmfs: list[np.ndarray]) -> None:
        p, q = pmfs
        d = js_distance(p, q)
        assert d == js_distance(q, p)
        assert 0.0 <= d <= 1.0

    @given(pmfs=_pmfs(2))
    @settings(max_examples=1000, deadline=None)
    def test_identity_of_indiscernibles(self, pmfs: list[np.ndarray]) -> None:
        p, q = pmfs
        assert js_distance(p, p) < 1e-9
        if not np.array_equal(p, q):
            assert js_distance(p, q) >= 1e-9

    @given(pmfs=_pmfs(3))
    @settings(max_examples=1000, deadline=None)
    def test_triangle_inequality(self, pmfs: list[np.ndarray]) -> None:
        p, q, r = pmfs
        assert js_distance(p, r) <= js_distance(p, q) + js_distance(q, r) + 1e-9


class TestKdeNormalization:
    @given(
        seed=st.integers(0, 2**32 - 1),
        d=st.integers(1, 5),
        m_a=st.integers(1, 200),
        m_b=st.integers(1, 200),
    )
    @settings(max_examples=50, deadline=None)
    def test_pmfs_sum_to_one(self, seed: int, d: int, m_a: int, m_b: int) -> None:
        rng = np.random.default_rng(seed)
        cfg = KdeConfig(max_points=2000)
        p, q = pmf_pair(rng.random((m_a, d)), rng.random((m_b, d)), cfg, rng)
        assert math.isclose(float(p.masses.sum()), 1.0, abs_tol=1e-9)
        assert math.isclose(float(q.masses.sum()), 1.0, abs_tol=1e-9)
        assert (p.masses >= 0).all()


class TestDbscanOracle:
    @given(
        points=st.lists(st.tuples(_coords, _coords), min_size=1, max_size=12),
        eps=st.floats(min_value=0.01, max_value=0.6),
    )
    @settings(max_examples=500, deadline=None)
    def test_matches_connected_components(
        self, points: list[tuple[float, float]], eps: float
    ) -> None:
        data = np.array(points, dtype=float)
        np.testing.assert_array_equal(dbscan(data, eps, 1), _connected_components(data, eps))


@st.composite
def _oversized_models(draw: st.DrawFn) -> tuple[PrototypeModel, CompressionConfig]:
    limit = draw(st.integers(4, 30))
    n_labels = draw(st.integers(1, 3))
    extra = draw(st.integers(1, 40))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    protos = [
        Prototype(
            id=i,
            vector=tuple(rng.random(2).tolist()),
            label=i % n_labels,
            relevance=int(rng.integers(0, 6)),
        )
        for i in range(limit + extra)
    ]
    counts = {label: 1 for label in range(n_labels)}
    model = PrototypeModel.from_prototypes(protos, 2, class_counts=counts)
    return model, CompressionConfig(limit_size=limit, eps_initial=0.05)


class TestCompressionConservation:
    @given(case=_oversized_models())
    @settings(max_examples=200, deadline=None)
    def test_conserves_relevance_and_labels(
        self, case: tuple[PrototypeModel, CompressionConfig]
    ) -> None:
        model, cfg = case
        compressed, report = compress_with_report(model, cfg)
        assert compressed.total_relevance == model.total_relevance
        assert len(compressed) <= len(model)
        assert compressed.labels == model.labels
        assert compressed.class_counts == model.class_counts
        assert len(set(compressed.ids)) == len(compressed)

        quota = cfg.limit_size / len(model.labels)
        lo, hi = cfg.target_range
        for label, result in report.items():
            if result.status is ClusterStatus.CONVERGED:
                kept = sum(1 for p in compressed if p.label == label)
                assert lo * quota <= kept <= hi * quota


class TestPartitionCover:
    @pytest.mark.parametrize("start", [0, 3])
    def test_disjoint_cover(self, start: int) -> None:
        for nodes in range(1, 9):
            for size in range(nodes, 65):
                per_node = size // nodes
                slices = [
                    partition_indices(m, nodes, per_node, start) for m in range(nodes)
                ]
                flat = [i for s in slices for i in s]
                assert len(flat) == len(set(flat))
                assert set(flat) == set(range(start, start + nodes * per_node))
                for s in slices:
                    assert list(s) == sorted(s)
                    assert len(s) == per_node
