import numpy as np
import pytest

from aslm import Metric, NeighborIndex, brute_force_nearest
from aslm._core import LEAF_SIZE


class TestBuild:
    def test_single_point(self):
        idx = NeighborIndex.build([[1.0, 2.0]], [7.0])
        assert idx.size == 1
        assert idx.dim == 2
        payload, dist = idx.nearest([1.0, 2.0])
        assert payload == 7.0
        assert dist == 0.0

    def test_duplicates_all_stored(self):
        pts = np.zeros((5, 3))
        idx = NeighborIndex.build(pts, np.arange(5))
        assert idx.size == 5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            NeighborIndex.build(np.zeros((0, 3)), np.zeros(0))

    def test_payload_length_mismatch(self):
        with pytest.raises(ValueError):
            NeighborIndex.build(np.zeros((4, 2)), np.zeros(3))

    def test_leaf_size_constant(self):
        assert LEAF_SIZE == 8


class TestNearest:
    def test_self_queries_hit_themselves(self):
        rng = np.random.default_rng(10)
        pts = rng.normal(size=(2000, 7))
        idx = NeighborIndex.build(pts, np.arange(2000))
        for i in range(0, 2000, 37):
            payload, dist = idx.nearest(pts[i])
            assert payload == i
            assert dist == 0.0

    def test_two_point_example(self):
        idx = NeighborIndex.build([[0.0, 0.0], [10.0, 10.0]], ["near", "far"])
        payload, dist = idx.nearest([1.0, 1.0])
        assert payload == "near"
        assert dist == pytest.approx(np.sqrt(2.0))

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-1, 1, size=(1000, 5))
        pay = np.arange(1000)
        idx = NeighborIndex.build(pts, pay)
        m = Metric.plain()
        for q in rng.uniform(-1.2, 1.2, size=(200, 5)):
            got_p, got_d = idx.nearest(q)
            ref_p, ref_d = brute_force_nearest(pts, pay, m, q)
            assert got_p == ref_p
            assert got_d == ref_d

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(12)
        pts = rng.normal(size=(300, 4))
        idx = NeighborIndex.build(pts, np.arange(300))
        Q = rng.normal(size=(50, 4))
        bi, bd = idx.nearest_batch(Q)
        for k in range(50):
            i, d = idx.nearest_index(Q[k])
            assert bi[k] == i
            assert bd[k] == d

    def test_query_dimension_mismatch(self):
        idx = NeighborIndex.build(np.zeros((3, 4)), np.arange(3))
        with pytest.raises(ValueError):
            idx.nearest(np.zeros(5))


class TestTieBreaking:
    def test_equidistant_pair_takes_lower_index(self):
        pts = [[1.0, 0.0], [-1.0, 0.0]]
        q = [0.0, 0.0]
        m = Metric.plain()
        assert brute_force_nearest(pts, ["a", "b"], m, q) == ("a", 1.0)
        idx = NeighborIndex.build(pts, ["a", "b"])
        assert idx.nearest(q)[0] == "a"

    def test_exact_duplicates_take_first(self):
        pts = np.array([[2.0, 2.0], [5.0, 5.0], [2.0, 2.0], [2.0, 2.0]])
        idx = NeighborIndex.build(pts, np.arange(4))
        payload, dist = idx.nearest([2.0, 2.0])
        assert payload == 0
        assert dist == 0.0

    def test_gridded_data_agrees_with_oracle(self):
        # coarse rounding manufactures many exact ties
        rng = np.random.default_rng(13)
        pts = np.round(rng.uniform(-1, 1, size=(400, 3)), 1)
        pay = np.arange(400)
        idx = NeighborIndex.build(pts, pay)
        m = Metric.plain()
        for q in np.round(rng.uniform(-1, 1, size=(100, 3)), 1):
            assert idx.nearest(q)[0] == brute_force_nearest(pts, pay, m, q)[0]


class TestHadamardMetric:
    def test_transform_scales_coordinates(self):
        m = Metric.hadamard([2.0, 0.5])
        assert np.array_equal(m.transform(np.array([3.0, 4.0])), [6.0, 2.0])

    def test_weighted_equals_pretransformed_plain(self):
        rng = np.random.default_rng(14)
        w = rng.normal(size=6)
        pts = rng.normal(size=(500, 6))
        pay = np.arange(500)
        weighted = NeighborIndex.build(pts, pay, Metric.hadamard(w))
        plain = NeighborIndex.build(pts * w, pay)
        for q in rng.normal(size=(60, 6)):
            pi, pd = weighted.nearest_index(q)
            qi, qd = plain.nearest_index(q * w)
            assert pi == qi
            assert abs(pd - qd) <= 1e-12

    def test_zero_weight_ignores_coordinate(self):
        m = Metric.hadamard([1.0, 0.0])
        pts = [[0.0, 100.0], [3.0, 0.0]]
        payload, dist = brute_force_nearest(pts, ["a", "b"], m, [0.1, -50.0])
        assert payload == "a"
        assert dist == pytest.approx(0.1)

    def test_weights_validation(self):
        with pytest.raises(ValueError):
            Metric.hadamard(None)
        with pytest.raises(ValueError):
            Metric.hadamard([1.0, np.inf])
        with pytest.raises(ValueError):
            Metric("cosine")
        m = Metric.hadamard([1.0, 2.0])
        with pytest.raises(ValueError):
            m.transform(np.zeros(3))


class TestQueryCost:
    def test_visits_grow_sublinearly(self):
        rng = np.random.default_rng(15)
        queries = rng.uniform(size=(100, 3))
        means = []
        for n in (1000, 10_000, 100_000):
            idx = NeighborIndex.build(rng.uniform(size=(n, 3)), np.arange(n))
            v = [idx.nearest_stats(q)[2] for q in queries]
            means.append(np.mean(v))
        # 10x the points should cost nowhere near 10x the visits
        assert means[1] < 3.0 * means[0]
        assert means[2] < 3.0 * means[1]
        assert means[2] < 0.05 * 100_000
