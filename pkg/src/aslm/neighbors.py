"""Exact nearest-neighbor search over training inputs.

Supports plain l2 and the Hadamard-weighted metric (elementwise w before
plain l2). The kd-tree and the brute-force oracle follow one arithmetic
contract — squared distances accumulated dimension by dimension, ties to
the lowest stored index — so their results match bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from aslm import _core
from aslm._core import build as _build_tree

PLAIN_L2 = "plain_l2"
HADAMARD = "hadamard_weighted"


@dataclass(frozen=True, eq=False)
class Metric:
    kind: str = PLAIN_L2
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in (PLAIN_L2, HADAMARD):
            raise ValueError(f"unknown metric kind: {self.kind!r}")
        if self.kind == HADAMARD:
            if self.weights is None:
                raise ValueError("hadamard_weighted metric needs weights")
            w = np.asarray(self.weights, dtype=np.float64)
            if w.ndim != 1 or not np.isfinite(w).all():
                raise ValueError("weights must be a finite 1-d vector")
            object.__setattr__(self, "weights", w)

    @classmethod
    def plain(cls):
        return cls(PLAIN_L2)

    @classmethod
    def hadamard(cls, weights):
        return cls(HADAMARD, weights)

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Map raw coordinates into the metric's l2 space."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == PLAIN_L2:
            return x
        if x.shape[-1] != self.weights.shape[0]:
            raise ValueError(
                f"dimension mismatch: {x.shape[-1]} vs {self.weights.shape[0]}"
            )
        return x * self.weights


@dataclass(frozen=True, eq=False)
class NeighborIndex:
    """Immutable kd-tree index over transformed points with payloads."""

    metric: Metric
    points: np.ndarray    # transformed, original order
    payloads: np.ndarray
    tree: _core.KdTree = field(repr=False)

    @classmethod
    def build(cls, points, payloads, metric: Metric = None):
        if metric is None:
            metric = Metric.plain()
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a nonempty (N, L) array")
        pay = np.asarray(payloads)
        if pay.shape[0] != pts.shape[0]:
            raise ValueError("points and payloads lengths differ")
        tp = np.ascontiguousarray(metric.transform(pts))
        return cls(metric=metric, points=tp, payloads=pay, tree=_build_tree(tp))

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def _query_args(self):
        t = self.tree
        return (t.split_dim, t.split_val, t.left, t.right, t.start, t.end,
                t.perm, t.pts)

    def _check_query(self, query):
        q = np.ascontiguousarray(self.metric.transform(query), dtype=np.float64)
        if q.shape[-1] != self.dim:
            raise ValueError(f"dimension mismatch: {q.shape[-1]} vs {self.dim}")
        return q

    def nearest_stats(self, query):
        """(index, distance, visited node count) for one query."""
        q = self._check_query(query)
        i, d2, visits = _core.impl.query_one(*self._query_args(), q)
        return i, np.sqrt(d2), visits

    def nearest_index(self, query):
        i, dist, _ = self.nearest_stats(query)
        return i, dist

    def nearest(self, query):
        """(payload, distance) of the closest stored point."""
        i, dist, _ = self.nearest_stats(query)
        return self.payloads[i], dist

    def nearest_batch(self, queries):
        """(indices, distances) for a (M, L) query batch."""
        Q = self._check_query(np.atleast_2d(queries))
        idx, d2 = _core.impl.query_batch(*self._query_args(), np.ascontiguousarray(Q))
        return idx, np.sqrt(d2)


def brute_force_nearest(points, payloads, metric: Metric, query):
    """Linear-scan oracle. Ties go to the lowest stored index."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("points must be a nonempty (N, L) array")
    pay = np.asarray(payloads)
    if pay.shape[0] != pts.shape[0]:
        raise ValueError("points and payloads lengths differ")
    tp = metric.transform(pts)
    q = metric.transform(np.asarray(query, dtype=np.float64))
    if q.shape != (tp.shape[1],):
        raise ValueError(f"dimension mismatch: {q.shape} vs ({tp.shape[1]},)")
    t = tp[:, 0] - q[0]
    d2 = t * t
    for j in range(1, tp.shape[1]):
        t = tp[:, j] - q[j]
        d2 += t * t
    i = int(np.argmin(d2))  # first occurrence = lowest index
    return pay[i], float(np.sqrt(d2[i]))
