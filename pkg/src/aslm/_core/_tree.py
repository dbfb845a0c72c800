"""Flat-array kd-tree construction shared by both compute backends.

Median split on the widest-spread axis, leaf size 8. Node ranges index
into a permutation of the input order, so construction is fully
deterministic for a given input order (stable sorts, first-axis wins on
spread ties). Splits halve by position, not value, so depth stays
logarithmic even with heavy duplicates.
"""

from dataclasses import dataclass

import numpy as np

LEAF_SIZE = 8


@dataclass
class KdTree:
    split_dim: np.ndarray  # int32 per node, -1 at leaves
    split_val: np.ndarray  # float64 per node
    left: np.ndarray       # int32 child node ids, -1 at leaves
    right: np.ndarray
    start: np.ndarray      # int32 half-open range into perm
    end: np.ndarray
    perm: np.ndarray       # int64 original point indices, tree order
    pts: np.ndarray        # float64 (n, dim) points in tree order
    depth: int

    @property
    def size(self):
        return len(self.perm)


def build(points: np.ndarray) -> KdTree:
    """Build a kd-tree over an (n, dim) float array."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    n = points.shape[0]
    perm = np.arange(n, dtype=np.int64)
    split_dim, split_val = [], []
    left, right, start, end = [], [], [], []
    max_depth = 0

    def rec(a, b, depth):
        nonlocal max_depth
        max_depth = max(max_depth, depth)
        node = len(split_dim)
        split_dim.append(-1)
        split_val.append(0.0)
        left.append(-1)
        right.append(-1)
        start.append(a)
        end.append(b)
        if b - a <= LEAF_SIZE:
            return node
        sub = points[perm[a:b]]
        spread = sub.max(axis=0) - sub.min(axis=0)
        dim = int(np.argmax(spread))
        order = np.argsort(sub[:, dim], kind="stable")
        perm[a:b] = perm[a:b][order]
        m = (b - a) // 2
        split_dim[node] = dim
        # first point of the right half: left coords <= val <= right coords
        split_val[node] = float(points[perm[a + m], dim])
        left[node] = rec(a, a + m, depth + 1)
        right[node] = rec(a + m, b, depth + 1)
        return node

    rec(0, n, 0)
    return KdTree(
        split_dim=np.asarray(split_dim, dtype=np.int32),
        split_val=np.asarray(split_val, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        start=np.asarray(start, dtype=np.int32),
        end=np.asarray(end, dtype=np.int32),
        perm=perm,
        pts=np.ascontiguousarray(points[perm]),
        depth=max_depth,
    )
