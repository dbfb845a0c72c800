"""Pure-numpy compute kernels, API-identical to the compiled module.

Distance accumulation runs dimension by dimension in index order so the
two backends produce bitwise-identical squared distances; IEEE addition
of per-dimension terms happens in exactly the same sequence either way.
Nearest-point ties always resolve to the lowest original index.
"""

import numpy as np


def _leaf_d2(pts, a, b, q):
    # squared distances to one leaf's points, accumulated per dimension
    t = pts[a:b, 0] - q[0]
    acc = t * t
    for j in range(1, pts.shape[1]):
        t = pts[a:b, j] - q[j]
        acc += t * t
    return acc


def query_one(split_dim, split_val, left, right, start, end, perm, pts, q):
    """Exact nearest neighbour of q. Returns (index, d2, nodes visited)."""
    best_d2 = np.inf
    best_idx = -1
    visits = 0
    stack = [(0, 0.0)]
    while stack:
        node, pd2 = stack.pop()
        if pd2 > best_d2:
            continue
        visits += 1
        dim = split_dim[node]
        while dim >= 0:
            delta = q[dim] - split_val[node]
            if delta < 0.0:
                far = right[node]
                node = left[node]
            else:
                far = left[node]
                node = right[node]
            stack.append((far, delta * delta))
            visits += 1
            dim = split_dim[node]
        a, b = start[node], end[node]
        d2 = _leaf_d2(pts, a, b, q)
        m = d2.min()
        if m < best_d2 or (m == best_d2 and best_idx >= 0):
            cand = perm[a:b][d2 == m].min()
            if m < best_d2 or cand < best_idx:
                best_d2 = m
                best_idx = cand
    return int(best_idx), float(best_d2), visits


def query_batch(split_dim, split_val, left, right, start, end, perm, pts, Q):
    n = Q.shape[0]
    idx = np.empty(n, dtype=np.int64)
    d2 = np.empty(n, dtype=np.float64)
    for i in range(n):
        idx[i], d2[i], _ = query_one(
            split_dim, split_val, left, right, start, end, perm, pts, Q[i]
        )
    return idx, d2


def aslm_predict_one(split_dim, split_val, left, right, start, end, perm,
                     pts, payloads, w, x):
    """Whole scalar ASLM query in one call: w'x plus the payload of the
    nearest point under the Hadamard metric (tree stores w*points)."""
    q = w * x
    i, _, _ = query_one(split_dim, split_val, left, right, start, end,
                        perm, pts, q)
    return float(w @ x) + float(payloads[i])


class AslmQueryFast:
    """Scalar ASLM predictor mirroring the compiled query object."""

    def __init__(self, sd, sv, lt, rt, st, en, perm, pts, payloads, w):
        self._tree = (sd, sv, lt, rt, st, en, perm, pts)
        self._payloads = payloads
        self._w = w

    def predict(self, x):
        return aslm_predict_one(*self._tree, self._payloads, self._w, x)


def _d2_to_rows(C, k, x):
    t = C[:k, 0] - x[0]
    acc = t * t
    for j in range(1, C.shape[1]):
        t = C[:k, j] - x[j]
        acc += t * t
    return acc


def klms_train(X, d, gamma, eta):
    """Kernel LMS training pass; returns the coefficient per sample."""
    n = X.shape[0]
    alpha = np.empty(n, dtype=np.float64)
    alpha[0] = eta * d[0]
    for i in range(1, n):
        acc = _d2_to_rows(X, i, X[i])
        y = np.exp(-gamma * acc) @ alpha[:i]
        alpha[i] = eta * (d[i] - y)
    return alpha


def klms_predict_one(C, alpha, gamma, q):
    acc = _d2_to_rows(C, C.shape[0], q)
    return float(np.exp(-gamma * acc) @ alpha)


def klms_predict_batch(C, alpha, gamma, Q):
    t = Q[:, 0:1] - C[None, :, 0]
    acc = t * t
    for j in range(1, C.shape[1]):
        t = Q[:, j : j + 1] - C[None, :, j]
        acc += t * t
    return np.exp(-gamma * acc) @ alpha


def qklms_train(X, d, gamma, eta, eps):
    """Quantized kernel LMS. Returns (center source indices, coefficients)."""
    n = X.shape[0]
    C = np.empty_like(X)
    src = np.empty(n, dtype=np.int64)
    alpha = np.empty(n, dtype=np.float64)
    C[0] = X[0]
    src[0] = 0
    alpha[0] = eta * d[0]
    k = 1
    eps2 = eps * eps
    for i in range(1, n):
        acc = _d2_to_rows(C, k, X[i])
        y = np.exp(-gamma * acc) @ alpha[:k]
        e = d[i] - y
        j = int(np.argmin(acc))
        if acc[j] <= eps2:
            alpha[j] += eta * e
        else:
            C[k] = X[i]
            src[k] = i
            alpha[k] = eta * e
            k += 1
    return src[:k].copy(), alpha[:k].copy()


def vq_assign(X, eps):
    """Sequential vector quantization.

    A sample joins the nearest existing center when the distance is
    within eps, otherwise it becomes a new center. Returns the center
    source indices and the per-sample center assignment.
    """
    n = X.shape[0]
    C = np.empty_like(X)
    src = np.empty(n, dtype=np.int64)
    assign = np.empty(n, dtype=np.int64)
    C[0] = X[0]
    src[0] = 0
    assign[0] = 0
    k = 1
    eps2 = eps * eps
    for i in range(1, n):
        acc = _d2_to_rows(C, k, X[i])
        j = int(np.argmin(acc))
        if acc[j] <= eps2:
            assign[i] = j
        else:
            C[k] = X[i]
            src[k] = i
            assign[i] = k
            k += 1
    return src[:k].copy(), assign
