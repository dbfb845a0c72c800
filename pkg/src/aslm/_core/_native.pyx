# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled compute kernels.

Same API and same arithmetic contract as ``_fallback``: squared
distances accumulate dimension by dimension in index order (the build
disables fp contraction, so every add and multiply rounds separately,
matching numpy ufunc evaluation bit for bit), and nearest ties resolve
to the lowest original index.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp

cnp.import_array()

# Tree nodes halve by position, so depth <= 64 for any addressable n;
# the traversal stack holds at most depth + 2 pending entries.
cdef enum:
    STACK_CAP = 192


cdef inline void _scan_leaf(const double[:, ::1] pts,
                            const cnp.int64_t[::1] perm,
                            int a, int b, const double* q, int ndim,
                            double* best_d2, cnp.int64_t* best_idx) noexcept nogil:
    cdef int i, j
    cdef double t, acc
    cdef cnp.int64_t oi
    for i in range(a, b):
        t = pts[i, 0] - q[0]
        acc = t * t
        for j in range(1, ndim):
            t = pts[i, j] - q[j]
            acc = acc + t * t
        if acc < best_d2[0]:
            best_d2[0] = acc
            best_idx[0] = perm[i]
        elif acc == best_d2[0]:
            oi = perm[i]
            if oi < best_idx[0]:
                best_idx[0] = oi


cdef long long _query(const cnp.int32_t[::1] split_dim,
                      const double[::1] split_val,
                      const cnp.int32_t[::1] left,
                      const cnp.int32_t[::1] right,
                      const cnp.int32_t[::1] start,
                      const cnp.int32_t[::1] end,
                      const cnp.int64_t[::1] perm,
                      const double[:, ::1] pts,
                      const double* q,
                      double* out_d2, cnp.int64_t* out_idx) noexcept nogil:
    cdef double best_d2 = INFINITY
    cdef cnp.int64_t best_idx = -1
    cdef long long visits = 0
    cdef int snode[STACK_CAP]
    cdef double spd2[STACK_CAP]
    cdef int sp = 1
    cdef int node, dim, far
    cdef double pd2, delta
    cdef int ndim = pts.shape[1]
    snode[0] = 0
    spd2[0] = 0.0
    while sp > 0:
        sp -= 1
        node = snode[sp]
        pd2 = spd2[sp]
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
            snode[sp] = far
            spd2[sp] = delta * delta
            sp += 1
            visits += 1
            dim = split_dim[node]
        _scan_leaf(pts, perm, start[node], end[node], q, ndim,
                   &best_d2, &best_idx)
    out_d2[0] = best_d2
    out_idx[0] = best_idx
    return visits


def query_one(cnp.int32_t[::1] split_dim, double[::1] split_val,
              cnp.int32_t[::1] left, cnp.int32_t[::1] right,
              cnp.int32_t[::1] start, cnp.int32_t[::1] end,
              cnp.int64_t[::1] perm, double[:, ::1] pts,
              double[::1] q):
    """Exact nearest neighbour of q. Returns (index, d2, nodes visited)."""
    cdef double best_d2
    cdef cnp.int64_t best_idx
    cdef long long visits
    visits = _query(split_dim, split_val, left, right, start, end,
                    perm, pts, &q[0], &best_d2, &best_idx)
    return int(best_idx), float(best_d2), int(visits)


def query_batch(cnp.int32_t[::1] split_dim, double[::1] split_val,
                cnp.int32_t[::1] left, cnp.int32_t[::1] right,
                cnp.int32_t[::1] start, cnp.int32_t[::1] end,
                cnp.int64_t[::1] perm, double[:, ::1] pts,
                double[:, ::1] Q):
    cdef int n = Q.shape[0]
    idx_arr = np.empty(n, dtype=np.int64)
    d2_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef double[::1] d2 = d2_arr
    cdef int i
    with nogil:
        for i in range(n):
            _query(split_dim, split_val, left, right, start, end,
                   perm, pts, &Q[i, 0], &d2[i], &idx[i])
    return idx_arr, d2_arr


def aslm_predict_one(cnp.int32_t[::1] split_dim, double[::1] split_val,
                     cnp.int32_t[::1] left, cnp.int32_t[::1] right,
                     cnp.int32_t[::1] start, cnp.int32_t[::1] end,
                     cnp.int64_t[::1] perm, double[:, ::1] pts,
                     double[::1] payloads, double[::1] w, double[::1] x):
    """Whole scalar ASLM query in one call: w'x plus the payload of the
    nearest point under the Hadamard metric (tree stores w*points)."""
    cdef int ndim = pts.shape[1]
    if ndim > STACK_CAP:
        raise ValueError("input dimension too large for the fast path")
    cdef double qbuf[STACK_CAP]
    cdef double lin = 0.0
    cdef double best_d2
    cdef cnp.int64_t best_idx
    cdef int j
    with nogil:
        for j in range(ndim):
            qbuf[j] = w[j] * x[j]
            lin += w[j] * x[j]
        _query(split_dim, split_val, left, right, start, end,
               perm, pts, qbuf, &best_d2, &best_idx)
    return lin + payloads[best_idx]


cdef class AslmQueryFast:
    """Scalar ASLM predictor with the tree buffers bound once up front,
    so a query costs a single call and a single buffer acquisition."""

    cdef cnp.int32_t[::1] sd
    cdef double[::1] sv
    cdef cnp.int32_t[::1] lt
    cdef cnp.int32_t[::1] rt
    cdef cnp.int32_t[::1] st
    cdef cnp.int32_t[::1] en
    cdef cnp.int64_t[::1] perm
    cdef double[:, ::1] pts
    cdef double[::1] payloads
    cdef double[::1] w

    def __init__(self, sd, sv, lt, rt, st, en, perm, pts, payloads, w):
        if pts.shape[1] > STACK_CAP:
            raise ValueError("input dimension too large for the fast path")
        self.sd = sd
        self.sv = sv
        self.lt = lt
        self.rt = rt
        self.st = st
        self.en = en
        self.perm = perm
        self.pts = pts
        self.payloads = payloads
        self.w = w

    def predict(self, double[::1] x):
        cdef int ndim = self.pts.shape[1]
        cdef double qbuf[STACK_CAP]
        cdef double lin = 0.0
        cdef double best_d2
        cdef cnp.int64_t best_idx
        cdef int j
        with nogil:
            for j in range(ndim):
                qbuf[j] = self.w[j] * x[j]
                lin += self.w[j] * x[j]
            _query(self.sd, self.sv, self.lt, self.rt, self.st, self.en,
                   self.perm, self.pts, qbuf, &best_d2, &best_idx)
        return lin + self.payloads[best_idx]


cdef inline double _kernel_sum(const double[:, ::1] C, const double[::1] alpha,
                               int k, double gamma, const double* x,
                               int ndim) noexcept nogil:
    cdef int i, j
    cdef double t, acc, y = 0.0
    for i in range(k):
        t = C[i, 0] - x[0]
        acc = t * t
        for j in range(1, ndim):
            t = C[i, j] - x[j]
            acc = acc + t * t
        y += exp(-gamma * acc) * alpha[i]
    return y


def klms_train(double[:, ::1] X, double[::1] d, double gamma, double eta):
    """Kernel LMS training pass; returns the coefficient per sample."""
    cdef int n = X.shape[0]
    cdef int ndim = X.shape[1]
    alpha_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr
    cdef int i
    cdef double y
    alpha[0] = eta * d[0]
    with nogil:
        for i in range(1, n):
            y = _kernel_sum(X, alpha, i, gamma, &X[i, 0], ndim)
            alpha[i] = eta * (d[i] - y)
    return alpha_arr


def klms_predict_one(double[:, ::1] C, double[::1] alpha, double gamma,
                     double[::1] q):
    cdef double y
    with nogil:
        y = _kernel_sum(C, alpha, C.shape[0], gamma, &q[0], C.shape[1])
    return float(y)


def klms_predict_batch(double[:, ::1] C, double[::1] alpha, double gamma,
                       double[:, ::1] Q):
    cdef int n = Q.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int i
    with nogil:
        for i in range(n):
            out[i] = _kernel_sum(C, alpha, C.shape[0], gamma, &Q[i, 0],
                                 C.shape[1])
    return out_arr


cdef inline int _nearest_center(const double[:, ::1] C, int k, const double* x,
                                int ndim, double* out_d2) noexcept nogil:
    cdef int i, j, jmin = 0
    cdef double t, acc, best = INFINITY
    for i in range(k):
        t = C[i, 0] - x[0]
        acc = t * t
        for j in range(1, ndim):
            t = C[i, j] - x[j]
            acc = acc + t * t
        if acc < best:
            best = acc
            jmin = i
    out_d2[0] = best
    return jmin


def qklms_train(double[:, ::1] X, double[::1] d, double gamma, double eta,
                double eps):
    """Quantized kernel LMS. Returns (center source indices, coefficients)."""
    cdef int n = X.shape[0]
    cdef int ndim = X.shape[1]
    C_arr = np.empty((n, ndim), dtype=np.float64)
    src_arr = np.empty(n, dtype=np.int64)
    alpha_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] C = C_arr
    cdef cnp.int64_t[::1] src = src_arr
    cdef double[::1] alpha = alpha_arr
    cdef int i, j, k = 1, jmin
    cdef double y, e, d2
    cdef double eps2 = eps * eps
    for j in range(ndim):
        C[0, j] = X[0, j]
    src[0] = 0
    alpha[0] = eta * d[0]
    with nogil:
        for i in range(1, n):
            y = _kernel_sum(C, alpha, k, gamma, &X[i, 0], ndim)
            e = d[i] - y
            jmin = _nearest_center(C, k, &X[i, 0], ndim, &d2)
            if d2 <= eps2:
                alpha[jmin] += eta * e
            else:
                for j in range(ndim):
                    C[k, j] = X[i, j]
                src[k] = i
                alpha[k] = eta * e
                k += 1
    return src_arr[:k].copy(), alpha_arr[:k].copy()


def vq_assign(double[:, ::1] X, double eps):
    """Sequential vector quantization; see the fallback for the contract."""
    cdef int n = X.shape[0]
    cdef int ndim = X.shape[1]
    C_arr = np.empty((n, ndim), dtype=np.float64)
    src_arr = np.empty(n, dtype=np.int64)
    assign_arr = np.empty(n, dtype=np.int64)
    cdef double[:, ::1] C = C_arr
    cdef cnp.int64_t[::1] src = src_arr
    cdef cnp.int64_t[::1] assign = assign_arr
    cdef int i, j, k = 1, jmin
    cdef double d2
    cdef double eps2 = eps * eps
    for j in range(ndim):
        C[0, j] = X[0, j]
    src[0] = 0
    assign[0] = 0
    with nogil:
        for i in range(1, n):
            jmin = _nearest_center(C, k, &X[i, 0], ndim, &d2)
            if d2 <= eps2:
                assign[i] = jmin
            else:
                for j in range(ndim):
                    C[k, j] = X[i, j]
                src[k] = i
                assign[i] = k
                k += 1
    return src_arr[:k].copy(), assign_arr


def backend_tag():
    return "native"
