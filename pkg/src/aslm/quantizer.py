"""Sequential vector quantization with per-center error averaging.

Samples are processed in order; one joins the nearest existing center
when within radius epsilon (plain l2 in whatever space the caller hands
in) and is otherwise admitted verbatim as a new center. Centers never
move. The quantized error table carries the arithmetic mean of the
errors assigned to each center.
"""

import math
from dataclasses import dataclass

import numpy as np

from aslm import _core
from aslm.neighbors import Metric, NeighborIndex


@dataclass(frozen=True, eq=False)
class Codebook:
    centers: np.ndarray         # (K, L) admitted samples, verbatim
    assignments: np.ndarray     # (N,) sample index -> center index
    epsilon: float
    source_indices: np.ndarray  # (K,) sample index each center came from

    @property
    def size(self):
        return self.centers.shape[0]

    def __len__(self):
        return self.size


def quantize_sequential(inputs, epsilon: float) -> Codebook:
    """Build a codebook over the rows of inputs with radius epsilon."""
    X = np.ascontiguousarray(inputs, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("inputs must be a nonempty (N, L) array")
    if not (epsilon >= 0.0):
        raise ValueError("epsilon must be >= 0")
    src, assign = _core.impl.vq_assign(X, epsilon)
    return Codebook(
        centers=np.ascontiguousarray(X[src]),
        assignments=assign,
        epsilon=epsilon,
        source_indices=src,
    )


def center_error_means(cb: Codebook, errors) -> np.ndarray:
    """Arithmetic mean of the errors assigned to each center."""
    e = np.asarray(errors, dtype=np.float64)
    if e.shape != cb.assignments.shape:
        raise ValueError(
            f"length mismatch: {e.shape[0]} errors for "
            f"{cb.assignments.shape[0]} samples"
        )
    sums = np.zeros(cb.size)
    np.add.at(sums, cb.assignments, e)
    counts = np.bincount(cb.assignments, minlength=cb.size).astype(np.float64)
    return sums / counts


def build_quantized_table(cb: Codebook, errors, metric: Metric = None):
    """Neighbor index over the centers, payloads = per-center mean error.

    The codebook must have been built in the metric's raw space; the
    index applies the metric's transform to centers and queries alike.
    """
    payloads = center_error_means(cb, errors)
    return NeighborIndex.build(cb.centers, payloads, metric)


@dataclass(frozen=True)
class TuneResult:
    epsilon: float
    size: int
    exact: bool  # whether the target size was hit exactly


def tune_epsilon(inputs, target_size: int, iters: int = 40) -> TuneResult:
    """Bisect for an epsilon whose codebook size is as close as possible
    to target_size.

    Size is non-increasing in epsilon, so bisection on [0, diameter]
    converges; duplicates can make some sizes unattainable, in which
    case the nearest achievable size is returned with exact=False.
    """
    X = np.ascontiguousarray(inputs, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("inputs must be a nonempty (N, L) array")
    if not (1 <= target_size <= X.shape[0]):
        raise ValueError("target_size must be in [1, sample count]")

    def size_at(eps):
        return int(_core.impl.vq_assign(X, eps)[0].shape[0])

    lo, hi = 0.0, float(math.sqrt(np.sum((X.max(0) - X.min(0)) ** 2)))
    best_eps, best_size = lo, size_at(lo)
    if abs(best_size - target_size) == 0:
        return TuneResult(best_eps, best_size, True)
    hi_size = size_at(hi)
    if abs(hi_size - target_size) < abs(best_size - target_size):
        best_eps, best_size = hi, hi_size
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        s = size_at(mid)
        if abs(s - target_size) < abs(best_size - target_size) or (
            abs(s - target_size) == abs(best_size - target_size) and s > best_size
        ):
            best_eps, best_size = mid, s
        if s > target_size:
            lo = mid
        elif s < target_size:
            hi = mid
        else:
            break
    return TuneResult(best_eps, best_size, best_size == target_size)
