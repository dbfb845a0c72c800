"""Regularized least squares in the input space, plus shared metrics.

The weight vector solves (delta*I + X'X) w = X'd through a symmetric
positive-definite factorization; no intercept term is fitted.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve


class RankDeficiencyError(np.linalg.LinAlgError):
    """Normal matrix is singular and no regularization was requested."""


@dataclass(frozen=True, eq=False)
class RegressionProblem:
    X: np.ndarray  # (N, L) design matrix, rows are inputs
    d: np.ndarray  # (N,) desired values
    delta: float = 0.1

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        d = np.asarray(self.d, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("X must be (N, L) with N, L >= 1")
        if d.shape != (X.shape[0],):
            raise ValueError("d must be (N,) matching X")
        if not (np.isfinite(X).all() and np.isfinite(d).all()):
            raise ValueError("X and d must be finite")
        if not (self.delta >= 0.0):
            raise ValueError("delta must be >= 0")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "d", d)


def solve_regularized_ls(p: RegressionProblem) -> np.ndarray:
    """Weights w with (delta*I + X'X) w = X'd."""
    A = p.X.T @ p.X
    A[np.diag_indices_from(A)] += p.delta
    b = p.X.T @ p.d
    try:
        w = cho_solve(cho_factor(A, lower=True), b)
    except LinAlgError:
        if p.delta == 0.0:
            raise RankDeficiencyError(
                "normal matrix singular at delta=0; use delta > 0"
            ) from None
        raise
    return w


def predict_linear(w: np.ndarray, x: np.ndarray):
    """w'x for one input (1-d) or a batch of rows (2-d)."""
    w = np.asarray(w, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != w.shape[0]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {w.shape[0]}")
    if x.ndim == 1:
        return float(x @ w)
    return x @ w


def mse(predictions, targets) -> float:
    """Mean squared difference of two equal-length sequences."""
    p = np.asarray(predictions, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    if p.size == 0:
        raise ValueError("mse of empty sequences is undefined")
    r = p - t
    return float(np.mean(r * r))
