"""Error-table models: ASLM, its quantized variant, the generic
augmented wrapper for nonlinear bases, and the 1-NN baseline.

The shared idea: keep a trained base predictor, store every training
error in a nearest-neighbor table, and correct each query with the error
of the closest training input. ASLM's table lives in Hadamard-weighted
space (w elementwise before l2); nonlinear bases use raw input space.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from aslm import _core
from aslm.linear import RegressionProblem, solve_regularized_ls
from aslm.lorenz import EmbeddedDataset
from aslm.neighbors import Metric, NeighborIndex
from aslm.quantizer import build_quantized_table, center_error_means, quantize_sequential


@dataclass(frozen=True, eq=False)
class ErrorTable:
    """Neighbor index whose payloads are training errors."""

    index: NeighborIndex

    @property
    def size(self):
        return self.index.size

    @property
    def payloads(self):
        return self.index.payloads

    def lookup(self, x):
        """(error, distance) of the nearest stored input."""
        e, dist = self.index.nearest(x)
        return float(e), float(dist)


def _error_table(points, errors, metric):
    errors = np.asarray(errors, dtype=np.float64)
    if not np.isfinite(errors).all():
        raise ValueError("training errors must be finite")
    return ErrorTable(NeighborIndex.build(points, errors, metric))


@dataclass(frozen=True, eq=False)
class AslmModel:
    weights: np.ndarray
    table: ErrorTable

    @cached_property
    def _fast_query(self):
        # tree buffers + payloads + weights bound once for scalar queries
        t = self.table.index.tree
        return _core.impl.AslmQueryFast(
            t.split_dim, t.split_val, t.left, t.right, t.start, t.end,
            t.perm, t.pts,
            np.ascontiguousarray(self.table.payloads, dtype=np.float64),
            np.ascontiguousarray(self.weights, dtype=np.float64))

    def predict(self, x) -> float:
        return predict_aslm(self, x)

    def predict_batch(self, X) -> np.ndarray:
        return predict_aslm_batch(self, X)


def train_aslm(train: EmbeddedDataset, delta: float = 0.1) -> AslmModel:
    """LS weights plus a Hadamard-metric table of every training error."""
    w = solve_regularized_ls(RegressionProblem(train.inputs, train.desired, delta))
    errors = train.desired - train.inputs @ w
    return AslmModel(
        weights=w,
        table=_error_table(train.inputs, errors, Metric.hadamard(w)),
    )


def lookup_error(m: AslmModel, x) -> float:
    """The stored error the model would add for this query."""
    return m.table.lookup(x)[0]


def predict_aslm(m: AslmModel, x) -> float:
    """w'x plus the training error of the nearest transformed input."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != m.weights.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {m.weights.shape}")
    return float(m._fast_query.predict(x))


def predict_aslm_batch(m: AslmModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    idx, _ = m.table.index.nearest_batch(X)
    return X @ m.weights + m.table.payloads[idx]


def train_qaslm(train: EmbeddedDataset, delta: float, epsilon: float) -> AslmModel:
    """ASLM with the error table quantized in transformed space.

    Quantization runs over the Hadamard-transformed inputs; each
    admitted center keeps its raw source row so the table can apply the
    same transform at build time. With epsilon=0 on distinct inputs the
    table is identical to train_aslm's.
    """
    w = solve_regularized_ls(RegressionProblem(train.inputs, train.desired, delta))
    errors = train.desired - train.inputs @ w
    metric = Metric.hadamard(w)
    cb = quantize_sequential(metric.transform(train.inputs), epsilon)
    raw_centers = train.inputs[cb.source_indices]
    payloads = center_error_means(cb, errors)
    return AslmModel(
        weights=w,
        table=ErrorTable(NeighborIndex.build(raw_centers, payloads, metric)),
    )


@dataclass(frozen=True, eq=False)
class AugmentedModel:
    """Any frozen base predictor corrected by a plain-l2 error table."""

    base: object                # callable vector -> scalar
    table: ErrorTable
    base_batch: object = None   # optional callable (M, L) -> (M,)
    base_scalars: int = 0       # stored-scalar count of the base model

    def predict(self, x) -> float:
        return predict_augmented(self, x)

    def predict_batch(self, X) -> np.ndarray:
        return predict_augmented_batch(self, X)


def augment(base, train: EmbeddedDataset, base_batch=None, base_scalars: int = 0) -> AugmentedModel:
    """Wrap an already-trained predictor with a full error table."""
    y = _base_predictions(base, base_batch, train.inputs)
    errors = train.desired - y
    return AugmentedModel(
        base=base,
        table=_error_table(train.inputs, errors, Metric.plain()),
        base_batch=base_batch,
        base_scalars=base_scalars,
    )


def quantized_augment(
    base, train: EmbeddedDataset, epsilon: float, base_batch=None, base_scalars: int = 0
) -> AugmentedModel:
    """Like augment, with the table quantized in raw input space."""
    y = _base_predictions(base, base_batch, train.inputs)
    errors = train.desired - y
    cb = quantize_sequential(train.inputs, epsilon)
    return AugmentedModel(
        base=base,
        table=ErrorTable(build_quantized_table(cb, errors, Metric.plain())),
        base_batch=base_batch,
        base_scalars=base_scalars,
    )


def _base_predictions(base, base_batch, X):
    if base_batch is not None:
        return np.asarray(base_batch(X), dtype=np.float64)
    return np.array([base(x) for x in X], dtype=np.float64)


def predict_augmented(m: AugmentedModel, x) -> float:
    return float(m.base(x)) + m.table.lookup(x)[0]


def predict_augmented_batch(m: AugmentedModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = _base_predictions(m.base, m.base_batch, X)
    idx, _ = m.table.index.nearest_batch(X)
    return y + m.table.payloads[idx]


@dataclass(frozen=True, eq=False)
class KnnModel:
    """K=1 nearest neighbor over the training inputs."""

    index: NeighborIndex  # payloads are the desired values

    @property
    def k(self):
        return 1

    def predict(self, x) -> float:
        return predict_knn(self, x)

    def predict_batch(self, X) -> np.ndarray:
        return predict_knn_batch(self, X)


def train_knn(train: EmbeddedDataset) -> KnnModel:
    return KnnModel(
        index=NeighborIndex.build(train.inputs, train.desired, Metric.plain())
    )


def predict_knn(m: KnnModel, x) -> float:
    """Desired value of the nearest training input."""
    return float(m.index.nearest(x)[0])


def predict_knn_batch(m: KnnModel, X) -> np.ndarray:
    idx, _ = m.index.nearest_batch(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    return m.index.payloads[idx]


def dump_model(model, path):
    """Flat CSV dump: one weights line (may be empty), then one line per
    stored table row or kernel center, point coordinates first and the
    payload/coefficient last. Points appear in stored (metric) space."""
    from aslm.kernels import KlmsModel

    if isinstance(model, AslmModel):
        w = model.weights
        rows = np.column_stack([model.table.index.points, model.table.payloads])
    elif isinstance(model, AugmentedModel):
        w = np.empty(0)
        rows = np.column_stack([model.table.index.points, model.table.payloads])
    elif isinstance(model, KnnModel):
        w = np.empty(0)
        rows = np.column_stack([model.index.points, np.asarray(model.index.payloads, dtype=np.float64)])
    elif isinstance(model, KlmsModel):
        w = np.empty(0)
        rows = np.column_stack([model.centers, model.coefficients])
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    with open(path, "w") as fh:
        fh.write(",".join("%.17g" % v for v in w) + "\n")
        for row in rows:
            fh.write(",".join("%.17g" % v for v in row) + "\n")
