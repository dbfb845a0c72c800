"""Online kernel least mean square (KLMS) with a Gaussian kernel, and
its quantized variant (QKLMS).

Training is a strict fold over samples in order: predict with the
current expansion, then either append a center (KLMS, or QKLMS beyond
radius epsilon) or fold the scaled error into the nearest center's
coefficient (QKLMS within epsilon). Models are frozen after training.
"""

from dataclasses import dataclass

import numpy as np

from aslm import _core
from aslm.lorenz import EmbeddedDataset


@dataclass(frozen=True)
class KernelConfig:
    sigma: float = 1.0
    eta: float = 0.7

    def __post_init__(self):
        if not (self.sigma > 0.0):
            raise ValueError("sigma must be positive")
        if not (self.eta > 0.0):
            raise ValueError("eta must be positive")

    @property
    def gamma(self):
        # exponent scale of exp(-|a-b|^2 / (2 sigma^2))
        return 1.0 / (2.0 * self.sigma * self.sigma)


def gaussian_kernel(a, b, sigma: float = 1.0) -> float:
    """exp(-|a-b|^2 / (2 sigma^2))."""
    if not (sigma > 0.0):
        raise ValueError("sigma must be positive")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    t = a - b
    return float(np.exp(-(t @ t) / (2.0 * sigma * sigma)))


@dataclass(frozen=True, eq=False)
class KlmsModel:
    centers: np.ndarray       # (K, L)
    coefficients: np.ndarray  # (K,)
    config: KernelConfig
    center_sources: np.ndarray  # training sample index behind each center

    def __post_init__(self):
        if self.centers.shape[0] != self.coefficients.shape[0]:
            raise ValueError("centers and coefficients lengths differ")

    @property
    def size(self):
        return self.centers.shape[0]

    def predict(self, x) -> float:
        x = self._check(x)
        if self.size == 0:
            return 0.0
        return _core.impl.klms_predict_one(
            self.centers, self.coefficients, self.config.gamma, x
        )

    def predict_batch(self, X) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
        if X.shape[1] != self.centers.shape[1]:
            raise ValueError(
                f"dimension mismatch: {X.shape[1]} vs {self.centers.shape[1]}"
            )
        if self.size == 0:
            return np.zeros(X.shape[0])
        return _core.impl.klms_predict_batch(
            self.centers, self.coefficients, self.config.gamma, X
        )

    def _check(self, x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.shape != (self.centers.shape[1],):
            raise ValueError(
                f"dimension mismatch: {x.shape} vs ({self.centers.shape[1]},)"
            )
        return x


def train_klms(train: EmbeddedDataset, config: KernelConfig = KernelConfig()) -> KlmsModel:
    """One online pass; every sample becomes a center with coefficient
    eta * (its prediction error before the update)."""
    X = np.ascontiguousarray(train.inputs, dtype=np.float64)
    d = np.ascontiguousarray(train.desired, dtype=np.float64)
    alpha = _core.impl.klms_train(X, d, config.gamma, config.eta)
    return KlmsModel(
        centers=X,
        coefficients=alpha,
        config=config,
        center_sources=np.arange(len(d), dtype=np.int64),
    )


def train_qklms(
    train: EmbeddedDataset, epsilon: float, config: KernelConfig = KernelConfig()
) -> KlmsModel:
    """Quantized pass: samples within epsilon (plain l2) of an existing
    center update that center's coefficient instead of being added.
    epsilon=0 merges only exact duplicates; epsilon=inf keeps one center.
    """
    if not (epsilon >= 0.0):
        raise ValueError("epsilon must be >= 0")
    X = np.ascontiguousarray(train.inputs, dtype=np.float64)
    d = np.ascontiguousarray(train.desired, dtype=np.float64)
    src, alpha = _core.impl.qklms_train(X, d, config.gamma, config.eta, epsilon)
    return KlmsModel(
        centers=np.ascontiguousarray(X[src]),
        coefficients=alpha,
        config=config,
        center_sources=src,
    )


def predict_klms(model: KlmsModel, x) -> float:
    return model.predict(x)
