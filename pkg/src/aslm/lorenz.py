"""Lorenz x-component time series: generation, normalization, delay
embedding, noise corruption, and sliding train/test splits.

Series are plain 1-d float64 arrays. All operations are pure; RNG state
is passed explicitly where randomness is involved.
"""

import math
from dataclasses import dataclass, replace

import numpy as np


class IntegrationDivergenceError(RuntimeError):
    """Lorenz integration left the finite range."""


class ZeroVarianceError(ValueError):
    """Constant series cannot be normalized."""


class InsufficientDataError(ValueError):
    """Series too short for the requested embedding or split plan."""


@dataclass(frozen=True)
class LorenzParams:
    """Lorenz system and sampling parameters.

    sigma_l follows the source convention of 1.0; the standard chaotic
    regime uses 10.0 (see STANDARD_SIGMA). sample_every controls how
    many Euler steps separate retained samples; 12 reproduces the
    published benchmark scale at dt=0.01.
    """

    sigma_l: float = 1.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    dt: float = 0.01
    x0: float = 1.0
    y0: float = 1.0
    z0: float = 1.0
    transient: int = 1000
    sample_every: int = 12

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ValueError("dt must be positive")
        for name in ("sigma_l", "rho", "beta", "dt", "x0", "y0", "z0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.transient < 0:
            raise ValueError("transient must be non-negative")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")


STANDARD_SIGMA = 10.0


@dataclass(frozen=True)
class EmbeddingConfig:
    order_l: int = 7
    horizon: int = 1

    def __post_init__(self):
        if self.order_l < 1:
            raise ValueError("order_l must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")


@dataclass(frozen=True, eq=False)
class EmbeddedDataset:
    """Delay-embedded pairs: inputs (N, L), desired (N,)."""

    inputs: np.ndarray
    desired: np.ndarray

    def __post_init__(self):
        if self.inputs.ndim != 2 or self.desired.ndim != 1:
            raise ValueError("inputs must be (N, L), desired (N,)")
        if self.inputs.shape[0] != self.desired.shape[0]:
            raise ValueError("inputs and desired lengths differ")

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def order_l(self):
        return self.inputs.shape[1]


@dataclass(frozen=True)
class SplitPlan:
    train_len: int = 2000
    test_len: int = 400
    stride: int = 50
    runs: int = 50

    def __post_init__(self):
        if min(self.train_len, self.test_len, self.stride, self.runs) < 1:
            raise ValueError("all split plan fields must be >= 1")

    def min_samples(self):
        """Tight raw-series length requirement."""
        return (self.runs - 1) * self.stride + self.train_len + self.test_len


def generate_lorenz(params: LorenzParams, n_steps: int) -> np.ndarray:
    """Integrate the Lorenz system with forward Euler, return n_steps
    samples of the x-component.

    The transient prefix is discarded first; afterwards one sample is
    retained every params.sample_every Euler steps, starting with the
    post-transient state.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    s, r, b, dt = params.sigma_l, params.rho, params.beta, params.dt
    x, y, z = params.x0, params.y0, params.z0

    def step(x, y, z):
        return (
            x + dt * s * (y - x),
            y + dt * (r * x - x * z - y),
            z + dt * (x * y - b * z),
        )

    for _ in range(params.transient):
        x, y, z = step(x, y, z)
    out = np.empty(n_steps, dtype=np.float64)
    for i in range(n_steps):
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise IntegrationDivergenceError(
                f"state diverged before sample {i} (dt={dt}, sigma_l={s})"
            )
        out[i] = x
        for _ in range(params.sample_every):
            x, y, z = step(x, y, z)
    return out


def normalize(ts: np.ndarray) -> np.ndarray:
    """Shift/scale to zero mean and unit population variance."""
    ts = np.asarray(ts, dtype=np.float64)
    if ts.size < 2:
        raise ValueError("need at least 2 samples to normalize")
    mean = ts.mean()
    var = ts.var()
    if var == 0.0:
        raise ZeroVarianceError("constant series has no scale")
    return (ts - mean) / math.sqrt(var)


def embed(ts: np.ndarray, cfg: EmbeddingConfig) -> EmbeddedDataset:
    """Delay-embed a series: inputs[i] = ts[i : i+L], desired[i] =
    ts[i + L - 1 + horizon]."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    L, h = cfg.order_l, cfg.horizon
    n = ts.size - L - h + 1
    if n < 1:
        raise InsufficientDataError(
            f"series of length {ts.size} too short: embedding with "
            f"order_l={L}, horizon={h} needs >= {L + h} samples"
        )
    inputs = np.ascontiguousarray(np.lib.stride_tricks.sliding_window_view(ts, L)[:n])
    desired = ts[L - 1 + h :].copy()
    return EmbeddedDataset(inputs=inputs, desired=desired)


def add_noise(ds: EmbeddedDataset, snr_db: float, seed) -> EmbeddedDataset:
    """Corrupt the desired signal with white Gaussian noise at the given
    SNR (dB), referenced to the desired signal's population variance.
    Inputs are untouched. snr_db = +inf returns the dataset unchanged.
    """
    if math.isnan(snr_db):
        raise ValueError("snr_db must not be NaN")
    if math.isinf(snr_db):
        if snr_db > 0:
            return ds
        raise ValueError("snr_db must be finite or +inf")
    rng = np.random.default_rng(seed)
    power = ds.desired.var()
    sigma_n = math.sqrt(power * 10.0 ** (-snr_db / 10.0))
    noisy = ds.desired + rng.normal(0.0, sigma_n, size=ds.desired.shape)
    return replace(ds, desired=noisy)


def sliding_splits(ts: np.ndarray, plan: SplitPlan, cfg: EmbeddingConfig):
    """Cut the series into plan.runs (train, test) window pairs.

    Run k covers raw indices [k*stride, k*stride + train_len + test_len);
    the train window is the first train_len samples, the test window the
    following test_len, and each window is embedded independently.
    """
    ts = np.asarray(ts, dtype=np.float64)
    need = plan.min_samples()
    if ts.size < need:
        raise InsufficientDataError(
            f"series of length {ts.size} too short for split plan: "
            f"needs >= {need} samples"
        )
    out = []
    for k in range(plan.runs):
        a = k * plan.stride
        b = a + plan.train_len
        c = b + plan.test_len
        out.append((embed(ts[a:b], cfg), embed(ts[b:c], cfg)))
    return out


def export_series(ts: np.ndarray, path):
    """Write a series as CSV, one value per line."""
    np.savetxt(path, np.asarray(ts, dtype=np.float64), fmt="%.17g")


def export_dataset(ds: EmbeddedDataset, path):
    """Write an embedded dataset as CSV: L input columns, desired last."""
    rows = np.column_stack([ds.inputs, ds.desired])
    np.savetxt(path, rows, fmt="%.17g", delimiter=",")
