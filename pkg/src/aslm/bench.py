"""Experiment harness: sliding-window Lorenz prediction benchmark.

Runs the full model roster over plan.runs train/test windows, optionally
corrupting training targets with white noise, and aggregates test MSE
(mean and across-runs std), training MSE, stored-scalar counts, and
optional per-query timing into a deterministic report.
"""

import contextlib
import time
from dataclasses import dataclass, field

import numpy as np

from aslm.kernels import KernelConfig, KlmsModel, train_klms, train_qklms
from aslm.linear import RegressionProblem, mse, solve_regularized_ls
from aslm.lorenz import (
    EmbeddingConfig,
    LorenzParams,
    SplitPlan,
    add_noise,
    generate_lorenz,
    normalize,
    sliding_splits,
)
from aslm.models import (
    AslmModel,
    AugmentedModel,
    KnnModel,
    augment,
    quantized_augment,
    train_aslm,
    train_knn,
    train_qaslm,
)
from aslm.neighbors import Metric
from aslm.quantizer import tune_epsilon

FULL_ROSTER = ("LS", "KNN", "ASLM", "QASLM", "KLMS", "QKLMS", "KLMS-AM", "KLMS-QAM")

CSV_HEADER = "model,mean_test_mse,std_test_mse,train_mse,storage_scalars,mean_query_us"

_RAW_EPS_MODELS = {"QKLMS", "KLMS-QAM"}
_WEIGHTED_EPS_MODELS = {"QASLM"}


def _default_lorenz():
    # standard chaotic regime for the benchmark protocol
    return LorenzParams(sigma_l=10.0)


@dataclass(frozen=True)
class ExperimentConfig:
    lorenz: LorenzParams = field(default_factory=_default_lorenz)
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    split: SplitPlan = field(default_factory=SplitPlan)
    n_samples: int = 4908
    snr_db: float = None          # None = clean training targets
    delta: float = 0.1
    kernel: KernelConfig = field(default_factory=KernelConfig)
    epsilon_input: float = None    # raw-space radius (QKLMS, KLMS-QAM)
    epsilon_weighted: float = None  # transformed-space radius (QASLM)
    target_codebook: int = 500
    grid_search: bool = False
    seed: int = 1
    roster: tuple = FULL_ROSTER
    test_on_train: bool = False
    measure_timing: bool = False

    def __post_init__(self):
        if len(self.roster) == 0:
            raise ValueError("roster must not be empty")
        unknown = [m for m in self.roster if m not in FULL_ROSTER]
        if unknown:
            raise ValueError(f"unknown models in roster: {unknown}")
        if len(set(self.roster)) != len(self.roster):
            raise ValueError("roster contains duplicates")
        if self.target_codebook < 1:
            raise ValueError("target_codebook must be >= 1")
        for name in ("epsilon_input", "epsilon_weighted"):
            v = getattr(self, name)
            if v is not None and not (v >= 0.0):
                raise ValueError(f"{name} must be >= 0")
        if not (self.delta >= 0.0):
            raise ValueError("delta must be >= 0")


@dataclass(frozen=True, eq=False)
class ModelStats:
    name: str
    test_mses: np.ndarray   # one per run
    train_mses: np.ndarray
    storage: int
    mean_query_us: float = None

    @property
    def mean_test_mse(self):
        return float(self.test_mses.mean())

    @property
    def std_test_mse(self):
        # across-runs sample convention
        if self.test_mses.size < 2:
            return 0.0
        return float(self.test_mses.std(ddof=1))

    @property
    def train_mse(self):
        return float(self.train_mses.mean())


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    stats: tuple            # ModelStats in canonical roster order
    runs: int
    epsilon_input: float = None
    epsilon_weighted: float = None

    def __getitem__(self, name):
        for s in self.stats:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self):
        return tuple(s.name for s in self.stats)


def _noise_seed(cfg, run):
    return np.random.SeedSequence(entropy=cfg.seed, spawn_key=(run,))


def _tune_grid(cfg, train0, eps0, space):
    """Pick epsilon from a small grid by held-out MSE on the first window."""
    cut = int(len(train0) * 0.8)
    fit = type(train0)(train0.inputs[:cut], train0.desired[:cut])
    val_X, val_d = train0.inputs[cut:], train0.desired[cut:]
    best_eps, best_mse = None, np.inf
    for f in (0.25, 0.5, 1.0, 2.0, 4.0):
        eps = eps0 * f
        if space == "weighted":
            m = train_qaslm(fit, cfg.delta, eps)
        else:
            m = train_qklms(fit, eps, cfg.kernel)
        v = mse(m.predict_batch(val_X), val_d)
        if v < best_mse:
            best_eps, best_mse = eps, v
    return best_eps


def _resolve_epsilons(cfg, train0):
    roster = set(cfg.roster)
    eps_in, eps_w = cfg.epsilon_input, cfg.epsilon_weighted
    if eps_in is None and roster & _RAW_EPS_MODELS:
        eps_in = tune_epsilon(train0.inputs, cfg.target_codebook).epsilon
        if cfg.grid_search:
            eps_in = _tune_grid(cfg, train0, eps_in, "input")
    if eps_w is None and roster & _WEIGHTED_EPS_MODELS:
        w = solve_regularized_ls(
            RegressionProblem(train0.inputs, train0.desired, cfg.delta)
        )
        eps_w = tune_epsilon(Metric.hadamard(w).transform(train0.inputs),
                             cfg.target_codebook).epsilon
        if cfg.grid_search:
            eps_w = _tune_grid(cfg, train0, eps_w, "weighted")
    return eps_in, eps_w


@contextlib.contextmanager
def _annotate(run, name):
    """Tag escaping errors with the run index and model name."""
    try:
        yield
    except Exception as err:
        raise RuntimeError(f"run {run}, model {name}: {err}") from err


def _fit_models(names, train, cfg, eps_in, eps_w, run):
    """Train every requested model, reusing the KLMS base for the
    augmented variants. Returns name -> (model, batch_predict)."""
    L = train.inputs.shape[1]
    out = {}
    klms = None
    if {"KLMS", "KLMS-AM", "KLMS-QAM"} & set(names):
        base_of = next(n for n in names if n in ("KLMS", "KLMS-AM", "KLMS-QAM"))
        with _annotate(run, base_of):
            klms = train_klms(train, cfg.kernel)
    for name in names:
        with _annotate(run, name):
            if name == "LS":
                w = solve_regularized_ls(
                    RegressionProblem(train.inputs, train.desired, cfg.delta)
                )
                out[name] = (w, lambda X, w=w: X @ w)
            elif name == "KNN":
                m = train_knn(train)
                out[name] = (m, m.predict_batch)
            elif name == "ASLM":
                m = train_aslm(train, cfg.delta)
                out[name] = (m, m.predict_batch)
            elif name == "QASLM":
                m = train_qaslm(train, cfg.delta, eps_w)
                out[name] = (m, m.predict_batch)
            elif name == "KLMS":
                out[name] = (klms, klms.predict_batch)
            elif name == "QKLMS":
                m = train_qklms(train, eps_in, cfg.kernel)
                out[name] = (m, m.predict_batch)
            elif name == "KLMS-AM":
                m = augment(klms.predict, train, base_batch=klms.predict_batch,
                            base_scalars=klms.size * (L + 1))
                out[name] = (m, m.predict_batch)
            elif name == "KLMS-QAM":
                m = quantized_augment(klms.predict, train, eps_in,
                                      base_batch=klms.predict_batch,
                                      base_scalars=klms.size * (L + 1))
                out[name] = (m, m.predict_batch)
    return out


def _scalar_predictor(name, model):
    if name == "LS":
        return lambda q: float(q @ model)
    return model.predict


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Execute the sliding-window protocol and aggregate per-model stats.

    Noise (when snr_db is set) corrupts only the training desired
    values, re-drawn per run from a seed-derived stream; test targets
    stay clean. Deterministic for a fixed config.
    """
    series = normalize(generate_lorenz(cfg.lorenz, cfg.n_samples))
    pairs = sliding_splits(series, cfg.split, cfg.embedding)

    train0 = pairs[0][0]
    if cfg.snr_db is not None:
        train0 = add_noise(train0, cfg.snr_db, _noise_seed(cfg, 0))
    eps_in, eps_w = _resolve_epsilons(cfg, train0)

    names = [n for n in FULL_ROSTER if n in cfg.roster]
    test_runs = {n: [] for n in names}
    train_runs = {n: [] for n in names}
    storage = {}
    query_us = {n: None for n in names}

    for k, (train, test) in enumerate(pairs):
        if cfg.snr_db is not None:
            train = add_noise(train, cfg.snr_db, _noise_seed(cfg, k))
        if cfg.test_on_train:
            test = train
        models = _fit_models(names, train, cfg, eps_in, eps_w, k)
        for name in names:
            with _annotate(k, name):
                model, batch = models[name]
                train_runs[name].append(mse(batch(train.inputs), train.desired))
                test_runs[name].append(mse(batch(test.inputs), test.desired))
        if k == 0:
            for name in names:
                storage[name] = measure_storage(models[name][0])
            if cfg.measure_timing:
                for name in names:
                    fn = _scalar_predictor(name, models[name][0])
                    query_us[name] = 1e6 * measure_query_time(fn, test.inputs)

    stats = tuple(
        ModelStats(
            name=n,
            test_mses=np.asarray(test_runs[n]),
            train_mses=np.asarray(train_runs[n]),
            storage=storage[n],
            mean_query_us=query_us[n],
        )
        for n in names
    )
    return ExperimentReport(stats=stats, runs=cfg.split.runs,
                            epsilon_input=eps_in, epsilon_weighted=eps_w)


def measure_storage(model) -> int:
    """Total stored scalars: weights + table points + payloads, or
    centers + coefficients."""
    if isinstance(model, np.ndarray):
        return int(model.size)
    if isinstance(model, AslmModel):
        t = model.table
        return int(model.weights.size + t.size * (t.index.dim + 1))
    if isinstance(model, AugmentedModel):
        t = model.table
        return int(model.base_scalars + t.size * (t.index.dim + 1))
    if isinstance(model, KnnModel):
        return int(model.index.size * (model.index.dim + 1))
    if isinstance(model, KlmsModel):
        return int(model.size * (model.centers.shape[1] + 1))
    raise TypeError(f"no storage rule for {type(model).__name__}")


def measure_query_time(predict, queries, warmup_fraction: float = 0.1) -> float:
    """Mean wall-clock seconds per single-query prediction.

    The first ~10% of queries (at least one) serve as warm-up and are
    not timed; the rest are timed individually on a monotonic clock.
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    n = queries.shape[0]
    if n < 100:
        raise ValueError("need at least 100 queries for stable timing")
    warm = max(1, int(n * warmup_fraction))
    for q in queries[:warm]:
        predict(q)
    total = 0.0
    for q in queries[warm:]:
        t0 = time.perf_counter()
        predict(q)
        total += time.perf_counter() - t0
    return total / (n - warm)


def _fmt(x):
    return "%.12g" % x


def emit_report(report: ExperimentReport, format: str = "csv") -> str:
    """Render a report as machine CSV or an aligned text table."""
    if format == "csv":
        lines = [CSV_HEADER]
        for s in report.stats:
            q = "" if s.mean_query_us is None else "%.3f" % s.mean_query_us
            lines.append(
                f"{s.name},{_fmt(s.mean_test_mse)},{_fmt(s.std_test_mse)},"
                f"{_fmt(s.train_mse)},{s.storage},{q}"
            )
        return "\n".join(lines) + "\n"
    if format == "table":
        head = ["model", "mean test MSE", "std", "train MSE", "storage", "query us"]
        rows = [head]
        for s in report.stats:
            q = "-" if s.mean_query_us is None else "%.2f" % s.mean_query_us
            rows.append([
                s.name,
                "%.3e" % s.mean_test_mse,
                "%.3e" % s.std_test_mse,
                "%.3e" % s.train_mse,
                str(s.storage),
                q,
            ])
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        out = []
        for r in rows:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        out.append(f"({report.runs} runs)")
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format: {format!r}")
