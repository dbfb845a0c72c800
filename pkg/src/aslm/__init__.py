"""Augmented-space linear modeling.

A linear least-squares predictor corrected at query time by the stored
training error of the nearest training input, plus the surrounding
comparison family (1-NN, KLMS, quantized variants, augmented kernel
models) and a sliding-window Lorenz prediction benchmark.
"""

from aslm._core import backend_name
from aslm.bench import (
    CSV_HEADER,
    FULL_ROSTER,
    ExperimentConfig,
    ExperimentReport,
    ModelStats,
    emit_report,
    measure_query_time,
    measure_storage,
    run_experiment,
)
from aslm.kernels import (
    KernelConfig,
    KlmsModel,
    gaussian_kernel,
    predict_klms,
    train_klms,
    train_qklms,
)
from aslm.linear import (
    RankDeficiencyError,
    RegressionProblem,
    mse,
    predict_linear,
    solve_regularized_ls,
)
from aslm.lorenz import (
    EmbeddedDataset,
    EmbeddingConfig,
    InsufficientDataError,
    IntegrationDivergenceError,
    LorenzParams,
    SplitPlan,
    ZeroVarianceError,
    add_noise,
    embed,
    export_dataset,
    export_series,
    generate_lorenz,
    normalize,
    sliding_splits,
)
from aslm.models import (
    AslmModel,
    AugmentedModel,
    ErrorTable,
    KnnModel,
    augment,
    dump_model,
    lookup_error,
    predict_aslm,
    predict_aslm_batch,
    predict_augmented,
    predict_augmented_batch,
    predict_knn,
    predict_knn_batch,
    quantized_augment,
    train_aslm,
    train_knn,
    train_qaslm,
)
from aslm.neighbors import Metric, NeighborIndex, brute_force_nearest
from aslm.quantizer import (
    Codebook,
    TuneResult,
    build_quantized_table,
    center_error_means,
    quantize_sequential,
    tune_epsilon,
)

__version__ = "0.1.0"

__all__ = [
    "AslmModel",
    "AugmentedModel",
    "CSV_HEADER",
    "Codebook",
    "EmbeddedDataset",
    "EmbeddingConfig",
    "ErrorTable",
    "ExperimentConfig",
    "ExperimentReport",
    "FULL_ROSTER",
    "InsufficientDataError",
    "IntegrationDivergenceError",
    "KernelConfig",
    "KlmsModel",
    "KnnModel",
    "LorenzParams",
    "Metric",
    "ModelStats",
    "NeighborIndex",
    "RankDeficiencyError",
    "RegressionProblem",
    "SplitPlan",
    "TuneResult",
    "ZeroVarianceError",
    "add_noise",
    "augment",
    "backend_name",
    "brute_force_nearest",
    "build_quantized_table",
    "center_error_means",
    "dump_model",
    "embed",
    "emit_report",
    "export_dataset",
    "export_series",
    "gaussian_kernel",
    "generate_lorenz",
    "lookup_error",
    "measure_query_time",
    "measure_storage",
    "mse",
    "normalize",
    "predict_aslm",
    "predict_aslm_batch",
    "predict_augmented",
    "predict_augmented_batch",
    "predict_klms",
    "predict_knn",
    "predict_knn_batch",
    "predict_linear",
    "quantize_sequential",
    "quantized_augment",
    "run_experiment",
    "sliding_splits",
    "solve_regularized_ls",
    "train_aslm",
    "train_klms",
    "train_knn",
    "train_qaslm",
    "train_qklms",
    "tune_epsilon",
]
