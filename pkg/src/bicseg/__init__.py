"""bicseg: BIC-driven segmentation and summarization of time series.

Detects statistically coherent segments with a multi-scale, full-covariance
BIC criterion and compresses each segment into summary tokens (mean pooling
by default, mixture tokens or uniform chunking as alternatives).
"""

from .dataio import (
    Dataset,
    TimeSeries,
    dump_json,
    format_float,
    parse_labeled_rows,
    parse_manifest,
    parse_matrix_csv,
    write_labeled_rows,
    write_matrix_csv,
    znormalize,
)
from .errors import (
    BicsegError,
    EmptyDataset,
    EmptyScale,
    InsufficientData,
    InvalidInput,
    ParseError,
    SchemaError,
    SingularCovariance,
    TooFewPoints,
)
from .estimator import SeriesSummarizer, TokenSequenceKnn
from .evaluate import (
    ChangePointScore,
    CompressionStats,
    EvalReport,
    change_point_prf,
    compression_stats,
    dtw_distance,
    knn1_accuracy,
    report_to_mapping,
    run_noise_experiment,
    summarize_dataset,
)
from .gaussian import (
    CovarianceSummary,
    bic_segment,
    delta_bic,
    free_parameter_count,
    ml_covariance,
)
from .pipeline import (
    METHODS,
    SummaryResult,
    read_result,
    result_to_mapping,
    summarize_series,
    write_result,
)
from .summarize import (
    GmmModel,
    SummarizedSeries,
    fit_gmm,
    summarize_gmm,
    summarize_mean,
    summarize_uniform,
)
from .synth import Regime, RegimeSpec, add_gaussian_noise, generate_piecewise_gaussian
from .tokenizer import (
    ChangeCandidate,
    DetectionResult,
    ScaleStats,
    Segmentation,
    TokenizerConfig,
    detect,
    detect_splits,
    score_scale,
    segmentation_cost,
    suppress_candidates,
    threshold_candidates,
)

__version__ = "0.1.0"

__all__ = [
    "BicsegError",
    "ChangeCandidate",
    "ChangePointScore",
    "CompressionStats",
    "CovarianceSummary",
    "Dataset",
    "DetectionResult",
    "EmptyDataset",
    "EmptyScale",
    "EvalReport",
    "GmmModel",
    "InsufficientData",
    "InvalidInput",
    "METHODS",
    "ParseError",
    "Regime",
    "RegimeSpec",
    "ScaleStats",
    "SchemaError",
    "Segmentation",
    "SeriesSummarizer",
    "SingularCovariance",
    "SummarizedSeries",
    "SummaryResult",
    "TimeSeries",
    "TokenSequenceKnn",
    "TokenizerConfig",
    "TooFewPoints",
    "add_gaussian_noise",
    "bic_segment",
    "change_point_prf",
    "compression_stats",
    "delta_bic",
    "detect",
    "detect_splits",
    "dtw_distance",
    "dump_json",
    "fit_gmm",
    "format_float",
    "free_parameter_count",
    "generate_piecewise_gaussian",
    "knn1_accuracy",
    "ml_covariance",
    "parse_labeled_rows",
    "parse_manifest",
    "parse_matrix_csv",
    "read_result",
    "report_to_mapping",
    "result_to_mapping",
    "run_noise_experiment",
    "score_scale",
    "segmentation_cost",
    "summarize_dataset",
    "summarize_gmm",
    "summarize_mean",
    "summarize_series",
    "summarize_uniform",
    "suppress_candidates",
    "threshold_candidates",
    "write_labeled_rows",
    "write_matrix_csv",
    "write_result",
    "znormalize",
]
