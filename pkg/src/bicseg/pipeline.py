"""End-to-end summarization: normalize, detect splits, summarize.

The result object keeps every intermediate artifact (config snapshot,
segmentation, per-scale score statistics) alongside the token matrix, and
serializes to a fixed JSON schema with bit-faithful floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataio import TimeSeries, dump_json, znormalize
from .errors import InvalidInput, SchemaError
from .summarize import (
    SummarizedSeries,
    summarize_gmm,
    summarize_mean,
    summarize_uniform,
)
from .tokenizer import (
    DetectionResult,
    ScaleStats,
    Segmentation,
    TokenizerConfig,
    detect,
)

METHODS = ("mean", "gmm", "uniform")

_CONFIG_FIELDS = (
    "min_window",
    "max_window",
    "window_step",
    "stride",
    "alpha",
    "min_separation",
    "epsilon",
    "penalty",
)
_RESULT_FIELDS = (
    "id",
    "config",
    "splits",
    "tokens",
    "provenance",
    "method",
    "compression_ratio",
    "scale_stats",
)


@dataclass(frozen=True)
class SummaryResult:
    """Pipeline output for one series."""

    input_id: str
    config: TokenizerConfig
    segmentation: Segmentation
    summary: SummarizedSeries
    scale_stats: tuple[ScaleStats, ...]
    compression_ratio: float


def summarize_series(
    series,
    cfg: TokenizerConfig | None = None,
    method: str = "mean",
    seed: int = 0,
    *,
    n_components: int = 5,
    n_chunks: int = 10,
) -> SummaryResult:
    """Normalize, segment, and summarize one series.

    The series is z-normalized per channel first.  For the mean and gmm
    methods the splits come from multi-scale detection; the uniform method
    ignores detection and chunks the series evenly.  Deterministic given
    (series, cfg, method, seed); short or constant series degrade to a
    single token rather than erroring.
    """
    cfg = cfg or TokenizerConfig()
    if method not in METHODS:
        raise InvalidInput(f"method must be one of {METHODS}, got {method!r}")
    if not isinstance(series, TimeSeries):
        series = TimeSeries(id="", values=series)
    norm = znormalize(series)

    if method == "uniform":
        summary = summarize_uniform(norm, n_chunks)
        splits = tuple(start for start, _ in summary.provenance[1:])
        seg = Segmentation(norm.length, splits)
        stats: tuple[ScaleStats, ...] = ()
    else:
        detection: DetectionResult = detect(norm, cfg)
        seg = detection.segmentation
        stats = detection.scale_stats
        if method == "mean":
            summary = summarize_mean(norm, seg)
        else:
            summary = summarize_gmm(norm, seg, n_components=n_components, seed=seed)

    ratio = norm.length / summary.tokens.shape[0]
    return SummaryResult(
        input_id=series.id,
        config=cfg,
        segmentation=seg,
        summary=summary,
        scale_stats=stats,
        compression_ratio=ratio,
    )


def result_to_mapping(result: SummaryResult) -> dict:
    """JSON-ready mapping in the documented schema order."""
    return {
        "id": result.input_id,
        "config": {name: getattr(result.config, name) for name in _CONFIG_FIELDS},
        "splits": list(result.segmentation.splits),
        "tokens": [list(row) for row in result.summary.tokens],
        "provenance": [list(span) for span in result.summary.provenance],
        "method": result.summary.method,
        "compression_ratio": result.compression_ratio,
        "scale_stats": [
            {"scale": s.scale, "mu": s.mu, "sigma": s.sigma} for s in result.scale_stats
        ],
    }


def write_result(result: SummaryResult) -> str:
    """Serialize a result to its JSON document."""
    return dump_json(result_to_mapping(result)) + "\n"


def _require(mapping: dict, field: str):
    if field not in mapping:
        raise SchemaError(f"result document is missing field {field!r}")
    return mapping[field]


def read_result(text: str) -> SummaryResult:
    """Parse a result JSON document back into a SummaryResult.

    Raises SchemaError naming the first missing field.  Mixture component
    variances are diagnostic-only and are not part of the schema, so they
    come back as None.
    """
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"result document is not valid JSON: {exc}") from exc
    if not isinstance(mapping, dict):
        raise SchemaError("result document must be a JSON object")
    for field in _RESULT_FIELDS:
        _require(mapping, field)
    config_map = mapping["config"]
    for field in _CONFIG_FIELDS:
        if field not in config_map:
            raise SchemaError(f"result document is missing field 'config.{field}'")
    try:
        cfg = TokenizerConfig(**{name: config_map[name] for name in _CONFIG_FIELDS})
        provenance = tuple((int(s), int(e)) for s, e in mapping["provenance"])
        if not provenance:
            raise SchemaError("result document has no tokens")
        length = max(end for _, end in provenance)
        seg = Segmentation(length, tuple(int(s) for s in mapping["splits"]))
        summary = SummarizedSeries(
            tokens=_token_matrix(mapping["tokens"]),
            provenance=provenance,
            method=str(mapping["method"]),
        )
        stats = tuple(
            ScaleStats(scale=int(s["scale"]), mu=float(s["mu"]), sigma=float(s["sigma"]))
            for s in mapping["scale_stats"]
        )
        return SummaryResult(
            input_id=str(mapping["id"]),
            config=cfg,
            segmentation=seg,
            summary=summary,
            scale_stats=stats,
            compression_ratio=float(mapping["compression_ratio"]),
        )
    except SchemaError:
        raise
    except (TypeError, ValueError, KeyError, InvalidInput) as exc:
        raise SchemaError(f"result document is malformed: {exc}") from exc


def _token_matrix(rows):
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        raise SchemaError("'tokens' must be a matrix")
    return arr
