"""Desk-scale evaluation: split quality, compression, and a 1-NN proxy.

Change-point precision/recall match predicted and true splits one-to-one
within a tolerance.  Downstream usefulness is proxied by 1-nearest-neighbor
classification of token sequences under a DTW distance, optionally under
additive test-time noise.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataio import Dataset, format_float
from .errors import InvalidInput
from .pipeline import _CONFIG_FIELDS, summarize_series
from .synth import add_gaussian_noise
from .tokenizer import TokenizerConfig
from .validation import as_matrix, check_nonnegative


@dataclass(frozen=True)
class ChangePointScore:
    precision: float
    recall: float
    f1: float
    tol: int


@dataclass(frozen=True)
class CompressionStats:
    mean_original_length: float
    mean_token_count: float
    ratio: float


@dataclass(frozen=True)
class EvalReport:
    """Aggregated evaluation quantities; unused sections stay None."""

    change_point: ChangePointScore | None
    compression: CompressionStats
    classification: dict[str, float] | None
    noise: dict[float, dict[str, float]] | None
    metadata: dict


def _check_sorted(values, name: str) -> list[int]:
    out = [int(v) for v in values]
    if any(b <= a for a, b in zip(out, out[1:])):
        raise InvalidInput(f"{name} must be sorted strictly ascending")
    return out


def change_point_prf(predicted, truth, tol: int) -> tuple[float, float, float]:
    """Precision, recall, and F1 of predicted vs true splits within +/- tol.

    Matching is the greedy ascending merge: walk both sorted lists, match
    when the current pair is within tol, otherwise advance the smaller side.
    On a line this greedy matching is maximum-cardinality, which makes the
    score symmetric (swapping the lists swaps precision and recall).  Both
    lists empty scores (1, 1, 1); an empty side with a non-empty other side
    scores 0 by convention.
    """
    tol = check_nonnegative(tol, "tol")
    pred = _check_sorted(predicted, "predicted")
    true = _check_sorted(truth, "truth")
    matches = 0
    i = j = 0
    while i < len(pred) and j < len(true):
        gap = pred[i] - true[j]
        if abs(gap) <= tol:
            matches += 1
            i += 1
            j += 1
        elif gap < 0:
            i += 1
        else:
            j += 1
    if pred:
        precision = matches / len(pred)
    else:
        precision = 1.0 if not true else 0.0
    if true:
        recall = matches / len(true)
    else:
        recall = 1.0 if not pred else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def dtw_distance(a, b) -> float:
    """Dynamic-time-warping distance with squared Euclidean local cost.

    Unit steps (match, insert, delete); returns the accumulated cost of the
    cheapest warping path.
    """
    x = as_matrix(a, name="a")
    y = as_matrix(b, name="b")
    if x.shape[1] != y.shape[1]:
        raise InvalidInput(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    diff = x[:, None, :] - y[None, :, :]
    local = (diff * diff).sum(axis=2)
    n, m = local.shape
    acc = np.full((n + 1, m + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, n + 1):
        row = acc[i]
        above = acc[i - 1]
        cost = local[i - 1]
        for j in range(1, m + 1):
            row[j] = cost[j - 1] + min(above[j - 1], above[j], row[j - 1])
    return float(acc[n, m])


def knn1_accuracy(train, test, threads: int = 1) -> float:
    """1-nearest-neighbor accuracy of labeled token sequences under DTW.

    train and test are sequences of (tokens, label) pairs.  Distance ties
    keep the earliest training index.  Results do not depend on threads.
    """
    train = list(train)
    test = list(test)
    if not train:
        raise InvalidInput("training set is empty")

    def predict(item):
        tokens, _ = item
        best_label = None
        best_dist = np.inf
        for ref_tokens, ref_label in train:
            dist = dtw_distance(tokens, ref_tokens)
            if dist < best_dist:
                best_dist = dist
                best_label = ref_label
        return best_label

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            predictions = list(pool.map(predict, test))
    else:
        predictions = [predict(item) for item in test]
    correct = sum(1 for (_, label), pred in zip(test, predictions) if pred == label)
    return correct / len(test) if test else 0.0


def summarize_dataset(
    dataset: Dataset,
    cfg: TokenizerConfig | None = None,
    method: str = "mean",
    seed: int = 0,
    *,
    n_components: int = 5,
    n_chunks: int = 10,
) -> list[tuple[np.ndarray, str | None]]:
    """Summarize every series of a dataset into (tokens, label) pairs."""
    out = []
    for series in dataset.series:
        result = summarize_series(
            series, cfg, method=method, seed=seed,
            n_components=n_components, n_chunks=n_chunks,
        )
        out.append((result.summary.tokens, series.label))
    return out


def compression_stats(pairs) -> CompressionStats:
    """Aggregate (original_length, token_count) pairs into mean stats."""
    lengths = [float(orig) for orig, _ in pairs]
    counts = [float(tok) for _, tok in pairs]
    if not lengths:
        raise InvalidInput("no series to aggregate")
    mean_len = sum(lengths) / len(lengths)
    mean_tok = sum(counts) / len(counts)
    return CompressionStats(
        mean_original_length=mean_len,
        mean_token_count=mean_tok,
        ratio=mean_len / mean_tok,
    )


def _require_labels(dataset: Dataset, name: str) -> None:
    if any(s.label is None for s in dataset.series):
        raise InvalidInput(f"{name} dataset must be fully labeled")


def run_noise_experiment(
    train: Dataset,
    test: Dataset,
    sigmas,
    methods,
    cfg: TokenizerConfig | None = None,
    seed: int = 0,
    *,
    n_components: int = 5,
    n_chunks: int = 10,
    threads: int = 1,
) -> EvalReport:
    """Test-time noise robustness of each summarization method.

    For every noise level the test series are corrupted (training series
    stay clean), both sides are summarized with each method, and 1-NN
    accuracy is recorded.  Noise draws are seeded per (sigma, series) cell,
    shared across methods so every method sees the same corrupted data.
    """
    cfg = cfg or TokenizerConfig()
    _require_labels(train, "train")
    _require_labels(test, "test")
    if not train.series or not test.series:
        raise InvalidInput("train and test datasets must be non-empty")
    sigmas = [check_nonnegative(s, "sigma") for s in sigmas]
    methods = list(methods)
    if not methods:
        raise InvalidInput("no methods given")

    train_tokens = {
        m: summarize_dataset(train, cfg, m, seed, n_components=n_components, n_chunks=n_chunks)
        for m in methods
    }
    clean_test_tokens = summarize_dataset(
        test, cfg, methods[0], seed, n_components=n_components, n_chunks=n_chunks
    )
    cell_seeds = np.random.SeedSequence(seed).generate_state(
        len(sigmas) * len(test.series)
    ).reshape(len(sigmas), -1)

    noise: dict[float, dict[str, float]] = {}
    for si, sigma in enumerate(sigmas):
        corrupted = Dataset(
            name=test.name,
            series=tuple(
                add_gaussian_noise(s, sigma, int(cell_seeds[si, j]))
                for j, s in enumerate(test.series)
            ),
        )
        per_method = {}
        for method in methods:
            test_tokens = summarize_dataset(
                corrupted, cfg, method, seed,
                n_components=n_components, n_chunks=n_chunks,
            )
            per_method[method] = knn1_accuracy(train_tokens[method], test_tokens, threads=threads)
        noise[sigma] = per_method

    clean_pairs = [
        (series.length, tokens.shape[0])
        for series, (tokens, _) in zip(
            train.series + test.series,
            train_tokens[methods[0]] + clean_test_tokens,
        )
    ]
    return EvalReport(
        change_point=None,
        compression=compression_stats(clean_pairs),
        classification=None,
        noise=noise,
        metadata={
            "seed": seed,
            "sigmas": list(sigmas),
            "methods": methods,
            "train": train.name,
            "test": test.name,
            "n_train": len(train),
            "n_test": len(test),
        },
    )


def report_to_mapping(report: EvalReport, cfg: TokenizerConfig | None = None) -> dict:
    """JSON-ready mapping of an EvalReport."""
    change_point = None
    if report.change_point is not None:
        change_point = {
            "precision": report.change_point.precision,
            "recall": report.change_point.recall,
            "f1": report.change_point.f1,
            "tol": report.change_point.tol,
        }
    noise = None
    if report.noise is not None:
        noise = {
            format_float(sigma): dict(per_method)
            for sigma, per_method in report.noise.items()
        }
    metadata = dict(report.metadata)
    if cfg is not None:
        metadata["config"] = {name: getattr(cfg, name) for name in _CONFIG_FIELDS}
    return {
        "change_point": change_point,
        "compression": {
            "mean_original_length": report.compression.mean_original_length,
            "mean_token_count": report.compression.mean_token_count,
            "ratio": report.compression.ratio,
        },
        "classification": dict(report.classification) if report.classification else None,
        "noise": noise,
        "metadata": metadata,
    }
