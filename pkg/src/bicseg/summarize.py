"""Segment summarizers: mean pooling, mixture tokens, and uniform chunking.

Mean pooling is the default: each segment becomes the arithmetic mean of its
rows.  The mixture summarizer fits a small diagonal Gaussian mixture per
segment and emits the component means as tokens.  Uniform chunking ignores
the segmentation entirely and mean-pools equal-width chunks.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass

from .errors import InvalidInput, TooFewPoints
from .tokenizer import Segmentation
from .validation import as_matrix, check_positive_int

_VARIANCE_FLOOR = 1e-6
_EM_TOL = 1e-6
_EM_MAX_ITER = 200


@dataclass(frozen=True)
class SummarizedSeries:
    """Token matrix plus per-token provenance.

    tokens is T' x d; provenance[i] is the half-open source range of token i
    in original timesteps.  For mixture tokens, component_variances carries
    the per-channel variance vector of each token (None for mean-fallback
    tokens); it is diagnostic metadata and is not serialized.
    """

    tokens: np.ndarray
    provenance: tuple[tuple[int, int], ...]
    method: str
    component_variances: tuple[np.ndarray | None, ...] | None = None


@dataclass(frozen=True)
class GmmModel:
    """Diagonal-covariance Gaussian mixture fit by EM.

    log_likelihoods records the per-point log-likelihood after every E-step;
    EM guarantees the sequence is non-decreasing.
    """

    n_components: int
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    log_likelihoods: tuple[float, ...]


def _check_segmentation(arr: np.ndarray, seg: Segmentation) -> None:
    if seg.length != arr.shape[0]:
        raise InvalidInput(
            f"segmentation covers {seg.length} timesteps, series has {arr.shape[0]}"
        )


def summarize_mean(series, seg: Segmentation) -> SummarizedSeries:
    """One token per segment: the arithmetic mean of the segment rows."""
    arr = as_matrix(series)
    _check_segmentation(arr, seg)
    tokens = np.stack([arr[s:e].mean(axis=0) for s, e in seg.segments])
    return SummarizedSeries(tokens=tokens, provenance=seg.segments, method="mean")


def _kmeanspp_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded k-means++ seeding: spread initial centers by squared distance."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    dist2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = dist2.sum()
        if total > 0:
            idx = rng.choice(n, p=dist2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = points[idx]
        dist2 = np.minimum(dist2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _log_prob(points, weights, means, variances):
    """Per-point, per-component joint log density (n x k)."""
    diff = points[:, None, :] - means[None, :, :]
    quad = (diff * diff / variances[None, :, :]).sum(axis=2)
    norm = (np.log(2.0 * np.pi * variances)).sum(axis=1)
    with np.errstate(divide="ignore"):
        log_w = np.log(weights)
    return log_w[None, :] - 0.5 * (norm[None, :] + quad)


def _logsumexp_rows(arr):
    peak = arr.max(axis=1, keepdims=True)
    return peak[:, 0] + np.log(np.exp(arr - peak).sum(axis=1))


def fit_gmm(points, n_components: int = 5, seed: int = 0) -> GmmModel:
    """Fit a diagonal-covariance Gaussian mixture with seeded EM.

    Initialization is k-means++ from the given seed followed by a hard
    assignment to the nearest center.  EM iterates until the per-point
    log-likelihood improves by less than 1e-6 or 200 iterations; variances
    are floored at 1e-6.  If a floating-point M-step ever lowers the
    likelihood the previous parameters are kept and iteration stops, so the
    recorded log-likelihood sequence is always non-decreasing.
    """
    arr = as_matrix(points, name="points")
    n_components = check_positive_int(n_components, "n_components")
    n, dim = arr.shape
    if n < 2 * n_components:
        raise TooFewPoints(
            f"need at least {2 * n_components} points for {n_components} components, got {n}"
        )
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_centers(arr, n_components, rng)

    dist2 = ((arr[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assign = dist2.argmin(axis=1)
    weights = np.bincount(assign, minlength=n_components) / n
    means = centers.copy()
    global_var = np.maximum(arr.var(axis=0), _VARIANCE_FLOOR)
    variances = np.tile(global_var, (n_components, 1))
    for j in range(n_components):
        member = arr[assign == j]
        if member.shape[0] > 0:
            means[j] = member.mean(axis=0)
            variances[j] = np.maximum(member.var(axis=0), _VARIANCE_FLOOR)

    trace: list[float] = []
    prev = None
    for _ in range(_EM_MAX_ITER):
        log_prob = _log_prob(arr, weights, means, variances)
        per_point = _logsumexp_rows(log_prob)
        ll = float(per_point.mean())
        if prev is not None and ll < prev:
            weights, means, variances = saved  # roll back the failed step
            break
        trace.append(ll)
        if prev is not None and ll - prev < _EM_TOL:
            break
        prev = ll
        saved = (weights, means, variances)

        resp = np.exp(log_prob - per_point[:, None])
        mass = resp.sum(axis=0)
        weights = mass / n
        active = mass > 1e-12
        new_means = means.copy()
        new_vars = variances.copy()
        new_means[active] = (resp.T[active] @ arr) / mass[active, None]
        second = (resp.T[active] @ (arr * arr)) / mass[active, None]
        new_vars[active] = np.maximum(
            second - new_means[active] ** 2, _VARIANCE_FLOOR
        )
        means, variances = new_means, new_vars

    return GmmModel(
        n_components=n_components,
        weights=weights,
        means=means,
        variances=variances,
        log_likelihoods=tuple(trace),
    )


def summarize_gmm(
    series, seg: Segmentation, n_components: int = 5, seed: int = 0
) -> SummarizedSeries:
    """Mixture tokens: per large segment, the component means of a fitted GMM.

    Segments with at least 2 * n_components rows emit n_components tokens,
    the component means ordered by weight descending (ties by first-channel
    mean ascending); their per-channel variances go to component_variances.
    Smaller segments fall back to a single mean token.
    """
    arr = as_matrix(series)
    _check_segmentation(arr, seg)
    n_components = check_positive_int(n_components, "n_components")
    seeds = np.random.SeedSequence(seed).generate_state(len(seg.segments))
    rows: list[np.ndarray] = []
    provenance: list[tuple[int, int]] = []
    variances: list[np.ndarray | None] = []
    for i, (start, end) in enumerate(seg.segments):
        chunk = arr[start:end]
        if end - start >= 2 * n_components:
            model = fit_gmm(chunk, n_components, int(seeds[i]))
            order = np.lexsort((model.means[:, 0], -model.weights))
            for j in order:
                rows.append(model.means[j])
                provenance.append((start, end))
                variances.append(model.variances[j])
        else:
            rows.append(chunk.mean(axis=0))
            provenance.append((start, end))
            variances.append(None)
    return SummarizedSeries(
        tokens=np.stack(rows),
        provenance=tuple(provenance),
        method="gmm",
        component_variances=tuple(variances),
    )


def summarize_uniform(series, n_chunks: int = 10) -> SummarizedSeries:
    """Mean-pool equal-width chunks, ignoring any detected structure.

    Boundaries sit at round(i * T / n_chunks) (half rounds up); chunks that
    round to zero width are dropped, so the token count is exactly
    min(n_chunks, T).
    """
    arr = as_matrix(series)
    n_chunks = check_positive_int(n_chunks, "n_chunks")
    length = arr.shape[0]
    bounds = [(2 * i * length + n_chunks) // (2 * n_chunks) for i in range(n_chunks + 1)]
    rows = []
    provenance = []
    for start, end in zip(bounds[:-1], bounds[1:]):
        if end > start:
            rows.append(arr[start:end].mean(axis=0))
            provenance.append((start, end))
    return SummarizedSeries(
        tokens=np.stack(rows), provenance=tuple(provenance), method="uniform"
    )
