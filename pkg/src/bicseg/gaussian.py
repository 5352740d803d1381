"""Numerically stable multivariate-Gaussian primitives.

Everything downstream scores windows with two quantities derived here: the
penalized Gaussian code length of a single window, and the two-window split
score that compares "one Gaussian" against "two Gaussians" for adjacent
windows.  Covariances use the maximum-likelihood divisor n, are regularized
by adding ``epsilon * I`` after estimation, and expose their log-determinant
computed from a Cholesky factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, InvalidInput, SingularCovariance
from .validation import as_matrix, check_nonnegative


def free_parameter_count(d: int) -> int:
    """Number of free parameters of a d-dimensional full-covariance Gaussian."""
    return d + d * (d + 1) // 2


@dataclass(frozen=True)
class CovarianceSummary:
    """Maximum-likelihood Gaussian moments of one window.

    Attributes
    ----------
    n : timesteps in the window
    d : number of channels
    mean : length-d mean vector
    cov : d x d regularized covariance (symmetric positive definite for eps > 0)
    log_det : natural log of det(cov)
    """

    n: int
    d: int
    mean: np.ndarray
    cov: np.ndarray
    log_det: float


def _moments(window: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """ML mean and covariance with epsilon added to the diagonal afterwards."""
    n = window.shape[0]
    mean = window.mean(axis=0)
    centered = window - mean
    cov = centered.T @ centered / n
    cov = 0.5 * (cov + cov.T)
    if epsilon:
        cov[np.diag_indices_from(cov)] += epsilon
    return mean, cov


def _log_det(cov: np.ndarray) -> float:
    """log det via Cholesky; raises SingularCovariance when not SPD."""
    if cov.shape[0] == 1:
        v = cov[0, 0]
        if v <= 0.0:
            raise SingularCovariance(
                "covariance is not positive definite; use epsilon > 0 to regularize"
            )
        return math.log(v)
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(
            "covariance is not positive definite; use epsilon > 0 to regularize"
        ) from exc
    return 2.0 * float(np.log(np.diagonal(factor)).sum())


def ml_covariance(window, epsilon: float = 1e-6) -> CovarianceSummary:
    """Estimate the regularized ML covariance of an n x d window.

    cov = (1/n) * sum_t (x_t - mean)(x_t - mean)^T + epsilon * I.
    """
    arr = as_matrix(window, name="window")
    if arr.shape[0] < 2:
        raise InsufficientData(f"covariance needs at least 2 rows, got {arr.shape[0]}")
    epsilon = check_nonnegative(epsilon, "epsilon")
    mean, cov = _moments(arr, epsilon)
    return CovarianceSummary(
        n=arr.shape[0], d=arr.shape[1], mean=mean, cov=cov, log_det=_log_det(cov)
    )


def bic_segment(window, penalty: float = 1.0, epsilon: float = 1e-6) -> float:
    """Penalized Gaussian code length of one window.

    (n/2) * log|Sigma| + penalty * k * log(n), with k = d + d(d+1)/2.
    """
    summary = ml_covariance(window, epsilon)
    k = free_parameter_count(summary.d)
    return 0.5 * summary.n * summary.log_det + penalty * k * math.log(summary.n)


def _split_score(x1: np.ndarray, x2: np.ndarray, joint: np.ndarray, epsilon: float) -> float:
    """Two-window split score on pre-validated windows of identical shape.

    For half-window size w this equals
    2*w*log|S12| - w*(log|S1| + log|S2|) + k*log(2*w),
    i.e. -2*(l_joint - l_sep) + k*log(2*w) for the Gaussian window
    log-likelihoods l_joint = -w*log|S12|, l_sep = -(w/2)*(log|S1| + log|S2|).
    """
    size = x1.shape[0]
    k = free_parameter_count(x1.shape[1])
    ld1 = _log_det(_moments(x1, epsilon)[1])
    ld2 = _log_det(_moments(x2, epsilon)[1])
    ld12 = _log_det(_moments(joint, epsilon)[1])
    return 2.0 * size * ld12 - size * (ld1 + ld2) + k * math.log(2 * size)


def delta_bic(x1, x2, epsilon: float = 1e-6) -> float:
    """Split score for two adjacent windows of identical shape w x d.

    Higher values mean stronger evidence that the windows come from different
    Gaussians.  The joint covariance is estimated on the 2w-row concatenation;
    all three covariances use the ML divisor and epsilon regularization.  For
    identical windows and epsilon = 0 the score reduces exactly to
    k * log(2*w).
    """
    a = as_matrix(x1, name="x1")
    b = as_matrix(x2, name="x2")
    if a.shape != b.shape:
        raise InvalidInput(f"window shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] < 2:
        raise InsufficientData(f"windows need at least 2 rows, got {a.shape[0]}")
    epsilon = check_nonnegative(epsilon, "epsilon")
    return _split_score(a, b, np.concatenate([a, b], axis=0), epsilon)


def _window_log_dets(
    values: np.ndarray, starts: np.ndarray, length: int, epsilon: float
) -> np.ndarray:
    """log|cov| of the windows values[s : s+length) for a batch of starts."""
    view = np.lib.stride_tricks.sliding_window_view(values, length, axis=0)
    windows = view[starts]  # (batch, d, length)
    centered = windows - windows.mean(axis=2, keepdims=True)
    dim = values.shape[1]
    if dim == 1:
        var = np.einsum("bdl,bdl->b", centered, centered) / length + epsilon
        if np.any(var <= 0.0):
            raise SingularCovariance(
                "covariance is not positive definite; use epsilon > 0 to regularize"
            )
        return np.log(var)
    cov = centered @ centered.transpose(0, 2, 1) / length
    cov = 0.5 * (cov + cov.transpose(0, 2, 1))
    if epsilon:
        idx = np.arange(dim)
        cov[:, idx, idx] += epsilon
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance(
            "covariance is not positive definite; use epsilon > 0 to regularize"
        ) from exc
    return 2.0 * np.log(np.diagonal(factor, axis1=1, axis2=2)).sum(axis=1)


def split_scores_at(
    values: np.ndarray, positions: np.ndarray, window: int, epsilon: float
) -> np.ndarray:
    """Vectorized two-window split scores at many boundary positions.

    Same quantity as delta_bic(values[p-window:p], values[p:p+window]) for
    each position p (up to floating-point summation order); used by the
    scanning loop where per-position calls would dominate runtime.
    """
    positions = np.asarray(positions, dtype=np.intp)
    k = free_parameter_count(values.shape[1])
    left = _window_log_dets(values, positions - window, window, epsilon)
    right = _window_log_dets(values, positions, window, epsilon)
    joint = _window_log_dets(values, positions - window, 2 * window, epsilon)
    return 2.0 * window * joint - window * (left + right) + k * math.log(2 * window)
