"""Multi-scale change scoring, adaptive thresholding, and split selection.

A series is scanned with pairs of adjacent windows at several half-window
sizes.  Per size, positions whose split score exceeds the adaptive threshold
mean + alpha * std become candidates; candidates from all sizes are pooled
and pruned by greedy non-maximum suppression with a minimum separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyScale, InvalidInput
from .gaussian import _log_det, _moments, free_parameter_count, split_scores_at
from .validation import as_matrix, check_nonnegative, check_positive_int

# Score spreads below this are treated as "no evidence at this scale".
_SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class TokenizerConfig:
    """Hyperparameters for split detection.

    min_window/max_window/window_step define the half-window sizes scanned;
    stride spaces the candidate positions; alpha scales the adaptive score
    threshold; min_separation is the smallest allowed gap between accepted
    splits; epsilon regularizes covariances; penalty weights the complexity
    term of the single-window code length.
    """

    min_window: int = 5
    max_window: int = 500
    window_step: int = 5
    stride: int = 10
    alpha: float = 2.0
    min_separation: int = 20
    epsilon: float = 1e-6
    penalty: float = 1.0

    def __post_init__(self):
        check_positive_int(self.min_window, "min_window", minimum=2)
        check_positive_int(self.max_window, "max_window", minimum=2)
        if self.max_window < self.min_window:
            raise InvalidInput(
                f"max_window ({self.max_window}) must be >= min_window ({self.min_window})"
            )
        check_positive_int(self.window_step, "window_step")
        check_positive_int(self.stride, "stride")
        check_nonnegative(self.alpha, "alpha")
        check_positive_int(self.min_separation, "min_separation")
        check_nonnegative(self.epsilon, "epsilon")
        check_nonnegative(self.penalty, "penalty")

    def window_sizes(self, length: int) -> list[int]:
        """Half-window sizes applicable to a series of the given length."""
        top = min(self.max_window, length // 2)
        return list(range(self.min_window, top + 1, self.window_step))


@dataclass(frozen=True)
class ChangeCandidate:
    """A scored boundary between the windows [position-w, position) and
    [position, position+w) at half-window size w = scale."""

    position: int
    score: float
    scale: int


@dataclass(frozen=True)
class ScaleStats:
    """Mean and population standard deviation of the scores at one scale."""

    scale: int
    mu: float
    sigma: float


@dataclass(frozen=True)
class Segmentation:
    """Interior split points of a length-T series and the segments they induce.

    Splits are strictly increasing timesteps in (0, T); segments are the
    half-open ranges between consecutive boundaries and tile [0, T) exactly.
    """

    length: int
    splits: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        check_positive_int(self.length, "length")
        splits = tuple(int(s) for s in self.splits)
        object.__setattr__(self, "splits", splits)
        for prev, cur in zip((0,) + splits, splits):
            if cur <= prev:
                raise InvalidInput(f"splits must be strictly increasing, got {splits}")
        if splits and splits[-1] >= self.length:
            raise InvalidInput(
                f"splits must lie inside (0, {self.length}), got {splits}"
            )

    @property
    def segments(self) -> tuple[tuple[int, int], ...]:
        bounds = (0,) + self.splits + (self.length,)
        return tuple(zip(bounds[:-1], bounds[1:]))

    def __len__(self) -> int:
        return len(self.splits) + 1


@dataclass(frozen=True)
class DetectionResult:
    """Everything produced while detecting splits on one series."""

    segmentation: Segmentation
    scale_stats: tuple[ScaleStats, ...]
    accepted: tuple[ChangeCandidate, ...]
    scored: tuple[ChangeCandidate, ...]


def score_scale(series, window: int, cfg: TokenizerConfig) -> list[ChangeCandidate]:
    """Score every stride-spaced boundary position at one half-window size.

    Positions run over {window, window + stride, ...} with position + window
    <= T, each scored by the split score of the two adjacent windows.  Raises
    EmptyScale when 2 * window > T.
    """
    arr = as_matrix(series)
    window = check_positive_int(window, "window", minimum=2)
    length = arr.shape[0]
    if 2 * window > length:
        raise EmptyScale(f"2 * window = {2 * window} exceeds series length {length}")
    positions = np.arange(window, length - window + 1, cfg.stride)
    scores = split_scores_at(arr, positions, window, cfg.epsilon)
    return [
        ChangeCandidate(position=int(pos), score=float(score), scale=window)
        for pos, score in zip(positions, scores)
    ]


def threshold_candidates(
    scored: list[ChangeCandidate], alpha: float
) -> tuple[ScaleStats, list[ChangeCandidate]]:
    """Keep candidates whose score reaches mean + alpha * std at their scale.

    The statistics use the population divisor over the full scored list.  A
    degenerate score spread (sigma < 1e-12) yields no candidates: a constant
    score field carries no change evidence, and without the guard every
    position would pass the threshold.
    """
    if not scored:
        raise EmptyScale("no scored candidates")
    scales = {c.scale for c in scored}
    if len(scales) != 1:
        raise InvalidInput(f"candidates mix scales {sorted(scales)}")
    alpha = check_nonnegative(alpha, "alpha")
    scores = np.array([c.score for c in scored])
    mu = float(scores.mean())
    sigma = float(scores.std())
    stats = ScaleStats(scale=scales.pop(), mu=mu, sigma=sigma)
    if sigma < _SIGMA_FLOOR:
        return stats, []
    cut = mu + alpha * sigma
    return stats, [c for c in scored if c.score >= cut]


def suppress_candidates(
    candidates, min_separation: int
) -> list[ChangeCandidate]:
    """Greedy non-maximum suppression.

    Candidates are visited by descending score (ties: lower position first);
    one is accepted iff no already-accepted candidate lies within
    min_separation timesteps.  Returns the accepted candidates in visiting
    order.
    """
    min_separation = check_positive_int(min_separation, "min_separation")
    order = sorted(candidates, key=lambda c: (-c.score, c.position))
    accepted: list[ChangeCandidate] = []
    for cand in order:
        if all(abs(cand.position - a.position) >= min_separation for a in accepted):
            accepted.append(cand)
    return accepted


def detect(series, cfg: TokenizerConfig | None = None) -> DetectionResult:
    """Run the full multi-scale detection on one series.

    Scores every applicable half-window size and thresholds per scale.  The
    surviving candidates are pooled by position (duplicates keep the maximum
    score; ties keep the smaller scale) and, when more than one size fits the
    series, a position must have passed its threshold at two or more sizes:
    isolated single-size detections are the tail of the per-scale score noise
    and carry no cross-resolution evidence.  Greedy non-maximum suppression
    then enforces the minimum separation.  Series shorter than 2 * min_window
    yield a single segment.
    """
    cfg = cfg or TokenizerConfig()
    arr = as_matrix(series)
    length = arr.shape[0]
    sizes = cfg.window_sizes(length)
    if not sizes:
        return DetectionResult(Segmentation(length), (), (), ())
    stats_per_scale = []
    all_scored: list[ChangeCandidate] = []
    pooled: dict[int, ChangeCandidate] = {}
    sizes_at: dict[int, set[int]] = {}
    for window in sizes:
        scored = score_scale(arr, window, cfg)
        stats, kept = threshold_candidates(scored, cfg.alpha)
        stats_per_scale.append(stats)
        all_scored.extend(scored)
        for cand in kept:
            cur = pooled.get(cand.position)
            if cur is None or cand.score > cur.score:
                pooled[cand.position] = cand
            sizes_at.setdefault(cand.position, set()).add(cand.scale)
    corroborated = [
        cand
        for pos, cand in pooled.items()
        if len(sizes) == 1 or len(sizes_at[pos]) >= 2
    ]
    accepted = suppress_candidates(corroborated, cfg.min_separation)
    splits = tuple(sorted(c.position for c in accepted))
    return DetectionResult(
        segmentation=Segmentation(length, splits),
        scale_stats=tuple(stats_per_scale),
        accepted=tuple(accepted),
        scored=tuple(all_scored),
    )


def detect_splits(series, cfg: TokenizerConfig | None = None) -> Segmentation:
    """Detect splits and return only the resulting segmentation."""
    return detect(series, cfg).segmentation


def segmentation_cost(series, seg: Segmentation, cfg: TokenizerConfig | None = None) -> float:
    """Summed per-segment code length of a segmentation (diagnostic only).

    sum_i ( -(n_i / 2) * log|Sigma_i| + (k / 2) * log(n_i) ) with regularized
    ML covariances.  Length-1 segments use Sigma = epsilon * I, the limit of
    the regularized estimator.
    """
    cfg = cfg or TokenizerConfig()
    arr = as_matrix(series)
    if seg.length != arr.shape[0]:
        raise InvalidInput(
            f"segmentation covers {seg.length} timesteps, series has {arr.shape[0]}"
        )
    dim = arr.shape[1]
    k = free_parameter_count(dim)
    total = 0.0
    for start, end in seg.segments:
        n = end - start
        if n == 1:
            log_det = _log_det(cfg.epsilon * np.eye(dim))
        else:
            log_det = _log_det(_moments(arr[start:end], cfg.epsilon)[1])
        total += -0.5 * n * log_det + 0.5 * k * math.log(n)
    return total
