"""scikit-learn style wrappers so the pipeline composes with the ecosystem.

SeriesSummarizer is a stateless transformer turning each series into its
token matrix; TokenSequenceKnn is a 1-NN classifier over variable-length
token sequences using the DTW distance.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .dataio import TimeSeries
from .errors import InvalidInput
from .evaluate import dtw_distance
from .pipeline import METHODS, SummaryResult, summarize_series
from .tokenizer import TokenizerConfig


def _as_series_list(X) -> list:
    """A bare array (or TimeSeries) is a single series; otherwise a sequence."""
    if isinstance(X, (TimeSeries, np.ndarray)):
        return [X]
    return list(X)


class SeriesSummarizer(BaseEstimator, TransformerMixin):
    """Compress each time series into a short sequence of summary tokens.

    Parameters mirror TokenizerConfig plus the summarization method; see
    that class for their meaning.  ``transform`` returns one token matrix
    (T'_i x d) per input series; token counts vary per series, so the output
    is a list rather than a rectangular array.

    >>> SeriesSummarizer(max_window=50).fit_transform([x])[0]
    """

    def __init__(
        self,
        method: str = "mean",
        min_window: int = 5,
        max_window: int = 500,
        window_step: int = 5,
        stride: int = 10,
        alpha: float = 2.0,
        min_separation: int = 20,
        epsilon: float = 1e-6,
        penalty: float = 1.0,
        n_components: int = 5,
        n_chunks: int = 10,
        random_state: int = 0,
    ):
        self.method = method
        self.min_window = min_window
        self.max_window = max_window
        self.window_step = window_step
        self.stride = stride
        self.alpha = alpha
        self.min_separation = min_separation
        self.epsilon = epsilon
        self.penalty = penalty
        self.n_components = n_components
        self.n_chunks = n_chunks
        self.random_state = random_state

    def _config(self) -> TokenizerConfig:
        if self.method not in METHODS:
            raise InvalidInput(f"method must be one of {METHODS}, got {self.method!r}")
        return TokenizerConfig(
            min_window=self.min_window,
            max_window=self.max_window,
            window_step=self.window_step,
            stride=self.stride,
            alpha=self.alpha,
            min_separation=self.min_separation,
            epsilon=self.epsilon,
            penalty=self.penalty,
        )

    def fit(self, X, y=None):
        """Validate parameters; the transformer keeps no fitted state."""
        self._config()
        return self

    def transform(self, X) -> list[np.ndarray]:
        """Summarize each series; returns a list of token matrices."""
        return [result.summary.tokens for result in self._results(X)]

    def summarize(self, series) -> SummaryResult:
        """Full pipeline result (segmentation, stats, tokens) for one series."""
        return self._results([series])[0]

    def _results(self, X) -> list[SummaryResult]:
        cfg = self._config()
        return [
            summarize_series(
                series,
                cfg,
                method=self.method,
                seed=self.random_state,
                n_components=self.n_components,
                n_chunks=self.n_chunks,
            )
            for series in _as_series_list(X)
        ]


class TokenSequenceKnn(BaseEstimator, ClassifierMixin):
    """1-nearest-neighbor classifier over token sequences with DTW distance.

    ``X`` is a sequence of token matrices (variable lengths allowed).  Ties
    keep the earliest training example.
    """

    def __init__(self):
        pass

    def fit(self, X, y):
        sequences = _as_series_list(X)
        labels = list(y)
        if not sequences:
            raise InvalidInput("training set is empty")
        if len(sequences) != len(labels):
            raise InvalidInput(f"{len(sequences)} sequences but {len(labels)} labels")
        self.train_sequences_ = [np.asarray(s, dtype=np.float64) for s in sequences]
        self.train_labels_ = labels
        self.classes_ = np.unique(labels)
        return self

    def predict(self, X):
        if not hasattr(self, "train_sequences_"):
            raise InvalidInput("classifier is not fitted")
        out = []
        for seq in _as_series_list(X):
            best_label = None
            best_dist = np.inf
            for ref, label in zip(self.train_sequences_, self.train_labels_):
                dist = dtw_distance(seq, ref)
                if dist < best_dist:
                    best_dist = dist
                    best_label = label
            out.append(best_label)
        return np.asarray(out)
