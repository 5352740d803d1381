"""Seeded generators for piecewise-stationary Gaussian series.

Each regime draws i.i.d. samples from a diagonal Gaussian; the interior
regime boundaries are returned as ground-truth change points.  A separate
helper corrupts a series with additive Gaussian noise for robustness
experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import TimeSeries
from .errors import InvalidInput
from .validation import check_nonnegative, check_positive_int


@dataclass(frozen=True)
class Regime:
    """One locally stationary stretch: length timesteps of N(mean, stdev^2)."""

    length: int
    mean: tuple[float, ...]
    stdev: tuple[float, ...]


@dataclass(frozen=True)
class RegimeSpec:
    """An ordered list of regimes, all with the same dimensionality."""

    regimes: tuple[Regime, ...]
    dim: int = 1

    def __post_init__(self):
        check_positive_int(self.dim, "dim")
        if not self.regimes:
            raise InvalidInput("regime list is empty")
        normalized = []
        for i, regime in enumerate(self.regimes):
            length = check_positive_int(regime.length, f"regime {i} length")
            mean = _as_channel_tuple(regime.mean, self.dim, f"regime {i} mean")
            stdev = _as_channel_tuple(regime.stdev, self.dim, f"regime {i} stdev")
            for s in stdev:
                check_nonnegative(s, f"regime {i} stdev")
            normalized.append(Regime(length=length, mean=mean, stdev=stdev))
        object.__setattr__(self, "regimes", tuple(normalized))

    @property
    def total_length(self) -> int:
        return sum(r.length for r in self.regimes)

    @property
    def true_splits(self) -> tuple[int, ...]:
        bounds = np.cumsum([r.length for r in self.regimes])
        return tuple(int(b) for b in bounds[:-1])


def _as_channel_tuple(value, dim: int, name: str) -> tuple[float, ...]:
    arr = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be a scalar or length-{dim} vector")
    if arr.shape[0] == 1 and dim > 1:
        arr = np.repeat(arr, dim)
    if arr.shape[0] != dim:
        raise InvalidInput(f"{name} has {arr.shape[0]} channels, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite values")
    return tuple(float(v) for v in arr)


def generate_piecewise_gaussian(
    spec: RegimeSpec, seed: int = 0
) -> tuple[TimeSeries, list[int]]:
    """Sample a series from a regime spec; returns it with the true splits.

    Deterministic per (spec, seed).
    """
    rng = np.random.default_rng(seed)
    blocks = [
        rng.normal(loc=r.mean, scale=r.stdev, size=(r.length, spec.dim))
        for r in spec.regimes
    ]
    values = np.concatenate(blocks, axis=0)
    series = TimeSeries(id=f"synth:{seed}", values=values)
    return series, list(spec.true_splits)


def add_gaussian_noise(series, sigma: float, seed: int = 0) -> TimeSeries:
    """Add i.i.d. N(0, sigma^2) to every entry; sigma = 0 is the identity."""
    if not np.isfinite(sigma) or sigma < 0:
        raise InvalidInput(f"sigma must be >= 0, got {sigma}")
    if isinstance(series, TimeSeries):
        sid, label, values = series.id, series.label, series.values
    else:
        sid, label, values = "", None, series
    arr = np.asarray(values, dtype=np.float64)
    rng = np.random.default_rng(seed)
    noisy = arr + rng.normal(loc=0.0, scale=sigma, size=arr.shape)
    return TimeSeries(id=sid, values=noisy, label=label)
