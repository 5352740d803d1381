"""Seeded corpus builders shared across evaluation and acceptance tests."""

import numpy as np

from bicseg import Dataset, Regime, RegimeSpec, TimeSeries, generate_piecewise_gaussian


def four_regime_spec(rng, dim):
    """Four locally stationary regimes over 1000 steps, each at least 100
    long, with consecutive mean shifts of 3-5 noise-stdev units."""
    while True:
        cuts = np.sort(rng.integers(100, 901, size=3))
        lengths = np.diff(np.concatenate([[0], cuts, [1000]]))
        if (lengths >= 100).all():
            break
    means = [np.zeros(dim)]
    for _ in range(3):
        step = rng.choice([-1.0, 1.0], size=dim) * rng.uniform(3.0, 5.0, size=dim)
        means.append(means[-1] + step)
    regimes = tuple(
        Regime(int(n), tuple(m), tuple(np.ones(dim))) for n, m in zip(lengths, means)
    )
    return RegimeSpec(regimes, dim=dim)


def ucr_scale_spec(rng):
    """Sensor-archive stand-in: 400-600 steps of short alternating regimes
    with heterogeneous amplitudes, baseline drifts, and noise scales."""
    total = int(rng.integers(400, 601))
    lengths = []
    acc = 0
    while acc < total:
        n = int(rng.integers(15, 46))
        lengths.append(min(n, total - acc))
        acc += lengths[-1]
    if lengths[-1] < 5 and len(lengths) > 1:
        lengths[-2] += lengths.pop()
    regimes = []
    level = 0.0
    sign = 1.0
    for n in lengths:
        amplitude = float(np.exp(rng.uniform(np.log(2.0), np.log(12.0))))
        if rng.random() < 0.2:
            level += float(rng.choice([-1.0, 1.0]) * rng.uniform(3.0, 10.0))
        noise = float(np.exp(rng.uniform(np.log(0.4), np.log(2.0))))
        regimes.append(Regime(n, (level + sign * amplitude,), (noise,)))
        sign = -sign
    return RegimeSpec(tuple(regimes), dim=1)


def two_class_specs():
    """Two-regime classes that differ in the direction of the second regime."""
    up = RegimeSpec((Regime(250, (0.0,), (1.0,)), Regime(250, (5.0,), (1.0,))), dim=1)
    down = RegimeSpec((Regime(250, (0.0,), (1.0,)), Regime(250, (-5.0,), (1.0,))), dim=1)
    return up, down


def two_class_dataset(name, n_per_class, seed_base):
    """Balanced labeled dataset of the two synthetic classes."""
    spec_up, spec_down = two_class_specs()
    series = []
    for i in range(n_per_class):
        s_up, _ = generate_piecewise_gaussian(spec_up, seed=seed_base + 2 * i)
        s_down, _ = generate_piecewise_gaussian(spec_down, seed=seed_base + 2 * i + 1)
        series.append(TimeSeries(id=f"{name}-up-{i}", values=s_up.values, label="up"))
        series.append(
            TimeSeries(id=f"{name}-down-{i}", values=s_down.values, label="down")
        )
    return Dataset(name=name, series=tuple(series))
