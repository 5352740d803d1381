import math

import numpy as np
import pytest

from bicseg import (
    ChangeCandidate,
    EmptyScale,
    InvalidInput,
    Regime,
    RegimeSpec,
    Segmentation,
    TokenizerConfig,
    detect,
    detect_splits,
    generate_piecewise_gaussian,
    score_scale,
    segmentation_cost,
    suppress_candidates,
    threshold_candidates,
    znormalize,
)

from oracles import segmentation_cost_oracle


def cand(position, score, scale=10):
    return ChangeCandidate(position=position, score=score, scale=scale)


def test_config_defaults():
    cfg = TokenizerConfig()
    assert (cfg.min_window, cfg.max_window, cfg.window_step) == (5, 500, 5)
    assert (cfg.stride, cfg.alpha, cfg.min_separation) == (10, 2.0, 20)
    assert cfg.epsilon == 1e-6 and cfg.penalty == 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"min_window": 1},
        {"min_window": 30, "max_window": 10},
        {"window_step": 0},
        {"stride": 0},
        {"alpha": -1.0},
        {"min_separation": 0},
        {"epsilon": -1e-9},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(InvalidInput):
        TokenizerConfig(**kwargs)


def test_window_sizes_clamped_to_half_length():
    cfg = TokenizerConfig()
    assert cfg.window_sizes(1000) == list(range(5, 501, 5))
    assert cfg.window_sizes(100) == list(range(5, 51, 5))
    assert cfg.window_sizes(9) == []


def test_score_scale_positions():
    cfg = TokenizerConfig()
    arr = np.random.default_rng(0).normal(size=(100, 1))
    scored = score_scale(arr, 40, cfg)
    assert [c.position for c in scored] == [40, 50, 60]
    assert all(c.scale == 40 for c in scored)


def test_score_scale_constant_series_identity():
    cfg = TokenizerConfig()
    arr = np.full((100, 2), 0.1)
    for window in (5, 10, 25):
        scored = score_scale(arr, window, cfg)
        expected = 5 * math.log(2 * window)  # k = 5 for d = 2
        assert all(c.score == expected for c in scored)


def test_score_scale_step_argmax():
    rng = np.random.default_rng(7)
    arr = np.concatenate([np.zeros(100), np.full(100, 5.0)])[:, None]
    arr += rng.normal(scale=1.0, size=(200, 1))
    scored = score_scale(arr, 20, TokenizerConfig())
    best = max(scored, key=lambda c: c.score)
    assert best.position == 100


def test_score_scale_window_too_large():
    with pytest.raises(EmptyScale):
        score_scale(np.zeros((30, 1)), 16, TokenizerConfig())


def test_threshold_example():
    scored = [cand(p, s) for p, s in zip([10, 20, 30, 40], [0.0, 0.0, 0.0, 10.0])]
    stats, kept = threshold_candidates(scored, alpha=1.0)
    assert stats.mu == pytest.approx(2.5)
    assert stats.sigma == pytest.approx(4.330127018922194, rel=1e-12)
    assert [c.position for c in kept] == [40]
    _, kept = threshold_candidates(scored, alpha=2.0)
    assert kept == []  # threshold ~11.16 exceeds every score


def test_threshold_sigma_guard():
    scored = [cand(p, 3.25) for p in (10, 20, 30)]
    stats, kept = threshold_candidates(scored, alpha=0.0)
    assert stats.sigma == 0.0
    assert kept == []


def test_threshold_errors():
    with pytest.raises(EmptyScale):
        threshold_candidates([], alpha=1.0)
    mixed = [cand(10, 1.0, scale=5), cand(20, 2.0, scale=10)]
    with pytest.raises(InvalidInput):
        threshold_candidates(mixed, alpha=1.0)


def test_nms_example():
    kept = suppress_candidates([cand(100, 10.0), cand(110, 8.0)], min_separation=20)
    assert [c.position for c in kept] == [100]


def test_nms_gap_of_exactly_min_separation_is_kept():
    kept = suppress_candidates([cand(100, 10.0), cand(120, 8.0)], min_separation=20)
    assert sorted(c.position for c in kept) == [100, 120]


def test_nms_tie_breaks_by_lower_position():
    kept = suppress_candidates([cand(110, 5.0), cand(100, 5.0)], min_separation=50)
    assert [c.position for c in kept] == [100]


def test_nms_fuzz_invariants():
    rng = np.random.default_rng(99)
    for _ in range(300):
        n = int(rng.integers(1, 60))
        sep = int(rng.integers(1, 40))
        positions = rng.choice(np.arange(1, 500), size=n, replace=False)
        scores = np.round(rng.normal(size=n) * 4, 1)  # rounding forces ties
        cands = [cand(int(p), float(s)) for p, s in zip(positions, scores)]
        kept = suppress_candidates(cands, sep)
        pos = sorted(c.position for c in kept)
        assert all(b - a >= sep for a, b in zip(pos, pos[1:]))
        # greedy maximality: every rejected candidate collides with an
        # accepted one of higher priority
        order = {(-c.score, c.position): c for c in cands}
        kept_keys = {(-c.score, c.position) for c in kept}
        for key, c in order.items():
            if key in kept_keys:
                continue
            blockers = [
                a
                for a in kept
                if (-a.score, a.position) < key
                and abs(a.position - c.position) < sep
            ]
            assert blockers, f"candidate {c} rejected without a blocker"


def test_detect_constant_series_single_segment():
    seg = detect_splits(np.full((100, 1), 3.0), TokenizerConfig())
    assert seg.splits == ()
    assert seg.segments == ((0, 100),)


def test_detect_two_regime_series():
    spec = RegimeSpec((Regime(100, (0.0,), (1.0,)), Regime(100, (5.0,), (1.0,))), dim=1)
    series, truth = generate_piecewise_gaussian(spec, seed=3)
    cfg = TokenizerConfig(max_window=50)
    seg = detect_splits(znormalize(series), cfg)
    assert len(seg.splits) == 1
    assert 80 <= seg.splits[0] <= 120


def test_detect_short_series_degrades_to_single_segment():
    seg = detect_splits(np.random.default_rng(1).normal(size=(8, 1)), TokenizerConfig())
    assert seg.splits == ()


def test_detect_rejects_non_finite():
    arr = np.random.default_rng(1).normal(size=(50, 1))
    arr[10] = np.inf
    with pytest.raises(InvalidInput):
        detect_splits(arr, TokenizerConfig())


def test_detect_translation_invariance():
    rng = np.random.default_rng(21)
    arr = rng.normal(size=(300, 2))
    arr[150:] += 4.0
    cfg = TokenizerConfig()
    base = detect_splits(arr, cfg)
    shifted = detect_splits(arr + np.array([250.0, -33.0]), cfg)
    assert base.splits == shifted.splits


def test_detect_determinism_and_window_bounds():
    rng = np.random.default_rng(2)
    arr = rng.normal(size=(400, 1))
    arr[200:] += 3.0
    cfg = TokenizerConfig()
    first = detect(arr, cfg)
    second = detect(arr, cfg)
    assert first.segmentation.splits == second.segmentation.splits
    assert [c.score for c in first.scored] == [c.score for c in second.scored]
    for c in first.scored:
        assert c.scale <= c.position <= arr.shape[0] - c.scale
    for a, b in zip(first.segmentation.splits, first.segmentation.splits[1:]):
        assert b - a >= cfg.min_separation


def test_detect_segments_tile_series():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n = int(rng.integers(1, 400))
        arr = rng.normal(size=(n, 1))
        seg = detect_splits(arr, TokenizerConfig())
        segments = seg.segments
        assert segments[0][0] == 0 and segments[-1][1] == n
        assert all(e0 == s1 for (_, e0), (s1, _) in zip(segments, segments[1:]))
        assert sum(e - s for s, e in segments) == n


def test_segmentation_validation():
    with pytest.raises(InvalidInput):
        Segmentation(10, (0,))
    with pytest.raises(InvalidInput):
        Segmentation(10, (3, 3))
    with pytest.raises(InvalidInput):
        Segmentation(10, (12,))
    seg = Segmentation(10, (3, 7))
    assert seg.segments == ((0, 3), (3, 7), (7, 10))
    assert len(seg) == 3


def test_segmentation_cost_constant_frozen_value():
    arr = np.full((100, 1), 4.2)
    cost = segmentation_cost(arr, Segmentation(100), TokenizerConfig())
    assert cost == pytest.approx(695.3806980842018, rel=1e-12)


def test_segmentation_cost_empty_splits_is_one_segment_cost():
    arr = np.random.default_rng(3).normal(size=(60, 2))
    cfg = TokenizerConfig()
    assert segmentation_cost(arr, Segmentation(60), cfg) == segmentation_cost(
        arr, Segmentation(60, ()), cfg
    )


def test_segmentation_cost_matches_oracle():
    rng = np.random.default_rng(8)
    for _ in range(10):
        n = int(rng.integers(20, 120))
        d = int(rng.integers(1, 4))
        arr = rng.normal(size=(n, d))
        n_splits = int(rng.integers(0, 4))
        splits = tuple(sorted(rng.choice(np.arange(2, n - 2), size=n_splits, replace=False)))
        splits = tuple(int(s) for s in splits)
        if len(set(splits)) != len(splits):
            continue
        seg = Segmentation(n, splits)
        cost = segmentation_cost(arr, seg, TokenizerConfig())
        expected = segmentation_cost_oracle(arr.tolist(), splits, 1e-6)
        assert cost == pytest.approx(expected, rel=1e-9)


def test_segmentation_cost_singleton_segment():
    arr = np.random.default_rng(5).normal(size=(10, 1))
    cost = segmentation_cost(arr, Segmentation(10, (1,)), TokenizerConfig())
    expected = segmentation_cost_oracle(arr.tolist(), (1,), 1e-6)
    assert cost == pytest.approx(expected, rel=1e-9)


def test_segmentation_cost_length_mismatch():
    arr = np.zeros((10, 1))
    with pytest.raises(InvalidInput):
        segmentation_cost(arr, Segmentation(12), TokenizerConfig())
