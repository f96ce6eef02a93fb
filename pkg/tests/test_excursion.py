import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from iselab import _kernels
from iselab.excursion import (
    ExcursionPath,
    edge_sd,
    eta_stat_fast,
    eta_stat_naive,
    sample_discrete_snake,
    sample_dyck_paths,
    sample_excursion,
    sample_excursions,
    simulate_excursions,
    simulate_snake,
    uniform_head,
    vervaat_batch,
    xi_stat,
)
from iselab.montecarlo import chunk_rng

SQRT_PI_8 = math.sqrt(math.pi / 8)


def brute_min_sum(v):
    return sum(min(v[i:j + 1]) for i in range(len(v)) for j in range(i + 1, len(v)))


@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(-1e3, 1e3)))
def test_subarray_min_sum_matches_brute(v):
    assert math.isclose(_kernels.subarray_min_sum(v), brute_min_sum(list(v)), rel_tol=1e-9, abs_tol=1e-6)


@given(arrays(np.int64, st.integers(2, 30), elements=st.integers(0, 3)).map(lambda a: a.astype(float)))
def test_subarray_min_sum_with_ties(v):
    assert _kernels.subarray_min_sum(v) == brute_min_sum(list(v))


def test_eta_fast_matches_naive():
    rng = chunk_rng(7, 0)
    for n in (2, 3, 17, 128, 511):
        for _ in range(5):
            p = sample_excursion(n, rng)
            a, b = eta_stat_fast(p), eta_stat_naive(p)
            assert abs(a - b) <= 1e-12 * abs(b)


def test_hand_built_path():
    p = ExcursionPath(np.array([0.0, 1.0, 2.0, 1.0, 0.0]))
    assert xi_stat(p) == pytest.approx(2.0)
    # interior pairs (1,2), (1,3), (2,3) have minima 1, 1, 1
    assert eta_stat_naive(p) == pytest.approx(4 * 3 / 16)
    assert eta_stat_fast(p) == pytest.approx(4 * 3 / 16)


def test_excursion_path_validation():
    with pytest.raises(ValueError):
        ExcursionPath(np.array([0.0, -1.0, 0.0]))
    with pytest.raises(ValueError):
        ExcursionPath(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        ExcursionPath(np.array([0.0]))
    with pytest.raises(ValueError):
        ExcursionPath(np.array([0.0, 1.0, 0.0]), floor_gap=-0.1)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 300), st.integers(0, 2**32))
def test_vervaat_output_is_an_excursion(n, seed):
    paths, gaps = vervaat_batch(n, 4, chunk_rng(seed, 0))
    assert paths.shape == (4, n + 1)
    assert np.all(paths >= 0)
    assert np.all(paths[:, 0] == 0) and np.all(paths[:, -1] == 0)
    assert np.all(gaps >= 0)
    for row, g in zip(paths, gaps):
        ExcursionPath(row, float(g))


def test_floor_gap_scale():
    # the grid minimum overshoots the true one by O(n^-1/2)
    g200 = vervaat_batch(200, 4000, chunk_rng(1, 0))[1].mean()
    g3200 = vervaat_batch(3200, 1000, chunk_rng(2, 0))[1].mean()
    assert 2.5 < g200 / g3200 < 6


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 200), st.integers(0, 2**32))
def test_dyck_paths_valid(n, seed):
    steps = sample_dyck_paths(n, 8, chunk_rng(seed, 0))
    assert steps.shape == (8, 2 * n)
    partial = np.cumsum(steps, axis=1)
    assert np.all(partial >= 0)
    assert np.all(partial[:, -1] == 0)


def test_dyck_paths_uniform():
    # five Dyck paths of length 6, each with probability 1/5
    steps = sample_dyck_paths(3, 50000, chunk_rng(3, 0))
    counts = Counter(map(bytes, steps))
    assert len(counts) == 5
    assert stats.chisquare(list(counts.values())).pvalue > 1e-4


def test_snake_heads_small_tree():
    steps = np.array([1, 1, -1, -1, 1, -1], dtype=np.int8)
    disp = np.array([0.5, -2.0, 1.0])
    wig = np.array([0.1, 0.2, 0.3])
    heads = np.empty(7)
    s = _kernels.snake_heads(steps, disp, wig, heads)
    assert list(heads) == [0.0, 0.5, -1.5, 0.5, 0.0, 1.0, 0.0]
    edge_means = [0.25 + 0.1, 0.5 - 1.0 + 0.2, 0.5 + 0.3]
    assert s == pytest.approx(sum(edge_means) / 3)


def test_snake_sample_structure():
    rng = chunk_rng(11, 0)
    sn = sample_discrete_snake(50, rng)
    assert sn.heads.size == 101 and sn.heads[0] == 0 and sn.heads[-1] == 0
    assert sn.excursion.n == 100
    assert uniform_head(sn, rng) in set(sn.heads)
    assert edge_sd(50) ** 2 == pytest.approx(2 / math.sqrt(100))


def test_determinism_across_workers():
    a = simulate_excursions(100, 1700, seed=5, workers=1)
    b = simulate_excursions(100, 1700, seed=5, workers=3)
    for name in ("xi", "eta", "s"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    assert np.array_equal(simulate_snake(60, 1200, 9, 1), simulate_snake(60, 1200, 9, 2))
    c = simulate_excursions(100, 1700, seed=6)
    assert not np.array_equal(a.eta, c.eta)


def test_small_monte_carlo_means():
    n = 400
    ex = simulate_excursions(n, 6000, seed=123)
    for name, target in (("eta", SQRT_PI_8), ("xi", 2 * SQRT_PI_8)):
        rep = ex.report(name)
        assert abs(rep.mean - target) < 4 * rep.std_error + 1 / math.sqrt(n)
    snake = simulate_snake(n, 6000, seed=321)
    se = np.std(snake**2, ddof=1) / math.sqrt(snake.size)
    assert abs(np.mean(snake**2) - SQRT_PI_8) < 4 * se + 1 / math.sqrt(n)


def test_sample_excursions_shape():
    rows = sample_excursions(10, 3, chunk_rng(0, 0))
    assert rows.shape == (3, 11)
    with pytest.raises(ValueError):
        sample_excursions(1, 3, chunk_rng(0, 0))
    with pytest.raises(ValueError):
        sample_dyck_paths(0, 3, chunk_rng(0, 0))
