"""Monte Carlo for the Brownian excursion, its area functionals and the
discrete Brownian snake.

Two independent routes produce samples of the ISE center of mass S:

* conditional: draw an excursion e, compute eta(e), return sqrt(eta) * N;
* snake: draw a uniform plane tree through its contour (a Dyck path),
  attach i.i.d. Gaussian displacements to the edges and average the
  spatial position along the (linearly interpolated) contour.

The snake route never touches eta, so agreement between the two is a
genuine check of the identity in law S = sqrt(eta) N.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels
from .montecarlo import McReport, make_report, moment_se, run_chunked

__all__ = [
    "ExcursionPath",
    "ExcursionSamples",
    "IdloiReport",
    "SnakeSample",
    "eta_stat_fast",
    "eta_stat_naive",
    "sample_discrete_snake",
    "sample_dyck_paths",
    "sample_excursion",
    "sample_excursions",
    "sample_s_conditional",
    "vervaat_batch",
    "simulate_excursions",
    "simulate_snake",
    "uniform_head",
    "verify_idloi",
    "xi_stat",
]


@dataclass(frozen=True)
class ExcursionPath:
    """Excursion sampled at t = i/n, i = 0..n.

    ``floor_gap`` is how far the continuous minimum of the underlying bridge
    lies below the grid minimum that was used as the zero level.  It is 0
    for hand-built paths.
    """

    values: np.ndarray
    floor_gap: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("an excursion needs at least two grid values")
        if v[0] != 0 or v[-1] != 0 or np.any(v < 0):
            raise ValueError("excursion must be nonnegative with zero endpoints")
        if self.floor_gap < 0:
            raise ValueError("floor_gap must be >= 0")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size - 1

    @property
    def dt(self) -> float:
        return 1.0 / self.n


def vervaat_batch(n: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``size`` excursions on an n-step grid (shape (size, n+1)) and their floor gaps.

    Gaussian bridge (random walk minus its linear drift to the endpoint),
    then the Vervaat transform: rotate cyclically to start at the grid
    argmin and shift so that it becomes 0.  Between grid points the bridge
    is a Brownian bridge, so its true minimum on each cell is drawn exactly
    from P(min < m) = exp(-2 (a-m)(b-m) / h); the distance from the grid
    minimum down to the lowest of those is the floor gap.
    """
    if n < 2:
        raise ValueError("grid size n must be >= 2")
    h = 1.0 / n
    walk = np.zeros((size, n + 1))
    np.cumsum(rng.standard_normal((size, n)) * math.sqrt(h), axis=1, out=walk[:, 1:])
    bridge = walk - np.outer(walk[:, -1], np.linspace(0.0, 1.0, n + 1))
    bridge[:, -1] = 0.0
    start = np.argmin(bridge[:, :n], axis=1)
    grid_min = bridge[np.arange(size), start]

    a, b = bridge[:, :-1], bridge[:, 1:]
    u = rng.random((size, n))
    cell_min = 0.5 * (a + b - np.sqrt((a - b) ** 2 - 2.0 * h * np.log1p(-u)))
    gaps = grid_min - cell_min.min(axis=1)

    idx = (start[:, None] + np.arange(n + 1)[None, :]) % n
    out = np.take_along_axis(bridge, idx, axis=1)
    out -= grid_min[:, None]
    out[:, -1] = 0.0
    out[:, 0] = 0.0
    return out, gaps


def sample_excursions(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Grid values of ``size`` excursions, one per row; see :func:`vervaat_batch`."""
    return vervaat_batch(n, size, rng)[0]


def sample_excursion(n: int, rng: np.random.Generator) -> ExcursionPath:
    paths, gaps = vervaat_batch(n, 1, rng)
    return ExcursionPath(paths[0], float(gaps[0]))


def _values(path) -> np.ndarray:
    return path.values if isinstance(path, ExcursionPath) else np.asarray(path, dtype=float)


def xi_stat(path) -> float:
    """2 * trapezoid integral of the excursion, measured from its true floor.

    Grid minima overshoot continuous ones by O(n^-1/2); the pairwise minima
    in eta make the same error on both sides and it cancels, but the plain
    area does not, so the floor gap is added back here.
    """
    v = _values(path)
    n = v.size - 1
    gap = path.floor_gap if isinstance(path, ExcursionPath) else 0.0
    return 2.0 * ((v.sum() - 0.5 * (v[0] + v[-1])) / n + gap)


def eta_stat_naive(path) -> float:
    """4/n^2 * sum over grid pairs i < j of min(e_i..e_j), O(n^2)."""
    v = _values(path)
    n = v.size - 1
    total = 0.0
    for i in range(n):
        total += np.minimum.accumulate(v[i:])[1:].sum()
    return 4.0 * total / (n * n)


def eta_stat_fast(path) -> float:
    """Same quantity as :func:`eta_stat_naive` in O(n) with a monotonic stack."""
    v = _values(path)
    n = v.size - 1
    return 4.0 * _kernels.subarray_min_sum(np.ascontiguousarray(v)) / (n * n)


def _eta_rows(paths: np.ndarray) -> np.ndarray:
    n = paths.shape[1] - 1
    return 4.0 * _kernels.subarray_min_sum_rows(paths) / (n * n)


def _xi_rows(paths: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    n = paths.shape[1] - 1
    return 2.0 * ((paths.sum(axis=1) - 0.5 * (paths[:, 0] + paths[:, -1])) / n + gaps)


def sample_s_conditional(path, rng: np.random.Generator) -> float:
    """sqrt(eta(path)) times an independent standard normal."""
    return math.sqrt(eta_stat_fast(path)) * rng.standard_normal()


# discrete snake --------------------------------------------------------------

def sample_dyck_paths(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform Dyck paths of length 2n (rows of +-1, int8).

    Shuffle n up-steps with n+1 down-steps; exactly one cyclic rotation,
    the one starting right after the first minimum of the partial sums,
    stays nonnegative until its final step.  Dropping that step leaves a
    uniform Dyck path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    L = 2 * n + 1
    base = np.concatenate([np.ones(n, np.int8), -np.ones(n + 1, np.int8)])
    seqs = rng.permuted(np.broadcast_to(base, (size, L)), axis=1)
    partial = np.cumsum(seqs, axis=1, dtype=np.int64)
    first_min = np.argmin(partial, axis=1)
    idx = (first_min[:, None] + 1 + np.arange(L)[None, :]) % L
    rotated = np.take_along_axis(seqs, idx, axis=1)
    return np.ascontiguousarray(rotated[:, : 2 * n])


def edge_sd(n: int) -> float:
    """Edge displacement s.d.; variance 2/sqrt(2n) gives lifetime 2e."""
    return math.sqrt(2.0 / math.sqrt(2.0 * n))


@dataclass(frozen=True)
class SnakeSample:
    steps: np.ndarray  # Dyck path, length 2n
    heads: np.ndarray  # spatial position at contour times 0..2n
    s_value: float

    @property
    def excursion(self) -> ExcursionPath:
        """Rescaled contour, an approximation of e on a 2n-step grid."""
        n = self.steps.size // 2
        h = np.concatenate([[0], np.cumsum(self.steps)]).astype(float)
        return ExcursionPath(h / math.sqrt(2 * n))


def sample_discrete_snake(n: int, rng: np.random.Generator) -> SnakeSample:
    """One discrete snake over a uniform plane tree with n edges.

    ``s_value`` averages the head along the interpolated contour rather
    than over the 2n+1 vertex visits; the vertex average sits about half an
    edge too shallow, a relative bias near 1/sqrt(2n) (-1.8% at n=2000).
    """
    sd = edge_sd(n)
    steps = sample_dyck_paths(n, 1, rng)[0]
    disp = rng.standard_normal(n) * sd
    wiggles = rng.standard_normal(n) * (sd / math.sqrt(12.0))
    heads = np.empty(2 * n + 1)
    s = _kernels.snake_heads(steps, disp, wiggles, heads)
    return SnakeSample(steps=steps, heads=heads, s_value=float(s))


def uniform_head(sample: SnakeSample, rng: np.random.Generator) -> float:
    """Head position at a uniformly chosen contour time."""
    return float(sample.heads[rng.integers(0, sample.heads.size)])


# batch drivers ---------------------------------------------------------------

@dataclass
class ExcursionSamples:
    n: int
    seed: int
    xi: np.ndarray
    eta: np.ndarray
    s: np.ndarray
    seconds: float = 0.0

    def report(self, which: str) -> McReport:
        return make_report(getattr(self, which), self.n, self.seed, self.seconds, label=which)


def simulate_excursions(n: int, n_samples: int, seed: int, workers: int = 1) -> ExcursionSamples:
    """xi, eta and the conditional S = sqrt(eta) N for each sampled excursion."""

    def work(size, rng):
        paths, gaps = vervaat_batch(n, size, rng)
        eta = _eta_rows(paths)
        xi = _xi_rows(paths, gaps)
        s = np.sqrt(eta) * rng.standard_normal(size)
        return xi, eta, s

    t0 = time.perf_counter()
    parts = run_chunked(work, n_samples, seed, workers)
    xi, eta, s = (np.concatenate(p) for p in zip(*parts))
    return ExcursionSamples(n, seed, xi, eta, s, time.perf_counter() - t0)


def simulate_snake(n: int, n_samples: int, seed: int, workers: int = 1) -> np.ndarray:
    """S values from independent discrete snakes with n edges each."""
    sd = edge_sd(n)

    def work(size, rng):
        steps = sample_dyck_paths(n, size, rng)
        disp = rng.standard_normal((size, n)) * sd
        wiggles = rng.standard_normal((size, n)) * (sd / math.sqrt(12.0))
        return _kernels.snake_mean_rows(steps, disp, wiggles)

    return np.concatenate(run_chunked(work, n_samples, seed, workers))


@dataclass
class IdloiReport:
    n: int
    n_samples: int
    seed: int
    orders: tuple[int, ...]
    snake_moments: list[float]
    conditional_moments: list[float]
    combined_se: list[float]
    ks_distance: float
    ks_pvalue: float
    seconds: float = 0.0

    @property
    def gaps(self) -> list[float]:
        return [abs(a - b) for a, b in zip(self.snake_moments, self.conditional_moments)]

    def gap_in_se(self, order: int) -> float:
        i = self.orders.index(order)
        return self.gaps[i] / self.combined_se[i]

    @property
    def ks_tolerance(self) -> float:
        return 0.01 + 3.0 / math.sqrt(self.n_samples)

    def passed(self, orders=(2, 4)) -> bool:
        return all(self.gap_in_se(k) < 3 for k in orders) and self.ks_distance < self.ks_tolerance

    def to_dict(self, timestamp: bool = True) -> dict:
        d = {
            "n": self.n,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "orders": list(self.orders),
            "snake_moments": self.snake_moments,
            "conditional_moments": self.conditional_moments,
            "combined_se": self.combined_se,
            "gap_in_se": [self.gap_in_se(k) for k in self.orders],
            "ks_distance": self.ks_distance,
            "ks_tolerance": self.ks_tolerance,
            "ks_pvalue": self.ks_pvalue,
            "passed": self.passed(),
        }
        if timestamp:
            d["seconds"] = self.seconds
        return d


def verify_idloi(n: int, n_samples: int, seed: int, workers: int = 1,
                 orders=(1, 2, 4, 6)) -> IdloiReport:
    """Compare snake S samples against sqrt(eta) N samples from excursions.

    The two populations use disjoint RNG streams (``seed`` and ``seed + 1``).
    """
    t0 = time.perf_counter()
    snake = simulate_snake(n, n_samples, seed, workers)
    cond = simulate_excursions(n, n_samples, seed + 1, workers).s
    a_m = [float(np.mean(snake**k)) for k in orders]
    b_m = [float(np.mean(cond**k)) for k in orders]
    se = [math.hypot(moment_se(snake, k), moment_se(cond, k)) for k in orders]
    ks = stats.ks_2samp(snake, cond)
    return IdloiReport(n, n_samples, seed, tuple(orders), a_m, b_m, se,
                       float(ks.statistic), float(ks.pvalue), time.perf_counter() - t0)
