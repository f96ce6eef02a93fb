"""Uniform labeled trees and their Wiener index.

For a uniform labeled tree on n vertices (a Galton-Watson tree with
Poisson(1) offspring conditioned on size n), n^(-5/2) times the Wiener
index over unordered pairs converges in law to xi - eta.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import stats

from . import _kernels
from .excursion import simulate_excursions
from .montecarlo import McReport, make_report, run_chunked

__all__ = [
    "LabeledTree",
    "WienerScalingResult",
    "all_trees",
    "prufer_to_tree",
    "sample_cayley_tree",
    "wiener_brute",
    "wiener_index",
    "wiener_samples",
    "wiener_scaling_report",
]

BRUTE_LIMIT = 10**4
CONVENTIONS = ("ordered", "unordered")


@dataclass(frozen=True, eq=False)
class LabeledTree:
    """Tree on vertices 0..n-1 given by a parent array (root has parent -1)."""

    parent: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.parent, dtype=np.int64)
        object.__setattr__(self, "parent", p)
        n = p.size
        if n < 1:
            raise ValueError("a tree needs at least one vertex")
        roots = np.flatnonzero(p < 0)
        if roots.size != 1:
            raise ValueError("exactly one root (parent -1) is required")
        if np.any(p >= n):
            raise ValueError("parent index out of range")
        if self.order.size != n - 1:
            raise ValueError("parent array has a cycle or is disconnected")

    @property
    def n(self) -> int:
        return self.parent.size

    @property
    def root(self) -> int:
        return int(np.flatnonzero(self.parent < 0)[0])

    @classmethod
    def from_edges(cls, n: int, edges, root: int = 0) -> "LabeledTree":
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        parent = np.full(n, -2, dtype=np.int64)
        parent[root] = -1
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if parent[w] == -2:
                    parent[w] = u
                    stack.append(w)
        if np.any(parent == -2) or len(edges) != n - 1:
            raise ValueError("edges do not form a spanning tree")
        return cls(parent)

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(v), int(u)) for v, u in enumerate(self.parent) if u >= 0]

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for v, u in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @cached_property
    def order(self) -> np.ndarray:
        """Non-root vertices, each listed before its parent."""
        children = [[] for _ in range(self.parent.size)]
        root = -1
        for v, u in enumerate(self.parent):
            if u < 0:
                root = v
            else:
                children[u].append(v)
        bfs = [root]
        for u in bfs:
            bfs.extend(children[u])
        return np.array(bfs[:0:-1], dtype=np.int64)

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        adj = self.adjacency
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.array([w for a in adj for w in a], dtype=np.int64)
        return indptr, indices


def prufer_to_tree(seq, n: int | None = None) -> LabeledTree:
    """Decode a Prufer sequence over {0..n-1}; the tree is rooted at n-1."""
    seq = np.asarray(seq, dtype=np.int64)
    if n is None:
        n = seq.size + 2
    if seq.size != max(n - 2, 0):
        raise ValueError("a Prufer sequence for n vertices has length n-2")
    if n == 1:
        return LabeledTree(np.array([-1]))
    if seq.size and (seq.min() < 0 or seq.max() >= n):
        raise ValueError("Prufer entries must lie in [0, n)")
    parent = np.empty(n, dtype=np.int64)
    order = np.empty(n - 1, dtype=np.int64)
    _kernels.prufer_decode(seq, n, parent, order)
    tree = LabeledTree(parent)
    tree.__dict__["order"] = order
    return tree


def sample_cayley_tree(n: int, rng: np.random.Generator) -> LabeledTree:
    """Uniform over the n^(n-2) labeled trees on n vertices."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return prufer_to_tree(rng.integers(0, n, size=max(n - 2, 0)), n)


def all_trees(n: int):
    """Every labeled tree on n vertices, once each, via all Prufer sequences."""
    for seq in itertools.product(range(n), repeat=max(n - 2, 0)):
        yield prufer_to_tree(np.array(seq, dtype=np.int64), n)


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")


def wiener_index(tree: LabeledTree, convention: str = "unordered") -> int:
    """Sum of pairwise distances in O(n): each edge whose removal leaves
    components of sizes s and n-s lies on s (n-s) shortest paths."""
    _check_convention(convention)
    if tree.n == 1:
        return 0
    total = int(_kernels.edge_split_sum(tree.parent, tree.order, tree.n))
    return 2 * total if convention == "ordered" else total


def wiener_brute(tree: LabeledTree, convention: str = "unordered") -> int:
    """All-pairs BFS; quadratic, meant as an oracle for :func:`wiener_index`."""
    _check_convention(convention)
    if tree.n > BRUTE_LIMIT:
        raise ValueError(f"brute force is capped at n = {BRUTE_LIMIT}")
    indptr, indices = tree.csr()
    ordered = int(_kernels.all_pairs_bfs_sum(indptr, indices, tree.n))
    return ordered if convention == "ordered" else ordered // 2


def wiener_samples(n: int, n_samples: int, seed: int, workers: int = 1) -> np.ndarray:
    """Unordered Wiener indices of independent uniform labeled trees."""
    if n < 3:
        raise ValueError("n must be >= 3")

    def work(size, rng):
        seqs = rng.integers(0, n, size=(size, n - 2))
        return _kernels.wiener_prufer_rows(seqs, n)

    return np.concatenate(run_chunked(work, n_samples, seed, workers))


@dataclass
class WienerScalingResult:
    report: McReport
    convention: str
    target_mean: float
    normalized: np.ndarray
    reference: np.ndarray | None = None
    ks_distance: float | None = None

    @property
    def mean_gap(self) -> float:
        return abs(self.report.mean - self.target_mean)

    def allowance(self, c: float = 2.0) -> float:
        return 3 * self.report.std_error + c / math.sqrt(self.report.grid_n)

    def to_dict(self, timestamp: bool = True) -> dict:
        return {
            "report": self.report.to_dict(timestamp),
            "convention": self.convention,
            "target_mean": self.target_mean,
            "mean_gap": self.mean_gap,
            "allowance": self.allowance(),
            "ks_distance": self.ks_distance,
            "reference_mean": None if self.reference is None else float(self.reference.mean()),
        }


def wiener_scaling_report(n: int, n_samples: int, seed: int, convention: str = "ordered",
                          workers: int = 1, reference_samples: int = 0,
                          reference_grid: int = 2000) -> WienerScalingResult:
    """Moments of n^(-5/2) w over uniform labeled trees.

    The target mean is E(xi - eta) = sqrt(pi/8) for the unordered sum and
    twice that for the ordered one.  With ``reference_samples`` > 0, xi - eta
    is also simulated from excursions (seed + 1) and the Kolmogorov-Smirnov
    distance to the normalized Wiener indices is reported.
    """
    _check_convention(convention)
    t0 = time.perf_counter()
    w = wiener_samples(n, n_samples, seed, workers).astype(float)
    factor = 2.0 if convention == "ordered" else 1.0
    normalized = factor * w / n**2.5
    report = make_report(normalized, n, seed, time.perf_counter() - t0,
                         label=f"wiener/{convention}")
    target = factor * math.sqrt(math.pi / 8)
    result = WienerScalingResult(report, convention, target, normalized)
    if reference_samples:
        ex = simulate_excursions(reference_grid, reference_samples, seed + 1, workers)
        zeta = factor * (ex.xi - ex.eta)
        result.reference = zeta
        result.ks_distance = float(stats.ks_2samp(normalized, zeta).statistic)
    return result
