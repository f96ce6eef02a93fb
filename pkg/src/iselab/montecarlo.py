"""Seeded RNG streams and summary reports shared by the samplers.

A run with seed ``s`` is cut into fixed-size chunks; chunk ``c`` draws from
``PCG64(SeedSequence(s, spawn_key=(c,)))``.  The chunking does not depend
on the worker count, and per-sample values are concatenated in chunk order
before any reduction, so serial and threaded runs agree bit for bit.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "CHUNK",
    "McReport",
    "RNG_ALGORITHM",
    "chunk_rng",
    "default_seed",
    "make_report",
    "run_chunked",
    "moment_se",
]

RNG_ALGORITHM = "numpy.PCG64 / SeedSequence(seed, spawn_key=(chunk,))"
CHUNK = 500


def default_seed() -> int:
    return int(os.environ.get("ISELAB_SEED", "20240101"))


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def run_chunked(worker: Callable[[int, np.random.Generator], object], n_samples: int,
                seed: int, workers: int = 1, chunk: int = CHUNK) -> list:
    """Call ``worker(size, rng)`` per chunk; results come back in chunk order."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    sizes = [min(chunk, n_samples - start) for start in range(0, n_samples, chunk)]
    jobs = [(size, chunk_rng(seed, c)) for c, size in enumerate(sizes)]
    if workers <= 1:
        return [worker(size, rng) for size, rng in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: worker(*job), jobs))


@dataclass
class McReport:
    n_samples: int
    grid_n: int
    seed: int
    mean: float
    std_error: float
    raw_moments: list[float]
    seconds: float = field(default=0.0, compare=False)
    label: str = ""

    def to_dict(self, timestamp: bool = True) -> dict:
        d = asdict(self)
        if not timestamp:
            d.pop("seconds")
        return d

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp), sort_keys=True)


def moment_se(samples: np.ndarray, order: int) -> float:
    """Standard error of the empirical raw moment of the given order."""
    powers = np.asarray(samples, dtype=float) ** order
    return float(powers.std(ddof=1) / math.sqrt(powers.size))


def make_report(samples: np.ndarray, grid_n: int, seed: int, seconds: float = 0.0,
                label: str = "", max_order: int = 8) -> McReport:
    x = np.asarray(samples, dtype=float)
    return McReport(
        n_samples=int(x.size),
        grid_n=int(grid_n),
        seed=int(seed),
        mean=float(x.mean()),
        std_error=float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else math.nan,
        raw_moments=[float(np.mean(x**j)) for j in range(1, max_order + 1)],
        seconds=seconds,
        label=label,
    )
