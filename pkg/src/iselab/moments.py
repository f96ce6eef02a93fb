"""Exact moments of eta and of the ISE center of mass S.

The integer sequence ``a_k`` (a_1 = 1) obeys

    a_k = 2 (5k-4)(5k-6) a_{k-1} + sum_{i=1}^{k-1} a_i a_{k-i},

and every moment is a closed form in ``a_k``:

    E eta^k  = k! sqrt(pi) / (2**((7k-4)/2) Gamma((5k-1)/2)) * a_k
    E S^(2k) = (2k)! sqrt(pi) / (2**((9k-4)/2) Gamma((5k-1)/2)) * a_k

The second one is also E eta^k times the Gaussian moment E N^(2k).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import SQRT_PI, ExactConstant, half_gamma

__all__ = [
    "MomentTable",
    "compute_a",
    "compute_b",
    "eta_moment",
    "s_moment",
    "gaussian_even_moment",
    "moment_table",
]


_A = [0, 1]  # _A[0] is a placeholder; the sequence starts at a_1
_A_LOCK = threading.Lock()


def _a_tuple(max_k: int) -> tuple[int, ...]:
    with _A_LOCK:
        for k in range(len(_A), max_k + 1):
            conv = sum(_A[i] * _A[k - i] for i in range(1, k))
            _A.append(2 * (5 * k - 4) * (5 * k - 6) * _A[k - 1] + conv)
        return tuple(_A[1 : max_k + 1])


def compute_a(max_k: int) -> list[int]:
    """[a_1, ..., a_max_k] as Python integers."""
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    return list(_a_tuple(max_k))


def b_normalizer(k: int) -> int:
    """50**(k-1) * ((k-1)!)**2, the growth rate divided out of a_k."""
    return 50 ** (k - 1) * math.factorial(k - 1) ** 2


def compute_b(max_k: int) -> list[Fraction]:
    """[b_1, ..., b_max_k] with b_k = a_k / (50**(k-1) ((k-1)!)**2)."""
    return [Fraction(a, b_normalizer(k)) for k, a in enumerate(compute_a(max_k), start=1)]


def gaussian_even_moment(m: int) -> Fraction:
    """E N**m = m! / (2**(m/2) (m/2)!) for even m."""
    if m < 0 or m % 2:
        raise ValueError(f"gaussian_even_moment needs an even m >= 0, got {m}")
    half = m // 2
    return Fraction(math.factorial(m), 2**half * math.factorial(half))


def eta_moment(k: int) -> ExactConstant:
    """E[eta**k] exactly; k = 0 gives 1."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return ExactConstant(1)
    a_k = _a_tuple(k)[k - 1]
    power_of_two = ExactConstant(1, -(7 * k - 4))
    return math.factorial(k) * a_k * SQRT_PI * power_of_two / half_gamma(5 * k - 1)


def s_moment(m: int) -> ExactConstant:
    """E[S**m] exactly; odd moments vanish."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m % 2:
        return ExactConstant(0)
    k = m // 2
    if k == 0:
        return ExactConstant(1)
    a_k = _a_tuple(k)[k - 1]
    power_of_two = ExactConstant(1, -(9 * k - 4))
    return math.factorial(2 * k) * a_k * SQRT_PI * power_of_two / half_gamma(5 * k - 1)


@dataclass(frozen=True)
class MomentTable:
    max_k: int
    a: tuple[int, ...]
    b: tuple[Fraction, ...]
    eta_moments: tuple[ExactConstant, ...]
    s_even_moments: tuple[ExactConstant, ...]

    def a_k(self, k: int) -> int:
        return self.a[k - 1]

    def b_k(self, k: int) -> Fraction:
        return self.b[k - 1]

    def eta(self, k: int) -> ExactConstant:
        return ExactConstant(1) if k == 0 else self.eta_moments[k - 1]

    def s_even(self, k: int) -> ExactConstant:
        """E S**(2k)."""
        return ExactConstant(1) if k == 0 else self.s_even_moments[k - 1]


@lru_cache(maxsize=8)
def moment_table(max_k: int) -> MomentTable:
    """All exact quantities for k = 1..max_k, memoized per max_k."""
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    return MomentTable(
        max_k=max_k,
        a=_a_tuple(max_k),
        b=tuple(compute_b(max_k)),
        eta_moments=tuple(eta_moment(k) for k in range(1, max_k + 1)),
        s_even_moments=tuple(s_moment(2 * k) for k in range(1, max_k + 1)),
    )
