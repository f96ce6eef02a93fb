"""Rational enclosures of beta = lim b_k.

For k >= 3 the normalized sequence satisfies b_k = b_{k-1} + s_k with

    s_k = sum_{i=2}^{k-2} a_i a_{k-i} / (50**(k-1) ((k-1)!)**2) >= 0,

so beta = b_n + sum_{k>n} s_k.  Two enclosures are provided:

* ``beta_coarse(n)``: [b_n, b_n + 1/(75 (n-2)**3)].
* ``beta_refined(n)``: split off the two outermost symmetric pairs of s_k,

      s_k = b_2 b_{k-2} / (25 (k-1)^2 (k-2)^2)
            + 4 b_3 b_{k-3} / (25 (k-1)^2 (k-2)^2 (k-3)^2)
            + theta (k-7) 36 / (25 (k-1)^2 (k-2)^2 (k-3)^2 (k-4)^2),

  with 0 <= theta <= 1, bracket the unknown b_j between b_{n-2} (or b_{n-1})
  and an upper bound for beta, and sum over k > n.  The infinite remainder
  past a cutoff M is bounded by integral comparison.

Everything is exact rational arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .exact import RationalInterval
from .moments import MomentTable, b_normalizer, moment_table

__all__ = [
    "BetaCertificate",
    "CertificationError",
    "beta_coarse",
    "beta_refined",
    "certify_beta",
    "s_k_exact",
]

# remainder past the exact partial sums is kept below this
TAIL_TOLERANCE = Fraction(1, 10**10)


class CertificationError(ArithmeticError):
    """The enclosure failed to close; always a bug, never a user error."""


@dataclass(frozen=True)
class BetaCertificate:
    n_cut: int
    interval: RationalInterval
    method: str

    def to_dict(self) -> dict:
        return {
            "n_cut": self.n_cut,
            "lo_numerator": self.interval.lo.numerator,
            "lo_denominator": self.interval.lo.denominator,
            "hi_numerator": self.interval.hi.numerator,
            "hi_denominator": self.interval.hi.denominator,
            "method": self.method,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BetaCertificate":
        lo = Fraction(int(d["lo_numerator"]), int(d["lo_denominator"]))
        hi = Fraction(int(d["hi_numerator"]), int(d["hi_denominator"]))
        return cls(int(d["n_cut"]), RationalInterval(lo, hi), d["method"])


def _table(k: int, table: MomentTable | None) -> MomentTable:
    if table is None or table.max_k < k:
        return moment_table(max(k, 16))
    return table


def s_k_exact(k: int, table: MomentTable | None = None) -> Fraction:
    """The increment s_k = b_k - b_{k-1}, computed from the convolution sum."""
    if k < 3:
        raise ValueError(f"s_k is defined for k >= 3, got {k}")
    table = _table(k, table)
    conv = sum(table.a_k(i) * table.a_k(k - i) for i in range(2, k - 1))
    return Fraction(conv, b_normalizer(k))


def beta_coarse(n: int, table: MomentTable | None = None) -> RationalInterval:
    """[b_n, b_n + 1/(75 (n-2)**3)]."""
    if n < 3:
        raise ValueError("beta_coarse needs n >= 3")
    b_n = _table(n, table).b_k(n)
    return RationalInterval(b_n, b_n + Fraction(1, 75 * (n - 2) ** 3))


def _tail_sums(n: int) -> tuple[RationalInterval, RationalInterval, RationalInterval]:
    """Enclosures of the three coefficient series summed over k > n.

    F1 = sum 1/((k-1)^2 (k-2)^2)
    F2 = sum 1/((k-1)^2 (k-2)^2 (k-3)^2)
    F3 = sum (k-7)/((k-1)^2 (k-2)^2 (k-3)^2 (k-4)^2)
    """
    # remainders for k > M:
    #   F1 <= sum_{j>=M-1} j^-4 <= 1/(3 (M-2)^3)
    #   F2 <= sum_{j>=M-2} j^-6 <= 1/(5 (M-3)^5)
    #   F3 <= sum_{j>=M-3} j^-7 <= 1/(6 (M-4)^6)
    def remainders(m):
        return (
            Fraction(1, 3 * (m - 2) ** 3),
            Fraction(1, 5 * (m - 3) ** 5),
            Fraction(1, 6 * (m - 4) ** 6),
        )

    m = n + 1
    while sum(remainders(m)) >= TAIL_TOLERANCE:
        m += 1
    f1 = f2 = f3 = Fraction(0)
    for k in range(n + 1, m + 1):
        d1 = (k - 1) ** 2 * (k - 2) ** 2
        d2 = d1 * (k - 3) ** 2
        f1 += Fraction(1, d1)
        f2 += Fraction(1, d2)
        f3 += Fraction(k - 7, d2 * (k - 4) ** 2)
    r1, r2, r3 = remainders(m)
    return (
        RationalInterval(f1, f1 + r1),
        RationalInterval(f2, f2 + r2),
        RationalInterval(f3, f3 + r3),
    )


def beta_refined(n: int, table: MomentTable | None = None, iterations: int = 3) -> RationalInterval:
    """Certified enclosure of beta from exact b_1..b_n and the bracketed tail.

    ``iterations`` re-feeds the new upper bound as the bracket for the
    unknown b_j; one pass already uses the coarse bound.
    """
    if n < 7:
        raise ValueError("beta_refined needs n >= 7")
    table = _table(n, table)
    b = table.b_k
    coarse = beta_coarse(n, table)
    f1, f2, f3 = _tail_sums(n)

    # b_{k-2} >= b_{n-1} and b_{k-3} >= b_{n-2} since b increases from index 2 on
    lo = b(n) + Fraction(1, 25) * b(2) * b(n - 1) * f1.lo + Fraction(4, 25) * b(3) * b(n - 2) * f2.lo
    upper = coarse.hi
    for _ in range(max(1, iterations)):
        hi = (
            b(n)
            + Fraction(1, 25) * b(2) * upper * f1.hi
            + Fraction(4, 25) * b(3) * upper * f2.hi
            + Fraction(36, 25) * f3.hi
        )
        upper = min(upper, hi)
    if not lo < upper:
        raise CertificationError(f"refined bracket failed to close at n={n}")
    result = RationalInterval(lo, upper)
    if not result.issubset(coarse):
        raise CertificationError(f"refined interval escapes the coarse one at n={n}")
    return result


def certify_beta(n: int, method: str = "refined") -> BetaCertificate:
    if method == "coarse":
        return BetaCertificate(n, beta_coarse(n), "coarse")
    if method == "refined":
        return BetaCertificate(n, beta_refined(n), "refined")
    raise ValueError(f"unknown method {method!r}")
