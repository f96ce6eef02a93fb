"""Asymptotic formulas, MGF series and tail bounds for eta, S and xi.

All large quantities are handled as logarithms; k^(3k/2)-type growth
overflows doubles long before the exact moments run out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .exact import ExactConstant

__all__ = [
    "AsymptoticEval",
    "CannotCertify",
    "DEFAULT_K1",
    "DEFAULT_K2",
    "DEFAULT_SAFETY",
    "L1Result",
    "TailConstants",
    "a_asymptote",
    "eta_moment_asymptote",
    "kasahara_convert",
    "k1_threshold",
    "k2_threshold",
    "l1_sum",
    "log_a_asymptote",
    "log_eta_moment_asymptote",
    "log_mgf_asymptote_eta",
    "log_mgf_asymptote_s",
    "log_mgf_series",
    "log_s_moment_asymptote",
    "log_xi_moment_asymptote",
    "mgf_asymptote_eta",
    "mgf_asymptote_s",
    "mgf_series",
    "s_moment_asymptote",
    "tail_bound_eta",
    "tail_bound_s",
    "xi_moment_asymptote",
]

# published large-x constants; not certified for moderate x
DEFAULT_K1 = 4.9
DEFAULT_K2 = 1.6
DEFAULT_SAFETY = 1.05

_LOG_PI = math.log(math.pi)


class CannotCertify(ValueError):
    """Not enough terms to bound the truncation error of a series."""


@dataclass(frozen=True)
class AsymptoticEval:
    argument: float
    asymptote_value: float
    exact_or_series_value: float | None = None
    ratio: float | None = None


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


# moment asymptotes ----------------------------------------------------------

def log_a_asymptote(k: int, beta: float) -> float:
    return math.log(beta) + (k - 1) * math.log(50) + 2 * math.lgamma(k)


def a_asymptote(k: int, beta: float) -> float:
    """beta * 50**(k-1) * ((k-1)!)**2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k < 150:
        # exact integer part keeps the relative error at float rounding
        return beta * float(50 ** (k - 1) * math.factorial(k - 1) ** 2)
    return _exp(log_a_asymptote(k, beta))


def _log_lead(beta: float) -> float:
    # log(2 pi^(3/2) beta / 5)
    return math.log(2) + 1.5 * _LOG_PI + math.log(beta) - math.log(5)


def log_eta_moment_asymptote(k: int, beta: float) -> float:
    return _log_lead(beta) + 0.5 * math.log(k) - 0.5 * k * (math.log(5) + 1) + 0.5 * k * math.log(k)


def log_s_moment_asymptote(two_k: int, beta: float) -> float:
    m = two_k
    return _log_lead(beta) + 0.5 * math.log(m) - 0.25 * m * (math.log(10) + 3) + 0.75 * m * math.log(m)


def log_xi_moment_asymptote(k: int) -> float:
    return math.log(3 * math.sqrt(2)) + math.log(k) - 0.5 * k * (math.log(3) + 1) + 0.5 * k * math.log(k)


def eta_moment_asymptote(k: int, beta: float) -> float:
    """(2 pi^(3/2) beta / 5) k^(1/2) (5e)^(-k/2) k^(k/2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _exp(log_eta_moment_asymptote(k, beta))


def s_moment_asymptote(two_k: int, beta: float) -> float:
    """(2 pi^(3/2) beta / 5) (2k)^(1/2) (10 e^3)^(-2k/4) (2k)^(3/4 * 2k)."""
    if two_k < 1:
        raise ValueError("two_k must be >= 1")
    return _exp(log_s_moment_asymptote(two_k, beta))


def xi_moment_asymptote(k: int) -> float:
    """3 sqrt(2) k (3e)^(-k/2) k^(k/2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _exp(log_xi_moment_asymptote(k))


def moment_ratio(exact: ExactConstant, log_asymptote: float) -> float:
    return _exp(exact.log() - log_asymptote)


# moment generating functions ------------------------------------------------

def log_mgf_asymptote_eta(t: float, beta: float) -> float:
    if t <= 0:
        raise ValueError("t must be > 0")
    return 1.5 * math.log(2 * math.pi) + math.log(beta) - 1.5 * math.log(5) + math.log(t) + t * t / 10


def log_mgf_asymptote_s(t: float, beta: float) -> float:
    if t <= 0:
        raise ValueError("t must be > 0")
    return (
        0.5 * math.log(2) + 1.5 * _LOG_PI + math.log(beta) - 1.5 * math.log(5)
        + 2 * math.log(t) + t**4 / 40
    )


def mgf_asymptote_eta(t: float, beta: float) -> float:
    """(2 pi)^(3/2) beta / 5^(3/2) * t * exp(t^2 / 10)."""
    return _exp(log_mgf_asymptote_eta(t, beta))


def mgf_asymptote_s(t: float, beta: float) -> float:
    """2^(1/2) pi^(3/2) beta / 5^(3/2) * t^2 * exp(t^4 / 40)."""
    return _exp(log_mgf_asymptote_s(t, beta))


def _logsumexp(values: Sequence[float]) -> float:
    top = max(values)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def log_mgf_series(moments: Sequence[ExactConstant], t: float, tol: float = 1e-8) -> float:
    """log of sum_k moments[k] t^k / k!, with certified relative truncation error.

    ``moments[k]`` is the k-th moment (``moments[0]`` normally 1).  Vanishing
    moments are skipped, so an S-moment list with zero odd entries works.
    The tail past the last supplied term is bounded geometrically from the
    last term ratio, inflated by a factor 2; the ratio must already be below
    one and non-increasing, otherwise :class:`CannotCertify` is raised.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return math.log(float(moments[0])) if moments else -math.inf
    log_t = math.log(t)
    idx, logs = [], []
    for k, m in enumerate(moments):
        if m:
            if m.sign() < 0:
                raise ValueError("moments must be nonnegative")
            idx.append(k)
            logs.append(m.log() + k * log_t - math.lgamma(k + 1))
    if len(logs) < 3:
        raise CannotCertify("need at least three nonzero moments")
    log_sum = _logsumexp(logs)
    log_r_last = logs[-1] - logs[-2]
    log_r_prev = logs[-2] - logs[-3]
    if log_r_last >= 0 or log_r_last > log_r_prev:
        raise CannotCertify(
            f"series terms still growing at k={idx[-1]} (t={t}); supply more moments"
        )
    r = math.exp(log_r_last)
    log_tail = math.log(2.0) + logs[-1] + math.log(r / (1 - r))
    if log_tail - log_sum >= math.log(tol):
        raise CannotCertify(
            f"truncation tail {math.exp(log_tail - log_sum):.3g} (relative) exceeds tol={tol}"
        )
    return log_sum


def mgf_series(moments: Sequence[ExactConstant], t: float, tol: float = 1e-8) -> float:
    """sum_k moments[k] t^k / k! (see :func:`log_mgf_series`)."""
    return _exp(log_mgf_series(moments, t, tol))


# tail bounds ----------------------------------------------------------------

def k1_threshold(beta: float) -> float:
    """2 pi^(3/2) beta / 5^(1/2); any larger K1 works for large x."""
    return 2 * math.pi**1.5 * beta / math.sqrt(5)


def k2_threshold(beta: float) -> float:
    """10^(1/6) beta pi^(3/2) / 5; any larger K2 works for large x."""
    return 10 ** (1 / 6) * beta * math.pi**1.5 / 5


def tail_bound_eta(x: float, K1: float = DEFAULT_K1) -> float:
    """K1 x exp(-5/2 x^2), an upper bound for P(eta > x) at large x."""
    if x < 1:
        raise ValueError("the tail bound is only stated for x >= 1")
    return K1 * x * math.exp(-2.5 * x * x)


def tail_bound_s(x: float, K2: float = DEFAULT_K2) -> float:
    """K2 x^(2/3) exp(-3/4 10^(1/3) x^(4/3)), an upper bound for P(S > x)."""
    if x < 1:
        raise ValueError("the tail bound is only stated for x >= 1")
    return K2 * x ** (2 / 3) * math.exp(-0.75 * 10 ** (1 / 3) * x ** (4 / 3))


# Kasahara/Davies constants ----------------------------------------------------

@dataclass(frozen=True)
class TailConstants:
    """Matching constants for -ln P(X>x) ~ a x^p, ||X||_r ~ b r^(1/p),
    ln E e^(tX) ~ c t^q.  ``q`` and ``c`` are None when p <= 1."""

    p: float
    a: float
    b: float
    q: float | None = None
    c: float | None = None

    def symmetric_identity(self) -> float:
        """(pa)^q (qc)^p, which equals 1."""
        if self.q is None:
            raise ValueError("undefined for p <= 1")
        return (self.p * self.a) ** self.q * (self.q * self.c) ** self.p

    def tail_exponent(self, x: float) -> float:
        """-a x^p, the leading order of ln P(X > x)."""
        return -self.a * x**self.p


def kasahara_convert(p: float, *, a: float | None = None, b: float | None = None,
                     c: float | None = None) -> TailConstants:
    """Fill in (a, b, c) from exactly one of them, for exponent p."""
    given = [name for name, v in (("a", a), ("b", b), ("c", c)) if v is not None]
    if len(given) != 1:
        raise ValueError("give exactly one of a, b, c")
    if p <= 0:
        raise ValueError("p must be > 0")
    if c is not None and p <= 1:
        raise ValueError("the MGF constant c needs p > 1")
    q = p / (p - 1) if p > 1 else None
    if c is not None:
        # (pa)^q (qc)^p = 1
        a = (q * c) ** (-p / q) / p
    if a is not None:
        b = (p * math.e * a) ** (-1 / p)
    else:
        a = 1 / (p * math.e * b**p)
    if q is not None and c is None:
        c = (p * a) ** (-(q - 1)) / q
    return TailConstants(p=p, a=a, b=b, q=q, c=c)


# the standard saddle-point estimate -------------------------------------------

@dataclass(frozen=True)
class L1Result:
    log_sum: float
    log_asymptote: float
    terms: int

    @property
    def partial_sum(self) -> float:
        return _exp(self.log_sum)

    @property
    def asymptote(self) -> float:
        return _exp(self.log_asymptote)

    @property
    def ratio(self) -> float:
        return math.exp(self.log_sum - self.log_asymptote)


def l1_sum(case: str, gamma: float, b_exp: float, x: float, parity: str = "all") -> L1Result:
    """Sum the series of the saddle-point lemma and compare with its asymptote.

    case "power_decay": sum_k k^b k^(-gamma k) x^k, gamma > 0
    case "factorial":   sum_k k^b k^(gamma k) x^k / k!, gamma < 1

    With ``parity="even"`` only even k are summed and the asymptote is
    halved.
    """
    if x <= 0:
        raise ValueError("x must be > 0")
    if parity not in ("all", "even"):
        raise ValueError("parity must be 'all' or 'even'")
    log_x = math.log(x)
    if case == "power_decay":
        if gamma <= 0:
            raise ValueError("power_decay needs gamma > 0")

        def log_term(k):
            return b_exp * math.log(k) - gamma * k * math.log(k) + k * log_x

        z = math.exp(-gamma) * x
        log_asym = (0.5 * math.log(2 * math.pi / gamma) + (b_exp + 0.5) / gamma * math.log(z)
                    + gamma * z ** (1 / gamma))
        peak = math.exp(-1) * x ** (1 / gamma)
    elif case == "factorial":
        if gamma >= 1:
            raise ValueError("factorial needs gamma < 1")

        def log_term(k):
            return b_exp * math.log(k) + gamma * k * math.log(k) + k * log_x - math.lgamma(k + 1)

        z = math.exp(gamma) * x
        log_asym = (-0.5 * math.log(1 - gamma) + b_exp / (1 - gamma) * math.log(z)
                    + (1 - gamma) * z ** (1 / (1 - gamma)))
        peak = z ** (1 / (1 - gamma))
    else:
        raise ValueError(f"unknown case {case!r}")

    step = 2 if parity == "even" else 1
    k = 2 if parity == "even" else 1
    logs = []
    while True:
        lt = log_term(k)
        logs.append(lt)
        if k > peak and lt < max(logs) + math.log(1e-16) - 5:
            break
        k += step
    if parity == "even":
        log_asym -= math.log(2)
    return L1Result(log_sum=_logsumexp(logs), log_asymptote=log_asym, terms=len(logs))
