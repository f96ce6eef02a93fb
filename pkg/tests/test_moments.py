import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from scipy import stats

from iselab.exact import SQRT_PI, ExactConstant
from iselab.moments import (
    b_normalizer,
    compute_a,
    compute_b,
    eta_moment,
    gaussian_even_moment,
    moment_table,
    s_moment,
)
from iselab.beta import s_k_exact

SQRT_PI_8 = SQRT_PI / ExactConstant(1, 3)


def naive_a(n):
    a = {1: 1}
    for k in range(2, n + 1):
        a[k] = 2 * (5 * k - 4) * (5 * k - 6) * a[k - 1] + sum(a[i] * a[k - i] for i in range(1, k))
    return [a[k] for k in range(1, n + 1)]


def test_first_terms():
    assert compute_a(3) == [1, 49, 9800]
    b = compute_b(3)
    assert b[1] == b[2] == Fraction(49, 50)


def test_a_matches_naive_recursion():
    assert compute_a(60) == naive_a(60)


def test_known_moments():
    assert eta_moment(1) == SQRT_PI_8
    assert s_moment(2) == SQRT_PI_8
    assert str(eta_moment(1)) == "√(π/8)"
    assert eta_moment(2) == ExactConstant(Fraction(7, 15))
    assert s_moment(4) == ExactConstant(Fraction(7, 5))
    assert s_moment(4) == eta_moment(2) * ExactConstant(3)
    assert eta_moment(0) == s_moment(0) == ExactConstant(1)


@given(st.integers(0, 40))
def test_odd_s_moments_vanish(k):
    assert s_moment(2 * k + 1) == ExactConstant(0)


@given(st.integers(1, 100))
def test_factorization(k):
    assert s_moment(2 * k) == eta_moment(k) * gaussian_even_moment(2 * k)


@given(st.integers(0, 30))
def test_gaussian_moments(half):
    m = 2 * half
    assert math.isclose(float(gaussian_even_moment(m)), stats.norm.moment(m), rel_tol=1e-12)


def test_gaussian_odd_rejected():
    with pytest.raises(ValueError):
        gaussian_even_moment(3)


@given(st.integers(1, 150))
def test_eta_moment_log_formula(k):
    # log E eta^k from the closed form, evaluated in floating point
    a_k = compute_a(k)[-1]
    expected = (math.lgamma(k + 1) + 0.5 * math.log(math.pi) - (7 * k - 4) / 2 * math.log(2)
                - math.lgamma((5 * k - 1) / 2) + math.log(a_k))
    assert math.isclose(eta_moment(k).log(), expected, rel_tol=1e-12, abs_tol=1e-9)


def test_eta_moments_log_convex():
    # Lyapunov: k -> log E eta^k is convex
    logs = [eta_moment(k).log() for k in range(0, 60)]
    assert all(logs[k - 1] + logs[k + 1] >= 2 * logs[k] for k in range(1, 59))


def test_b_increasing_and_bounded():
    b = compute_b(200)
    for k in range(3, 201):
        if k > 3:
            assert b[k - 1] > b[k - 2]
        assert b[k - 1] <= 1 - Fraction(1, 25 * (k - 1))


def test_b_telescoping():
    table = moment_table(100)
    for n in (3, 10, 37):
        total = table.b_k(n)
        for m in range(n + 1, 101):
            total += s_k_exact(m, table)
            assert total == table.b_k(m)


@given(st.integers(1, 80))
def test_b_normalizer(k):
    assert Fraction(compute_a(k)[-1], b_normalizer(k)) == compute_b(k)[-1]


def test_table_consistency():
    t = moment_table(30)
    assert t.a == tuple(compute_a(30))
    assert t.eta(0) == ExactConstant(1)
    assert all(t.eta(k) == eta_moment(k) for k in range(1, 31))
    assert all(t.s_even(k) == s_moment(2 * k) for k in range(1, 31))
    assert moment_table(30) is t


def test_bad_arguments():
    for f in (compute_a, moment_table):
        with pytest.raises(ValueError):
            f(0)
    with pytest.raises(ValueError):
        eta_moment(-1)
    with pytest.raises(ValueError):
        s_k_exact(2)
