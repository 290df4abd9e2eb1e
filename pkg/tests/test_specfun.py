import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from mdirichlet.specfun import (
    digamma_grid,
    gauss_2f1,
    gauss_2f1_array,
    gauss_2f1_bounded,
    gauss_value_at_one,
    harmonic_number,
    log_case_expansion,
    normalized_2f1,
    normalized_2f1_array,
    pochhammer,
)


def test_pochhammer_examples():
    assert pochhammer(2, 3) == 24
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    assert pochhammer(5, 0) == 1


def test_harmonic_and_digamma():
    assert harmonic_number(3) == Fraction(11, 6)
    for x in (1, 2, 7, Fraction(1, 2), Fraction(7, 2)):
        assert_allclose(digamma_grid(x), float(mpmath.digamma(mpmath.mpf(x.numerator if isinstance(x, Fraction) else x)
                                                             / (x.denominator if isinstance(x, Fraction) else 1))),
                        rtol=1e-14)
    with pytest.raises(ValueError):
        digamma_grid(Fraction(1, 3))


def test_terminating_series():
    q, c, t = 3.0, 5.0, 0.7
    assert_allclose(gauss_2f1(-1, q, c, t), 1 - q * t / c, rtol=1e-15)


def test_log_two_value():
    value, err = gauss_2f1_bounded(1, 1, 2, 0.5)
    assert abs(value - 2 * math.log(2)) <= err
    assert_allclose(value, 2 * math.log(2), rtol=1e-11)


def test_value_at_one():
    assert gauss_value_at_one(1, 1, 2, exact=True) == Fraction(3, 2)
    assert gauss_value_at_one(1, 1, 1, exact=True) == 2


@pytest.mark.parametrize("a,b,c,t", [(1, 1, 4, 0.3), (2, 3, 7, 0.85), (0.5, 1.5, 3.5, 0.95), (3, 3, 8, 0.99)])
def test_gauss_2f1_against_mpmath(a, b, c, t):
    value, err = gauss_2f1_bounded(a, b, c, t)
    ref = float(mpmath.hyp2f1(a, b, c, t))
    assert abs(value - ref) <= max(err, 1e-14 * abs(ref))
    assert_allclose(gauss_2f1(a, b, c, t), ref, rtol=1e-11)


def test_gauss_2f1_array_matches_scalar():
    t = np.linspace(0, 0.9, 7)
    values, errors = gauss_2f1_array(2, 3, 7, t)
    assert_allclose(values, [gauss_2f1(2, 3, 7, x) for x in t], rtol=1e-13)
    assert np.all(errors >= 0)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (3, 2, 1), (2, 3, 4)])
def test_log_case_leading_coefficient(n, p, q):
    exp = log_case_expansion(n, p, q, 30)
    expected = (-1) ** n * math.gamma(n + p) * math.gamma(n + q) / (
        math.factorial(n) * math.gamma(n) * math.gamma(p) * math.gamma(q))
    assert_allclose(exp.a1[0], expected, rtol=1e-13)
    assert_allclose(exp.a0[0], 1.0, rtol=1e-14)


def test_log_case_example_value():
    assert_allclose(log_case_expansion(2, 1, 1, 30).a1[0], 2.0, rtol=1e-14)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (3, 2, 1), (2, 2, 3)])
def test_log_case_matches_direct_series(n, p, q):
    exp = log_case_expansion(n, p, q, 40)
    direct = gauss_2f1(p, q, p + q + n, 0.9) / gauss_value_at_one(p, q, n)
    assert abs(exp.evaluate(0.9) - direct) <= 1e-9


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (3, 2, 2), (2, 4, 1)])
@pytest.mark.parametrize("t", [0.2, 0.9, 0.97, 0.999])
def test_normalized_2f1_against_mpmath(n, p, q, t):
    ref = mpmath.hyp2f1(p, q, p + q + n, t) / mpmath.hyp2f1(p, q, p + q + n, 1)
    assert_allclose(normalized_2f1(n, p, q, t), float(ref), rtol=1e-11)


def test_normalized_endpoints():
    assert normalized_2f1(2, 1, 1, 1.0) == 1.0
    assert normalized_2f1(2, 0, 3, 0.4) == 1.0
    with pytest.raises(ValueError):
        normalized_2f1(2, 1, 1, 1.5)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 4), st.floats(0.0, 0.999))
def test_normalized_profile_bounds(n, p, q, t):
    # positive coefficients: the normalized profile increases from F(0) to F(1) = 1
    v = normalized_2f1(n, p, q, t)
    assert 1 / gauss_value_at_one(p, q, n) - 1e-12 <= v <= 1 + 1e-12
    assert_allclose(normalized_2f1_array(n, p, q, np.array([t]))[0], v, rtol=1e-10)
