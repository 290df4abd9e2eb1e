import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdirichlet.coeffs import (
    c_circ,
    c_cici,
    c_p0_closed,
    c_pq,
    c_pq_continued,
    cici_strength,
    g_pq,
    g_pq_values,
    harm_coeff,
    harm_sq,
    inverse_coeff_limits,
    lemma_pb,
    pole_extrapolation,
    vo_probe,
)

import mp_oracle

# frozen from mp_oracle at 40 digits (direct route for s > -1, by parts below)
ORACLE = [
    ((2, 1, 1, 0.0), 0.39746270332105139837),
    ((2, 1, 1, 1.0), 0.2095357388274792141),
    ((2, 1, 2, 0.5), 0.17368728437141461566),
    ((2, 2, 2, 2.0), 0.023196904126972930115),
    ((3, 1, 1, 0.0), 0.52854458763817176828),
    ((3, 2, 1, -0.5), 0.61832284113216204633),
    ((2, 1, 1, -0.5), 0.60017817779767216442),
    ((2, 1, 1, -1.5), 1.9460062920606500083),
    ((2, 1, 2, -1.25), 1.5092693072995729789),
    ((2, 2, 2, -1.75), 5.9267783790201240331),
    ((3, 1, 1, -1.5), 1.5064003375167858887),
    ((2, 3, 1, -1.8), 6.0358101626088354094),
]

def _value(n, p, q, s):
    if s > -1:
        return c_pq(n, p, q, s)
    return c_pq_continued(n, p, q).evaluate(s)


@pytest.mark.parametrize("args,expected", ORACLE)
def test_against_frozen_oracle(args, expected):
    est = _value(*args)
    assert abs(est.value - expected) <= max(10 * est.error, 1e-12 * expected)


@pytest.mark.parametrize("n,p,q,s", [(2, 1, 1, 0.25), (2, 2, 1, -0.75), (3, 1, 2, 1.5)])
def test_against_live_oracle_direct(n, p, q, s):
    assert_allclose(_value(n, p, q, s).value, float(mp_oracle.direct(n, p, q, s, dps=20)), rtol=1e-11)


@pytest.mark.parametrize("n,p,q,s", [(2, 1, 1, -1.4), (2, 3, 2, -1.6)])
def test_against_live_oracle_by_parts(n, p, q, s):
    assert_allclose(_value(n, p, q, s).value, float(mp_oracle.by_parts(n, p, q, s, dps=20)), rtol=1e-10)


def test_oracle_routes_agree():
    # the two mpmath routes are independent integrals and must coincide for s > -1
    assert mp_oracle.direct(2, 1, 2, 0.3, dps=20) == pytest.approx(float(mp_oracle.by_parts(2, 1, 2, 0.3, dps=20)),
                                                                   rel=1e-15)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 2, 3), (3, 1, 2)])
def test_value_at_minus_one(n, p, q):
    est = c_pq_continued(n, p, q).evaluate(-1.0)
    assert abs(est.value - 1.0) <= max(est.error, 1e-13)


def test_continuation_matches_direct_on_overlap():
    C = c_pq_continued(2, 2, 1)
    for s in (-0.9, -0.5, 0.0, 1.0):
        assert_allclose(C.evaluate(s).value, c_pq(2, 2, 1, s).value, rtol=1e-11)


def test_pole_list():
    poles = c_pq_continued(2, 1, 1).poles
    assert (poles[0].location, poles[0].order) == (-3.0, 2)
    assert (poles[1].location, poles[1].order) == (-4.0, 2)
    assert poles[2].order == 3
    with pytest.raises(ValueError):
        c_pq_continued(2, 1, 0)


def test_lemma_examples():
    for s in (0.5, -0.5, 2.0):
        assert_allclose(lemma_pb([1.0], 1.0, 0)(s), 1 / (s + 1), rtol=1e-14)
        assert_allclose(lemma_pb([1.0], 1.0, 1)(s), 1 / (s + 1) ** 2, rtol=1e-14)
        assert_allclose(lemma_pb([0.0, 1.0], 1.0, 0)(s), 1 / (s + 2), rtol=1e-14)
    L = lemma_pb([1.0], 1.0, 1)
    assert (L.poles[0].location, L.poles[0].order, L.poles[0].strength) == (-1.0, 2, 1.0)


def test_lemma_quadrature_remainder():
    # F = 1/(1-u) on [0, 1/2]: the integral of u^s/(1-u) has a closed series
    coeffs = [1.0] * 60
    L = lemma_pb(coeffs, 0.5, 0, big_n=5)
    s = -2.5
    expected = sum(0.5 ** (j + s + 1) / (j + s + 1) for j in range(400))
    est = L.evaluate(s)
    assert abs(est.value - expected) <= max(10 * est.error, 1e-12)


def test_profile_series_leading_term():
    g = g_pq(2, 1, 1, 10)
    assert g.exponent == 3
    assert_allclose(g.coefficients[0], 4 / 9, rtol=1e-15)
    t = np.array([0.1, 0.3, 0.5])
    assert np.all(np.abs(g(t) - g_pq_values(2, 1, 1, t)) <= g.tail_bound + 1e-15)


def test_closed_forms():
    assert c_p0_closed(2, 1, 0) == Fraction(2, 3)
    assert c_circ(2, 1) == 2
    assert c_cici(2, 1, 1) == 4
    assert c_cici(2, 3, 0) == 0
    assert harm_coeff(2, 1, 0) == Fraction(1, 2)
    assert harm_sq(3, 2) == Fraction(2 * 3 * 5, 4 * 2)


def test_holomorphic_residue():
    # (n+s+1) C_10(s) -> n at s = -n-1
    n = 3
    for eps in (Fraction(1, 10 ** 3), Fraction(1, 10 ** 6)):
        assert eps * c_p0_closed(n, 1, -n - 1 + eps) == n
    assert_allclose(1e-6 * c_p0_closed(n, 2, -n - 1 + 1e-6), n * (n + 1), rtol=1e-5)


def test_double_pole_strength_exact():
    assert cici_strength(2, 1, 1) == 8
    assert cici_strength(2, 2, 2) == 72
    assert c_pq_continued(2, 1, 2).pole_at(-3.0).strength == pytest.approx(24.0)


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_quadratic_extrapolation_reaches_strength(p, q):
    ext = pole_extrapolation(2, p, q, degree=2)
    assert abs(ext["estimate"] - float(cici_strength(2, p, q))) <= 1e-6


def test_inverse_limits():
    assert inverse_coeff_limits(2, 0, 0) == (0, 0)
    a1, a2 = inverse_coeff_limits(2, 1, 1)
    assert a1 == 0 and a2 == Fraction(1, 8)
    a1, a2 = inverse_coeff_limits(2, 3, 0)
    assert a1 == Fraction(2, 24) and a2 == a1 * Fraction(3, 2)
    # numerical check of the eps^2 coefficient on a mixed cell
    eps = 1e-4
    assert_allclose(1 / c_pq_continued(2, 1, 1)(-3 + eps) / eps ** 2, 1 / 8, rtol=1e-3)


def test_probe_table_shape():
    T = vo_probe(2, 0.0, 3)
    assert T.shape == (4, 4)
    assert T[0, 0] == 1.0
    assert_allclose(T, T.T, rtol=1e-12)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        c_pq(2, 1, 1, -1.0)
    with pytest.raises(ValueError):
        c_p0_closed(2, 1, -3)
    with pytest.raises(ValueError):
        lemma_pb([1.0], 1.5, 0)
