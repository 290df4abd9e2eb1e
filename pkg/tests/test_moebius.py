import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdirichlet.harmonics import build_basis, peter_weyl, solid_extend
from mdirichlet.moebius import (
    MoebiusMap,
    cici_pairing,
    compose_rational,
    expand_boundary,
    mh_commutation_check,
    phi_a,
    phi_a_jacobian,
    pluriharmonic_defect,
    theorem_pk_check,
)
from mdirichlet.polyalg import ComplexPoly
from mdirichlet.seminorms import hardy_norm

from conftest import random_unitary, sphere_points, zs


def _ball(n, m, seed=42, radius=0.9):
    rng = np.random.RandomState(seed)
    return sphere_points(n, m, rng) * radius * rng.uniform(0, 1, m)[:, None] ** (1 / (2 * n))


@pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.7])
def test_involution_and_norm_identity(a):
    z = _ball(3, 20)
    w = phi_a(a, z)
    assert_allclose(phi_a(a, w), z, atol=1e-12)
    inner = z[:, 0] * a
    lhs = 1 - np.sum(np.abs(w) ** 2, axis=1)
    rhs = (1 - a * a) * (1 - np.sum(np.abs(z) ** 2, axis=1)) / np.abs(1 - inner) ** 2
    assert_allclose(lhs, rhs, atol=1e-12)


def test_phi_swaps_zero_and_a():
    assert_allclose(phi_a(0.4, np.zeros(2)), [0.4, 0])
    assert_allclose(phi_a(0.4, np.array([0.4, 0])), [0, 0], atol=1e-16)
    with pytest.raises(ValueError):
        phi_a(1.0, np.zeros(2))


def test_jacobian_matches_finite_differences():
    a, z = 0.35, np.array([0.2 + 0.1j, -0.3j])
    J = phi_a_jacobian(a, z)
    h = 1e-7
    for j in range(2):
        dz = np.zeros(2, complex)
        dz[j] = h
        fd = (phi_a(a, z + dz) - phi_a(a, z - dz)) / (2 * h)
        assert_allclose(J[:, j], fd, atol=1e-7)


def test_general_map_and_jacobian():
    rng = np.random.RandomState(3)
    U, V = random_unitary(2, rng), random_unitary(2, rng)
    phi = MoebiusMap(0.5, U, V)
    z = _ball(2, 5)
    assert_allclose(phi(z), phi_a(0.5, z @ V.T) @ U.T)
    assert_allclose(np.linalg.norm(phi(np.zeros((1, 2))), axis=1), [0.5])
    with pytest.raises(ValueError):
        MoebiusMap(0.5, np.eye(2) * 2)


def test_compose_examples():
    one = ComplexPoly.constant(2, 1)
    g = compose_rational(one, 0.5)
    assert (g.hol_power, g.antihol_power) == (0, 0)
    assert g.numerator == one
    z1 = ComplexPoly.z(1, 1)
    g = compose_rational(z1, 0.5)
    assert (g.hol_power, g.antihol_power) == (1, 0)
    assert g.numerator == ComplexPoly.constant(1, 0.5) - z1


@pytest.mark.parametrize("a", [0.5, 0.3])
def test_compose_agrees_pointwise(a):
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 ** 2 * zb2 + z2 * zb1 - 3 * z1 + 1
    g = compose_rational(f, a)
    z = _ball(2, 20)
    assert_allclose(g.evaluate(z), f.evaluate(phi_a(a, z)), atol=1e-12)


def test_rational_derivative_matches_finite_differences():
    (z1, z2), (zb1, zb2) = zs(2)
    g = compose_rational(z1 * zb2 + z2 ** 2, 0.4)
    z = np.array([[0.1 + 0.2j, 0.3 - 0.1j]])
    h = 1e-6
    e = np.array([[h, 0]])
    # d/dz1 = (d/dx - i d/dy) / 2
    dx = (g.evaluate(z + e) - g.evaluate(z - e)) / (2 * h)
    dy = (g.evaluate(z + 1j * e) - g.evaluate(z - 1j * e)) / (2 * h)
    assert_allclose(g.derivative(1).evaluate(z), (dx - 1j * dy) / 2, atol=1e-8)
    assert_allclose(g.derivative(1, True).evaluate(z), (dx + 1j * dy) / 2, atol=1e-8)


def test_expansion_tail_examples():
    z1 = ComplexPoly.z(1, 1)
    exp0 = expand_boundary(compose_rational(z1, 0), 10)
    assert exp0.tail == 0.0
    exp = expand_boundary(compose_rational(z1, 0.5), 30)
    assert 0 < exp.tail < 1e-6
    z = np.linspace(-1, 1, 41)[:, None] * np.exp(0.3j)
    g = compose_rational(z1, 0.5)
    assert np.max(np.abs(exp.poly.evaluate(z) - g.evaluate(z))) <= exp.tail


def test_expansion_tail_decreases_geometrically():
    (z1, z2), (zb1, zb2) = zs(2)
    g = compose_rational(z1 * zb2, 0.3)
    tails = [expand_boundary(g, D).tail for D in (10, 20, 30)]
    assert tails[1] < tails[0] * 1e-3 and tails[2] < tails[1] * 1e-3


def test_parseval_sanity():
    (z1, z2), (zb1, zb2) = zs(2)
    exp = expand_boundary(compose_rational(z1 * zb2, 0.3), 20)
    z = sphere_points(2, 4000, np.random.RandomState(1))
    sup = np.max(np.abs(compose_rational(z1 * zb2, 0.3).evaluate(z)))
    assert hardy_norm(exp.poly).value <= (sup + exp.tail) ** 2 * 1.05


def test_pk_trivial_and_invariant():
    f = build_basis(2, 1, 1).elements[0]
    rep0 = theorem_pk_check(f, f, 0.0, 12)
    assert rep0["defect"] == 0.0 and rep0["before"] == [pytest.approx(4.0), 0.0]
    rep = theorem_pk_check(f, f, 0.3, 16)
    assert rep["ok"]
    assert abs(rep["after"][0] - 4.0) <= rep["error_bound"] + 1e-9


def test_pk_with_rotations():
    rng = np.random.RandomState(5)
    f = build_basis(2, 1, 1).elements[1]
    rep = theorem_pk_check(f, f, 0.2, 14, U=random_unitary(2, rng), V=random_unitary(2, rng))
    assert rep["ok"]


def test_pairing_sesquilinear():
    f = build_basis(2, 1, 1).elements[0]
    g = build_basis(2, 1, 1).elements[1] + build_basis(2, 2, 1).elements[0]
    c = 0.7 - 1.3j
    F, G, Gc = peter_weyl(f), peter_weyl(g), peter_weyl(g * c)
    assert_allclose(cici_pairing(F, Gc), np.conj(c) * cici_pairing(F, G), atol=1e-12)
    assert_allclose(cici_pairing(peter_weyl(f * c), G), c * cici_pairing(F, G), atol=1e-12)


def test_pluriharmonic_composition_stays_pluriharmonic():
    (z1, z2), (zb1, zb2) = zs(2)
    mixed, tail = pluriharmonic_defect(z1 ** 2 + zb2, 0.3, 20)
    assert mixed <= tail


def test_invariant_laplacian_commutes():
    (z1, z2), (zb1, zb2) = zs(2)
    pts = _ball(2, 20, radius=0.8)
    assert mh_commutation_check(z1 ** 2 + z2, 0.4, pts) < 1e-12
    assert mh_commutation_check(z1 * zb2 + z2 ** 2 * zb1, 0.4, pts) < 1e-10
    u = solid_extend(build_basis(2, 1, 1).elements[0])
    assert mh_commutation_check(u, 0.4, pts) < 1e-8
    assert mh_commutation_check(z1 * zb1, 0.0, pts) < 1e-13
