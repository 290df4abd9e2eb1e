from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdirichlet.harmonics import (
    build_basis,
    fischer_split,
    harmonic_projection,
    harmonic_spanning_set,
    hpq_dimension,
    hpq_kernel,
    invariant_laplacian_from_hessian,
    is_euclidean_harmonic,
    kpq_kernel,
    peter_weyl,
    profile_derivatives,
    project_antihol,
    project_hol,
    project_P,
    project_pi0,
    project_Q,
    radial_profile,
    solid_derivatives,
    solid_extend,
    zonal_coefficients,
)
from mdirichlet.polyalg import ComplexPoly, reeb, rotate, sphere_inner, sphere_norm_sq, spherical_laplacian

from conftest import random_unitary, sphere_points, zs


def test_degree_one_kernel():
    K = hpq_kernel(3, 1, 0)
    assert K.terms == ((1, 0, Fraction(3)),)
    assert K(0.5 + 0.25j) == pytest.approx(3 * (0.5 + 0.25j))


def test_dimension_examples():
    assert hpq_dimension(2, 1, 1) == 3
    assert hpq_dimension(2, 2, 0) == 3
    assert hpq_dimension(3, 1, 1) == 8


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (0, 2), (1, 1), (2, 1), (3, 2)])
def test_kernel_at_one_is_dimension(n, p, q):
    if n == 1 and p * q:
        with pytest.raises(ValueError):
            hpq_kernel(n, p, q)
        return
    assert hpq_kernel(n, p, q).at_one() == hpq_dimension(n, p, q)


def test_fischer_split_norm_squared():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 * zb1
    pieces = fischer_split(f)
    total = sum(pieces.values(), ComplexPoly(2))
    pts = sphere_points(2, 4, np.random.RandomState(0))
    # on the sphere the pieces reassemble f
    assert_allclose(total.evaluate(pts), f.evaluate(pts), atol=1e-14)


def test_projection_of_norm_squared_coordinate():
    (z1, _), (zb1, _) = zs(2)
    assert project_pi0(z1 * zb1) == ComplexPoly.constant(2, Fraction(1, 2))
    h = harmonic_projection(z1 * zb1)
    assert is_euclidean_harmonic(h)
    assert h == z1 * zb1 - ComplexPoly.norm_sq(2) * Fraction(1, 2)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 2, 1), (3, 1, 1), (3, 2, 0)])
def test_basis_orthonormal(n, p, q):
    B = build_basis(n, p, q)
    assert B.dim == hpq_dimension(n, p, q)
    assert_allclose(B.gram(), np.eye(B.dim), atol=1e-12)


@pytest.mark.parametrize("n,p,q", [(2, 2, 1), (3, 1, 2)])
def test_spanning_set_eigenvalues_exact(n, p, q):
    for h in harmonic_spanning_set(n, p, q):
        assert h.is_exact
        assert spherical_laplacian(h) == h * (-(p + q) * (p + q + 2 * n - 2))
        assert reeb(h) == h * (p - q)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 3, 1), (3, 2, 2)])
def test_basis_sum_reproduces_zonal_kernel(n, p, q):
    rng = np.random.RandomState(42)
    X, Y = sphere_points(n, 10, rng), sphere_points(n, 10, rng)
    B = build_basis(n, p, q)
    lhs = np.sum(B.evaluate(X) * np.conj(B.evaluate(Y)), axis=1)
    K = hpq_kernel(n, p, q)
    rhs = np.array([K(w) for w in np.sum(X * np.conj(Y), axis=1)])
    assert_allclose(lhs, rhs, atol=1e-9)


def test_solid_kernel_is_sum_over_solid_basis():
    n, p, q = 2, 2, 1
    rng = np.random.RandomState(42)
    B = build_basis(n, p, q)
    z, w = sphere_points(n, 2, rng) * np.array([[0.7], [0.4]])
    ext = [solid_extend(e) for e in B.elements]
    expected = sum(u.evaluate(z[None, :])[0] * np.conj(u.evaluate(w[None, :])[0]) for u in ext)
    assert_allclose(kpq_kernel(z, w, n, p, q), expected, atol=1e-12)


def test_solid_extension_radial_scaling():
    n, p, q = 2, 2, 1
    rng = np.random.RandomState(42)
    f = build_basis(n, p, q).elements[1]
    eta = sphere_points(n, 1, rng)
    u = solid_extend(f)
    assert_allclose(u.evaluate(0.7 * eta), radial_profile(n, p, q, 0.7) * f.evaluate(eta), atol=1e-13)
    z = 0.7 * eta[0]
    expected = radial_profile(n, p, q, 0.7) ** 2 * hpq_dimension(n, p, q)
    assert kpq_kernel(z, z, n, p, q) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        kpq_kernel(eta[0], z, n, p, q)


def test_profile_endpoints():
    assert radial_profile(2, 1, 1, 1.0) == pytest.approx(1.0)
    assert radial_profile(2, 1, 1, 0.0) == 0.0
    d = profile_derivatives(2, 1, 1, 0.3, 2)
    h = 1e-5
    F = lambda t: profile_derivatives(2, 1, 1, t, 0)[0]
    assert_allclose(d[1], (F(0.3 + h) - F(0.3 - h)) / (2 * h), rtol=1e-7)


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 2, 1), (3, 2, 2)])
def test_solid_extension_is_m_harmonic(n, p, q):
    rng = np.random.RandomState(42)
    u = solid_extend(build_basis(n, p, q).elements[0])
    pts = sphere_points(n, 6, rng) * rng.uniform(0.1, 0.9, 6)[:, None]
    _, _, _, hess = solid_derivatives(u, pts)
    assert np.max(np.abs(invariant_laplacian_from_hessian(pts, hess))) < 1e-10


def test_peter_weyl_cells_and_projections():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 * zb1 + z2 ** 2 + zb1 * 3 + 1
    pw = peter_weyl(f)
    assert pw.cells() == [(0, 0), (0, 1), (1, 1), (2, 0)]
    assert_allclose(pw.cell_norms_sq()[(0, 0)], (1 + 0.5) ** 2)
    assert project_hol(f).slices().keys() == {(0, 0), (2, 0)}
    assert project_antihol(f).slices().keys() == {(0, 0), (0, 1)}
    assert set(project_P(f).slices()) == {(0, 0), (0, 1), (2, 0)}
    assert is_euclidean_harmonic(project_Q(f))
    pts = sphere_points(2, 5, np.random.RandomState(1))
    assert_allclose(pw.boundary().evaluate(pts), f.evaluate(pts), atol=1e-13)


def test_cell_norms_rotation_equivariant():
    (z1, z2, _), (zb1, zb2, _) = zs(3)
    f = z1 ** 2 * zb2 + z2 * zb1 + z1
    U = random_unitary(3, np.random.RandomState(7))
    a, b = peter_weyl(f).cell_norms_sq(), peter_weyl(rotate(f, U)).cell_norms_sq()
    for k in set(a) | set(b):
        assert_allclose(float(b.get(k, 0)), float(a.get(k, 0)), rtol=1e-10, atol=1e-14)


def test_cell_norms_sum_to_sphere_norm():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 ** 2 * zb1 * zb2 + z2 * zb1 - 2
    pw = peter_weyl(f)
    assert_allclose(sum(float(v) for v in pw.cell_norms_sq().values()), float(sphere_norm_sq(f)), rtol=1e-12)


def test_zonal_table_matches_kernel():
    n, P = 2, 4
    coef = zonal_coefficients(n, P)
    w = 0.3 - 0.4j
    # on the sphere rho = 1 and x = <zeta, eta>
    for p in range(P + 1):
        for q in range(P + 1 - p):
            hi, lo = max(p, q), min(p, q)
            val = sum(coef[hi, lo, k] * w ** (hi - lo + k) * np.conj(w) ** k for k in range(lo + 1))
            val = val if p >= q else np.conj(val)
            assert_allclose(val, hpq_kernel(n, p, q)(w), atol=1e-12)
