import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdirichlet.coeffs import c_cici
from mdirichlet.harmonics import build_basis, harmonic_spanning_set
from mdirichlet.polyalg import ball_inner, sphere_norm_sq
from mdirichlet.seminorms import (
    DRIFT_EXPONENT_MAX,
    dilate_norm_sq,
    dirichlet_cici,
    dirichlet_circ,
    drift_exponent,
    hardy_norm,
    has_drift,
    norm_s,
    pf_ratio_table,
    ph_ratio_tables,
    pi_ratio_table,
    pj_ratio_table,
    radial_seminorm,
    ratio_window,
    second_order_probe,
    spectral_tangential_sum,
    tangential_eigenvalue,
    tangential_sum,
    theorem_pf_ratio,
    theorem_ph_sums,
    word_cell_sum,
    word_weight,
)

from conftest import zs


def test_basic_norm_examples():
    (z1, z2), (zb1, zb2) = zs(2)
    assert norm_s(z1, 0).value == pytest.approx(1 / 3)
    assert hardy_norm(z1 + zb2).value == pytest.approx(1.0)
    assert dirichlet_circ(z1).value == 1
    assert dirichlet_cici(z1).value == 0


@pytest.mark.parametrize("s", [0.0, 0.5, 2.0])
def test_norm_matches_ball_moments_for_pluriharmonic(s):
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 ** 2 + zb2 * 3 + z1 * z2 - 1
    assert_allclose(norm_s(f, s).value, float(ball_inner(f, f, s)), rtol=1e-12)


def test_norm_bounded_by_hardy_for_large_s():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 * zb2 + z2 ** 2 * zb1
    assert norm_s(f, 1.0).value < hardy_norm(f).value
    assert norm_s(f, -1.0).value == pytest.approx(hardy_norm(f).value, rel=1e-12)


def test_dilates_increase_to_hardy():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 * zb2 + z1
    vals = [dilate_norm_sq(f, r) for r in (0.3, 0.6, 0.9, 1.0)]
    assert np.all(np.diff(vals) > 0)
    assert_allclose(vals[-1], hardy_norm(f).value)


def test_cici_on_mixed_cell():
    f = build_basis(2, 1, 1).elements[0]
    assert_allclose(float(dirichlet_cici(f).value), 4.0, rtol=1e-12)


def test_circ_reports_excluded_cells():
    (z1, z2), (zb1, zb2) = zs(2)
    rep = dirichlet_circ(z1 * zb2 + z1 ** 2)
    assert "excluded" in rep.notes
    # c_circ(2, 2) = 6 and ||z1^2||^2 = 1/3
    assert rep.value == 2


def test_tangential_eigenvalue():
    assert tangential_eigenvalue(2, 1, 1) == 8
    assert tangential_eigenvalue(3, 2, 0) == 8


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p,q", [(1, 0), (1, 1), (2, 1), (0, 3)])
def test_word_sum_recursion_matches_brute_force(n, p, q):
    for h in harmonic_spanning_set(n, p, q)[:2]:
        nsq = sphere_norm_sq(h)
        for m in (0, 1, 2, 3):
            assert tangential_sum(h, m).value == pytest.approx(float(word_weight(n, p, q, m) * nsq), rel=1e-13)


def test_word_sum_equals_power_only_up_to_first_order():
    for n in (2, 3):
        for p in range(4):
            for q in range(4):
                assert word_weight(n, p, q, 1) == tangential_eigenvalue(n, p, q)
    assert word_weight(2, 1, 1, 2) == 32
    assert tangential_eigenvalue(2, 1, 1) ** 2 == 64


def test_word_cell_sum_on_mixed_polynomial():
    (z1, z2), (zb1, zb2) = zs(2)
    f = z1 * zb2 + z2 ** 2 * zb1 * 2 + z1
    for m in (1, 2):
        assert_allclose(float(tangential_sum(f, m).value), float(word_cell_sum(f, m).value), rtol=1e-12)
    assert float(spectral_tangential_sum(f, 2).value) > float(word_cell_sum(f, 2).value)


def test_tangential_guard():
    (z1, _, _), _ = zs(3)
    with pytest.raises(ValueError):
        tangential_sum(z1, 5)


def test_pf_ratio_methods():
    f = build_basis(2, 1, 1).elements[0]
    assert_allclose(theorem_pf_ratio(f, method="power"), 16.0, rtol=1e-12)
    assert_allclose(theorem_pf_ratio(f, method="words"), 8.0, rtol=1e-12)
    assert_allclose(theorem_pf_ratio(f, method="brute"), 8.0, rtol=1e-10)
    with pytest.raises(ZeroDivisionError):
        theorem_pf_ratio(zs(2)[0][0])


def test_pf_power_examples():
    t = pf_ratio_table(2, 3, "power")
    assert t[(1, 1)] == pytest.approx(16.0)
    assert t[(2, 2)] == pytest.approx(576 / 36)
    assert t[(1, 3)] == pytest.approx(400 / 24)
    w = pf_ratio_table(2, 3, "words")
    assert w[(1, 1)] == pytest.approx(8.0)
    assert w[(2, 2)] == pytest.approx(480 / 36)
    assert w[(1, 3)] == pytest.approx(352 / 24)


def test_pluriharmonic_sums():
    (z1, _), _ = zs(2)
    hardy, weighted = theorem_ph_sums(z1, 0)
    assert hardy.value == 2
    assert weighted.value == pytest.approx(8 / 3)
    assert radial_seminorm(z1, 2).value == pytest.approx(0.25)
    with pytest.raises(ValueError):
        radial_seminorm(zs(2)[0][0] * zs(2)[1][1], 2)


def test_ratio_window_and_drift():
    assert ratio_window([0.5, 1.0, 2.0]) == (0.5, 2.0, 0.5)
    assert ratio_window([0.0, 1.0])[2] == 0.0
    p = np.arange(1, 11, dtype=float)
    assert abs(drift_exponent(list(2 + 1 / p))) < 0.05
    assert drift_exponent(list(p ** 0.5)) == pytest.approx(0.5, abs=1e-9)
    assert has_drift(list(1 / p))
    assert not has_drift(list(3 - 1 / p))
    with pytest.raises(ValueError):
        drift_exponent([1.0, 2.0])


@pytest.mark.parametrize("n", [2, 3])
def test_tables_are_bounded(n):
    for method in ("words", "power"):
        t = pf_ratio_table(n, 10, method)
        assert abs(drift_exponent([t[(p, p)] for p in range(1, 11)])) <= DRIFT_EXPONENT_MAX
    hardy, weighted = ph_ratio_tables(n, 0, 10)
    assert abs(drift_exponent(list(hardy.values()))) <= DRIFT_EXPONENT_MAX
    assert abs(drift_exponent(list(pi_ratio_table(n, n // 2 + 1, 10).values()))) <= DRIFT_EXPONENT_MAX


def test_pj_table_constant_for_n3():
    assert_allclose(list(pj_ratio_table(3, 1, 10).values()), 2.0, rtol=1e-12)


def test_second_order_probe_tracks_double_pole():
    f = build_basis(2, 1, 1).elements[0]
    probe = second_order_probe(f, [1e-2, 1e-3, 1e-4])
    assert probe["limit"] == pytest.approx(8.0)
    assert abs(probe["rows"][-1]["value"] - probe["limit"]) < 1e-2
    assert c_cici(2, 1, 1) * 2 == 8
