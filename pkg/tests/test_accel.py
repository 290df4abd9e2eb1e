import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mdirichlet import _accel
from mdirichlet._accel import _fallback
from mdirichlet.harmonics import zonal_coefficients

compiled = pytest.importorskip("mdirichlet._accel._ckernels")


def test_backend_name():
    assert _accel.BACKEND_NAME in ("cython", "python")


def test_pure_switch_selects_fallback():
    env = dict(os.environ, MDIRICHLET_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import mdirichlet; print(mdirichlet.BACKEND_NAME)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("a,b,c", [(1, 1, 4), (2.5, 3, 7), (3, 1, 2.5)])
def test_hypergeometric_backends_agree(a, b, c):
    t = np.linspace(0, 0.95, 25)
    v1, e1 = _fallback.hyp2f1_series(a, b, c, t, 1e-14)
    v2, e2 = compiled.hyp2f1_series(a, b, c, t, 1e-14)
    assert_allclose(v1, v2, rtol=1e-13)
    assert np.all(e2 >= 0)


def test_zonal_backends_agree():
    rng = np.random.RandomState(42)
    coef = zonal_coefficients(3, 6)
    x = 0.5 * (rng.uniform(-1, 1, 30) + 1j * rng.uniform(-1, 1, 30))
    rho = np.abs(x) ** 2 + rng.uniform(0, 0.2, 30)
    assert_allclose(_fallback.zonal_cells(coef, x, rho), compiled.zonal_cells(coef, x, rho), atol=1e-13)
