import numpy as np
import pytest

from mdirichlet.polyalg import ComplexPoly, RealPoly

SEED = 42


@pytest.fixture
def rng():
    return np.random.RandomState(SEED)


def zs(n):
    """Holomorphic and anti-holomorphic coordinate polynomials."""
    return ([ComplexPoly.z(n, j) for j in range(1, n + 1)],
            [ComplexPoly.zbar(n, j) for j in range(1, n + 1)])


def xs(n):
    return [RealPoly.x(n, j) for j in range(1, n + 1)]


def random_unitary(n, rng):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def sphere_points(n, m, rng):
    z = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return z / np.linalg.norm(z, axis=1)[:, None]


_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, ok, detail)``; parts of one criterion are combined with AND."""
    store = request.config.stash[_ACCEPTANCE]

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        prev = store.get(number)
        if prev is not None:
            ok = ok and prev[1]
            detail = prev[2] + "; " + detail
        store[number] = (title, bool(ok), detail)
        print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        title, ok, detail = store[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
