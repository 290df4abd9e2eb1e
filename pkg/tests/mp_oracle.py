"""Independent high-precision routes to the cell coefficients, built on mpmath.

``direct`` integrates ``G_pq(t) (1-t)^s`` for ``s > -1``; ``by_parts`` moves one
derivative onto ``G_pq`` and is valid for ``s > -2``.  Near ``t = 1`` both use
``1 - t = u^m`` with ``m`` chosen to cancel the algebraic endpoint weight, so
the quadrature sees a bounded integrand.
"""

import mpmath as mp


def profile(n, p, q, t, d=0):
    c = p + q + n
    fac = mp.rf(p, d) * mp.rf(q, d) / mp.rf(c, d)
    return fac * mp.hyp2f1(p + d, q + d, c + d, t) / mp.hyp2f1(p, q, c, 1)


def g(n, p, q, t):
    return t ** (p + q + n - 1) * profile(n, p, q, t) ** 2


def dg(n, p, q, t):
    m = p + q + n - 1
    F = profile(n, p, q, t)
    return m * t ** (m - 1) * F ** 2 + 2 * t ** m * F * profile(n, p, q, t, 1)


def _weighted(h, a, split=mp.mpf(1) / 2):
    """``integral_0^1 h(t) (1-t)^a dt`` for ``a > -1``."""
    head = mp.quad(lambda t: h(t) * (1 - t) ** a, [0, split])
    m = 1 / (a + 1)
    top = (1 - split) ** (a + 1)
    tail = mp.quad(lambda v: m * h(1 - v ** m), [0, top])
    return head + tail


def direct(n, p, q, s, dps=30):
    with mp.workdps(dps):
        s = mp.mpf(s)
        return mp.rf(s + 1, n) / mp.gamma(n) * _weighted(lambda t: g(n, p, q, t), s)


def by_parts(n, p, q, s, dps=30):
    with mp.workdps(dps):
        s = mp.mpf(s)
        return mp.rf(s + 2, n - 1) / mp.gamma(n) * _weighted(lambda t: dg(n, p, q, t), s + 1)
