"""Pure-Python/numpy implementations of the hot kernels.

The compiled module ``_ckernels`` exposes the same functions with the same
signatures; :mod:`mdirichlet._accel` picks one at import time.
"""

import numpy as np

_EPS = np.finfo(float).eps


def hyp2f1_series(a, b, c, t, tol):
    """Sum ``2F1(a, b; c; t)`` for each entry of ``t`` (``a, b >= 0``, ``c > 0``).

    Returns ``(values, error_bounds)``; see :func:`mdirichlet.specfun.gauss_2f1_bounded`
    for the tail bound.
    """
    t = np.asarray(t, dtype=float)
    m = t.size
    vals = np.ones(m)
    errs = np.zeros(m)
    if m == 0:
        return vals, errs
    if a == 0 or b == 0:
        return vals, errs
    term = np.ones(m)
    abs_total = np.ones(m)
    active = t > 0
    A = abs(a + b - c - 1)
    B = abs(a * b - c)
    k = 0
    while active.any():
        term = np.where(active, term * ((a + k) * (b + k) / ((c + k) * (k + 1))) * t, 0.0)
        k += 1
        mfac = min(1.0, (c + k) / k)
        rho = t * (1 + (A + B / k) / (mfac * (k + 1)))
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(rho < 1, np.abs(term) / (1 - rho), np.inf)
        done = active & (tail <= tol)
        errs[done] = tail[done] + _EPS * (k + 1) * abs_total[done]
        active &= ~done
        vals += np.where(active, term, 0.0)
        abs_total += np.where(active, np.abs(term), 0.0)
        if k > 10_000_000:
            raise RuntimeError("hypergeometric series did not converge")
    return vals, errs


def zonal_cells(coef, x, rho):
    """Evaluate the bigraded zonal polynomials on a batch of pairs.

    Parameters
    ----------
    coef : ndarray, shape (P+1, P+1, K+1)
        ``coef[p, q, k]`` multiplies ``x**(p-q+k) conj(x)**k rho**(q-k)`` when
        ``p >= q`` (and the conjugate monomial when ``p < q``).
    x : complex ndarray, shape (m,)
        Inner products ``<z, w>``.
    rho : float ndarray, shape (m,)
        ``|z|^2 |w|^2``.

    Returns
    -------
    ndarray, shape (m, P+1, P+1), complex
    """
    coef = np.asarray(coef, dtype=float)
    x = np.asarray(x, dtype=complex)
    rho = np.asarray(rho, dtype=float)
    P1 = coef.shape[0]
    K1 = coef.shape[2]
    m = x.size
    xabs2 = (x * np.conj(x)).real
    xp = np.ones((2 * P1, m), dtype=complex)
    for e in range(1, 2 * P1):
        xp[e] = xp[e - 1] * x
    out = np.zeros((m, P1, P1), dtype=complex)
    for p in range(P1):
        for q in range(p + 1):
            acc = np.zeros(m)
            for k in range(min(q, K1 - 1), -1, -1):
                c = coef[p, q, k]
                if c != 0.0:
                    acc += c * xabs2 ** k * rho ** (q - k)
            val = acc * xp[p - q]
            out[:, p, q] = val
            if p != q:
                out[:, q, p] = np.conj(val)
    return out
