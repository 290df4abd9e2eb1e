# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()

cdef double _EPS = 2.220446049250313e-16


def hyp2f1_series(double a, double b, double c, t, double tol):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tt = np.ascontiguousarray(t, dtype=np.float64).ravel()
    cdef Py_ssize_t m = tt.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals = np.ones(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] errs = np.zeros(m)
    cdef double x, term, total, abs_total, rho, mfac, tail
    cdef double A = fabs(a + b - c - 1), B = fabs(a * b - c)
    cdef long k
    if a == 0 or b == 0:
        return vals, errs
    for i in range(m):
        x = tt[i]
        if x == 0:
            continue
        term = 1.0
        total = 1.0
        abs_total = 1.0
        k = 0
        while True:
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
            k += 1
            mfac = (c + k) / k
            if mfac > 1.0:
                mfac = 1.0
            rho = x * (1 + (A + B / k) / (mfac * (k + 1)))
            tail = fabs(term) / (1 - rho) if rho < 1 else INFINITY
            if tail <= tol:
                errs[i] = tail + _EPS * (k + 1) * abs_total
                break
            total += term
            abs_total += fabs(term)
            if k > 10000000:
                raise RuntimeError("hypergeometric series did not converge")
        vals[i] = total
    return vals, errs


def zonal_cells(coef, x, rho):
    cdef cnp.ndarray[cnp.float64_t, ndim=3] cf = np.ascontiguousarray(coef, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] xx = np.ascontiguousarray(x, dtype=np.complex128).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rr = np.ascontiguousarray(rho, dtype=np.float64).ravel()
    cdef Py_ssize_t P1 = cf.shape[0], K1 = cf.shape[2], m = xx.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] out = np.zeros((m, P1, P1), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] apow = np.empty(P1 + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rpow = np.empty(P1 + 1)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] xpow = np.empty(P1 + 1, dtype=np.complex128)
    cdef Py_ssize_t i, p, q, k, kmax
    cdef double xa2, acc, cc
    cdef double complex xi, val
    for i in range(m):
        xi = xx[i]
        xa2 = xi.real * xi.real + xi.imag * xi.imag
        apow[0] = 1.0
        rpow[0] = 1.0
        xpow[0] = 1.0
        for k in range(1, P1 + 1):
            apow[k] = apow[k - 1] * xa2
            rpow[k] = rpow[k - 1] * rr[i]
            xpow[k] = xpow[k - 1] * xi
        for p in range(P1):
            for q in range(p + 1):
                acc = 0.0
                kmax = q if q < K1 - 1 else K1 - 1
                for k in range(kmax, -1, -1):
                    cc = cf[p, q, k]
                    if cc != 0.0:
                        acc += cc * apow[k] * rpow[q - k]
                val = acc * xpow[p - q]
                out[i, p, q] = val
                if p != q:
                    out[i, q, p] = val.conjugate()
    return out
