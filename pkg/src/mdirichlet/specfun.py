"""Pochhammer symbols and the Gauss hypergeometric function on [0, 1).

Besides plain series summation with a certified tail, this module provides the
logarithmic-case connection expansion of the normalized function

    F(t) = Gamma(n+p) Gamma(n+q) / (Gamma(n) Gamma(n+p+q)) * 2F1(p, q; p+q+n; t)

around ``t = 1``, written in ``u = 1 - t`` as ``A0(u) + A1(u) u**n log(1/u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _accel

__all__ = [
    "pochhammer",
    "gauss_2f1",
    "gauss_2f1_bounded",
    "gauss_2f1_array",
    "gauss_value_at_one",
    "normalized_2f1",
    "normalized_2f1_array",
    "harmonic_number",
    "digamma_grid",
    "LogCaseExpansion",
    "log_case_expansion",
]

EULER_GAMMA = 0.57721566490153286060651209008240243
_EPS = np.finfo(float).eps


def pochhammer(x, m: int):
    """Rising factorial ``x (x+1) ... (x+m-1)``; exact for ``int``/``Fraction`` input."""
    if int(m) != m or m < 0:
        raise ValueError("order must be a nonnegative integer")
    out = 1 if isinstance(x, (int, Fraction)) else 1.0
    for i in range(int(m)):
        out *= x + i
    return out


def harmonic_number(m: int) -> Fraction:
    """``1 + 1/2 + ... + 1/m`` (zero for ``m = 0``)."""
    return _harmonic(int(m))


@lru_cache(maxsize=None)
def _harmonic(m: int) -> Fraction:
    if m <= 0:
        return Fraction(0)
    return _harmonic(m - 1) + Fraction(1, m)


def digamma_grid(x) -> float:
    """Digamma at a positive integer or half-integer.

    Uses ``psi(x+1) = psi(x) + 1/x`` from ``psi(1) = -gamma`` and
    ``psi(1/2) = -gamma - 2 log 2``.
    """
    x = Fraction(x)
    if x <= 0 or x.denominator not in (1, 2):
        raise ValueError("digamma_grid needs a positive integer or half-integer")
    if x.denominator == 1:
        return -EULER_GAMMA + float(_harmonic(int(x) - 1))
    m = int(x - Fraction(1, 2))
    acc = sum(Fraction(2, 2 * i + 1) for i in range(m))
    return -EULER_GAMMA - 2 * math.log(2) + float(acc)


def _nonpositive_int(x) -> bool:
    return float(x) <= 0 and float(x) == int(x)


def gauss_2f1_bounded(a, b, c, t, tol: float = 1e-12, max_terms: int = 1_000_000):
    """Sum ``2F1(a, b; c; t)`` for ``0 <= t < 1`` and return ``(value, error_bound)``.

    The bound covers the truncated tail (a geometric majorant of the term ratios)
    plus a floating-point summation allowance.  Terminating series are summed
    in full, with a zero truncation error.
    """
    if _nonpositive_int(c) and not (_nonpositive_int(a) and a > c) and not (_nonpositive_int(b) and b > c):
        raise ValueError(f"c={c} is a nonpositive integer")
    t = float(t)
    if not 0 <= t < 1:
        raise ValueError(f"series diverges or is undefined for t={t} (need 0 <= t < 1)")
    a, b, c = float(a), float(b), float(c)
    terminating = _nonpositive_int(a) or _nonpositive_int(b)
    term, total, abs_total = 1.0, 1.0, 1.0
    k = 0
    A = abs(a + b - c - 1)
    B = abs(a * b - c)
    while True:
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * t
        term *= ratio
        k += 1
        if term == 0.0:
            if terminating:
                return total, _EPS * (k + 1) * abs_total
            if t == 0.0:
                return total, 0.0
        if not terminating and k >= 1 and c + k > 0:
            m = min(1.0, (c + k) / k)
            rho = t * (1 + (A + B / k) / (m * (k + 1)))
            if rho < 1:
                tail = abs(term) / (1 - rho)
                if tail <= tol:
                    return total, tail + _EPS * (k + 1) * abs_total
        total += term
        abs_total += abs(term)
        if k > max_terms:
            raise RuntimeError("hypergeometric series did not converge")


def gauss_2f1(a, b, c, t, tol: float = 1e-12) -> float:
    """``2F1(a, b; c; t)`` for ``0 <= t < 1`` with absolute error at most ``tol``.

    For the normalized profile family ``(p, q; p+q+n)`` with ``t`` close to 1,
    use :func:`normalized_2f1`, which switches to the logarithmic expansion.
    """
    return gauss_2f1_bounded(a, b, c, t, tol)[0]


def gauss_2f1_array(a, b, c, t, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`gauss_2f1_bounded` for nonnegative ``a, b`` and positive ``c``."""
    t = np.ascontiguousarray(np.asarray(t, dtype=float))
    if t.size and (t.min() < 0 or t.max() >= 1):
        raise ValueError("need 0 <= t < 1")
    if min(a, b) < 0 or c <= 0:
        return (np.array([gauss_2f1_bounded(a, b, c, x, tol)[0] for x in t.ravel()]).reshape(t.shape),
                np.array([gauss_2f1_bounded(a, b, c, x, tol)[1] for x in t.ravel()]).reshape(t.shape))
    vals, errs = _accel.backend.hyp2f1_series(float(a), float(b), float(c), t.ravel(), float(tol))
    return np.asarray(vals).reshape(t.shape), np.asarray(errs).reshape(t.shape)


def gauss_value_at_one(p: int, q: int, n: int, exact: bool = False):
    """``2F1(p, q; p+q+n; 1) = Gamma(p+q+n) Gamma(n) / (Gamma(p+n) Gamma(q+n))``."""
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0")
    val = Fraction(pochhammer(p + n, q), pochhammer(n, q))
    return val if exact else float(val)


# ---------------------------------------------------------------------------
# logarithmic case near t = 1


@dataclass(frozen=True)
class LogCaseExpansion:
    """``F(1-u) = A0(u) + A1(u) u**n log(1/u)`` truncated at ``u**degree`` in A0 and A1.

    Attributes
    ----------
    a0, a1 : ndarray
        Coefficients of ``u**j`` for ``j = 0..degree``.
    hsum : ndarray
        The harmonic-sum factors ``h''_j`` entering ``a0[n + j] = a1[j] * hsum[j]``.
    delta : float
        Validity window ``0 < u <= delta``.
    tail_bound : float
        Certified sup-norm bound of the omitted terms on that window.
    """

    n: int
    p: int
    q: int
    degree: int
    delta: float
    a0: np.ndarray
    a1: np.ndarray
    hsum: np.ndarray
    tail_bound: float

    def evaluate(self, t) -> np.ndarray | float:
        u = 1.0 - np.asarray(t, dtype=float)
        if np.any(u <= 0) or np.any(u > self.delta * (1 + 1e-12)):
            raise ValueError(f"expansion valid only for 1 - delta <= t < 1 (delta={self.delta})")
        A0 = np.polynomial.polynomial.polyval(u, self.a0)
        A1 = np.polynomial.polynomial.polyval(u, self.a1)
        out = A0 + A1 * u ** self.n * np.log(1.0 / u)
        return float(out) if np.ndim(out) == 0 else out


def _a1_coeffs(n: int, p: int, q: int, count: int) -> np.ndarray:
    c0 = Fraction((-1) ** n * math.factorial(n + p - 1) * math.factorial(n + q - 1),
                  math.factorial(n) * math.factorial(n - 1) * math.factorial(p - 1) * math.factorial(q - 1))
    out = np.empty(count)
    c = float(c0)
    for j in range(count):
        out[j] = c
        c *= (n + p + j) * (n + q + j) / ((j + 1) * (j + n + 1))
    return out


def _hsum(n: int, p: int, q: int, j: int) -> Fraction:
    # psi(j+1) + psi(j+n+1) - psi(p+j+n) - psi(q+j+n), Euler's constant cancels
    return -(_harmonic(j + n + p - 1) - _harmonic(j)) - (_harmonic(j + n + q - 1) - _harmonic(j + n))


def _ratio_bound(n, p, q, j):
    """Bound on ``|a1[k+1] / a1[k]|`` for every ``k >= j``; the ratio decreases in ``k``."""
    return (n + p + j) * (n + q + j) / ((j + 1) * (j + n + 1))


def _tail_sum(first: float, rho: float) -> float:
    if rho >= 1:
        return math.inf
    return first / (1 - rho)


@lru_cache(maxsize=256)
def log_case_expansion(n: int, p: int, q: int, degree: int, delta: float = 0.5) -> LogCaseExpansion:
    """Connection expansion of the normalized ``2F1(p, q; p+q+n; t)`` at ``t = 1``.

    Parameters
    ----------
    n, p, q : int
        ``n >= 1`` and ``p, q >= 1`` (the logarithmic case).
    degree : int
        Truncation degree (at least ``n``) for both ``A0`` and ``A1``.
    delta : float
        The tail bound is certified for ``0 < u = 1 - t <= delta``, ``delta < 1``.
    """
    if p < 1 or q < 1:
        raise ValueError("logarithmic case needs p, q >= 1; use gauss_2f1 otherwise")
    if n < 1:
        raise ValueError("need n >= 1")
    if degree < n:
        raise ValueError(f"degree must be at least n={n}")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    a1 = _a1_coeffs(n, p, q, degree + 2)
    hs = np.array([float(_hsum(n, p, q, j)) for j in range(degree + 2)])
    a0 = np.zeros(degree + 1)
    for j in range(n):
        a0[j] = float(Fraction(pochhammer(p, j) * pochhammer(q, j), pochhammer(1 - n, j) * math.factorial(j)))
    for j in range(degree + 1 - n):
        a0[n + j] = a1[j] * hs[j]

    # tail of A0: indices j >= degree + 1 - n of a1[j] h_j u^(n+j), |h_j| <= (n+p+q-2)/(j+1)
    j0 = degree + 1 - n
    rho0 = delta * _ratio_bound(n, p, q, j0)
    a1_j0 = abs(float(_a1_coeffs(n, p, q, j0 + 1)[j0]))
    tail0 = _tail_sum(a1_j0 * (n + p + q - 2) / (j0 + 1) * delta ** (n + j0), rho0)
    # tail of A1 u^n log(1/u): indices j >= degree + 1
    j1 = degree + 1
    lmax = 1 / (n * math.e) if math.exp(-1 / n) <= delta else delta ** n * math.log(1 / delta)
    rho1 = delta * _ratio_bound(n, p, q, j1)
    tail1 = _tail_sum(abs(a1[j1]) * delta ** j1 * lmax, rho1)
    tail = tail0 + tail1
    if not math.isfinite(tail):
        raise ValueError("degree too small for a convergent tail bound on this window")
    return LogCaseExpansion(n, p, q, degree, float(delta), a0, a1[: degree + 1].copy(), hs[: degree + 1].copy(), tail)


def _expansion_for(n: int, p: int, q: int, delta: float, tol: float) -> LogCaseExpansion:
    degree = max(n, 8)
    while True:
        try:
            exp = log_case_expansion(n, p, q, degree, delta)
        except ValueError:
            exp = None
        if exp is not None and exp.tail_bound <= tol:
            return exp
        degree *= 2
        if degree > 4096:
            raise RuntimeError("log-case expansion failed to reach tolerance")


_SWITCH = 0.9


def normalized_2f1(n: int, p: int, q: int, t, tol: float = 1e-13) -> float:
    """``2F1(p, q; p+q+n; t) / 2F1(p, q; p+q+n; 1)`` on ``[0, 1]``.

    Uses the direct series for ``t <= 0.9`` and the logarithmic connection
    expansion above that; the value at ``t = 1`` is exactly 1.
    """
    t = float(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if p == 0 or q == 0 or t == 1.0:
        return 1.0
    if t <= _SWITCH:
        return gauss_2f1(p, q, p + q + n, t, tol) / gauss_value_at_one(p, q, n)
    return _expansion_for(n, p, q, 1 - _SWITCH, tol).evaluate(t)


def normalized_2f1_array(n: int, p: int, q: int, t, tol: float = 1e-13) -> np.ndarray:
    """Vectorized :func:`normalized_2f1`."""
    t = np.asarray(t, dtype=float)
    if t.size and (t.min() < 0 or t.max() > 1):
        raise ValueError("t must lie in [0, 1]")
    out = np.ones(t.shape)
    if p == 0 or q == 0:
        return out
    lo = t <= _SWITCH
    if lo.any():
        out[lo] = gauss_2f1_array(p, q, p + q + n, t[lo], tol)[0] / gauss_value_at_one(p, q, n)
    hi = (~lo) & (t < 1)
    if hi.any():
        out[hi] = _expansion_for(n, p, q, 1 - _SWITCH, tol).evaluate(t[hi])
    return out
