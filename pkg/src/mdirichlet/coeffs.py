"""Coefficient functions ``C_pq(s)`` of the weighted M-harmonic norms.

``C_pq(s) = (s+1)_n / Gamma(n) * int_0^1 G_pq(t) (1-t)^s dt`` with

    G_pq(t) = t^{p+q+n-1} F(t)^2,   F = normalized 2F1(p, q; p+q+n; .)

For ``s > -1`` the integral is evaluated directly.  The continuation to
``s <= -1`` splits the integral at ``1 - delta``; near ``t = 1`` the integrand is
``B0(u) + B1(u) log(1/u) + B2(u) log(1/u)^2`` in ``u = 1 - t`` and each piece is
integrated term by term in closed form (:func:`lemma_pb`).

Also collected here are the closed-form families: the holomorphic
coefficients ``(n)_p / (n+s+1)_p``, the Dirichlet weights, and the real-ball
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .specfun import (
    harmonic_number,
    log_case_expansion,
    normalized_2f1_array,
    pochhammer,
)

__all__ = [
    "Estimate",
    "Pole",
    "MeromorphicEval",
    "lemma_pb",
    "GpqSeries",
    "g_pq",
    "g_pq_values",
    "c_pq",
    "c_pq_continued",
    "c_p0_closed",
    "c_circ",
    "c_cici",
    "cici_strength",
    "inverse_coeff_limits",
    "pole_extrapolation",
    "harm_coeff",
    "harm_sq",
    "vo_probe",
]

_EPS = np.finfo(float).eps


class Estimate(NamedTuple):
    """A value with an error estimate."""

    value: float
    error: float


@dataclass(frozen=True)
class Pole:
    """A pole of order ``order`` at ``location`` with leading Laurent coefficient ``strength``."""

    location: float
    order: int
    strength: float


@dataclass(frozen=True)
class MeromorphicEval:
    """A meromorphic function on a real window, given by its poles and an evaluator.

    ``evaluator(s)`` returns an :class:`Estimate` and is valid for ``s > lower``
    away from the listed poles.
    """

    poles: tuple[Pole, ...]
    evaluator: Callable[[float], Estimate] = field(repr=False)
    lower: float = -math.inf
    domain_note: str = ""

    def evaluate(self, s: float) -> Estimate:
        s = float(s)
        if s <= self.lower:
            raise ValueError(f"s={s} outside the continuation window s > {self.lower}")
        for pole in self.poles:
            if s == pole.location:
                raise ValueError(f"evaluation at a pole s={s}")
        return self.evaluator(s)

    def __call__(self, s: float) -> float:
        return self.evaluate(s).value

    def pole_at(self, s0: float) -> Pole | None:
        for pole in self.poles:
            if pole.location == s0:
                return pole
        return None


# ---------------------------------------------------------------------------
# Gauss-Legendre helpers


@lru_cache(maxsize=None)
def _leggauss(k: int):
    return np.polynomial.legendre.leggauss(k)


def _composite_nodes(a: float, b: float, panels: int, k: int):
    x, w = _leggauss(k)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# term-by-term continuation of int_0^delta F(u) log^m(1/u) u^s du


def _power_log_integral(x: float, m: int, delta: float) -> float:
    """``int_0^delta u^{x-1} log^m(1/u) du`` continued to all ``x != 0``.

    Equals ``sum_{i<=m} (m!/i!) log^i(1/delta) delta^x / x^{m-i+1}``.
    """
    ld = math.log(1 / delta)
    dx = delta ** x
    return sum(math.factorial(m) / math.factorial(i) * ld ** i * dx / x ** (m - i + 1) for i in range(m + 1))


def lemma_pb(F_coeffs: Sequence[float], delta: float, m: int, big_n: int | None = None,
             nodes: int = 80) -> MeromorphicEval:
    """Continuation in ``s`` of ``int_0^delta F(u) log^m(1/u) u^s du``.

    Parameters
    ----------
    F_coeffs : sequence of float
        Taylor coefficients of ``F`` at 0.  A sequence no longer than ``big_n``
        is taken to be the whole polynomial ``F``.
    delta : float
        Upper limit, ``0 < delta <= 1`` and inside the radius of convergence.
    m : int
        Power of the logarithm.
    big_n : int, optional
        Coefficients ``j < big_n`` are integrated in closed form, which carries
        the poles at ``s = -j-1`` (order ``m+1``, strength ``m! F_j``).  The rest
        are integrated by Gauss-Legendre quadrature, valid for ``s > -big_n-1``.
        Defaults to ``min(40, len(F_coeffs))``.
    """
    F = np.asarray(F_coeffs, dtype=float)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if big_n is None:
        big_n = min(40, len(F))
    if big_n < 0 or big_n > len(F):
        raise ValueError(f"big_n={big_n} exceeds the {len(F)} available coefficients")
    head = F[:big_n]
    rest = F[big_n:]
    mf = math.factorial(m)
    poles = tuple(Pole(float(-j - 1), m + 1, mf * float(c)) for j, c in enumerate(head) if c != 0)
    lower = -math.inf if len(rest) == 0 else float(-big_n - 1)

    if len(rest):
        u1, w1 = _composite_nodes(0.0, delta, 2, nodes // 2)
        u2, w2 = _composite_nodes(0.0, delta, 4, nodes // 2)
        logs1, logs2 = np.log(1 / u1) ** m, np.log(1 / u2) ** m
        # remainder values sum_{j >= big_n} F_j u^j, summed without cancellation
        r1 = np.polynomial.polynomial.polyval(u1, rest) * u1 ** big_n
        r2 = np.polynomial.polynomial.polyval(u2, rest) * u2 ** big_n
        ra2 = np.polynomial.polynomial.polyval(u2, np.abs(rest)) * u2 ** big_n
        last = float(np.max(np.abs(rest[-3:]))) if len(rest) >= 3 else float(np.max(np.abs(rest)))
        ld = math.log(1 / delta) if delta < 1 else 1.0

    def evaluator(s: float) -> Estimate:
        total, mag = 0.0, 0.0
        for j, c in enumerate(head):
            if c:
                term = c * _power_log_integral(s + j + 1, m, delta)
                total += term
                mag += abs(term)
        err = 4 * _EPS * mag
        if len(rest):
            q1 = float(w1 @ (r1 * logs1 * u1 ** s))
            q2 = float(w2 @ (r2 * logs2 * u2 ** s))
            total += q2
            err += abs(q2 - q1) + 4 * _EPS * float(w2 @ (ra2 * logs2 * u2 ** s))
            # truncated coefficients beyond the supplied sequence, geometric estimate
            L = len(F)
            err += last * delta ** (L + s + 1) * (ld + 1) ** m * 4
        return Estimate(total, err)

    note = "all real s except the listed poles" if not len(rest) else f"s > {lower:g} except the listed poles"
    return MeromorphicEval(poles, evaluator, lower, note)


# ---------------------------------------------------------------------------
# G_pq


def _profile_prefactor(n: int, p: int, q: int) -> Fraction:
    """``Gamma(n+p) Gamma(n+q) / (Gamma(n) Gamma(n+p+q))``."""
    return Fraction(pochhammer(n, p) * pochhammer(n, q), pochhammer(n, p + q))


@dataclass(frozen=True)
class GpqSeries:
    """Power series ``G_pq(t) = sum_k coefficients[k] t^(exponent + k)`` truncated at ``degree``.

    ``tail_bound`` bounds the omitted terms on ``[0, 1 - delta]``.
    """

    n: int
    p: int
    q: int
    exponent: int
    coefficients: np.ndarray
    delta: float
    tail_bound: float

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return t ** self.exponent * np.polynomial.polynomial.polyval(t, self.coefficients)


def g_pq(n: int, p: int, q: int, degree: int, delta: float = 0.5) -> GpqSeries:
    """Taylor coefficients of ``G_pq`` at 0 (all nonnegative) with a tail bound on ``[0, 1-delta]``."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    pre = _profile_prefactor(n, p, q)
    f = [pre]
    for k in range(degree):
        f.append(f[-1] * (p + k) * (q + k) / ((p + q + n + k) * (k + 1)))
    g = [sum((f[i] * f[k - i] for i in range(k + 1)), Fraction(0)) for k in range(degree + 1)]
    coeffs = np.array([float(c) for c in g])
    exponent = p + q + n - 1
    t0 = 1 - delta
    # all coefficients are nonnegative: tail <= G(t0) - partial sum(t0)
    full = float(normalized_2f1_array(n, p, q, np.array([t0]))[0]) ** 2
    partial = float(np.polynomial.polynomial.polyval(t0, coeffs))
    tail = max(full - partial, 0.0) * t0 ** exponent + 1e-13 * full
    return GpqSeries(n, p, q, exponent, coeffs, float(delta), tail)


def g_pq_values(n: int, p: int, q: int, t) -> np.ndarray:
    """``G_pq(t)`` on ``[0, 1]``."""
    t = np.asarray(t, dtype=float)
    return t ** (p + q + n - 1) * normalized_2f1_array(n, p, q, t) ** 2


# ---------------------------------------------------------------------------
# C_pq(s)


def _poch_float(x: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= x + i
    return out


def c_pq(n: int, p: int, q: int, s: float) -> Estimate:
    """``C_pq(s)`` for ``s > -1`` by direct quadrature of ``G_pq (1-t)^s``.

    ``[0, 1/2]`` uses adaptive Gauss-Kronrod; ``[1/2, 1]`` uses the algebraic
    endpoint weight ``(1-t)^s``.  ``C_00 = 1`` exactly.
    """
    s = float(s)
    if s <= -1:
        raise ValueError("direct quadrature needs s > -1; use c_pq_continued")
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0")
    if p == 0 and q == 0:
        return Estimate(1.0, 0.0)

    def G(t):
        return float(g_pq_values(n, p, q, np.array([t]))[0])

    i1, e1 = integrate.quad(lambda t: G(t) * (1 - t) ** s, 0.0, 0.5, epsabs=1e-15, epsrel=1e-13, limit=200)
    i2, e2 = integrate.quad(G, 0.5, 1.0, weight="alg", wvar=(0.0, s), epsabs=1e-15, epsrel=1e-13, limit=200)
    scale = _poch_float(s + 1, n) / math.gamma(n)
    integral = i1 + i2
    # add the profile evaluation accuracy (about 1e-13 relative) to the quadrature estimates
    err = scale * (e1 + e2 + 2e-13 * abs(integral))
    return Estimate(scale * integral, err)


def _binomial_series(M: int) -> np.ndarray:
    return np.array([(-1) ** k * math.comb(M, k) for k in range(M + 1)], dtype=float)


def _trunc_conv(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    return np.convolve(a, b)[:L]


def _shift(a: np.ndarray, k: int, L: int) -> np.ndarray:
    out = np.zeros(L)
    out[k:] = a[: L - k]
    return out


@lru_cache(maxsize=256)
def _b_series(n: int, p: int, q: int, L: int, delta: float):
    """``B0, B1, B2`` coefficient arrays (length ``L``) including their ``u^n`` shifts.

    ``G(1-u) = B0(u) + B1(u) log(1/u) + B2(u) log(1/u)^2`` with
    ``B0 = (1-u)^M A0^2``, ``B1 = 2 (1-u)^M A0 A1 u^n``, ``B2 = (1-u)^M A1^2 u^{2n}``.
    Also returns the same series built from absolute values (for cancellation estimates).
    """
    exp = log_case_expansion(n, p, q, L, delta)
    A0, A1 = exp.a0, exp.a1
    binom = _binomial_series(p + q + n - 1)
    B0 = _trunc_conv(binom, _trunc_conv(A0, A0, L), L)
    B1 = _shift(2 * _trunc_conv(binom, _trunc_conv(A0, A1, L), L), n, L)
    B2 = _shift(_trunc_conv(binom, _trunc_conv(A1, A1, L), L), 2 * n, L)
    aA0, aA1, ab = np.abs(A0), np.abs(A1), np.abs(binom)
    M0 = _trunc_conv(ab, _trunc_conv(aA0, aA0, L), L)
    M1 = _shift(2 * _trunc_conv(ab, _trunc_conv(aA0, aA1, L), L), n, L)
    M2 = _shift(_trunc_conv(ab, _trunc_conv(aA1, aA1, L), L), 2 * n, L)
    return (B0, B1, B2), (M0, M1, M2)


@lru_cache(maxsize=256)
def c_pq_continued(n: int, p: int, q: int, delta: float = 0.1, big_n: int = 40) -> MeromorphicEval:
    """Meromorphic continuation of ``C_pq(s)`` for ``pq > 0``.

    Poles: double at ``s = -n-1, ..., -2n`` and triple at ``s = -2n-1-j``; the
    strengths are read off the ``B1`` and ``B2`` series.  The simple poles of
    the ``B0`` part at ``s = -1, ..., -n`` are cancelled analytically by
    ``(s+1)_n``.  Values are computed for ``s > -big_n - 1``.
    """
    if p * q == 0:
        raise ValueError("continuation is for pq > 0; use c_p0_closed for the holomorphic family")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    L = big_n + 120
    (B0, B1, B2), (M0, M1, M2) = _b_series(n, p, q, L, float(delta))
    B0_low = B0[:n].copy()
    B0_high = B0.copy()
    B0_high[:n] = 0.0
    M0 = M0.copy()
    M0[:n] = 0.0
    parts = [lemma_pb(B0_high, delta, 0, big_n), lemma_pb(B1, delta, 1, big_n), lemma_pb(B2, delta, 2, big_n)]
    mag_parts = [lemma_pb(M0, delta, 0, big_n), lemma_pb(M1, delta, 1, big_n), lemma_pb(M2, delta, 2, big_n)]
    gn = math.gamma(n)

    # regular part on [0, 1 - delta]: composite Gauss-Legendre, refined until two rules agree
    t_hi = 1 - delta
    panels = 4
    while True:
        x1, w1 = _composite_nodes(0.0, t_hi, panels, 24)
        x2, w2 = _composite_nodes(0.0, t_hi, panels, 40)
        g1, g2 = g_pq_values(n, p, q, x1), g_pq_values(n, p, q, x2)
        probe = [float(w1 @ (g1 * (1 - x1) ** s)) - float(w2 @ (g2 * (1 - x2) ** s)) for s in (0.0, -2 * n - 1.0)]
        if max(abs(d) for d in probe) < 1e-14 or panels >= 64:
            break
        panels *= 2

    def regular(s: float) -> Estimate:
        v1 = float(w1 @ (g1 * (1 - x1) ** s))
        v2 = float(w2 @ (g2 * (1 - x2) ** s))
        return Estimate(v2, abs(v2 - v1) + 1e-13 * abs(v2))

    def evaluator(s: float) -> Estimate:
        poch = _poch_float(s + 1, n)
        reg = regular(s)
        total, err = reg.value, reg.error
        mag = abs(reg.value)
        for part, mpart in zip(parts, mag_parts):
            e = part.evaluator(s)
            total += e.value
            err += e.error
            mag += abs(mpart.evaluator(s).value)
        value = poch * total
        err = abs(poch) * (err + 8 * _EPS * mag)
        # removable part: (s+1)_n / (s+j+1) = prod_{i != j+1} (s+i)
        for j, c in enumerate(B0_low):
            if c:
                prod = 1.0
                for i in range(1, n + 1):
                    if i != j + 1:
                        prod *= s + i
                term = c * delta ** (s + j + 1) * prod
                value += term
                err += 4 * _EPS * abs(term)
        return Estimate(value / gn, err / gn)

    poles = []
    for k in range(n + 1, big_n + 1):
        poch = _poch_float(-k + 1, n)
        if k <= 2 * n:
            strength = 1.0 * B1[k - 1] * poch / gn
            poles.append(Pole(float(-k), 2, strength))
        else:
            strength = 2.0 * B2[k - 1] * poch / gn
            poles.append(Pole(float(-k), 3, strength))
    note = (f"values for s > {-big_n - 1}; high-precision window s > {-2 * n - 1}; "
            f"split at t = {1 - delta:g}")
    return MeromorphicEval(tuple(poles), evaluator, float(-big_n - 1), note)


def c_p0_closed(n: int, p: int, s) -> float:
    """``C_p0(s) = C_0p(s) = (n)_p / (n+s+1)_p``; simple poles at ``s = -n-1, ..., -n-p``."""
    den = pochhammer(n + s + 1, p)
    if den == 0:
        raise ValueError(f"s={s} is a pole of C_p0")
    num = pochhammer(n, p)
    if isinstance(s, (int, Fraction)):
        return Fraction(num) / den
    return num / den


def c_circ(n: int, p: int) -> Fraction:
    """Holomorphic Dirichlet weight ``p (n)_p / p!``."""
    return Fraction(p * pochhammer(n, p), math.factorial(p))


def c_cici(n: int, p: int, q: int) -> Fraction:
    """M-harmonic Dirichlet weight: ``0`` if ``pq = 0`` else ``(p)_n (q)_n / Gamma(n)^2``."""
    if p * q == 0:
        return Fraction(0)
    return Fraction(pochhammer(p, n) * pochhammer(q, n), math.factorial(n - 1) ** 2)


def cici_strength(n: int, p: int, q: int) -> Fraction:
    """Exact leading coefficient of ``C_pq`` at the double pole ``s = -n-1``.

    From ``B1(0) = 2 A0(0) A1(0)`` with ``A0(0) = 1``, the limit of
    ``(s+n+1)^2 C_pq(s)`` is ``2 (p)_n (q)_n / Gamma(n)^2`` for ``pq > 0``,
    i.e. twice :func:`c_cici`.
    """
    return 2 * c_cici(n, p, q)


def inverse_coeff_limits(n: int, p: int, q: int) -> tuple[Fraction, Fraction]:
    """First two Taylor coefficients of ``1 / C_pq(-n-1+eps)`` in ``eps``.

    Returns ``(a1, a2)`` with ``1/C_pq = a1 eps + a2 eps^2 + O(eps^3)``; for the
    constant cell ``1/C_00 = 1`` and the pair is ``(0, 0)``.
    """
    if p == 0 and q == 0:
        return Fraction(0), Fraction(0)
    if p * q == 0:
        m = max(p, q)
        # 1/C_p0 = (eps)_p / (n)_p = eps (p-1)! (1 + eps H_{p-1} + ...) / (n)_p
        base = Fraction(math.factorial(m - 1), pochhammer(n, m))
        return base, base * harmonic_number(m - 1)
    return Fraction(0), 1 / cici_strength(n, p, q)


def pole_extrapolation(n: int, p: int, q: int, eps: Sequence[float] = (1e-2, 1e-3, 1e-4),
                       degree: int = 1) -> dict:
    """Extrapolate ``eps^2 C_pq(-n-1+eps)`` to ``eps = 0``.

    ``degree = 1`` draws the line through the two smallest ``eps``; ``degree = 2``
    interpolates a quadratic through the three smallest.  The returned
    ``error`` propagates the evaluation errors through the interpolation weights.
    """
    if p * q == 0:
        raise ValueError("the double pole needs p, q >= 1")
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    C = c_pq_continued(n, p, q)
    rows = []
    for e in eps:
        est = C.evaluate(-n - 1 + e)
        rows.append((float(e), e * e * est.value, e * e * est.error))
    use = sorted(rows)[: degree + 1]
    xs = [r[0] for r in use]
    # Lagrange weights at 0
    weights = []
    for i, xi in enumerate(xs):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= xj / (xj - xi)
        weights.append(w)
    value = sum(w * r[1] for w, r in zip(weights, use))
    error = sum(abs(w) * r[2] for w, r in zip(weights, use))
    return {"rows": rows, "estimate": value, "error": error, "degree": degree}


def harm_coeff(n: int, p: int, s) -> float:
    """Real-ball coefficient ``(n/2)_p / (n/2+s+1)_p``."""
    half = Fraction(n, 2)
    exact = isinstance(s, (int, Fraction))
    den = pochhammer(half + (Fraction(s) if exact else s) + 1, p) if exact else _poch_float(n / 2 + s + 1, p)
    if den == 0:
        raise ValueError(f"s={s} is a pole of the harmonic coefficient")
    num = pochhammer(half, p)
    return num / den if exact else float(num) / den


def harm_sq(n: int, p: int) -> Fraction:
    """Harmonic Dirichlet weight ``p (n/2)_p / p!``."""
    return p * pochhammer(Fraction(n, 2), p) / math.factorial(p)


def vo_probe(n: int, s: float, pmax: int) -> np.ndarray:
    """Table of ``C_pq(s) [(p+1)(q+1)]^{s+1}`` for ``p, q <= pmax`` (empirical probe only).

    Uses the direct path for ``s > -1`` and the continuation otherwise.
    """
    out = np.zeros((pmax + 1, pmax + 1))
    for p in range(pmax + 1):
        for q in range(pmax + 1):
            if p * q == 0:
                v = float(c_p0_closed(n, max(p, q), s))
            elif s > -1:
                v = c_pq(n, p, q, s).value
            else:
                v = c_pq_continued(n, p, q)(s)
            out[p, q] = v * ((p + 1) * (q + 1)) ** (s + 1)
    return out
