"""Norms and seminorms computed cellwise on Peter-Weyl decompositions.

Every quantity is a weighted sum ``sum w_pq ||f_pq||^2`` of exact sphere norms
of the cells.  Tangential word sums are also available by brute-force
operator application for cross-checking the spectral formulas.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .coeffs import c_circ, c_cici, c_p0_closed, c_pq, c_pq_continued, cici_strength, harm_coeff, harm_sq
from .harmonics import PWDecomposition, peter_weyl
from .polyalg import ComplexPoly, RealPoly, sphere_norm_sq, tangential, tangential_fields
from .realharm import harm_decompose, real_sphere_inner
from .report import SeminormReport
from .specfun import normalized_2f1

__all__ = [
    "SeminormReport",
    "norm_s",
    "hardy_norm",
    "dilate_norm_sq",
    "dirichlet_cici",
    "dirichlet_circ",
    "dirichlet_sq",
    "tangential_eigenvalue",
    "word_weight",
    "tangential_sum",
    "word_cell_sum",
    "spectral_tangential_sum",
    "theorem_pf_ratio",
    "radial_seminorm",
    "theorem_ph_sums",
    "theorem_pj_sums",
    "pf_ratio_table",
    "ph_ratio_tables",
    "pi_ratio_table",
    "pj_ratio_table",
    "ratio_window",
    "drift_exponent",
    "has_drift",
    "second_order_probe",
]

DRIFT_EXPONENT_MAX = 0.25


def _as_pw(f) -> PWDecomposition:
    if isinstance(f, PWDecomposition):
        return f
    if isinstance(f, ComplexPoly):
        return peter_weyl(f)
    raise TypeError("expected a PWDecomposition or ComplexPoly")


def _cells(f: PWDecomposition):
    """``(p, q, ||f_pq||^2)`` with exact norms where the coefficients allow it."""
    for (p, q), comp in sorted(f.components.items()):
        yield p, q, sphere_norm_sq(comp.boundary)


def _no_tail(f: PWDecomposition, name: str) -> None:
    if f.tail_bound > 0:
        raise ValueError(f"{name}: tail bound unavailable for unbounded cell weights")


def _report(name, total, err, cells, notes="", **params) -> SeminormReport:
    return SeminormReport(name, float(total), float(err), tuple(cells), notes, params)


# ---------------------------------------------------------------------------
# weighted Bergman, Hardy and Dirichlet norms


def _coeff_estimate(n: int, p: int, q: int, s: float) -> tuple[float, float]:
    if p * q == 0:
        return float(c_p0_closed(n, max(p, q), s)) if p + q else 1.0, 0.0
    if s > -1:
        est = c_pq(n, p, q, s)
    else:
        est = c_pq_continued(n, p, q).evaluate(s)
    return est.value, est.error


def norm_s(f, s: float) -> SeminormReport:
    """``sum C_pq(s) ||f_pq||^2`` for ``s > -n-1`` off the poles of the cells used.

    For ``s >= -1`` every ``C_pq(s) <= C_pq(-1) = 1``, so omitted cells add at
    most ``tail_bound^2``; below ``-1`` a nonzero tail is rejected.
    """
    f = _as_pw(f)
    n = f.n
    if s <= -n - 1:
        raise ValueError(f"need s > -n-1 = {-n - 1}")
    total, err, used = 0.0, 0.0, []
    for p, q, nsq in _cells(f):
        v, e = _coeff_estimate(n, p, q, s)
        total += v * float(nsq)
        err += e * float(nsq)
        used.append((p, q))
    if f.tail_bound > 0:
        if s < -1:
            raise ValueError("tail bound unavailable below s = -1")
        err += f.tail_bound ** 2
    return _report("norm_s", total, err, used, n=n, s=float(s))


def hardy_norm(f) -> SeminormReport:
    """``sum ||f_pq||^2``, the supremum of the sphere norms of the dilates."""
    f = _as_pw(f)
    total = sum(float(nsq) for _, _, nsq in _cells(f))
    return _report("hardy", total, f.tail_bound ** 2, f.cells(), n=f.n)


def dilate_norm_sq(f, r: float) -> float:
    """``||f_r||^2`` on the sphere, with ``f_r(zeta) = f(r zeta)``."""
    f = _as_pw(f)
    if not 0 <= r <= 1:
        raise ValueError("dilation radius must lie in [0, 1]")
    t = r * r
    return float(sum(normalized_2f1(f.n, p, q, t) ** 2 * float(nsq) for p, q, nsq in _cells(f)))


def dirichlet_cici(f) -> SeminormReport:
    """``sum_{pq>0} (p)_n (q)_n / Gamma(n)^2 ||f_pq||^2``; pluriharmonic cells weigh zero."""
    f = _as_pw(f)
    _no_tail(f, "dirichlet_cici")
    total = Fraction(0)
    used = []
    for p, q, nsq in _cells(f):
        w = c_cici(f.n, p, q)
        if w:
            total += w * nsq
            used.append((p, q))
    return _report("dirichlet_cici", total, 0.0, used, n=f.n)


def dirichlet_circ(f) -> SeminormReport:
    """``sum_{p>0} p (n)_p / p! (||f_p0||^2 + ||f_0p||^2)`` over the pluriharmonic cells."""
    f = _as_pw(f)
    _no_tail(f, "dirichlet_circ")
    total = Fraction(0)
    used, skipped = [], []
    for p, q, nsq in _cells(f):
        if p * q:
            skipped.append((p, q))
            continue
        total += c_circ(f.n, p + q) * nsq
        used.append((p, q))
    notes = f"mixed cells {skipped} are not pluriharmonic and were excluded" if skipped else ""
    return _report("dirichlet_circ", total, 0.0, used, notes, n=f.n)


def _real_cells(f, n: int | None):
    cells = f if isinstance(f, dict) else harm_decompose(f)
    if n is None:
        if not cells:
            raise ValueError("dimension needed for an empty decomposition")
        n = next(iter(cells.values())).dim
    return n, {p: real_sphere_inner(fp, fp) for p, fp in sorted(cells.items())}


def dirichlet_sq(f: RealPoly | dict, n: int | None = None) -> SeminormReport:
    """Real harmonic Dirichlet seminorm ``sum_p p (n/2)_p / p! ||f_p||^2``."""
    n, norms = _real_cells(f, n)
    total = sum((harm_sq(n, p) * v for p, v in norms.items()), Fraction(0))
    return _report("dirichlet_sq", total, 0.0, [p for p, v in norms.items() if p], n=n)


# ---------------------------------------------------------------------------
# tangential word sums


def tangential_eigenvalue(n: int, p: int, q: int) -> int:
    """Eigenvalue of ``sum L* L`` over the ``2n(n-1)`` tangential fields on ``H^{pq}``."""
    return 4 * p * q + (2 * n - 2) * (p + q)


@lru_cache(maxsize=None)
def word_weight(n: int, p: int, q: int, m: int) -> int:
    """Exact ``sum_w ||L_w f||^2 / ||f||^2`` over words of length ``m``, for ``f in H^{pq}``.

    The unbarred fields carry ``H^{pq}`` to ``H^{p-1,q+1}`` with total weight
    ``2p(q+n-1)``, the barred ones to ``H^{p+1,q-1}`` with ``2q(p+n-1)``; the
    word sum follows the resulting walk on cells.  Agrees with
    :func:`tangential_eigenvalue` to the power ``m`` only for ``m <= 1``.
    """
    if p < 0 or q < 0:
        return 0
    if m == 0:
        return 1
    return (2 * p * (q + n - 1) * word_weight(n, p - 1, q + 1, m - 1)
            + 2 * q * (p + n - 1) * word_weight(n, p + 1, q - 1, m - 1))


def tangential_sum(f: ComplexPoly, m: int, max_m: int = 4, max_n: int = 3) -> SeminormReport:
    """Brute-force ``sum over words w of length m of ||L_w f||^2`` on the sphere.

    Words are applied one letter at a time; identical intermediate polynomials
    are merged with multiplicities so shared prefixes are computed once.
    """
    if m < 0:
        raise ValueError("word length must be nonnegative")
    n = f.dim
    if m > max_m or n > max_n:
        raise ValueError(f"word sum guard: need m <= {max_m} and n <= {max_n}")
    layer: Counter = Counter({f: 1})
    fields = tangential_fields(n)
    for _ in range(m):
        nxt: Counter = Counter()
        for g, mult in layer.items():
            for j, k, conj in fields:
                h = tangential(g, j, k, conj)
                if not h.is_zero():
                    nxt[h] += mult
        layer = nxt
    total = Fraction(0) if f.is_exact else 0.0
    for g, mult in layer.items():
        total += mult * sphere_norm_sq(g)
    return _report("tangential_sum", total, 0.0 if f.is_exact else 1e-13 * float(total), (),
                   n=n, m=m, words=(2 * n * (n - 1)) ** m)


def _cell_sum(f, weight: Callable[[int, int], int], name: str, **params) -> SeminormReport:
    f = _as_pw(f)
    if f.tail_bound:
        raise ValueError("tail bound unavailable for unbounded cell weights")
    total = Fraction(0)
    for p, q, nsq in _cells(f):
        total += weight(p, q) * nsq
    return _report(name, total, 0.0, f.cells(), n=f.n, **params)


def word_cell_sum(f, m: int) -> SeminormReport:
    """``sum word_weight(n, p, q, m) ||f_pq||^2``; equals :func:`tangential_sum` exactly."""
    n = _as_pw(f).n
    return _cell_sum(f, lambda p, q: word_weight(n, p, q, m), "word_cell_sum", m=m)


def spectral_tangential_sum(f, m: int) -> SeminormReport:
    """``sum [4pq + (2n-2)(p+q)]^m ||f_pq||^2``, the eigenvalue-power form of the word sum."""
    n = _as_pw(f).n
    return _cell_sum(f, lambda p, q: tangential_eigenvalue(n, p, q) ** m, "spectral_tangential_sum", m=m)


def _word_weight_fn(n: int, m: int, method: str) -> Callable[[int, int], int]:
    if method == "words":
        return lambda p, q: word_weight(n, p, q, m)
    if method == "power":
        return lambda p, q: tangential_eigenvalue(n, p, q) ** m
    raise ValueError(f"unknown method {method!r}; choose 'words' or 'power'")


def theorem_pf_ratio(f, n: int | None = None, method: str = "words") -> float:
    """Word sum of length ``n`` of the mixed part divided by ``dirichlet_cici``.

    ``method``: ``"words"`` (exact word sum via cells), ``"brute"`` (explicit
    operator application) or ``"power"`` (eigenvalue to the power ``n``).
    """
    f = _as_pw(f)
    n = f.n if n is None else n
    if n < 2:
        raise ValueError("need n >= 2")
    Qf = f.select(lambda p, q: p * q > 0)
    den = dirichlet_cici(f).value
    if den == 0:
        raise ZeroDivisionError("f has no mixed cells")
    if method == "brute":
        num = tangential_sum(Qf.boundary(), n).value
    else:
        num = _cell_sum(Qf, _word_weight_fn(f.n, n, method), "pf").value
    return num / den


# ---------------------------------------------------------------------------
# pluriharmonic and real identities


def _pluri_cells(f: PWDecomposition):
    for p, q, nsq in _cells(f):
        if p * q:
            raise ValueError("input is not pluriharmonic")
        yield p + q, nsq


def radial_seminorm(f, m: int) -> SeminormReport:
    """``||N^m f||^2_{2m-n-1}`` for pluriharmonic ``f``: ``sum p^{2m} C_p0(2m-n-1) ||f_p||^2``."""
    f = _as_pw(f)
    n = f.n
    if 2 * m <= n:
        raise ValueError("need 2m > n")
    _no_tail(f, "radial_seminorm")
    total = Fraction(0)
    used = []
    for p, nsq in _pluri_cells(f):
        if p:
            total += p ** (2 * m) * c_p0_closed(n, p, 2 * m - n - 1) * nsq
            used.append(p)
    return _report("radial_seminorm", total, 0.0, used, n=n, m=m)


def theorem_ph_sums(f, k: int, method: str = "words") -> tuple[SeminormReport, SeminormReport]:
    """The two word-sum seminorms of a pluriharmonic ``f``.

    First: words of length ``n`` in Hardy norm, ``sum W_n(p) ||f_p||^2``.
    Second: words of length ``n+k+1`` in the ``s = k`` norm,
    ``sum W_{n+k+1}(p) C_p0(k) ||f_p||^2``.  ``W_m`` is the exact word weight
    (``method="words"``) or ``[(2n-2)p]^m`` (``method="power"``).
    """
    f = _as_pw(f)
    n = f.n
    if n < 2 or k < 0:
        raise ValueError("need n >= 2 and k >= 0")
    _no_tail(f, "theorem_ph_sums")
    w_short = _word_weight_fn(n, n, method)
    w_long = _word_weight_fn(n, n + k + 1, method)
    hardy, weighted = Fraction(0), Fraction(0)
    used = []
    for p, nsq in _pluri_cells(f):
        hardy += w_short(p, 0) * nsq
        weighted += w_long(p, 0) * c_p0_closed(n, p, k) * nsq
        used.append(p)
    return (_report("ph_hardy_words", hardy, 0.0, used, n=n, m=n, method=method),
            _report("ph_weighted_words", weighted, 0.0, used, n=n, m=n + k + 1, s=k, method=method))


def theorem_pj_sums(f: RealPoly | dict, m: int, n: int | None = None) -> SeminormReport:
    """``sum_p [2p(p+n-2)]^m C_p(2m-n/2-1) ||f_p||^2`` on the real ball."""
    n, norms = _real_cells(f, n)
    if 4 * m <= n:
        raise ValueError("need 4m > n")
    s = Fraction(2 * m) - Fraction(n, 2) - 1
    total = Fraction(0)
    for p, v in norms.items():
        total += (2 * p * (p + n - 2)) ** m * harm_coeff(n, p, s) * v
    return _report("pj_sum", total, 0.0, [p for p in norms if p], n=n, m=m, s=float(s))


# ---------------------------------------------------------------------------
# equivalence ratio tables


def pf_ratio_table(n: int, pmax: int = 10, method: str = "words") -> dict[tuple[int, int], float]:
    """Per-cell ratio ``W_n(p, q) / c_cici`` for ``1 <= p, q <= pmax``."""
    w = _word_weight_fn(n, n, method)
    return {(p, q): float(Fraction(w(p, q)) / c_cici(n, p, q))
            for p in range(1, pmax + 1) for q in range(1, pmax + 1)}


def ph_ratio_tables(n: int, k: int = 0, pmax: int = 10, method: str = "words") -> tuple[dict, dict]:
    """Per-cell ratios of both word-sum seminorms against ``dirichlet_circ``."""
    w_short = _word_weight_fn(n, n, method)
    w_long = _word_weight_fn(n, n + k + 1, method)
    hardy, weighted = {}, {}
    for p in range(1, pmax + 1):
        c = c_circ(n, p)
        hardy[p] = float(w_short(p, 0) / c)
        weighted[p] = float(w_long(p, 0) * c_p0_closed(n, p, k) / c)
    return hardy, weighted


def pi_ratio_table(n: int, m: int, pmax: int = 10) -> dict[int, float]:
    """Per-cell ratio ``p^{2m} C_p0(2m-n-1) / (p (n)_p / p!)``."""
    if 2 * m <= n:
        raise ValueError("need 2m > n")
    return {p: float(p ** (2 * m) * c_p0_closed(n, p, 2 * m - n - 1) / c_circ(n, p))
            for p in range(1, pmax + 1)}


def pj_ratio_table(n: int, m: int, pmax: int = 10) -> dict[int, float]:
    from .realharm import pj_ratio

    return {p: pj_ratio(n, p, m) for p in range(1, pmax + 1)}


def ratio_window(values: Iterable[float]) -> tuple[float, float, float]:
    """``(min, max, c)`` with ``c = min(min, 1/max)`` so all values lie in ``[c, 1/c]``."""
    vals = [float(v) for v in values]
    lo, hi = min(vals), max(vals)
    if lo <= 0 or not math.isfinite(hi):
        return lo, hi, 0.0
    return lo, hi, min(lo, 1 / hi)


def drift_exponent(values: list[float], last: int = 5) -> float:
    """Extrapolated growth exponent of a ratio table over its final ``last`` entries.

    Local exponents ``d log r / d log p`` between consecutive entries (indexed
    from 1) are fitted as ``alpha + beta/p`` and ``alpha`` is returned.  A
    ratio bounded above and below has ``alpha = 0``; a power-law degeneration
    ``p^alpha`` keeps ``alpha`` away from zero even when the grid is short.
    """
    vals = np.asarray(values, dtype=float)
    if len(vals) < last or last < 3:
        raise ValueError("not enough grid points for the drift test")
    if np.any(vals <= 0):
        return math.inf
    lp = np.log(np.arange(len(vals) - last + 1, len(vals) + 1, dtype=float))
    lv = np.log(vals[-last:])
    local = np.diff(lv) / np.diff(lp)
    mid = np.exp((lp[1:] + lp[:-1]) / 2)
    return float(np.polyfit(1 / mid, local, 1)[1])


def has_drift(values: list[float], last: int = 5, tol: float = DRIFT_EXPONENT_MAX) -> bool:
    return abs(drift_exponent(values, last)) > tol


def second_order_probe(f, eps_list: Iterable[float]) -> dict:
    """``eps^2 ||f||^2_s`` at ``s = -n-1+eps`` for mixed-cell ``f``, with its predicted limit.

    The limit is ``sum 2 (p)_n (q)_n / Gamma(n)^2 ||f_pq||^2`` from the exact
    double-pole strengths; this is an empirical probe on finitely many cells.
    """
    f = _as_pw(f)
    n = f.n
    if any(p * q == 0 for p, q in f.cells()):
        raise ValueError("probe expects cells with pq > 0 only")
    limit = float(sum(cici_strength(n, p, q) * nsq for p, q, nsq in _cells(f)))
    rows = [{"eps": float(e), "value": float(e) ** 2 * norm_s(f, -n - 1 + e).value} for e in eps_list]
    return {"limit": limit, "rows": rows}
