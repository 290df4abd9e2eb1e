"""Harmonic functions on the real unit ball of R^n.

Degree-p harmonic homogeneous polynomials, the degree splitting of harmonic
functions, the weighted norms ``sum_p C_p(s) ||f_p||^2`` with
``C_p(s) = (n/2)_p / (n/2+s+1)_p``, and the tangential-field identities.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .coeffs import harm_coeff, harm_sq
from .polyalg import (
    RealPoly,
    real_laplacian,
    real_sphere_inner,
    real_spherical_laplacian,
    real_tangential,
)
from .report import SeminormReport
from .specfun import pochhammer

__all__ = [
    "HarmonicBasis",
    "real_harmonic_projection",
    "real_harmonic_basis",
    "real_harmonic_dimension",
    "real_fischer_split",
    "harm_decompose",
    "harm_norm_s",
    "zonal_kernel",
    "word_sum",
    "spectral_sum",
    "pj_ratio",
    "theorem_pj_verify",
]


def _monomials(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _norm_sq_poly(n: int) -> RealPoly:
    return RealPoly(n, {tuple(2 if i == j else 0 for i in range(n)): 1 for j in range(n)})


def real_harmonic_projection(f: RealPoly) -> RealPoly:
    """Harmonic part ``h`` of a homogeneous ``f = h + |x|^2 g``.

    ``h = sum_k (-1)^k |x|^{2k} Delta^k f / (4^k k! (n/2 + p - k - 1)_k)``.
    """
    degs = f.degrees()
    if len(degs) > 1:
        raise ValueError("harmonic projection needs a homogeneous polynomial")
    if not degs:
        return f
    (p,) = degs
    n = f.dim
    half = Fraction(n, 2)
    r2 = _norm_sq_poly(n)
    out, lap, r2k = f, f, RealPoly.constant(n, 1)
    for k in range(1, p // 2 + 1):
        lap = real_laplacian(lap)
        if lap.is_zero():
            break
        r2k = r2k * r2
        den = 4 ** k * math.factorial(k) * pochhammer(half + p - k - 1, k)
        c = Fraction((-1) ** k) / den
        out = out + r2k * lap * (c if f.is_exact else float(c))
    return out


def real_fischer_split(f: RealPoly) -> dict[int, RealPoly]:
    """Degree cells of the restriction of ``f`` to the sphere (exact).

    Each degree-d slice equals ``sum_k |x|^{2k} h_{d-2k}`` with harmonic ``h``,
    recovered from ``Delta^k (|x|^{2k} h) = prod_{m<=k} 2m (2m + n - 2 + 2 deg h) h``.
    """
    n = f.dim
    cells: dict = {}
    for d, slc in f.slices().items():
        lap = slc
        for k in range(d // 2 + 1):
            if k:
                lap = real_laplacian(lap)
            if lap.is_zero():
                break
            dh = d - 2 * k
            ck = 1
            for m in range(1, k + 1):
                ck *= 2 * m * (2 * m + n - 2 + 2 * dh)
            h = real_harmonic_projection(lap)
            if h.is_zero():
                continue
            h = h * (Fraction(1, ck) if h.is_exact else 1.0 / ck)
            cells[dh] = cells[dh] + h if dh in cells else h
    return {k: v for k, v in sorted(cells.items()) if not v.is_zero()}


def real_harmonic_dimension(n: int, p: int) -> int:
    """``dim`` of degree-p harmonics on R^n: ``C(n+p-1, p) - C(n+p-3, p-2)``."""
    if p < 0:
        return 0
    lower = math.comb(n + p - 3, p - 2) if p >= 2 else 0
    return math.comb(n + p - 1, p) - lower


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthonormal basis of degree-p real harmonics in ``L^2`` of the unit sphere."""

    n: int
    p: int
    elements: tuple[RealPoly, ...]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.elements:
            return np.zeros((pts.shape[0], 0))
        return np.stack([e.evaluate(pts) for e in self.elements], axis=1)


_CACHE: dict = {}
_LOCK = threading.Lock()


def real_harmonic_basis(n: int, p: int) -> HarmonicBasis:
    """Orthonormal basis from projections of ``x^alpha`` with ``alpha_1 <= 1``.

    Those monomials complement ``|x|^2 P_{p-2}`` in ``P_p``; the exact Gram
    matrix is factored by Cholesky.  Cached and deterministic.
    """
    key = (n, p)
    if key in _CACHE:
        return _CACHE[key]
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    span = [real_harmonic_projection(RealPoly.monomial(a)) for a in _monomials(n, p) if a[0] <= 1]
    span = [h for h in span if not h.is_zero()]
    m = len(span)
    G = np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            G[i, j] = G[j, i] = float(real_sphere_inner(span[i], span[j]))
    elements = []
    if m:
        Linv = np.linalg.inv(np.linalg.cholesky(G))
        for i in range(m):
            e = RealPoly(n)
            for j in range(i + 1):
                if Linv[i, j] != 0:
                    e = e + span[j].to_float() * float(Linv[i, j])
            elements.append(e)
    basis = HarmonicBasis(n, p, tuple(elements))
    with _LOCK:
        _CACHE.setdefault(key, basis)
    return _CACHE[key]


def harm_decompose(f: RealPoly) -> dict[int, RealPoly]:
    """Split a harmonic polynomial into its homogeneous (harmonic) pieces."""
    if not real_laplacian(f).is_zero():
        raise ValueError("input polynomial is not harmonic")
    return f.slices()


def harm_norm_s(f: RealPoly | dict, s, n: int | None = None) -> SeminormReport:
    """``sum_p (n/2)_p / (n/2+s+1)_p ||f_p||^2`` over the sphere, for harmonic ``f``."""
    cells = f if isinstance(f, dict) else harm_decompose(f)
    if n is None:
        if not cells:
            raise ValueError("dimension needed for an empty decomposition")
        n = next(iter(cells.values())).dim
    if s <= -n / 2 - 1:
        raise ValueError(f"need s > -n/2-1 = {-n / 2 - 1}")
    total = 0.0
    for p, fp in cells.items():
        total += float(harm_coeff(n, p, s)) * float(real_sphere_inner(fp, fp))
    return SeminormReport("harm_norm_s", total, 1e-15 * max(total, 1.0), tuple(sorted(cells)),
                          params={"n": n, "s": float(s)})


def zonal_kernel(n: int, p: int, x, y) -> np.ndarray:
    """``Z_p(x, y) = sum_i e_i(x) e_i(y)`` for paired rows of ``x`` and ``y``."""
    B = real_harmonic_basis(n, p)
    return np.sum(B.evaluate(x) * B.evaluate(y), axis=1)


def _fields(n: int) -> list[tuple[int, int]]:
    return [(j, k) for j in range(1, n + 1) for k in range(1, n + 1) if j != k]


def word_sum(g: RealPoly, m: int):
    """``sum over words of length m in the n(n-1) fields X_jk of ||X_{j1}...X_{jm} g||^2`` (sphere)."""
    n = g.dim
    layer = [g]
    for _ in range(m):
        layer = [real_tangential(h, j, k) for h in layer for (j, k) in _fields(n)]
    total = Fraction(0) if g.is_exact else 0.0
    for h in layer:
        total += real_sphere_inner(h, h)
    return total


def spectral_sum(g: RealPoly, m: int):
    """``sum_p [2p(p+n-2)]^m ||g_p||^2`` using the exact sphere splitting of ``g``."""
    n = g.dim
    total = Fraction(0) if g.is_exact else 0.0
    for p, gp in real_fischer_split(g).items():
        total += (2 * p * (p + n - 2)) ** m * real_sphere_inner(gp, gp)
    return total


def pj_ratio(n: int, p: int, m: int) -> float:
    """``[2p(p+n-2)]^m C_p(2m - n/2 - 1) / (p (n/2)_p / p!)`` for ``p >= 1``."""
    if 4 * m <= n:
        raise ValueError("need 4m > n")
    s = Fraction(2 * m) - Fraction(n, 2) - 1
    num = (2 * p * (p + n - 2)) ** m * harm_coeff(n, p, s)
    return float(num / harm_sq(n, p))


def theorem_pj_verify(n: int = 3, m: int = 1, pmax: int = 10, identity_degree: int = 3) -> dict:
    """Word-sum identity on degree ``<= identity_degree`` bases and the ratio table up to ``pmax``."""
    identity = []
    for p in range(identity_degree + 1):
        # exact spanning elements keep the check rational
        for a in _monomials(n, p):
            if a[0] > 1:
                continue
            h = real_harmonic_projection(RealPoly.monomial(a))
            if h.is_zero():
                continue
            lhs, rhs = word_sum(h, m), spectral_sum(h, m)
            identity.append({"p": p, "monomial": list(a), "word_sum": str(lhs), "spectral_sum": str(rhs),
                             "exact_match": lhs == rhs})
    ratios = {p: pj_ratio(n, p, m) for p in range(1, pmax + 1)}
    vals = list(ratios.values())
    return {
        "n": n,
        "m": m,
        "s": float(2 * m - n / 2 - 1),
        "identity": identity,
        "identity_ok": all(r["exact_match"] for r in identity),
        "ratios": ratios,
        "window": [min(vals), max(vals)],
    }
