"""Bigraded spherical harmonics on the unit sphere of C^n.

The space H^{pq} consists of harmonic polynomials of bidegree (p, q).  Its
reproducing kernel on the sphere is the zonal function ``H^{pq}(<zeta, eta>)``;
the M-harmonic extension of ``f in H^{pq}`` into the ball is
``u(z) = F(|z|^2) f(z)`` with the normalized hypergeometric profile ``F``.

A polynomial restricted to the sphere splits into cells exactly: each
bidegree slice is written as ``sum_k |z|^{2k} h_k`` with ``h_k`` harmonic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping

import numpy as np

from . import _accel
from .polyalg import (
    ComplexPoly,
    _dbar_d,
    sphere_inner,
    sphere_norm_sq,
)
from .specfun import gauss_2f1, normalized_2f1, normalized_2f1_array, pochhammer

__all__ = [
    "HpqKernel",
    "hpq_kernel",
    "hpq_dimension",
    "zonal_coefficients",
    "harmonic_projection",
    "fischer_split",
    "harmonic_spanning_set",
    "HpqBasis",
    "build_basis",
    "radial_profile",
    "profile_derivatives",
    "BigradedComponent",
    "solid_extend",
    "solid_derivatives",
    "invariant_laplacian_from_hessian",
    "kpq_kernel",
    "PWDecomposition",
    "peter_weyl",
    "project_pi0",
    "project_hol",
    "project_antihol",
    "project_P",
    "project_Q",
    "is_euclidean_harmonic",
]


def _check_cell(n: int, p: int, q: int) -> None:
    if n < 1 or p < 0 or q < 0:
        raise ValueError(f"invalid cell n={n}, p={p}, q={q}")
    if n == 1 and p * q != 0:
        raise ValueError("for n = 1 the space H^{pq} is {0} when pq > 0")


# ---------------------------------------------------------------------------
# zonal kernels


@dataclass(frozen=True)
class HpqKernel:
    """``H^{pq}(w) = sum of coef * w**a * conj(w)**b`` over ``terms``.

    The coefficients are exact rationals.
    """

    n: int
    p: int
    q: int
    terms: tuple[tuple[int, int, Fraction], ...]

    def __call__(self, w) -> complex:
        w = complex(w)
        wc = w.conjugate()
        return sum(complex(c) * w ** a * wc ** b for a, b, c in self.terms)

    def at_one(self) -> Fraction:
        return sum((c for _, _, c in self.terms), Fraction(0))


def _zonal_prefactor(n: int, p: int, q: int) -> Fraction:
    """Prefactor for ``p >= q``."""
    if p == 0 and q == 0:
        return Fraction(1)
    return Fraction((-1) ** q * (n + p + q - 1) * math.factorial(n + p - 2),
                    math.factorial(n - 1) * math.factorial(q) * math.factorial(p - q))


def _zonal_series(n: int, p: int, q: int) -> list[Fraction]:
    """Coefficients of ``|w|^{2k}`` in the terminating 2F1(-q, n+p-1; p-q+1; |w|^2), ``p >= q``."""
    out, c = [], Fraction(1)
    for k in range(q + 1):
        out.append(c)
        c = c * (k - q) * (n + p - 1 + k) / ((p - q + 1 + k) * (k + 1))
    return out


def hpq_kernel(n: int, p: int, q: int) -> HpqKernel:
    """Zonal kernel of H^{pq}: the reproducing kernel is ``H^{pq}(<zeta, eta>)``."""
    _check_cell(n, p, q)
    big, small = max(p, q), min(p, q)
    pref = _zonal_prefactor(n, big, small)
    terms = []
    for k, c in enumerate(_zonal_series(n, big, small)):
        if c:
            a, b = big - small + k, k
            terms.append((a, b, pref * c) if p >= q else (b, a, pref * c))
    return HpqKernel(n, p, q, tuple(terms))


def hpq_dimension(n: int, p: int, q: int) -> int:
    """``dim H^{pq}``, read off the kernel trace ``H^{pq}(1)``."""
    if n == 1 and p * q != 0:
        return 0
    v = hpq_kernel(n, p, q).at_one()
    if v.denominator != 1:
        raise ArithmeticError("kernel trace is not an integer")
    return int(v)


def zonal_coefficients(n: int, pmax: int) -> np.ndarray:
    """Table ``coef[p, q, k]`` (``p >= q``) used by the vectorized kernel evaluator.

    ``H^{pq}`` on the sphere scales to ``sum_k coef[p,q,k] x^(p-q+k) conj(x)^k rho^(q-k)``
    in the ball, with ``x = <z, w>`` and ``rho = |z|^2 |w|^2``.
    """
    coef = np.zeros((pmax + 1, pmax + 1, pmax + 1))
    for p in range(pmax + 1):
        for q in range(p + 1):
            if n == 1 and q > 0:
                continue
            pref = _zonal_prefactor(n, p, q)
            for k, c in enumerate(_zonal_series(n, p, q)):
                coef[p, q, k] = float(pref * c)
    return coef


# ---------------------------------------------------------------------------
# harmonic projection and exact cell splitting


def is_euclidean_harmonic(f: ComplexPoly) -> bool:
    return _dbar_d(f).is_zero()


def harmonic_projection(f: ComplexPoly) -> ComplexPoly:
    """Harmonic part ``h_0`` of a bihomogeneous ``f = h_0 + |z|^2 g``."""
    bd = f.bidegrees()
    if len(bd) > 1:
        raise ValueError("harmonic projection needs a bihomogeneous polynomial")
    if not bd:
        return f
    (p, q), = bd
    n, m = f.dim, p + q
    if m == 0:
        return f
    r2 = ComplexPoly.norm_sq(n)
    out = f
    lap, r2k = f, ComplexPoly.constant(n, 1)
    top = math.factorial(m + n - 2)
    for k in range(1, min(p, q) + 1):
        lap = _dbar_d(lap)
        if lap.is_zero():
            break
        r2k = r2k * r2
        c = Fraction((-1) ** k * math.factorial(m + n - 2 - k), math.factorial(k) * top)
        out = out + r2k * lap * c
    return out


def fischer_split(f: ComplexPoly) -> dict[tuple[int, int], ComplexPoly]:
    """Write each bidegree slice as ``sum_k |z|^{2k} h_k`` and return the ``h_k`` by cell.

    On the sphere, ``f = sum of the returned cells``.  Uses
    ``Delta'^k (|z|^{2k} h) = prod_{m<=k} m (m + n - 1 + deg h) h`` for harmonic ``h``,
    where ``Delta' = sum_j d_j dbar_j``.
    """
    n = f.dim
    cells: dict = {}
    for (a, b), slc in f.slices().items():
        lap = slc
        for k in range(min(a, b) + 1):
            if k:
                lap = _dbar_d(lap)
            if lap.is_zero():
                break
            d = a + b - 2 * k
            ck = 1
            for m in range(1, k + 1):
                ck *= m * (m + n - 1 + d)
            h = harmonic_projection(lap)
            if h.is_zero():
                continue
            h = h / ck if all(isinstance(c, (int, Fraction)) for _, c in h.items()) else h * (1.0 / ck)
            key = (a - k, b - k)
            cells[key] = cells[key] + h if key in cells else h
    return {k: v for k, v in sorted(cells.items()) if not v.is_zero()}


def _monomials(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def harmonic_spanning_set(n: int, p: int, q: int) -> list[ComplexPoly]:
    """Exact basis of H^{pq}: harmonic projections of ``z^a zbar^b`` with ``a_1 b_1 = 0``.

    These monomials form a complement of ``|z|^2 P_{p-1,q-1}`` in ``P_{pq}``, so
    their projections are linearly independent and span H^{pq}.
    """
    _check_cell(n, p, q)
    out = []
    for a in _monomials(n, p):
        for b in _monomials(n, q):
            if a[0] and b[0]:
                continue
            out.append(harmonic_projection(ComplexPoly.monomial(a, b)))
    return out


@dataclass(frozen=True)
class HpqBasis:
    """Orthonormal basis of H^{pq} under the sphere inner product."""

    n: int
    p: int
    q: int
    elements: tuple[ComplexPoly, ...]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def gram(self) -> np.ndarray:
        m = self.dim
        G = np.zeros((m, m), dtype=complex)
        for i in range(m):
            for j in range(i, m):
                G[i, j] = sphere_inner(self.elements[i], self.elements[j])
                G[j, i] = np.conj(G[i, j])
        return G

    def evaluate(self, points) -> np.ndarray:
        """Matrix ``E[i, k] = e_k(points[i])``."""
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        return np.stack([e.evaluate(pts) for e in self.elements], axis=1) if self.elements else \
            np.zeros((pts.shape[0], 0), dtype=complex)


_BASIS_CACHE: dict = {}
_BASIS_LOCK = threading.Lock()


def _character(poly: ComplexPoly) -> tuple[int, ...]:
    (a, b), _ = next(iter(poly.items()))
    return tuple(x - y for x, y in zip(a, b))


def build_basis(n: int, p: int, q: int) -> HpqBasis:
    """Orthonormal basis of H^{pq}, deterministic and cached.

    The exact spanning set is grouped by the torus character ``alpha - beta``
    (distinct characters are orthogonal on the sphere) and each group is
    orthonormalized through the Cholesky factor of its exact Gram matrix.
    """
    key = (n, p, q)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    _check_cell(n, p, q)
    groups: dict = {}
    for h in harmonic_spanning_set(n, p, q):
        groups.setdefault(_character(h), []).append(h)
    elements = []
    for ch in sorted(groups, reverse=True):
        hs = groups[ch]
        m = len(hs)
        G = np.zeros((m, m))
        for i in range(m):
            for j in range(i, m):
                # exact rational Gram; all spanning polynomials have rational coefficients
                G[i, j] = G[j, i] = float(sphere_inner(hs[i], hs[j]))
        L = np.linalg.cholesky(G)
        Linv = np.linalg.inv(L)
        for i in range(m):
            e = ComplexPoly(n)
            for j in range(i + 1):
                if Linv[i, j] != 0:
                    e = e + hs[j].to_float() * float(Linv[i, j])
            elements.append(e)
    basis = HpqBasis(n, p, q, tuple(elements))
    with _BASIS_LOCK:
        _BASIS_CACHE.setdefault(key, basis)
    return _BASIS_CACHE[key]


# ---------------------------------------------------------------------------
# radial profiles and solid extensions


def radial_profile(n: int, p: int, q: int, r: float) -> float:
    """``S^{pq}(r) = r^{p+q} 2F1(p,q;p+q+n;r^2) / 2F1(p,q;p+q+n;1)``; ``S(1) = 1``."""
    r = float(r)
    if not 0 <= r <= 1:
        raise ValueError("radius must lie in [0, 1]")
    return r ** (p + q) * normalized_2f1(n, p, q, r * r)


def profile_derivatives(n: int, p: int, q: int, t, order: int = 2) -> np.ndarray:
    """Values of ``F, F', ..., F^{(order)}`` of the normalized profile at ``0 <= t < 1``.

    Row ``k`` holds the ``k``-th derivative in ``t``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros((order + 1, t.size))
    out[0] = normalized_2f1_array(n, p, q, t)
    if p == 0 or q == 0:
        return out
    c = p + q + n
    pref = float(Fraction(pochhammer(n, p) * pochhammer(n, q), pochhammer(n, p + q)))
    for k in range(1, order + 1):
        scale = pref * float(Fraction(pochhammer(p, k) * pochhammer(q, k), pochhammer(c, k)))
        out[k] = [scale * gauss_2f1(p + k, q + k, c + k, x) for x in t]
    return out


@dataclass(frozen=True)
class BigradedComponent:
    """One Peter-Weyl cell: ``boundary in H^{pq}`` and its solid extension."""

    n: int
    p: int
    q: int
    boundary: ComplexPoly

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=complex)
        t = float(np.vdot(z, z).real)
        if t > 1:
            raise ValueError("point outside the closed ball")
        return normalized_2f1(self.n, self.p, self.q, t) * self.boundary(z)

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        t = np.sum(np.abs(pts) ** 2, axis=1)
        if np.any(t > 1 + 1e-14):
            raise ValueError("point outside the closed ball")
        return normalized_2f1_array(self.n, self.p, self.q, np.minimum(t, 1.0)) * self.boundary.evaluate(pts)

    def norm_sq(self) -> float:
        return sphere_norm_sq(self.boundary)

    def scaled(self, c) -> "BigradedComponent":
        return BigradedComponent(self.n, self.p, self.q, self.boundary * c)


def solid_extend(boundary: ComplexPoly) -> BigradedComponent:
    """M-harmonic extension ``u(r zeta) = S^{pq}(r) f(zeta)`` of ``f in H^{pq}``."""
    if boundary.is_zero():
        raise ValueError("zero polynomial has no bidegree")
    if not boundary.is_bihomogeneous():
        raise ValueError("boundary polynomial must be bihomogeneous")
    if not is_euclidean_harmonic(boundary):
        raise ValueError("boundary polynomial must be annihilated by the Euclidean Laplacian")
    (p, q), = boundary.bidegrees()
    _check_cell(boundary.dim, p, q)
    return BigradedComponent(boundary.dim, p, q, boundary)


def solid_derivatives(comp: BigradedComponent, points):
    """Value, first and mixed second Wirtinger derivatives of the solid extension.

    Returns ``(u, du, dbu, hess)`` with shapes ``(m,)``, ``(m, n)``, ``(m, n)``
    and ``(m, n, n)``; ``hess[:, j, k] = d_j dbar_k u``.
    """
    from .polyalg import wirtinger

    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    m, n = pts.shape
    f = comp.boundary
    t = np.sum(np.abs(pts) ** 2, axis=1)
    F0, F1, F2 = profile_derivatives(comp.n, comp.p, comp.q, t, 2)
    fv = f.evaluate(pts)
    df = [wirtinger(f, j + 1) for j in range(n)]
    dbf = [wirtinger(f, k + 1, True) for k in range(n)]
    dfv = np.stack([g.evaluate(pts) for g in df], axis=1)
    dbfv = np.stack([g.evaluate(pts) for g in dbf], axis=1)
    zb = np.conj(pts)
    u = F0 * fv
    du = F1[:, None] * zb * fv[:, None] + F0[:, None] * dfv
    dbu = F1[:, None] * pts * fv[:, None] + F0[:, None] * dbfv
    hess = np.zeros((m, n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            ddf = wirtinger(df[j], k + 1, True).evaluate(pts)
            hess[:, j, k] = (F2 * zb[:, j] * pts[:, k] * fv
                             + F1 * ((1.0 if j == k else 0.0) * fv + zb[:, j] * dbfv[:, k] + pts[:, k] * dfv[:, j])
                             + F0 * ddf)
    return u, du, dbu, hess


def invariant_laplacian_from_hessian(points, hess) -> np.ndarray:
    """``4(1-|z|^2) sum_{jk} (delta_jk - z_j conj(z_k)) hess[j, k]`` at each point."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    t = np.sum(np.abs(pts) ** 2, axis=1)
    trace = np.einsum("mjj->m", hess)
    quad = np.einsum("mj,mjk,mk->m", pts, hess, np.conj(pts))
    return 4 * (1 - t) * (trace - quad)


def _as_points(z) -> np.ndarray:
    return np.atleast_2d(np.asarray(z, dtype=complex))


def kpq_kernel(z, w, n: int, p: int, q: int) -> complex:
    """Reproducing kernel of the solid cell: ``S(|z|) S(|w|) H^{pq}(<zeta, xi>)``."""
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    tz, tw = float(np.vdot(z, z).real), float(np.vdot(w, w).real)
    if tz >= 1 or tw >= 1:
        raise ValueError("kernel points must lie in the open ball")
    _check_cell(n, p, q)
    x = complex(np.dot(z, np.conj(w)))
    rho = tz * tw
    big, small = max(p, q), min(p, q)
    pref = _zonal_prefactor(n, big, small)
    acc = 0.0
    for k, c in enumerate(_zonal_series(n, big, small)):
        acc += float(pref * c) * abs(x) ** (2 * k) * rho ** (small - k)
    val = acc * (x ** (big - small) if p >= q else x.conjugate() ** (big - small))
    return normalized_2f1(n, p, q, tz) * normalized_2f1(n, p, q, tw) * val


# ---------------------------------------------------------------------------
# Peter-Weyl decomposition


@dataclass(frozen=True)
class PWDecomposition:
    """Cells ``(p, q) -> BigradedComponent`` with a bound on omitted cells.

    ``tail_bound`` bounds the L^2(sphere) norm of everything not listed.
    """

    n: int
    components: Mapping[tuple[int, int], BigradedComponent]
    tail_bound: float = 0.0

    def cell_norms_sq(self) -> dict[tuple[int, int], float]:
        return {k: float(c.norm_sq()) for k, c in sorted(self.components.items())}

    def cells(self) -> list[tuple[int, int]]:
        return sorted(self.components)

    def boundary(self) -> ComplexPoly:
        out = ComplexPoly(self.n)
        for c in self.components.values():
            out = out + c.boundary
        return out

    def evaluate(self, points) -> np.ndarray:
        pts = _as_points(points)
        out = np.zeros(pts.shape[0], dtype=complex)
        for c in self.components.values():
            out += c.evaluate(pts)
        return out

    def select(self, keep: Callable[[int, int], bool]) -> "PWDecomposition":
        return PWDecomposition(self.n, {k: v for k, v in self.components.items() if keep(*k)}, self.tail_bound)

    def __add__(self, other: "PWDecomposition") -> "PWDecomposition":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        comps = dict(self.components)
        for k, v in other.components.items():
            if k in comps:
                b = comps[k].boundary + v.boundary
                if b.is_zero():
                    del comps[k]
                else:
                    comps[k] = BigradedComponent(self.n, k[0], k[1], b)
            else:
                comps[k] = v
        return PWDecomposition(self.n, dict(sorted(comps.items())), self.tail_bound + other.tail_bound)

    def __sub__(self, other: "PWDecomposition") -> "PWDecomposition":
        return self + other.scaled(-1)

    def scaled(self, c) -> "PWDecomposition":
        return PWDecomposition(self.n, {k: v.scaled(c) for k, v in self.components.items()},
                               abs(c) * self.tail_bound)


def peter_weyl(f: ComplexPoly, pmax: int | None = None, qmax: int | None = None) -> PWDecomposition:
    """Exact Peter-Weyl cells of the restriction of ``f`` to the sphere.

    Cells with ``p > pmax`` or ``q > qmax`` are dropped and their norm is
    accounted for in ``tail_bound``.
    """
    n = f.dim
    comps = {}
    dropped = 0.0
    for (p, q), h in fischer_split(f).items():
        if n == 1 and p * q:
            raise ArithmeticError("nonzero cell with pq > 0 for n = 1")
        if (pmax is not None and p > pmax) or (qmax is not None and q > qmax):
            dropped += float(sphere_norm_sq(h))
            continue
        comps[(p, q)] = BigradedComponent(n, p, q, h)
    return PWDecomposition(n, comps, math.sqrt(dropped))


def _as_pw(f) -> PWDecomposition:
    return f if isinstance(f, PWDecomposition) else peter_weyl(f)


def _project(f, keep):
    out = _as_pw(f).select(keep)
    return out if isinstance(f, PWDecomposition) else out.boundary()


def project_pi0(f):
    """Keep the constant cell (0, 0)."""
    return _project(f, lambda p, q: p == 0 and q == 0)


def project_hol(f):
    """Keep the holomorphic cells (p, 0)."""
    return _project(f, lambda p, q: q == 0)


def project_antihol(f):
    """Keep the anti-holomorphic cells (0, q)."""
    return _project(f, lambda p, q: p == 0)


def project_P(f):
    """Pluriharmonic part: cells with ``pq = 0``."""
    return _project(f, lambda p, q: p * q == 0)


def project_Q(f):
    """Part with no pluriharmonic component: cells with ``pq > 0``."""
    return _project(f, lambda p, q: p * q > 0)
