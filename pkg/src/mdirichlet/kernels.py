"""Reproducing kernels: closed forms and truncated Peter-Weyl cell sums.

A truncated kernel is ``sum_{cells} w_pq K_pq(z, w)`` over ``p + q <= cutoff``,
where ``K_pq`` is the reproducing kernel of the solid cell (sphere inner
product) and ``w_pq`` the reciprocal norm coefficient of the family.  The real
harmonic family sums zonal harmonics ``Z_p`` built from orthonormal bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import _accel
from .coeffs import c_cici, c_p0_closed, c_pq, c_pq_continued, inverse_coeff_limits
from .harmonics import zonal_coefficients
from .realharm import real_harmonic_basis
from .specfun import normalized_2f1_array, pochhammer

__all__ = [
    "FAMILIES",
    "k_hol",
    "k_hol_circ",
    "k_circ",
    "TruncatedKernel",
    "k_s_truncated",
    "k_cici_truncated",
    "k_circ_truncated",
    "k_second_order_truncated",
    "k_harm_truncated",
    "make_kernel",
    "random_ball_points",
    "random_real_ball_points",
    "gram_min_eig",
    "limit_defects",
]

FAMILIES = ("mharmonic_s", "cici", "harmonic_s", "circ", "second_order")


def _inner(x, y) -> complex:
    return complex(np.dot(np.asarray(x, dtype=complex), np.conj(np.asarray(y, dtype=complex))))


def _check_open_ball(*pts) -> None:
    for z in pts:
        if float(np.sum(np.abs(np.asarray(z)) ** 2)) >= 1:
            raise ValueError("points must lie in the open unit ball")


def k_hol(x, y, n: int, s: float) -> complex:
    """Weighted Bergman kernel ``(1 - <x, y>)^{-s-n-1}``."""
    _check_open_ball(x, y)
    return complex((1 - _inner(x, y)) ** (-s - n - 1))


def k_hol_circ(x, y) -> complex:
    """Holomorphic Dirichlet kernel ``log 1/(1 - <x, y>)``."""
    _check_open_ball(x, y)
    return complex(-np.log(1 - _inner(x, y)))


def k_circ(x, y) -> float:
    """Pluriharmonic Dirichlet kernel ``log 1/|1 - <x, y>|^2``."""
    _check_open_ball(x, y)
    return float(-2 * np.log(abs(1 - _inner(x, y))))


# ---------------------------------------------------------------------------
# truncated kernels


@dataclass(frozen=True)
class TruncatedKernel:
    """Finite cell sum of a reproducing kernel.

    ``weights`` maps ``(p, q)`` (complex ball) or ``p`` (real ball) to the
    coefficient multiplying the cell kernel.
    """

    family: str
    n: int
    s: float | None
    cutoff: int
    weights: Mapping = field(repr=False)
    real: bool = False
    tail_note: str = ""

    def matrix(self, X, Y=None) -> np.ndarray:
        """Kernel matrix ``K[i, j] = K(X[i], Y[j])``."""
        if self.real:
            return self._real_matrix(X, Y)
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=complex))
        if X.shape[1] != self.n or Y.shape[1] != self.n:
            raise ValueError("points have the wrong dimension")
        tx = np.sum(np.abs(X) ** 2, axis=1)
        ty = np.sum(np.abs(Y) ** 2, axis=1)
        if tx.max(initial=0) >= 1 or ty.max(initial=0) >= 1:
            raise ValueError("points must lie in the open unit ball")
        mx, my = X.shape[0], Y.shape[0]
        x = (X @ np.conj(Y).T).ravel()
        rho = np.outer(tx, ty).ravel()
        P = self.cutoff
        coef = _zonal_table(self.n, P)
        Z = _accel.backend.zonal_cells(coef, x, rho).reshape(mx, my, P + 1, P + 1)
        out = np.zeros((mx, my), dtype=complex)
        for (p, q), w in self.weights.items():
            if w == 0:
                continue
            fx = normalized_2f1_array(self.n, p, q, tx)
            fy = fx if Y is X else normalized_2f1_array(self.n, p, q, ty)
            out += w * np.outer(fx, fy) * Z[:, :, p, q]
        return out

    def _real_matrix(self, X, Y=None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
        if np.sum(X ** 2, axis=1).max(initial=0) >= 1 or np.sum(Y ** 2, axis=1).max(initial=0) >= 1:
            raise ValueError("points must lie in the open unit ball")
        out = np.zeros((X.shape[0], Y.shape[0]))
        for p, w in self.weights.items():
            if w == 0:
                continue
            B = real_harmonic_basis(self.n, p)
            out += w * (B.evaluate(X) @ B.evaluate(Y).T)
        return out

    def __call__(self, z, w) -> complex:
        return self.matrix(np.atleast_2d(z), np.atleast_2d(w))[0, 0]

    def gram(self, X) -> tuple[np.ndarray, float]:
        G = self.matrix(X)
        G = (G + np.conj(G).T) / 2
        return G, float(np.linalg.eigvalsh(G).min())


@lru_cache(maxsize=64)
def _zonal_table(n: int, P: int) -> np.ndarray:
    return zonal_coefficients(n, P)


def _cells(n: int, cutoff: int, mixed_only: bool = False):
    for total in range(cutoff + 1):
        for p in range(total + 1):
            q = total - p
            if n == 1 and p * q:
                continue
            if mixed_only and p * q == 0:
                continue
            yield p, q


def _inv_coeff(n: int, p: int, q: int, s: float) -> float:
    if p * q == 0:
        return float(1 / c_p0_closed(n, max(p, q), s)) if p + q else 1.0
    if s > -1:
        return 1.0 / c_pq(n, p, q, s).value
    return 1.0 / c_pq_continued(n, p, q)(s)


def k_s_truncated(n: int, s: float, cutoff: int) -> TruncatedKernel:
    """``K_s = sum K_pq / C_pq(s)`` over ``p + q <= cutoff``, for ``s > -n-1``."""
    if s <= -n - 1:
        raise ValueError(f"need s > -n-1 = {-n - 1}")
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    w = {(p, q): _inv_coeff(n, p, q, s) for p, q in _cells(n, cutoff)}
    return TruncatedKernel("mharmonic_s", n, float(s), cutoff, w,
                           tail_note=f"cells with p+q <= {cutoff}; no tail extrapolation")


def k_cici_truncated(n: int, cutoff: int) -> TruncatedKernel:
    """``Gamma(n)^2 sum_{p,q>=1} K_pq / ((p)_n (q)_n)`` over ``p + q <= cutoff``."""
    if n == 1:
        raise ValueError("space trivial for n=1")
    w = {(p, q): float(1 / c_cici(n, p, q)) for p, q in _cells(n, cutoff, mixed_only=True)}
    return TruncatedKernel("cici", n, None, cutoff, w,
                           tail_note=f"cells 1 <= p, q with p+q <= {cutoff}; no tail extrapolation")


def k_circ_truncated(n: int, cutoff: int) -> TruncatedKernel:
    """Cell form of ``log 1/|1-<x,y>|^2``: weights ``(p-1)!/(n)_p`` on cells ``(p,0), (0,p)``."""
    w = {}
    for p, q in _cells(n, cutoff):
        if p * q == 0 and p + q > 0:
            m = p + q
            w[(p, q)] = float(Fraction(math.factorial(m - 1), pochhammer(n, m)))
    return TruncatedKernel("circ", n, None, cutoff, w, tail_note=f"cells with p+q <= {cutoff}")


def k_second_order_truncated(n: int, cutoff: int) -> TruncatedKernel:
    """Cellwise limit of ``(K_s - 1 - eps K_circ) / eps^2`` at ``s = -n-1+eps``.

    Each cell carries the ``eps^2`` Taylor coefficient of ``1/C_pq(-n-1+eps)``:
    the reciprocal double-pole strength for ``pq > 0`` and
    ``(p-1)! H_{p-1} / (n)_p`` on the pluriharmonic cells.
    """
    w = {}
    for p, q in _cells(n, cutoff):
        if p + q == 0:
            continue
        a2 = inverse_coeff_limits(n, p, q)[1]
        if a2:
            w[(p, q)] = float(a2)
    return TruncatedKernel("second_order", n, None, cutoff, w, tail_note=f"cells with p+q <= {cutoff}")


def k_harm_truncated(n: int, s: float, cutoff: int) -> TruncatedKernel:
    """Real-ball kernel ``sum_{p <= cutoff} (n/2+s+1)_p / (n/2)_p Z_p(x, y)``."""
    if s <= -n / 2 - 1:
        raise ValueError(f"need s > -n/2-1 = {-n / 2 - 1}")
    w = {p: float(pochhammer(n / 2 + s + 1, p) / pochhammer(n / 2, p)) for p in range(cutoff + 1)}
    return TruncatedKernel("harmonic_s", n, float(s), cutoff, w, real=True,
                           tail_note=f"degrees p <= {cutoff}; no tail extrapolation")


def make_kernel(family: str, n: int, s: float | None, cutoff: int) -> TruncatedKernel:
    if family == "mharmonic_s":
        return k_s_truncated(n, s, cutoff)
    if family == "cici":
        return k_cici_truncated(n, cutoff)
    if family == "harmonic_s":
        return k_harm_truncated(n, s, cutoff)
    if family == "circ":
        return k_circ_truncated(n, cutoff)
    if family == "second_order":
        return k_second_order_truncated(n, cutoff)
    raise ValueError(f"unknown kernel family {family!r}; choose from {FAMILIES}")


# ---------------------------------------------------------------------------
# sampling and checks


def random_ball_points(n: int, m: int, seed: int = 42, radius: float = 0.8) -> np.ndarray:
    """``m`` points of the complex ball ``|z| <= radius``, reproducible from ``seed``."""
    rng = np.random.RandomState(seed)
    z = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    z /= np.linalg.norm(z, axis=1)[:, None]
    r = radius * rng.uniform(0, 1, m) ** (1 / (2 * n))
    return z * r[:, None]


def random_real_ball_points(n: int, m: int, seed: int = 42, radius: float = 0.8) -> np.ndarray:
    rng = np.random.RandomState(seed)
    x = rng.standard_normal((m, n))
    x /= np.linalg.norm(x, axis=1)[:, None]
    r = radius * rng.uniform(0, 1, m) ** (1 / n)
    return x * r[:, None]


def gram_min_eig(kernel: TruncatedKernel, points) -> float:
    return kernel.gram(points)[1]


def limit_defects(n: int, X, Y, eps_list, cutoff: int, order: int, target: np.ndarray) -> np.ndarray:
    """Defects of the difference quotients of ``K_s`` at ``s = -n-1+eps`` against ``target``.

    ``order = 1``: ``(K_s - 1)/eps``.  ``order = 2``: ``(K_s - 1 - eps K_circ)/eps^2``
    with ``K_circ`` truncated at the same cutoff, so the first-order cells cancel
    exactly.  Row ``i`` holds ``|quotient - target|`` for ``eps_list[i]`` at each
    pair ``(X[k], Y[k])``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    Y = np.atleast_2d(np.asarray(Y, dtype=complex))
    kc_trunc = k_circ_truncated(n, cutoff)
    kc = np.array([kc_trunc(x, y) for x, y in zip(X, Y)])
    rows = []
    for eps in eps_list:
        K = k_s_truncated(n, -n - 1 + eps, cutoff)
        ks = np.array([K(x, y) for x, y in zip(X, Y)])
        if order == 1:
            quot = (ks - 1) / eps
        elif order == 2:
            quot = (ks - 1 - eps * kc) / eps ** 2
        else:
            raise ValueError("order must be 1 or 2")
        rows.append(np.abs(quot - target))
    return np.array(rows)
