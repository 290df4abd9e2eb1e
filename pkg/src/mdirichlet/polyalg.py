"""Sparse polynomials in z, z-bar on C^n (and x on R^n).

Coefficients may be ``int``/``Fraction`` (the exact path) or ``float``/``complex``
(the float path); mixing the two degrades to floats.  Sphere and ball integrals
of monomials are available in closed form, so inner products of polynomials are
exact whenever the coefficients are.

Operator indices ``j``, ``k`` are 1-based, matching the usual notation
``z_1, ..., z_n``.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "ComplexPoly",
    "RealPoly",
    "wirtinger",
    "euclidean_laplacian",
    "invariant_laplacian",
    "spherical_laplacian",
    "tangential",
    "tangential_fields",
    "reeb",
    "radial_n",
    "sphere_inner",
    "sphere_norm_sq",
    "ball_inner",
    "sphere_moment",
    "ball_moment",
    "rotate",
    "check_unitary",
    "real_partial",
    "real_laplacian",
    "real_tangential",
    "real_spherical_laplacian",
    "real_sphere_inner",
    "real_sphere_moment",
    "real_ball_inner",
    "dumps",
    "loads",
]

Index = tuple[int, ...]


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def _add(a: Index, b: Index) -> Index:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, j: int) -> Index:
    return tuple(1 if i == j else 0 for i in range(n))


class _SparsePoly:
    """Shared arithmetic for the two polynomial families.

    Instances are immutable; every operation returns a new object.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping | None = None):
        if int(dim) != dim or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        clean = {}
        for key, c in (terms or {}).items():
            key = self._normalize_key(key)
            if c != 0:
                clean[key] = c
        self._terms = clean

    # subclass hooks
    def _normalize_key(self, key):
        raise NotImplementedError

    @staticmethod
    def _key_mul(k1, k2):
        raise NotImplementedError

    def _new(self, terms):
        obj = object.__new__(type(self))
        obj.dim = self.dim
        obj._terms = {k: c for k, c in terms.items() if c != 0}
        return obj

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self._terms.values())

    def _coerce(self, other):
        if isinstance(other, _SparsePoly):
            if type(other) is not type(self):
                raise TypeError("cannot mix complex and real polynomials")
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._terms)
        if o is None:
            zero = self._zero_key()
            out[zero] = out.get(zero, 0) + other
        else:
            for k, c in o._terms.items():
                out[k] = out.get(k, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._new({k: c * other for k, c in self._terms.items()})
        out: dict = defaultdict(int)
        km = self._key_mul
        for k1, c1 in self._terms.items():
            for k2, c2 in o._terms.items():
                out[km(k1, k2)] += c1 * c2
        return self._new(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, _SparsePoly):
            raise TypeError("polynomial division is not supported")
        if isinstance(other, int) and all(_is_exact(c) for c in self._terms.values()):
            other = Fraction(other)
        return self._new({k: c / other for k, c in self._terms.items()})

    def __pow__(self, e: int):
        if int(e) != e or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = type(self).constant(self.dim, 1)
        base = self
        e = int(e)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, _SparsePoly):
            return type(other) is type(self) and self.dim == other.dim and self._terms == other._terms
        if self.is_zero():
            return other == 0
        return self._terms == {self._zero_key(): other}

    def __hash__(self):
        return hash((type(self).__name__, self.dim, frozenset(self._terms.items())))

    def map_coefficients(self, fn):
        return self._new({k: fn(c) for k, c in self._terms.items()})

    def to_float(self):
        return self.map_coefficients(lambda c: complex(c) if isinstance(c, complex) else float(c))

    def l1_norm(self) -> float:
        """Sum of absolute coefficients; bounds the sup norm on the closed unit ball."""
        return float(sum(abs(c) for c in self._terms.values()))

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def _zero_key(self):
        raise NotImplementedError


class ComplexPoly(_SparsePoly):
    """Polynomial in ``z`` and ``conj(z)``: terms keyed by ``(alpha, beta)``.

    The key ``(alpha, beta)`` stands for the monomial ``z**alpha * conj(z)**beta``.
    """

    __slots__ = ()

    def _normalize_key(self, key):
        alpha, beta = key
        alpha = tuple(int(a) for a in alpha)
        beta = tuple(int(b) for b in beta)
        if len(alpha) != self.dim or len(beta) != self.dim:
            raise ValueError(f"multi-index length must equal dim={self.dim}")
        if min(alpha + beta) < 0:
            raise ValueError("multi-index entries must be nonnegative")
        return alpha, beta

    @staticmethod
    def _key_mul(k1, k2):
        return _add(k1[0], k2[0]), _add(k1[1], k2[1])

    def _zero_key(self):
        z = (0,) * self.dim
        return z, z

    @classmethod
    def constant(cls, dim: int, c=1) -> "ComplexPoly":
        z = (0,) * dim
        return cls(dim, {(z, z): c})

    @classmethod
    def z(cls, dim: int, j: int, conjugated: bool = False) -> "ComplexPoly":
        if not 1 <= j <= dim:
            raise IndexError(f"coordinate index {j} out of range 1..{dim}")
        e, zero = _unit(dim, j - 1), (0,) * dim
        return cls(dim, {((zero, e) if conjugated else (e, zero)): 1})

    @classmethod
    def zbar(cls, dim: int, j: int) -> "ComplexPoly":
        return cls.z(dim, j, conjugated=True)

    @classmethod
    def monomial(cls, alpha: Iterable[int], beta: Iterable[int], coef=1) -> "ComplexPoly":
        alpha, beta = tuple(alpha), tuple(beta)
        return cls(len(alpha), {(alpha, beta): coef})

    @classmethod
    def norm_sq(cls, dim: int) -> "ComplexPoly":
        """The polynomial ``|z|^2``."""
        return cls(dim, {(_unit(dim, j), _unit(dim, j)): 1 for j in range(dim)})

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(sum(a), sum(b)) for a, b in self._terms}

    def max_bidegree(self) -> tuple[int, int]:
        """Largest holomorphic and anti-holomorphic degrees occurring (separately)."""
        if not self._terms:
            return 0, 0
        return max(sum(a) for a, _ in self._terms), max(sum(b) for _, b in self._terms)

    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self._terms), default=0)

    def is_bihomogeneous(self, p: int | None = None, q: int | None = None) -> bool:
        bd = self.bidegrees()
        if len(bd) > 1:
            return False
        if not bd:
            return True
        (pp, qq), = bd
        return (p is None or p == pp) and (q is None or q == qq)

    def slices(self) -> dict[tuple[int, int], "ComplexPoly"]:
        """Split into bihomogeneous parts keyed by bidegree."""
        parts: dict = defaultdict(dict)
        for (a, b), c in self._terms.items():
            parts[(sum(a), sum(b))][(a, b)] = c
        return {bd: self._new(t) for bd, t in sorted(parts.items())}

    def conjugate(self) -> "ComplexPoly":
        return self._new({(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def __call__(self, z) -> complex:
        z = [complex(v) for v in z]
        if len(z) != self.dim:
            raise ValueError("point has wrong dimension")
        zc = [v.conjugate() for v in z]
        total = 0j
        for (a, b), c in self._terms.items():
            m = complex(c)
            for j in range(self.dim):
                if a[j]:
                    m *= z[j] ** a[j]
                if b[j]:
                    m *= zc[j] ** b[j]
            total += m
        return total

    def evaluate(self, points) -> np.ndarray:
        """Vectorized evaluation at an ``(m, n)`` array of points."""
        Z = np.atleast_2d(np.asarray(points, dtype=complex))
        if Z.shape[1] != self.dim:
            raise ValueError("points have wrong dimension")
        if not self._terms:
            return np.zeros(Z.shape[0], dtype=complex)
        hmax = max(max(a) for a, _ in self._terms)
        amax = max(max(b) for _, b in self._terms)
        # powers[j][e] = Z[:, j]**e
        zp = [np.vstack([Z[:, j] ** e for e in range(hmax + 1)]) for j in range(self.dim)]
        zcp = [np.vstack([np.conj(Z[:, j]) ** e for e in range(amax + 1)]) for j in range(self.dim)]
        out = np.zeros(Z.shape[0], dtype=complex)
        for (a, b), c in self._terms.items():
            m = np.full(Z.shape[0], complex(c))
            for j in range(self.dim):
                if a[j]:
                    m = m * zp[j][a[j]]
                if b[j]:
                    m = m * zcp[j][b[j]]
            out += m
        return out

    def __repr__(self):
        if not self._terms:
            return f"ComplexPoly(dim={self.dim}, 0)"
        return f"ComplexPoly(dim={self.dim}, {len(self._terms)} terms, bidegrees={sorted(self.bidegrees())})"


class RealPoly(_SparsePoly):
    """Polynomial in ``x`` on R^n, terms keyed by a single multi-index."""

    __slots__ = ()

    def _normalize_key(self, key):
        key = tuple(int(a) for a in key)
        if len(key) != self.dim:
            raise ValueError(f"multi-index length must equal dim={self.dim}")
        if min(key) < 0:
            raise ValueError("multi-index entries must be nonnegative")
        return key

    @staticmethod
    def _key_mul(k1, k2):
        return _add(k1, k2)

    def _zero_key(self):
        return (0,) * self.dim

    @classmethod
    def constant(cls, dim: int, c=1) -> "RealPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def x(cls, dim: int, j: int) -> "RealPoly":
        if not 1 <= j <= dim:
            raise IndexError(f"coordinate index {j} out of range 1..{dim}")
        return cls(dim, {_unit(dim, j - 1): 1})

    @classmethod
    def monomial(cls, alpha: Iterable[int], coef=1) -> "RealPoly":
        alpha = tuple(alpha)
        return cls(len(alpha), {alpha: coef})

    def degree(self) -> int:
        return max((sum(a) for a in self._terms), default=0)

    def degrees(self) -> set[int]:
        return {sum(a) for a in self._terms}

    def slices(self) -> dict[int, "RealPoly"]:
        parts: dict = defaultdict(dict)
        for a, c in self._terms.items():
            parts[sum(a)][a] = c
        return {d: self._new(t) for d, t in sorted(parts.items())}

    def __call__(self, x) -> float:
        x = [float(v) for v in x]
        total = 0.0
        for a, c in self._terms.items():
            m = float(c)
            for j, e in enumerate(a):
                if e:
                    m *= x[j] ** e
            total += m
        return total

    def evaluate(self, points) -> np.ndarray:
        X = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(X.shape[0])
        for a, c in self._terms.items():
            out += float(c) * np.prod(X ** np.asarray(a), axis=1)
        return out

    def __repr__(self):
        return f"RealPoly(dim={self.dim}, {len(self._terms)} terms)"


# ---------------------------------------------------------------------------
# differential operators on ComplexPoly


def _check_index(f: _SparsePoly, j: int) -> int:
    if not 1 <= j <= f.dim:
        raise IndexError(f"index {j} out of range 1..{f.dim}")
    return j - 1


def wirtinger(f: ComplexPoly, j: int, conjugated: bool = False) -> ComplexPoly:
    """``d f / d z_j`` or, with ``conjugated``, ``d f / d conj(z_j)``."""
    i = _check_index(f, j)
    out: dict = {}
    for (a, b), c in f.items():
        e = b[i] if conjugated else a[i]
        if not e:
            continue
        if conjugated:
            b = b[:i] + (e - 1,) + b[i + 1:]
        else:
            a = a[:i] + (e - 1,) + a[i + 1:]
        out[(a, b)] = out.get((a, b), 0) + e * c
    return f._new(out)


def _dbar_d(f: ComplexPoly) -> ComplexPoly:
    """``sum_j d_j dbar_j f`` (a quarter of the Euclidean Laplacian)."""
    out: dict = defaultdict(int)
    for (a, b), c in f.items():
        for i in range(f.dim):
            if a[i] and b[i]:
                key = (a[:i] + (a[i] - 1,) + a[i + 1:], b[:i] + (b[i] - 1,) + b[i + 1:])
                out[key] += a[i] * b[i] * c
    return f._new(out)


def euclidean_laplacian(f: ComplexPoly) -> ComplexPoly:
    """``4 sum_j d_j dbar_j f``, the real Laplacian on C^n = R^{2n}."""
    return _dbar_d(f) * 4


def invariant_laplacian(f: ComplexPoly) -> ComplexPoly:
    """``4(1-|z|^2) sum_{j,k} (delta_jk - z_j conj(z_k)) d_j dbar_k f``."""
    # sum_{jk} z_j zbar_k d_j dbar_k acts on z^a zbar^b as |a||b|
    euler = f._new({(a, b): sum(a) * sum(b) * c for (a, b), c in f.items()})
    inner = _dbar_d(f) - euler
    one_minus = 1 - ComplexPoly.norm_sq(f.dim)
    return one_minus * inner * 4


def spherical_laplacian(f: ComplexPoly) -> ComplexPoly:
    """Tangential part of the Laplacian: ``|z|^2 Delta - N^2 - (2n-2) N``.

    On the unit sphere it agrees with the Laplace-Beltrami operator applied to
    the restriction of ``f``.
    """
    n = f.dim
    radial = f._new({(a, b): -(sum(a) + sum(b)) * (sum(a) + sum(b) + 2 * n - 2) * c
                     for (a, b), c in f.items()})
    return ComplexPoly.norm_sq(n) * euclidean_laplacian(f) + radial


def tangential(f: ComplexPoly, j: int, k: int, conjugated: bool = False) -> ComplexPoly:
    """Apply ``L_jk = zbar_j d_k - zbar_k d_j`` or its conjugate ``z_j dbar_k - z_k dbar_j``."""
    if j == k:
        raise ValueError("tangential field needs j != k")
    jj, kk = _check_index(f, j), _check_index(f, k)
    out: dict = defaultdict(int)
    for (a, b), c in f.items():
        hol, anti = (b, a) if conjugated else (a, b)
        # d_k then multiply by the conjugate-side variable j, minus the swap
        for src, dst, sign in ((kk, jj, 1), (jj, kk, -1)):
            e = hol[src]
            if not e:
                continue
            h2 = hol[:src] + (e - 1,) + hol[src + 1:]
            a2 = anti[:dst] + (anti[dst] + 1,) + anti[dst + 1:]
            key = (a2, h2) if conjugated else (h2, a2)
            out[key] += sign * e * c
    return f._new(out)


def tangential_fields(n: int) -> list[tuple[int, int, bool]]:
    """All ``2n(n-1)`` fields ``L_jk``, ``conj(L)_jk`` (j != k) in a fixed order."""
    return [(j, k, conj) for conj in (False, True)
            for j in range(1, n + 1) for k in range(1, n + 1) if j != k]


def reeb(f: ComplexPoly) -> ComplexPoly:
    """``sum_j (z_j d_j - zbar_j dbar_j) f``."""
    return f._new({(a, b): (sum(a) - sum(b)) * c for (a, b), c in f.items()})


def radial_n(f: ComplexPoly) -> ComplexPoly:
    """``sum_j (z_j d_j + zbar_j dbar_j) f``."""
    return f._new({(a, b): (sum(a) + sum(b)) * c for (a, b), c in f.items()})


# ---------------------------------------------------------------------------
# moments and inner products


@lru_cache(maxsize=None)
def _sphere_moment_exact(n: int, kappa: Index) -> Fraction:
    num = math.factorial(n - 1)
    for k in kappa:
        num *= math.factorial(k)
    return Fraction(num, math.factorial(n - 1 + sum(kappa)))


@lru_cache(maxsize=None)
def _sphere_moment_float(n: int, kappa: Index) -> float:
    lg = math.lgamma(n) - math.lgamma(n + sum(kappa))
    for k in kappa:
        lg += math.lgamma(k + 1)
    return math.exp(lg)


def sphere_moment(n: int, kappa: Index, exact: bool = False):
    """``integral of |z^kappa|^2 dsigma`` over the unit sphere of C^n (normalized)."""
    kappa = tuple(kappa)
    return _sphere_moment_exact(n, kappa) if exact else _sphere_moment_float(n, kappa)


def ball_moment(n: int, s, kappa: Index, exact: bool = False):
    """``integral of |z^kappa|^2 dmu_s`` = ``kappa! / (n+s+1)_{|kappa|}``."""
    if s <= -1:
        raise ValueError(f"weighted ball measure needs s > -1, got {s}")
    kappa = tuple(kappa)
    if exact:
        val = Fraction(1)
        for k in kappa:
            val *= math.factorial(k)
        x = n + Fraction(s) + 1
        for i in range(sum(kappa)):
            val /= x + i
        return val
    lg = math.lgamma(n + s + 1) - math.lgamma(n + s + 1 + sum(kappa))
    for k in kappa:
        lg += math.lgamma(k + 1)
    return math.exp(lg)


def _by_character(f: ComplexPoly) -> dict[Index, list]:
    groups: dict = defaultdict(list)
    for (a, b), c in f.items():
        groups[tuple(x - y for x, y in zip(a, b))].append((a, b, c))
    return groups


def _pairing(f: ComplexPoly, g: ComplexPoly, moment):
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    exact = f.is_exact and g.is_exact
    total = Fraction(0) if exact else 0j
    gg = _by_character(g)
    for ch, fterms in _by_character(f).items():
        gterms = gg.get(ch)
        if not gterms:
            continue
        for a, _b, cf in fterms:
            for _a2, b2, cg in gterms:
                # z^a zbar^b * conj(z^a2 zbar^b2) = z^(a+b2) zbar^(b+a2)
                total += cf * cg.conjugate() * moment(_add(a, b2), exact)
    return total


def sphere_inner(f: ComplexPoly, g: ComplexPoly):
    """``<f, g>`` in L^2 of the normalized surface measure on the unit sphere.

    Returns a ``Fraction`` when both inputs are exact, otherwise ``complex``.
    """
    n = f.dim
    return _pairing(f, g, lambda kappa, exact: sphere_moment(n, kappa, exact))


def sphere_norm_sq(f: ComplexPoly) -> float:
    v = sphere_inner(f, f)
    return v if isinstance(v, Fraction) else v.real


def ball_inner(f: ComplexPoly, g: ComplexPoly, s):
    """``<f, g>`` in L^2(B_n, dmu_s) with the probability measure ``dmu_s``, ``s > -1``."""
    if s <= -1:
        raise ValueError(f"weighted ball measure needs s > -1, got {s}")
    n = f.dim
    exact_s = _is_exact(s)
    return _pairing(f, g, lambda kappa, exact: ball_moment(n, s, kappa, exact and exact_s))


# ---------------------------------------------------------------------------
# unitary action


def check_unitary(U, tol: float = 1e-12) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError("unitary matrix must be square")
    defect = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if defect > tol:
        raise ValueError(f"matrix is not unitary (max defect {defect:.3e})")
    return U


def rotate(f: ComplexPoly, U) -> ComplexPoly:
    """``f o U^{-1}``, i.e. ``z -> f(U^* z)``."""
    U = check_unitary(U)
    n = f.dim
    if U.shape[0] != n:
        raise ValueError("unitary matrix has wrong size")
    Uinv = U.conj().T
    zero = (0,) * n

    def tidy(w):
        # keep permutation-like matrices on the exact path
        if w.imag == 0 and w.real == int(w.real):
            return int(w.real)
        return w

    hol_forms, anti_forms = [], []
    for j in range(n):
        # (U^* z)_j = sum_k Uinv[j, k] z_k ; its conjugate uses conj(Uinv[j, k])
        h, a = {}, {}
        for k in range(n):
            w = Uinv[j, k]
            if w != 0:
                h[(_unit(n, k), zero)] = tidy(w)
                a[(zero, _unit(n, k))] = tidy(w.conjugate())
        hol_forms.append(ComplexPoly(n, h))
        anti_forms.append(ComplexPoly(n, a))

    cache: dict = {}

    def power(kind, j, e):
        key = (kind, j, e)
        if key not in cache:
            base = hol_forms[j] if kind == 0 else anti_forms[j]
            cache[key] = base if e == 1 else power(kind, j, e - 1) * base
        return cache[key]

    out = ComplexPoly(n)
    for (a, b), c in f.items():
        term = ComplexPoly.constant(n, c)
        for j in range(n):
            if a[j]:
                term = term * power(0, j, a[j])
            if b[j]:
                term = term * power(1, j, b[j])
        out = out + term
    return out


# ---------------------------------------------------------------------------
# real polynomials


def real_partial(f: RealPoly, j: int) -> RealPoly:
    i = _check_index(f, j)
    out: dict = {}
    for a, c in f.items():
        if a[i]:
            key = a[:i] + (a[i] - 1,) + a[i + 1:]
            out[key] = out.get(key, 0) + a[i] * c
    return f._new(out)


def real_laplacian(f: RealPoly) -> RealPoly:
    out: dict = defaultdict(int)
    for a, c in f.items():
        for i in range(f.dim):
            if a[i] >= 2:
                out[a[:i] + (a[i] - 2,) + a[i + 1:]] += a[i] * (a[i] - 1) * c
    return f._new(out)


def real_tangential(f: RealPoly, j: int, k: int) -> RealPoly:
    """``X_jk f = x_j d_k f - x_k d_j f``."""
    if j == k:
        raise ValueError("tangential field needs j != k")
    xj, xk = RealPoly.x(f.dim, j), RealPoly.x(f.dim, k)
    return xj * real_partial(f, k) - xk * real_partial(f, j)


def real_spherical_laplacian(f: RealPoly) -> RealPoly:
    """``|x|^2 Delta - N^2 - (n-2) N``."""
    n = f.dim
    r2 = RealPoly(n, {tuple(2 if i == j else 0 for i in range(n)): 1 for j in range(n)})
    radial = f._new({a: -sum(a) * (sum(a) + n - 2) * c for a, c in f.items()})
    return r2 * real_laplacian(f) + radial


@lru_cache(maxsize=None)
def _real_sphere_moment_exact(n: int, alpha: Index) -> Fraction:
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = 1
    for a in alpha:
        for odd in range(1, a, 2):
            num *= odd
    den = 1
    for i in range(sum(alpha) // 2):
        den *= n + 2 * i
    return Fraction(num, den)


def real_sphere_moment(n: int, alpha: Index, exact: bool = False):
    """``integral of x^alpha dsigma`` on the unit sphere of R^n (normalized).

    Nonzero only for all-even ``alpha``, where it equals
    ``prod (alpha_i - 1)!! / (n (n+2) ... (n + |alpha| - 2))``.
    """
    v = _real_sphere_moment_exact(n, tuple(alpha))
    return v if exact else float(v)


def real_sphere_inner(f: RealPoly, g: RealPoly):
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    exact = f.is_exact and g.is_exact
    n = f.dim
    total = Fraction(0) if exact else 0.0
    for a, cf in f.items():
        for b, cg in g.items():
            m = _real_sphere_moment_exact(n, _add(a, b))
            if m:
                total += cf * cg * (m if exact else float(m))
    return total


def real_ball_inner(f: RealPoly, g: RealPoly, s):
    """``<f, g>`` in L^2 of ``drho_s`` on the real unit ball, ``s > -1``.

    A monomial of degree ``2k`` integrates to its sphere moment times
    ``(n/2)_k / (n/2 + s + 1)_k``.
    """
    if s <= -1:
        raise ValueError(f"weighted ball measure needs s > -1, got {s}")
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    n = f.dim
    exact = f.is_exact and g.is_exact and _is_exact(s)
    half = Fraction(n, 2) if exact else n / 2
    total = Fraction(0) if exact else 0.0
    for a, cf in f.items():
        for b, cg in g.items():
            ab = _add(a, b)
            m = _real_sphere_moment_exact(n, ab)
            if not m:
                continue
            radial = Fraction(1) if exact else 1.0
            for i in range(sum(ab) // 2):
                radial *= (half + i) / (half + s + 1 + i)
            total += cf * cg * (m if exact else float(m)) * radial
    return total


# ---------------------------------------------------------------------------
# text serialization: one term per line, "alpha|beta|re|im"


def _fmt_num(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _parse_num(s: str):
    s = s.strip()
    if "/" in s:
        return Fraction(s)
    try:
        return int(s)
    except ValueError:
        return float(s)


def _term_order(key):
    a, b = key
    return (sum(a) + sum(b), sum(a), a, b)


def dumps(f: ComplexPoly) -> str:
    """Canonical text form; exact coefficients are written as ``num/den``."""
    lines = [f"# dim={f.dim}"]
    for key in sorted(f.terms, key=_term_order):
        c = f.terms[key]
        if isinstance(c, complex):
            re, im = _fmt_num(c.real), _fmt_num(c.imag)
        else:
            re, im = _fmt_num(c), "0"
        a, b = key
        lines.append(f"{','.join(map(str, a))}|{','.join(map(str, b))}|{re}|{im}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> ComplexPoly:
    dim = None
    terms: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("dim="):
                dim = int(body[4:])
            continue
        parts = line.split("|")
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'alpha|beta|re|im', got {raw!r}")
        a = tuple(int(x) for x in parts[0].split(","))
        b = tuple(int(x) for x in parts[1].split(","))
        re, im = _parse_num(parts[2]), _parse_num(parts[3])
        c = re if im == 0 else complex(re, im)
        if dim is None:
            dim = len(a)
        terms[(a, b)] = terms.get((a, b), 0) + c
    if dim is None:
        raise ValueError("cannot infer dimension of an empty polynomial without a '# dim=' header")
    return ComplexPoly(dim, terms)
