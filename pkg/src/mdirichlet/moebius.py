"""Ball automorphisms, exact composition with geodesic symmetries, and invariance checks.

``phi_a`` is the involution exchanging ``0`` and ``(a, 0, ..., 0)``:
``phi_a(z) = (a - z_1, -sqrt(1-a^2) z') / (1 - a z_1)``.  A polynomial composed
with ``phi_a`` is held as a numerator over powers of ``(1 - a z_1)`` and its
conjugate, and is expanded into a polynomial only at the end with a certified
remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coeffs import c_cici
from .harmonics import BigradedComponent, PWDecomposition, peter_weyl, solid_derivatives
from .polyalg import ComplexPoly, check_unitary, invariant_laplacian, rotate, wirtinger
from .specfun import pochhammer

__all__ = [
    "MoebiusMap",
    "phi_a",
    "phi_a_jacobian",
    "RationalComposite",
    "compose_rational",
    "BoundaryExpansion",
    "expand_boundary",
    "cici_pairing",
    "theorem_pk_check",
    "pluriharmonic_defect",
    "mh_commutation_check",
]

MAX_ORDER = 400


def _check_a(a) -> None:
    if not 0 <= a < 1:
        raise ValueError(f"need 0 <= a < 1, got {a}")


def _sqrt_exact(x: Fraction) -> Fraction | None:
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


def _scale(a):
    """``sqrt(1 - a^2)``, exact when ``a`` is rational with a rational root."""
    if isinstance(a, (int, Fraction)):
        r = _sqrt_exact(1 - Fraction(a) ** 2)
        if r is not None:
            return r
    return math.sqrt(1 - float(a) ** 2)


def phi_a(a: float, z) -> np.ndarray:
    """Geodesic symmetry of the ball; accepts one point or an ``(m, n)`` array."""
    _check_a(a)
    z = np.asarray(z, dtype=complex)
    pts = np.atleast_2d(z)
    if np.any(np.sum(np.abs(pts) ** 2, axis=1) > 1 + 1e-12):
        raise ValueError("points must lie in the closed unit ball")
    a = float(a)
    den = 1 - a * pts[:, :1]
    out = np.empty_like(pts)
    out[:, :1] = (a - pts[:, :1]) / den
    out[:, 1:] = -math.sqrt(1 - a * a) * pts[:, 1:] / den
    return out[0] if z.ndim == 1 else out


def phi_a_jacobian(a: float, z) -> np.ndarray:
    """Holomorphic Jacobian ``J[l, j] = d phi_l / d z_j`` at one point."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[0]
    a = float(a)
    s = math.sqrt(1 - a * a)
    d = 1 - a * z[0]
    J = np.zeros((n, n), dtype=complex)
    J[0, 0] = (a * a - 1) / d ** 2
    for j in range(1, n):
        J[j, j] = -s / d
        J[j, 0] = -s * a * z[j] / d ** 2
    return J


@dataclass(frozen=True)
class MoebiusMap:
    """The automorphism ``z -> U phi_a(V z)``."""

    a: float
    U: np.ndarray | None = None
    V: np.ndarray | None = None

    def __post_init__(self):
        _check_a(self.a)
        for M in (self.U, self.V):
            if M is not None:
                check_unitary(M)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        pts = np.atleast_2d(z)
        if self.V is not None:
            pts = pts @ np.asarray(self.V, dtype=complex).T
        w = phi_a(self.a, pts)
        if self.U is not None:
            w = w @ np.asarray(self.U, dtype=complex).T
        return w[0] if z.ndim == 1 else w

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        n = z.shape[0]
        U = np.eye(n) if self.U is None else np.asarray(self.U, dtype=complex)
        V = np.eye(n) if self.V is None else np.asarray(self.V, dtype=complex)
        return U @ phi_a_jacobian(self.a, V @ z) @ V


# ---------------------------------------------------------------------------
# exact rational composites


@dataclass(frozen=True)
class RationalComposite:
    """``numerator / ((1 - a z_1)^hol_power (1 - a conj(z_1))^antihol_power)``."""

    numerator: ComplexPoly
    hol_power: int
    antihol_power: int
    a: float

    @property
    def dim(self) -> int:
        return self.numerator.dim

    def _denominator_values(self, pts: np.ndarray) -> np.ndarray:
        d = 1 - float(self.a) * pts[:, 0]
        return d ** self.hol_power * np.conj(d) ** self.antihol_power

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        return self.numerator.evaluate(pts) / self._denominator_values(pts)

    def __call__(self, z) -> complex:
        return complex(self.evaluate(np.atleast_2d(z))[0])

    def derivative(self, j: int, conjugated: bool = False) -> "RationalComposite":
        """Exact Wirtinger derivative (1-based ``j``); raises one denominator power."""
        a = self.a
        N = self.numerator
        d = 1 - a * ComplexPoly.z(self.dim, 1, conjugated)
        power = self.antihol_power if conjugated else self.hol_power
        num = wirtinger(N, j, conjugated) * d
        if j == 1 and power:
            num = num + N * (power * a)
        if conjugated:
            return RationalComposite(num, self.hol_power, self.antihol_power + 1, a)
        return RationalComposite(num, self.hol_power + 1, self.antihol_power, a)


def compose_rational(f: ComplexPoly, a) -> RationalComposite:
    """Exact representation of ``f o phi_a``.

    Denominator powers equal the holomorphic and anti-holomorphic degrees of
    ``f``.  Coefficients stay rational when ``a`` and ``sqrt(1-a^2)`` are.
    """
    _check_a(a)
    n = f.dim
    s = _scale(a)
    z1 = ComplexPoly.z(n, 1)
    hol = [ComplexPoly.constant(n, a) - z1] + [ComplexPoly.z(n, j) * (-s) for j in range(2, n + 1)]
    anti = [h.conjugate() for h in hol]
    d_hol = 1 - z1 * a
    d_anti = d_hol.conjugate()
    if f.is_zero():
        return RationalComposite(f, 0, 0, a)
    P = max(sum(al) for al, _ in f.terms)
    Q = max(sum(be) for _, be in f.terms)
    num = ComplexPoly(n)
    for (al, be), c in f.items():
        term = ComplexPoly.constant(n, c)
        for j in range(n):
            if al[j]:
                term = term * hol[j] ** al[j]
            if be[j]:
                term = term * anti[j] ** be[j]
        term = term * d_hol ** (P - sum(al)) * d_anti ** (Q - sum(be))
        num = num + term
    return RationalComposite(num, P, Q, a)


# ---------------------------------------------------------------------------
# certified expansion


def _neg_binomial(power: int, k: int) -> int:
    return math.comb(k + power - 1, power - 1) if power else int(k == 0)


def _tail_sum(power: int, a: float, K: int, extra=None) -> float:
    """Bound for ``sum_{k>K} binom(k+power-1, power-1) a^k w(k)``.

    ``w`` defaults to 1; otherwise ``w(k) = sqrt((power+k)_n / Gamma(n))`` with
    ``extra = n``.  Terms have a decreasing ratio, so the tail after ``K`` is at
    most ``t_{K+1} / (1 - rho)`` with ``rho`` the ratio at ``K+1``.
    """
    if a == 0 or power == 0:
        return 0.0

    def weight(k):
        if extra is None:
            return 1.0
        return math.sqrt(float(pochhammer(max(power + k, 1), extra)) / math.factorial(extra - 1))

    def term(k):
        return _neg_binomial(power, k) * a ** k * weight(k)

    k0 = K + 1
    t0 = term(k0)
    rho = term(k0 + 1) / t0 if t0 else 0.0
    # the ratio of the weighted terms is nonincreasing in k for k >= 1
    if rho >= 1:
        raise ValueError("expansion order too small for a certified tail")
    return t0 / (1 - rho) * (1 + 1e-12)


def _head_sum(power: int, a: float, K: int, extra=None) -> float:
    total = 0.0
    for k in range(K + 1):
        w = 1.0 if extra is None else math.sqrt(float(pochhammer(max(power + k, 1), extra)) / math.factorial(extra - 1))
        total += _neg_binomial(power, k) * a ** k * w
    return total


@dataclass(frozen=True)
class BoundaryExpansion:
    """Polynomial ``poly`` with ``sup |g - poly| <= tail`` on the closed ball.

    ``cici_tail`` bounds the M-harmonic Dirichlet seminorm of ``g - poly``.
    """

    poly: ComplexPoly
    tail: float
    cici_tail: float
    order: int


def expand_boundary(g: RationalComposite, cutoff_degree: int) -> BoundaryExpansion:
    """Truncate both geometric denominator series after ``K = cutoff_degree - deg(numerator)`` terms."""
    a = g.a
    _check_a(a)
    N = g.numerator
    n = g.dim
    if N.is_zero():
        return BoundaryExpansion(N, 0.0, 0.0, 0)
    deg = N.degree()
    K = max(cutoff_degree - deg, 0)
    if K > MAX_ORDER:
        raise ValueError(f"expansion order {K} exceeds the cap {MAX_ORDER}")
    p1, q1 = g.hol_power, g.antihol_power
    z1 = ComplexPoly.z(n, 1)
    zb1 = ComplexPoly.zbar(n, 1)
    if a == 0:
        return BoundaryExpansion(N, 0.0, 0.0, 0)
    hol = sum((z1 ** k * (_neg_binomial(p1, k) * a ** k) for k in range(K + 1) if p1 or k == 0),
              ComplexPoly(n))
    anti = sum((zb1 ** k * (_neg_binomial(q1, k) * a ** k) for k in range(K + 1) if q1 or k == 0),
               ComplexPoly(n))
    poly = N * hol * anti
    af = float(a)
    n_sup = N.l1_norm()
    # sup bound: N (H A - H_K A_K) = N (H_tail A + H_K A_tail)
    h_tail, a_tail = _tail_sum(p1, af, K), _tail_sum(q1, af, K)
    h_all = (1 - af) ** (-p1)
    tail = n_sup * (h_tail * (1 - af) ** (-q1) + h_all * a_tail) if (p1 or q1) else 0.0
    # weighted bound: cells of N z1^k zb1^l sit inside (p1 + k, q1 + l) and the
    # weight (p)_n (q)_n / Gamma(n)^2 is monotone and separable
    wh_tail, wa_tail = _tail_sum(p1, af, K, n), _tail_sum(q1, af, K, n)
    wh_head, wa_head = _head_sum(p1, af, K, n), _head_sum(q1, af, K, n)
    cici_tail = n_sup * (wh_tail * (wa_head + wa_tail) + wh_head * wa_tail)
    return BoundaryExpansion(poly, float(tail), float(cici_tail), K)


# ---------------------------------------------------------------------------
# invariance checks


def cici_pairing(F: PWDecomposition, G: PWDecomposition) -> complex:
    """``sum_{pq>0} (p)_n (q)_n / Gamma(n)^2 <F_pq, G_pq>`` over shared cells."""
    from .polyalg import sphere_inner

    total = 0j
    for key, comp in F.components.items():
        other = G.components.get(key)
        if other is None:
            continue
        w = c_cici(F.n, *key)
        if w:
            total += complex(float(w) * complex(sphere_inner(comp.boundary, other.boundary)))
    return total


def _composite_cells(f: ComplexPoly, phi: MoebiusMap, D: int):
    g = f
    if phi.U is not None:
        g = rotate(g, np.conj(np.asarray(phi.U, dtype=complex)).T)
    exp = expand_boundary(compose_rational(g, phi.a), D)
    poly = exp.poly
    if phi.V is not None:
        poly = rotate(poly, np.conj(np.asarray(phi.V, dtype=complex)).T)
    return peter_weyl(poly), exp


def theorem_pk_check(f: ComplexPoly, g: ComplexPoly, a: float, D: int,
                     U=None, V=None) -> dict:
    """Compare ``<f o phi, g o phi>`` with ``<f, g>`` in the M-harmonic Dirichlet pairing.

    ``f`` and ``g`` are boundary polynomials (restrictions to the sphere of
    M-harmonic functions).  The reported ``error_bound`` combines the certified
    seminorm tails of both expansions through Cauchy-Schwarz.
    """
    if f.dim < 2:
        raise ValueError("need n >= 2")
    phi = MoebiusMap(a, U, V)
    Fo, Go = peter_weyl(f), peter_weyl(g)
    before = cici_pairing(Fo, Go)
    if a == 0 and U is None and V is None:
        return {"a": float(a), "D": D, "before": _c(before), "after": _c(before), "defect": 0.0,
                "error_bound": 0.0, "tails": [0.0, 0.0], "ok": True}
    Fc, ef = _composite_cells(f, phi, D)
    Gc, eg = _composite_cells(g, phi, D)
    after = cici_pairing(Fc, Gc)
    nf = math.sqrt(max(cici_pairing(Fc, Fc).real, 0.0))
    ng = math.sqrt(max(cici_pairing(Gc, Gc).real, 0.0))
    bound = ef.cici_tail * (ng + eg.cici_tail) + nf * eg.cici_tail
    defect = abs(after - before)
    return {
        "a": float(a),
        "D": D,
        "before": _c(before),
        "after": _c(after),
        "defect": float(defect),
        "error_bound": float(bound),
        "tails": [ef.cici_tail, eg.cici_tail],
        "sup_tails": [ef.tail, eg.tail],
        "ok": bool(defect <= bound + 1e-9 * max(1.0, abs(before))),
    }


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pluriharmonic_defect(f: ComplexPoly, a: float, D: int) -> tuple[float, float]:
    """Sphere norm of the mixed-cell part of the expansion of ``f o phi_a`` and the sup tail.

    For pluriharmonic ``f`` the first number is bounded by the second.
    """
    exp = expand_boundary(compose_rational(f, a), D)
    pw = peter_weyl(exp.poly).select(lambda p, q: p * q > 0)
    mixed = math.sqrt(sum(pw.cell_norms_sq().values()))
    return mixed, exp.tail


def _mh_rational(g: RationalComposite, pts: np.ndarray) -> np.ndarray:
    n = g.dim
    t = np.sum(np.abs(pts) ** 2, axis=1)
    acc = np.zeros(pts.shape[0], dtype=complex)
    for j in range(1, n + 1):
        dj = g.derivative(j)
        for k in range(1, n + 1):
            v = dj.derivative(k, True).evaluate(pts)
            acc += ((1.0 if j == k else 0.0) - pts[:, j - 1] * np.conj(pts[:, k - 1])) * v
    return 4 * (1 - t) * acc


def mh_commutation_check(f, a: float, points: Sequence) -> float:
    """``max |invariant Laplacian of f o phi_a - (invariant Laplacian of f) o phi_a|``.

    Polynomials use exact rational differentiation of the composite; solid
    extensions use their analytic Hessian pulled back by the Jacobian of
    ``phi_a``.
    """
    _check_a(a)
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    w = phi_a(a, pts)
    if isinstance(f, ComplexPoly):
        lhs = _mh_rational(compose_rational(f, a), pts)
        rhs = invariant_laplacian(f).evaluate(w)
        return float(np.max(np.abs(lhs - rhs)))
    if isinstance(f, BigradedComponent):
        _, _, _, hess_w = solid_derivatives(f, w)
        tz = np.sum(np.abs(pts) ** 2, axis=1)
        tw = np.sum(np.abs(w) ** 2, axis=1)
        res = 0.0
        for i in range(pts.shape[0]):
            J = phi_a_jacobian(a, pts[i])
            H = J.T @ hess_w[i] @ np.conj(J)
            z = pts[i]
            lhs = 4 * (1 - tz[i]) * (np.trace(H) - z @ H @ np.conj(z))
            wi = w[i]
            rhs = 4 * (1 - tw[i]) * (np.trace(hess_w[i]) - wi @ hess_w[i] @ np.conj(wi))
            res = max(res, abs(lhs - rhs))
        return float(res)
    raise TypeError("expected a ComplexPoly or BigradedComponent")
