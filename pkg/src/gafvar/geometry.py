"""Geometry of the unit ball in C^n.

Points are complex numpy vectors along the last axis, so most functions
accept a single point of shape ``(n,)`` or a batch of shape ``(..., n)``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Params",
    "SpherePoint",
    "as_point",
    "hermitian_inner",
    "covariance_kernel",
    "moebius",
    "pseudo_hyperbolic_distance",
    "theta",
    "expected_invariant_volume",
    "expected_euclidean_volume",
    "sphere_param",
    "gamma_form_weights",
    "sphere_quadrature",
]


@dataclass(frozen=True)
class Params:
    """Problem instance: dimension ``n >= 2``, intensity ``L > 0``, radius ``0 < r < 1``."""

    n: int
    L: float
    r: float

    def __post_init__(self):
        n, L, r = self.n, self.L, self.r
        if isinstance(n, bool) or int(n) != n:
            raise DomainError(f"n must be an integer, got {n!r}")
        if n < 2:
            raise DomainError(f"n must be >= 2 (the variance formula involves (n-2)!), got {n}")
        if not (math.isfinite(L) and L > 0):
            raise DomainError(f"L must be a positive finite number, got {L!r}")
        if not (0.0 < r < 1.0):
            raise DomainError(f"r must lie in (0, 1), got {r!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "L", float(L))
        object.__setattr__(self, "r", float(r))

    def replace(self, **kw):
        d = {"n": self.n, "L": self.L, "r": self.r}
        d.update(kw)
        return Params(**d)


@dataclass(frozen=True)
class SpherePoint:
    """Coordinates (w, psi) on the unit sphere, with w in the unit ball of C^(n-1)."""

    base: np.ndarray
    psi: float

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.base, dtype=complex))
        if b.ndim != 1:
            raise DomainError("base must be a vector")
        if np.sum(np.abs(b) ** 2) >= 1.0:
            raise DomainError("base point must lie in the open unit ball")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "psi", float(self.psi))


def as_point(z):
    """Return ``z`` as a complex array (last axis = coordinates)."""
    return np.asarray(z, dtype=complex)


def _norm2(z):
    return np.sum(z.real**2 + z.imag**2, axis=-1)


def _check_ball(*pts):
    for z in pts:
        if np.any(_norm2(z) >= 1.0):
            raise DomainError("point outside the open unit ball")


def hermitian_inner(z, w):
    """sum_j z_j conj(w_j)."""
    z = as_point(z)
    w = as_point(w)
    if z.shape[-1] != w.shape[-1]:
        raise DomainError(f"length mismatch: {z.shape[-1]} vs {w.shape[-1]}")
    return np.sum(z * np.conj(w), axis=-1)


def covariance_kernel(z, w, L):
    """Kernel (1 - z.conj(w))^(-L) on the principal branch.

    Since |z.conj(w)| < 1 the base never meets the negative real axis.
    """
    z = as_point(z)
    w = as_point(w)
    _check_ball(z, w)
    return np.exp(-L * np.log(1.0 - hermitian_inner(z, w)))


def moebius(w, z):
    """Involutive automorphism exchanging ``w`` and the origin, applied to ``z``.

    phi_w(z) = (w - P_w z - s_w Q_w z) / (1 - z.conj(w)), where P_w projects
    onto the line C w, Q_w = I - P_w and s_w = sqrt(1 - |w|^2). For w = 0 the
    map is the identity.
    """
    w = as_point(w)
    z = as_point(z)
    _check_ball(w, z)
    ww = _norm2(w)
    if np.all(ww == 0.0):
        return np.array(z, copy=True)
    zw = hermitian_inner(z, w)
    with np.errstate(invalid="ignore", divide="ignore"):
        coef = np.where(ww > 0, zw / np.where(ww > 0, ww, 1.0), 0.0)
    pz = coef[..., None] * w
    qz = z - pz
    s = np.sqrt(1.0 - ww)[..., None]
    return (w - pz - s * qz) / (1.0 - zw)[..., None]


def theta(z, w):
    """(1-|z|^2)(1-|w|^2) / |1 - z.conj(w)|^2, a value in (0, 1]."""
    z = as_point(z)
    w = as_point(w)
    _check_ball(z, w)
    d = 1.0 - hermitian_inner(z, w)
    out = (1.0 - _norm2(z)) * (1.0 - _norm2(w)) / (d.real**2 + d.imag**2)
    return np.minimum(out, 1.0)


def pseudo_hyperbolic_distance(z, w):
    """|phi_w(z)|, the pseudo-hyperbolic distance."""
    return np.sqrt(_norm2(moebius(w, z)))


def expected_invariant_volume(p):
    """Mean invariant volume of the zero set in the ball of radius r: L r^2n / ((n-1)! (1-r^2)^n)."""
    r2 = p.r * p.r
    return p.L * r2**p.n / (math.factorial(p.n - 1) * (1.0 - r2) ** p.n)


def expected_euclidean_volume(p):
    """Mean Euclidean volume of the zero set in the ball of radius r: L r^2n / ((n-1)! (1-r^2))."""
    r2 = p.r * p.r
    return p.L * r2**p.n / (math.factorial(p.n - 1) * (1.0 - r2))


def sphere_param(sp, n):
    """Unit vector (w_1, ..., w_(n-1), sqrt(1-|w|^2) e^(i psi))."""
    b = sp.base
    if b.shape[0] != n - 1:
        raise DomainError(f"base point must have {n - 1} coordinates")
    last = math.sqrt(max(0.0, 1.0 - float(np.sum(np.abs(b) ** 2)))) * np.exp(1j * sp.psi)
    return np.concatenate([b, [last]])


def gamma_form_weights(sp, n):
    """Scalar weights of the boundary forms in (w, psi) coordinates.

    Returns (conj(w_1), ..., conj(w_(n-1)), sqrt(1-|w|^2) e^(-i psi)), i.e. the
    conjugate of :func:`sphere_param`. The integral over the sphere of
    sum_j g_j gamma_j equals the integral of sum_j g_j weight_j against
    dpsi/(2 pi) times Lebesgue measure on the (n-1)-ball divided by pi^(n-1).
    """
    return np.conj(sphere_param(sp, n))


def _gauss_legendre01(k):
    x, w = np.polynomial.legendre.leggauss(k)
    return 0.5 * (x + 1.0), 0.5 * w


def sphere_quadrature(n, n_radial=24, n_angular=16):
    """Deterministic product rule for the measure dpsi/(2 pi) dm(w)/pi^(n-1).

    The squared moduli t_k = |w_k|^2 range over the simplex sum t_k < 1 and are
    covered by collapsed (Duffy) Gauss-Legendre coordinates; the arguments of
    w_k and psi use the trapezoid rule. The weights sum to 1/(n-1)!.

    Parameters
    ----------
    n : int
        Ambient dimension (>= 2).
    n_radial : int
        Gauss-Legendre points per simplex coordinate.
    n_angular : int
        Trapezoid points per angle.

    Returns
    -------
    alpha : ndarray, shape (N, n)
        Points on the unit sphere.
    weights : ndarray, shape (N,)
    """
    d = n - 1
    u, wu = _gauss_legendre01(n_radial)
    ts, tw = [], []
    for combo in itertools.product(range(n_radial), repeat=d):
        uu = u[list(combo)]
        t = np.empty(d)
        left = 1.0
        jac = 1.0
        for k in range(d):
            t[k] = uu[k] * left
            jac *= wu[combo[k]] * (left if k else 1.0)
            left *= 1.0 - uu[k]
        ts.append(t)
        tw.append(jac)
    ts = np.array(ts)
    tw = np.array(tw)
    ang = 2.0 * np.pi * np.arange(n_angular) / n_angular
    alphas, weights = [], []
    for phis in itertools.product(range(n_angular), repeat=n):
        ph = ang[list(phis)]
        mods = np.sqrt(np.clip(np.column_stack([ts, 1.0 - ts.sum(axis=1)]), 0.0, None))
        alphas.append(mods * np.exp(1j * ph))
        weights.append(tw / n_angular**n)
    return np.concatenate(alphas), np.concatenate(weights)
