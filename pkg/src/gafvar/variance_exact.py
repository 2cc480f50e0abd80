"""Exact variance of the zero-set volume by two independent quadratures.

Route ``disk`` integrates a positive function over the unit disk. Route
``polar`` integrates the same quantity after a change to coordinates
(s, theta), which flattens the peak of the disk integrand near w = 1 for large
L or r close to 1. The two share no code beyond one-dimensional QUADPACK
calls, so their agreement is a real check.
"""

import math

import numpy as np

from .errors import DomainError
from .geometry import Params
from .quadrature import QuadResult, adaptive_quad, integrate_disk

__all__ = [
    "QuadResult",
    "integrand_disk",
    "var_E_disk",
    "epsilon_r",
    "alpha_angle",
    "alpha_max",
    "polar_inner",
    "var_E_polar",
    "choose_route",
    "var_E",
    "var_I",
]

ROUTES = ("disk", "polar")


def integrand_disk(w, p):
    """(1-|w|^2)^(n-2) / (|1-r^2 w|^(2L) - (1-r^2)^(2L)) * |1-w|^2 / |1-r^2 w|^2.

    The difference of powers is formed as (1-r^2)^(2L) expm1(2L ln(|1-r^2 w|/(1-r^2)))
    so that neither term underflows for large L.

    Raises
    ------
    DomainError
        At w = 1 (the integrable boundary singularity) or outside the disk.
    """
    w = complex(w)
    aw = abs(w)
    if aw >= 1.0 and w != 1.0:
        raise DomainError(f"w = {w} lies outside the unit disk")
    if w == 1.0:
        raise DomainError("the integrand is singular at w = 1")
    q = 1.0 - p.r * p.r
    a = abs(1.0 - p.r * p.r * w)
    x = 2.0 * p.L * math.log(a / q)
    base = (1.0 - aw * aw) ** (p.n - 2)
    return base * abs(1.0 - w) ** 2 / (a * a) / (q ** (2.0 * p.L) * math.expm1(x))


def _disk_scaled(p):
    # integrand_disk times (1-r^2)^(2L-2), evaluated without forming q^(2L)
    q = 1.0 - p.r * p.r
    r2 = p.r * p.r
    n, L = p.n, p.L

    def f(w):
        one_m = 1.0 - w
        a = abs(1.0 - r2 * w)
        x = 2.0 * L * math.log(a / q)
        t = 1.0 - abs(w) ** 2
        if t < 0.0:
            t = 0.0
        return t ** (n - 2) * (one_m.real**2 + one_m.imag**2) / (a * a) / (q * q * math.expm1(x))

    return f


def _disk_prefactor(p):
    return p.r ** (4 * p.n) * p.L**2 / (math.factorial(p.n - 1) * math.factorial(p.n - 2))


def var_E_disk(p, tol=1e-10):
    """Variance of the Euclidean volume via the disk integral.

    Var E = r^(4n) L^2 (1-r^2)^(2L-2) / ((n-1)!(n-2)!) * int_D integrand_disk dm/pi.

    Parameters
    ----------
    p : Params
    tol : float
        Relative accuracy target.

    Returns
    -------
    QuadResult
    """
    res = integrate_disk(_disk_scaled(p), tol=tol)
    return res.scaled(_disk_prefactor(p))


def epsilon_r(r):
    """(1-r^2)/(1+r^2), the lower end of the s range."""
    return (1.0 - r * r) / (1.0 + r * r)


def _alpha_cos(s, r):
    return 0.5 * ((1.0 + r * r) * s + (1.0 - r * r) / s)


def alpha_angle(s, p, slack=1e-14):
    """Upper theta limit arccos(((1+r^2)s + (1-r^2)/s)/2) for s in [eps(r), 1].

    Arguments that overshoot 1 by at most ``slack`` are clamped.
    """
    r = p.r if isinstance(p, Params) else float(p)
    c = _alpha_cos(s, r)
    if c > 1.0 + slack or c < -1.0:
        raise DomainError(f"s = {s} outside [eps(r), 1] (cos alpha = {c})")
    return math.acos(min(c, 1.0))


def alpha_max(r):
    """Maximum of the theta limit, reached at s = sqrt(eps(r)): arccos sqrt(1-r^4)."""
    return math.acos(math.sqrt(1.0 - r**4))


_GL_CACHE = {}


def _gl(k):
    if k not in _GL_CACHE:
        _GL_CACHE[k] = np.polynomial.legendre.leggauss(k)
    return _GL_CACHE[k]


def polar_inner(s, p):
    """int_0^alpha (2cos t - 2cos alpha)^(n-2) (s + 1/s - 2 cos t) dt.

    The integrand is a polynomial in cos t of degree n-1, so a fixed
    Gauss-Legendre rule is exact to rounding.
    """
    c = _alpha_cos(s, p.r)
    if c >= 1.0:
        return 0.0
    al = math.acos(c)
    x, wt = _gl(32 + 4 * p.n)
    t = 0.5 * al * (x + 1.0)
    ct = np.cos(t)
    vals = (2.0 * ct - 2.0 * c) ** (p.n - 2) * (s + 1.0 / s - 2.0 * ct)
    return 0.5 * al * float(np.dot(wt, vals))


def _polar_outer_integrand(p):
    n, L = p.n, p.L

    def g(s):
        ls = math.log(s)
        return math.exp((2.0 * L - n) * ls) / (-math.expm1(2.0 * L * ls)) * polar_inner(s, p)

    return g


def _polar_K(p, tol):
    eps = epsilon_r(p.r)
    g = _polar_outer_integrand(p)
    s1 = eps + min(eps, 0.25 * (1.0 - eps))
    s2 = 1.0 - 0.25 * (1.0 - eps)
    # lower end: alpha ~ sqrt(s - eps), removed by s = eps + v^2
    lo = adaptive_quad(lambda v: 2.0 * v * g(eps + v * v), 0.0, math.sqrt(s1 - eps), tol)
    # middle: logarithmic variable covers the long range when eps is small
    mid = adaptive_quad(lambda t: math.exp(t) * g(math.exp(t)), math.log(s1), math.log(s2), tol)
    # upper end: s = 1 - u^2 removes the half power; breakpoints at the 1/sqrt(L) scale
    umax = math.sqrt(1.0 - s2)
    scale = 1.0 / math.sqrt(2.0 * p.L)
    pts = [c * scale for c in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)]
    hi = adaptive_quad(lambda u: 2.0 * u * g(1.0 - u * u), 0.0, umax, tol, points=pts)
    return lo + mid + hi


def var_E_polar(p, tol=1e-10):
    """Variance of the Euclidean volume via the (s, theta) representation.

    Var E = 2 L^2 (1-r^2)^(n-2) / (pi (n-1)! (n-2)!) * K(L, r), where K is the
    integral over s in (eps(r), 1) of s^(2L-n)/(1-s^(2L)) times
    :func:`polar_inner`.
    """
    K = _polar_K(p, tol)
    q = 1.0 - p.r * p.r
    pref = 2.0 * p.L**2 * q ** (p.n - 2) / (math.pi * math.factorial(p.n - 1) * math.factorial(p.n - 2))
    return K.scaled(pref)


def choose_route(p):
    """Disk route for L <= 20 and r < 0.9, polar route otherwise."""
    return "disk" if (p.L <= 20.0 and p.r < 0.9) else "polar"


def var_E(p, tol=1e-10, route="auto"):
    """Var E by the requested route (``disk``, ``polar`` or ``auto``)."""
    if route == "auto":
        route = choose_route(p)
    if route == "disk":
        return var_E_disk(p, tol)
    if route == "polar":
        return var_E_polar(p, tol)
    raise DomainError(f"unknown route {route!r}")


def var_I(p, tol=1e-10, route="auto"):
    """Variance of the invariant volume, Var E / (1-r^2)^(2n-2)."""
    res = var_E(p, tol, route)
    return res.scaled((1.0 - p.r * p.r) ** (-(2 * p.n - 2)))
