"""Leading-order laws for the variance as L grows or as r approaches 1.

The r -> 1 behaviour changes at L = n/2: below it the invariant variance
grows like (1-r^2)^(-2(n-L)), at it like (1-r^2)^(-n) log(1/(1-r^2)), and
above it like (1-r^2)^(-n).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .geometry import expected_invariant_volume
from .specfun import log_gamma, riemann_zeta, zeta_tail
from .variance_exact import var_I

__all__ = [
    "Regime",
    "classify_regime",
    "var_I_large_L",
    "subcritical_constant",
    "critical_constant",
    "SeriesResult",
    "supercritical_series",
    "supercritical_constant",
    "boundary_constant",
    "var_I_near_boundary",
    "self_averaging_ratio",
    "interchange_ratio",
]

CRITICAL_SLACK = 1e-12


@dataclass(frozen=True)
class Regime:
    """Growth regime as r -> 1: tag, exponent of 1/(1-r^2) and presence of a log factor."""

    tag: str
    exponent: float
    has_log_factor: bool


def classify_regime(p):
    """Regime of ``p`` (r is not used); critical means |L - n/2| <= 1e-12."""
    half = p.n / 2.0
    if abs(p.L - half) <= CRITICAL_SLACK:
        return Regime("critical", float(p.n), True)
    if p.L < half:
        return Regime("subcritical", 2.0 * (p.n - p.L), False)
    return Regime("supercritical", float(p.n), False)


def var_I_large_L(p):
    """Leading term as L -> infinity at fixed r.

    zeta(n+1/2) / (4 sqrt(pi) (n-1)!) * r^(2n-1) / (1-r^2)^n * L^(-(n-3/2)).
    """
    n, L, r = p.n, p.L, p.r
    c = riemann_zeta(n + 0.5) / (4.0 * math.sqrt(math.pi) * math.factorial(n - 1))
    return c * r ** (2 * n - 1) / (1.0 - r * r) ** n * L ** (-(n - 1.5))


def subcritical_constant(n, L):
    """Constant for L < n/2.

    (L^2/sqrt(pi)) 2^(n-1) / (4^L (n-1)!) Gamma(n/2-L) Gamma((n+1)/2-L) / Gamma(n-L)^2.
    """
    if not 0.0 < L < n / 2.0:
        raise DomainError(f"subcritical constant needs 0 < L < n/2, got L={L}, n={n}")
    lg = (
        log_gamma(n / 2.0 - L)
        + log_gamma((n + 1) / 2.0 - L)
        - 2.0 * log_gamma(n - L)
        + (n - 1) * math.log(2.0)
        - L * math.log(4.0)
        - math.lgamma(n)
    )
    return L * L / math.sqrt(math.pi) * math.exp(lg)


def critical_constant(n):
    """Constant for L = n/2: (n/2)^2 / ((n-1)! Gamma(n/2)^2)."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return (n / 2.0) ** 2 / (math.factorial(n - 1) * math.gamma(n / 2.0) ** 2)


@dataclass(frozen=True)
class SeriesResult:
    """Series value with a certified absolute error bound and the number of summed terms."""

    value: float
    err_bound: float
    n_terms: int


def _super_log_terms(n, L, k):
    M = L * k
    return (
        gammaln(M - n / 2.0)
        + gammaln(M - (n - 1) / 2.0)
        - 2.0 * gammaln(M + 1.0)
        + np.log(M + n * (n - 1) / 2.0)
    )


def _excess(n, M):
    # term(M) * M^(n+1/2); decreases to 1 for M beyond a few n
    return np.exp(_super_log_terms(n, 1.0, np.asarray(M, dtype=float)) + (n + 0.5) * np.log(M))


def supercritical_series(n, L, tol=1e-12, max_terms=10**7):
    """Constant for L > n/2 as a series with a certified tail.

    C = L^2 / (4 sqrt(pi) (n-1)!) * sum_{k>=1} t(Lk), where
    t(M) = Gamma(M-n/2) Gamma(M-(n-1)/2) / Gamma(M+1)^2 * (M + n(n-1)/2).

    With g(M) = t(M) M^(n+1/2), g decreases to 1 once M exceeds a small
    multiple of n, so the tail past K lies between L^(-(n+1/2)) Z and
    g(L(K+1)) L^(-(n+1/2)) Z with Z = sum_{k>K} k^(-(n+1/2)). The midpoint is
    used and the half-width is reported as the error bound.

    Parameters
    ----------
    n : int
    L : float
        Must exceed n/2.
    tol : float
        Absolute error target on the constant.
    """
    if not L > n / 2.0:
        raise DomainError(f"supercritical constant needs L > n/2, got L={L}, n={n}")
    pref = L * L / (4.0 * math.sqrt(math.pi) * math.factorial(n - 1))
    s = n + 0.5
    # g must already be decreasing and >= 1 where the bracket starts
    m0 = 4.0 * n + 4.0
    K = max(16, int(math.ceil(m0 / L)))
    while True:
        k = np.arange(1, K + 1, dtype=float)
        head = float(np.sum(np.exp(_super_log_terms(n, L, k))[::-1]))
        g_hi = float(_excess(n, L * (K + 1)))
        Z = zeta_tail(s, K)
        base = L**-s * Z
        lo, hi = base, g_hi * base
        value = pref * (head + 0.5 * (lo + hi))
        err = pref * (0.5 * (hi - lo) + 1e-15 * head)
        if err <= tol or K >= max_terms:
            return SeriesResult(value, err, K)
        K = min(max_terms, K * 4)


def supercritical_constant(n, L, tol=1e-12):
    """Value of :func:`supercritical_series`."""
    return supercritical_series(n, L, tol).value


def boundary_constant(n, L, tol=1e-12):
    """Constant in front of the r -> 1 growth law for the regime of (n, L)."""
    half = n / 2.0
    if abs(L - half) <= CRITICAL_SLACK:
        return critical_constant(n)
    if L < half:
        return subcritical_constant(n, L)
    return supercritical_constant(n, L, tol)


def var_I_near_boundary(p, tol=1e-12):
    """Leading-order prediction of Var I as r -> 1 for the regime of ``p``."""
    reg = classify_regime(p)
    q = 1.0 - p.r * p.r
    v = boundary_constant(p.n, p.L, tol) * q ** (-reg.exponent)
    if reg.has_log_factor:
        v *= math.log(1.0 / q)
    return v


def self_averaging_ratio(p, tol=1e-10, route="auto"):
    """Var I / (E I)^2."""
    return var_I(p, tol, route).value / expected_invariant_volume(p) ** 2


def interchange_ratio(n, L, tol=1e-12):
    """C(L,n) L^(n-3/2) 4 sqrt(pi) Gamma(n) / zeta(n+1/2); tends to 1 as L grows."""
    c = supercritical_constant(n, L, tol)
    return c * L ** (n - 1.5) * 4.0 * math.sqrt(math.pi) * math.gamma(n) / riemann_zeta(n + 0.5)
