"""Real special functions and Gamma-function identities.

Everything here works in double precision. Gamma ratios are formed in log
space so that arguments in the hundreds or thousands do not overflow.
"""

import math
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, PoleError

__all__ = [
    "log_gamma",
    "gamma_ratio",
    "hurwitz_zeta",
    "riemann_zeta",
    "zeta_tail",
    "dilog",
    "dilog_series",
    "binom_reciprocal_sum",
    "binom_alternating_sum",
    "cos_power_integral",
    "boundary_series_term",
    "boundary_series_term_expanded",
    "duplication_residual",
]

# B_2, B_4, ..., B_22
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
)


def log_gamma(x):
    """Natural log of the Gamma function for positive arguments.

    Parameters
    ----------
    x : float or array_like
        Positive argument(s).

    Returns
    -------
    float or ndarray
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    out = gammaln(xa)
    return float(out) if out.ndim == 0 else out


def gamma_ratio(a, b):
    """Gamma(a) / Gamma(b) evaluated as exp(lnGamma(a) - lnGamma(b))."""
    aa = np.asarray(a, dtype=float)
    ba = np.asarray(b, dtype=float)
    if np.any(~(aa > 0)) or np.any(~(ba > 0)):
        raise DomainError(f"gamma_ratio requires positive arguments, got {a!r}, {b!r}")
    out = np.exp(gammaln(aa) - gammaln(ba))
    return float(out) if out.ndim == 0 else out


def hurwitz_zeta(s, a, return_error=False):
    """Sum of (k + a)^(-s) over k >= 0 for real s > 1 and a > 0.

    Terms are added directly until the shifted argument reaches 20, then the
    remainder is closed with an Euler-Maclaurin expansion. For real s the
    remainder after the last Bernoulli term is bounded by the first omitted
    term, which is returned as the error bound.

    Parameters
    ----------
    s : float
        Exponent, s > 1.
    a : float
        Shift, a > 0.
    return_error : bool
        Also return the certified absolute error bound.
    """
    s = float(s)
    a = float(a)
    if not s > 1.0:
        raise DomainError(f"zeta requires s > 1, got {s}")
    if not a > 0.0:
        raise DomainError(f"Hurwitz shift must be positive, got {a}")
    x0 = 20.0
    n_direct = max(0, int(math.ceil(x0 - a)))
    head = 0.0
    if n_direct:
        k = np.arange(n_direct, dtype=float) + a
        # smallest terms first for accuracy
        head = float(np.sum((k ** -s)[::-1]))
    x = a + n_direct
    tail = x ** (1.0 - s) / (s - 1.0) + 0.5 * x ** (-s)
    rising = s  # s (s+1) ... (s + 2j - 2)
    fact = 2.0  # (2j)!
    xp = x ** (-s - 1.0)
    err = 0.0
    n_terms = len(_BERNOULLI_EVEN) - 1
    for j in range(1, n_terms + 2):
        term = _BERNOULLI_EVEN[j - 1] / fact * rising * xp
        if j <= n_terms:
            tail += term
        else:
            err = abs(term)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        xp /= x * x
    value = head + tail
    err += 4.0 * np.finfo(float).eps * abs(value)
    return (value, err) if return_error else value


def riemann_zeta(s):
    """Riemann zeta function for real s > 1.

    Examples
    --------
    >>> round(riemann_zeta(2.0), 12)
    1.644934066848
    """
    return hurwitz_zeta(s, 1.0)


def zeta_tail(s, K):
    """Sum of k^(-s) over integers k > K (K >= 0)."""
    return hurwitz_zeta(s, float(K) + 1.0)


def dilog_series(x, tol=1e-17):
    """Direct power series sum of x^m / m^2 for 0 <= x <= 1, stopping below tol.

    Slow near x = 1; used as an oracle and for x <= 1/2.
    """
    x = float(x)
    total = 0.0
    m = 1
    p = x
    while True:
        term = p / (m * m)
        total += term
        if term < tol or m > 10**6:
            break
        m += 1
        p *= x
    return total


_DILOG_TERMS = np.arange(1, 61, dtype=float)


def _dilog_half(x):
    # x in [0, 1/2]: 60 terms leave < 0.5^60/3600
    xa = np.asarray(x, dtype=float)
    pw = xa[..., None] ** _DILOG_TERMS
    return np.sum((pw / _DILOG_TERMS**2)[..., ::-1], axis=-1)


def dilog(x):
    """Dilogarithm Li_2(x) = sum x^m/m^2 on [0, 1].

    Direct series for x <= 1/2; above that the reflection
    Li_2(x) = pi^2/6 - ln(x) ln(1-x) - Li_2(1-x).

    Parameters
    ----------
    x : float or array_like
        Values in [0, 1].
    """
    xa = np.asarray(x, dtype=float)
    if np.any(~((xa >= 0.0) & (xa <= 1.0))):
        raise DomainError(f"dilog requires 0 <= x <= 1, got {x!r}")
    low = xa <= 0.5
    out = np.empty_like(xa)
    out[low] = _dilog_half(xa[low])
    hi = xa[~low]
    if hi.size:
        y = 1.0 - hi
        with np.errstate(divide="ignore", invalid="ignore"):
            refl = np.where(y > 0, np.log(hi) * np.log(np.where(y > 0, y, 1.0)), 0.0)
        out[~low] = math.pi**2 / 6.0 - refl - _dilog_half(y)
    return float(out) if out.ndim == 0 else out


def _check_poles(m, z):
    for j in range(m + 1):
        if z + j == 0.0:
            raise PoleError(f"z + {j} = 0 is a pole (z = {z})")


def binom_reciprocal_sum(m, z):
    """Closed form of sum_j C(m, j) (-1)^j / (z + j), j = 0..m.

    Evaluated by the product m! / (z (z+1) ... (z+m)), never by the
    alternating sum, which cancels badly for large m.
    """
    m = int(m)
    if m < 0:
        raise DomainError("m must be nonnegative")
    z = float(z)
    _check_poles(m, z)
    out = 1.0
    for j in range(m + 1):
        out *= (j if j else 1) / (z + j)
    return out


def binom_alternating_sum(m, z):
    """Literal alternating sum sum_j C(m, j) (-1)^j / (z + j) (oracle).

    Summed in exact rational arithmetic on the binary value of z, since the
    floating-point sum cancels badly once m and z grow.
    """
    m = int(m)
    z = float(z)
    _check_poles(m, z)
    zf = Fraction(z)
    return float(sum(Fraction(math.comb(m, j) * (-1) ** j) / (zf + j) for j in range(m + 1)))


def cos_power_integral(m):
    """Integral of cos^m over [0, pi/2], as (sqrt(pi)/2) Gamma((m+1)/2)/Gamma(m/2+1)."""
    m = float(m)
    if m < 0:
        raise DomainError("m must be nonnegative")
    return 0.5 * math.sqrt(math.pi) * gamma_ratio((m + 1.0) / 2.0, m / 2.0 + 1.0)


def _check_term_domain(M, n):
    if n < 2 or int(n) != n:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    if not M > n / 2.0:
        raise DomainError(f"need M > n/2, got M={M}, n={n}")


def boundary_series_term(M, n):
    """Closed form 2^-n Gamma(M-n/2) Gamma(M-(n-1)/2) / Gamma(M+1)^2 * (M + n(n-1)/2).

    This is the k-th term (with M = L k) of the series giving the r -> 1
    constant in the regime L > n/2. Requires M > n/2.
    """
    _check_term_domain(M, n)
    M = np.asarray(M, dtype=float)
    lg = gammaln(M - n / 2.0) + gammaln(M - (n - 1) / 2.0) - 2.0 * gammaln(M + 1.0)
    out = np.exp(lg - n * math.log(2.0)) * (M + n * (n - 1) / 2.0)
    return float(out) if out.ndim == 0 else out


def boundary_series_term_expanded(M, n):
    """Three-term Gamma-ratio combination that collapses to :func:`boundary_series_term`.

    G(M+1/2)/G(M+1) * G(2M-n+2)/G(2M+1) + G(M-1/2)/G(M) * G(2M-n)/G(2M-1)
    - 2 G(M+1/2)/G(M+1) * G(2M-n+1)/G(2M), with G the Gamma function.
    """
    _check_term_domain(M, n)
    M = float(M)
    a = gammaln(M + 0.5) - gammaln(M + 1.0)
    b = gammaln(M - 0.5) - gammaln(M)
    t1 = math.exp(a + gammaln(2 * M - n + 2) - gammaln(2 * M + 1))
    t2 = math.exp(b + gammaln(2 * M - n) - gammaln(2 * M - 1))
    t3 = 2.0 * math.exp(a + gammaln(2 * M - n + 1) - gammaln(2 * M))
    return t1 + t2 - t3


def duplication_residual(z):
    """Relative residual of Legendre's duplication formula at z > 0.

    |Gamma(2z) - 2^(2z-1) pi^(-1/2) Gamma(z) Gamma(z+1/2)| / Gamma(2z), computed
    in log space.
    """
    z = np.asarray(z, dtype=float)
    rhs = (2 * z - 1) * math.log(2.0) - 0.5 * math.log(math.pi) + gammaln(z) + gammaln(z + 0.5)
    out = np.abs(np.expm1(rhs - gammaln(2 * z)))
    return float(out) if out.ndim == 0 else out
