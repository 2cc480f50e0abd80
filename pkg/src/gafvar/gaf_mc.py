"""Monte Carlo simulation of the hyperbolic GAF and its zero-set volume fluctuation.

The fluctuation of the Euclidean volume E(r) about its mean equals a boundary
integral over the sphere of radius r of (i/2pi) dbar log|f_hat|^2 ^ beta_(n-1).
In the (w, psi) sphere coordinates this becomes the average of
r^(2n-1) sum_j u_j(r alpha) conj(alpha_j) against a measure of mass
1/(n-1)!, with u_j = conj(d_j f / f) - L z_j / (1-|z|^2).

Two estimators of that sphere integral are provided.

``pointwise``
    Quasi-random nodes alpha on the sphere, the integrand evaluated literally.
``fiber`` (default)
    The measure is unitarily invariant, so the integral may be taken first
    over each circle {e^(i psi) alpha}. On that circle
    sum_j alpha_j d_j f(r alpha) equals lambda g'(lambda)/g(lambda) with
    g(lambda) = f(lambda alpha), whose circle average is the number of zeros
    of g in |lambda| < r. Each circle is then integrated exactly by counting
    zeros from the winding of g, and the fluctuation becomes
    (r^(2n-2) mean N(alpha) - L r^(2n)/(1-r^2)) / (n-1)!.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, ndtri
from scipy.stats import qmc

from .errors import DegenerateSampleError, DomainError
from .geometry import expected_euclidean_volume

__all__ = [
    "MultiIndex",
    "GafSample",
    "FluctuationResult",
    "VarianceEstimate",
    "enumerate_multiindices",
    "multiindex_array",
    "coeff_sd",
    "kernel_series_term",
    "truncation_degree",
    "truncated_kernel",
    "sample_stream",
    "node_stream",
    "sample_gaf",
    "eval_gaf",
    "eval_gaf_grad",
    "sphere_nodes",
    "schur_cohn_count",
    "winding_numbers",
    "fluctuation_estimate",
    "variance_mc",
    "bootstrap_var_stderr",
]

ZERO_FLOOR = 1e-290
MAX_RESAMPLE_FRACTION = 1e-3
BOOT_KEY = 0xB0075


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index alpha in N^n."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(a) for a in self.parts)
        if any(a < 0 for a in parts):
            raise DomainError("multi-index entries must be nonnegative")
        object.__setattr__(self, "parts", parts)

    @property
    def degree(self):
        return sum(self.parts)


@lru_cache(maxsize=64)
def _multiindex_tuple(n, M):
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, slots - 1)

    for m in range(M + 1):
        rec((), m, n)
    return tuple(out)


def enumerate_multiindices(n, M):
    """All alpha in N^n with |alpha| <= M in graded order.

    Degrees increase; within a degree, indices are in decreasing
    lexicographic order, e.g. (1,0) before (0,1). There are C(M+n, n) of them.
    """
    if n < 1 or M < 0:
        raise DomainError("need n >= 1 and M >= 0")
    return [MultiIndex(a) for a in _multiindex_tuple(int(n), int(M))]


def multiindex_array(n, M):
    """Array version of :func:`enumerate_multiindices`, shape (C(M+n,n), n)."""
    if n < 1 or M < 0:
        raise DomainError("need n >= 1 and M >= 0")
    return np.array(_multiindex_tuple(int(n), int(M)), dtype=np.int64).reshape(-1, n)


def coeff_sd(alpha, L):
    """sqrt(Gamma(L+|alpha|) / (alpha! Gamma(L))), in log space.

    ``alpha`` may be a MultiIndex, a tuple, or an integer array of shape (..., n).
    """
    if isinstance(alpha, MultiIndex):
        alpha = alpha.parts
    a = np.asarray(alpha, dtype=float)
    deg = a.sum(axis=-1)
    lg = gammaln(L + deg) - gammaln(L) - gammaln(a + 1.0).sum(axis=-1)
    out = np.exp(0.5 * lg)
    return float(out) if out.ndim == 0 else out


def kernel_series_term(L, m, x):
    """Gamma(L+m) / (m! Gamma(L)) x^m for x >= 0."""
    if x == 0.0:
        return 1.0 if m == 0 else 0.0
    return math.exp(gammaln(L + m) - gammaln(L) - gammaln(m + 1.0) + m * math.log(x))


def truncation_degree(p, tol=1e-6, M_max=100000):
    """Smallest M whose diagonal kernel tail past M is at most tol (1-r^2)^(-L).

    The tail sum_{m>M} Gamma(L+m)/(m!Gamma(L)) r^(2m) is bounded by
    term(M+1)/(1-q) with q = r^2 max(1, (L+M+1)/(M+2)), which dominates
    every later term ratio r^2 (L+m)/(m+1), m >= M+1, for all L > 0.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    x = p.r * p.r
    K = (1.0 - x) ** (-p.L)
    for M in range(M_max + 1):
        q = x * max(1.0, (p.L + M + 1.0) / (M + 2.0))
        if q >= 1.0:
            continue
        if kernel_series_term(p.L, M + 1, x) / (1.0 - q) <= tol * K:
            return M
    raise DomainError("truncation degree exceeds M_max")


def truncated_kernel(L, M, zw):
    """sum_{m<=M} Gamma(L+m)/(m!Gamma(L)) zw^m for complex zw."""
    m = np.arange(M + 1)
    c = np.exp(gammaln(L + m) - gammaln(L) - gammaln(m + 1.0))
    return np.polynomial.polynomial.polyval(zw, c)


@dataclass(frozen=True)
class GafSample:
    """One draw of the truncated GAF: coefficients (already scaled by coeff_sd) in graded order."""

    n: int
    L: float
    M: int
    coeffs: np.ndarray

    @property
    def indices(self):
        return multiindex_array(self.n, self.M)

    def coeff(self, alpha):
        """Coefficient of the monomial z^alpha (zero if |alpha| > M)."""
        if isinstance(alpha, MultiIndex):
            alpha = alpha.parts
        alpha = tuple(int(a) for a in alpha)
        if sum(alpha) > self.M:
            return 0.0j
        table = _multiindex_tuple(self.n, self.M)
        return complex(self.coeffs[table.index(alpha)])

    def as_dict(self):
        return {MultiIndex(a): complex(c) for a, c in zip(_multiindex_tuple(self.n, self.M), self.coeffs)}


def sample_stream(seed, i):
    """Random generator for the coefficients of sample i."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i, 0)))


def node_stream(seed, i):
    """Random generator for the node scramble of sample i."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i, 1)))


def sample_gaf(p, M, rng):
    """Draw a truncated GAF.

    a_alpha = (g1 + i g2)/sqrt(2) with independent standard normals, so
    E|a_alpha|^2 = 1; the coefficient of z^alpha is a_alpha coeff_sd(alpha, L).
    """
    idx = multiindex_array(p.n, M)
    g = rng.standard_normal((idx.shape[0], 2))
    a = (g[:, 0] + 1j * g[:, 1]) / math.sqrt(2.0)
    return GafSample(p.n, p.L, int(M), a * coeff_sd(idx, p.L))


def _powers(z, M):
    # z (..., n) -> (..., n, M+1)
    return z[..., :, None] ** np.arange(M + 1)


def _monomials(z, idx, M):
    pw = _powers(z, M)
    n = idx.shape[1]
    mon = pw[..., 0, idx[:, 0]]
    for j in range(1, n):
        mon = mon * pw[..., j, idx[:, j]]
    return mon


def eval_gaf(s, z):
    """Truncated series value at z, shape (..., n) -> (...)."""
    z = np.asarray(z, dtype=complex)
    return _monomials(z, s.indices, s.M) @ s.coeffs


def eval_gaf_grad(s, z):
    """Holomorphic gradient (d_1 f, ..., d_n f) at z, shape (..., n) -> (..., n)."""
    z = np.asarray(z, dtype=complex)
    idx = s.indices
    pw = _powers(z, s.M)
    n = idx.shape[1]
    out = []
    for j in range(n):
        term = np.ones(z.shape[:-1] + (idx.shape[0],), dtype=complex)
        for k in range(n):
            if k == j:
                e = np.maximum(idx[:, k] - 1, 0)
                term = term * pw[..., k, e] * idx[:, k]
            else:
                term = term * pw[..., k, idx[:, k]]
        out.append(term @ s.coeffs)
    return np.stack(out, axis=-1)


def sphere_nodes(n, count, rng):
    """Scrambled Sobol points mapped to the unit sphere of C^n.

    Each point of [0,1)^(2n) is sent through the inverse normal CDF and then
    normalised, which gives the uniform law on the sphere. For that law the
    first n-1 coordinates are uniform on the (n-1)-ball and the argument of the
    last one is uniform, which is the (w, psi) sampling measure.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        u = qmc.Sobol(d=2 * n, scramble=True, seed=rng).random(count)
    u = np.clip(u, 1e-16, 1.0 - 1e-16)
    g = ndtri(u)
    a = g[:, :n] + 1j * g[:, n:]
    return a / np.linalg.norm(a, axis=1)[:, None]


def _coordinate_powers(alpha, M):
    # list over j of contiguous (B, M+1) arrays alpha_j^0..alpha_j^M
    out = []
    for j in range(alpha.shape[1]):
        pw = np.empty((alpha.shape[0], M + 1), dtype=complex)
        pw[:, 0] = 1.0
        if M:
            pw[:, 1:] = alpha[:, j : j + 1]
            np.cumprod(pw[:, 1:], axis=1, out=pw[:, 1:])
        out.append(pw)
    return out


def _line_coefficients(s, alpha, r):
    # coefficients of lambda -> f(lambda r alpha): c_m(alpha) r^m, shape (B, M+1)
    idx = s.indices
    deg = idx.sum(axis=1)
    pws = _coordinate_powers(alpha, s.M)
    mon = np.take(pws[0], idx[:, 0], axis=1)
    for j in range(1, idx.shape[1]):
        mon *= np.take(pws[j], idx[:, j], axis=1)
    # degree grouping as a (K, M+1) matrix with one nonzero per row
    D = np.zeros((idx.shape[0], s.M + 1), dtype=complex)
    D[np.arange(idx.shape[0]), deg] = s.coeffs * r**deg
    return mon @ D


def schur_cohn_count(c, cond_floor=1e-12):
    """Number of zeros in the open unit disk, by the Schur-Cohn recursion.

    For p(z) = sum a_j z^j of formal degree d, with reciprocal
    p*(z) = sum conj(a_(d-j)) z^j, the transform
    Tp = conj(a_0) p - a_d p* has formal degree d-1 and
    Tp(0) = |a_0|^2 - |a_d|^2. With delta_k = T^k p(0), the zero count in
    the disk is the number of negative partial products delta_1 ... delta_k.
    Rows are rescaled after each step, which leaves the signs unchanged.

    Parameters
    ----------
    c : ndarray, shape (B, d+1)
        Coefficients in ascending order.
    cond_floor : float
        Rows with some |delta_k| below cond_floor (|a_0|^2 + |a_d|^2) are
        settled by root finding instead.

    Returns
    -------
    count : ndarray of int
    n_roots : int
        Rows that needed root finding.
    """
    p = np.array(c, dtype=complex)
    B = p.shape[0]
    sign = np.ones(B)
    count = np.zeros(B, dtype=np.int64)
    cond = np.full(B, np.inf)
    while p.shape[1] > 1:
        a0 = p[:, :1]
        ad = p[:, -1:]
        t = np.conj(a0) * p - ad * np.conj(p[:, ::-1])
        delta = t[:, 0].real
        scale = np.abs(a0[:, 0]) ** 2 + np.abs(ad[:, 0]) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            cond = np.minimum(cond, np.abs(delta) / scale)
        sign *= np.sign(delta)
        count += sign < 0
        t = t[:, :-1]
        mx = np.abs(t).max(axis=1, keepdims=True)
        p = t / np.where(mx > 0, mx, 1.0)
    weak = np.flatnonzero(~(cond >= cond_floor))
    for i in weak:
        roots = np.roots(np.asarray(c[i])[::-1])
        count[i] = int(np.sum(np.abs(roots) < 1.0))
    return count, int(weak.size)


def winding_numbers(cm, P=None, thr=math.pi / 2):
    """Zeros inside the unit circle of the polynomials with coefficient rows ``cm``.

    Each polynomial g is sampled on P equispaced points of the circle (one
    inverse FFT). The discrete contour integral sum_k log(g_(k+1)/g_k), taken
    on the principal branch, has imaginary part 2 pi times the winding number
    once every phase increment is below ``thr`` in size, which makes the branch
    choice unambiguous; its real part (increments of log|g|) telescopes to
    zero. Rows with a larger increment, meaning a zero close to the circle,
    are counted by :func:`schur_cohn_count`.

    Returns
    -------
    N : ndarray
        Zero counts (float, integer valued).
    log_mod_change : ndarray
        Real part of the discrete contour integral (zero up to rounding).
    n_unresolved : int
        Rows counted by the Schur-Cohn recursion.
    n_roots : int
        Rows that needed root finding.
    small : ndarray of bool
        Rows with a sample value below the degeneracy floor.
    """
    B, m1 = cm.shape
    if P is None:
        P = max(32, 1 << int(math.ceil(math.log2(m1))))
    c = np.zeros((B, P), dtype=complex)
    c[:, :m1] = cm
    fv = np.empty((B, P + 1), dtype=complex)
    fv[:, :P] = np.fft.ifft(c, axis=1)  # counter-clockwise samples of g / P
    fv[:, P] = fv[:, 0]
    mod = np.abs(fv)
    small = mod.min(axis=1) * P < ZERO_FLOOR
    darg = np.angle(fv[:, 1:] * np.conj(fv[:, :-1]))
    N = np.rint(darg.sum(axis=1) / (2.0 * math.pi))
    with np.errstate(divide="ignore", invalid="ignore"):
        lm = np.log(mod)
    dlog = (lm[:, 1:] - lm[:, :-1]).sum(axis=1)
    todo = np.flatnonzero((np.abs(darg).max(axis=1) >= thr) & ~small)
    n_roots = 0
    if todo.size:
        cnt, n_roots = schur_cohn_count(cm[todo])
        N[todo] = cnt
    return N, dlog, int(todo.size), n_roots, small


@dataclass(frozen=True)
class FluctuationResult:
    """Per-sample fluctuation of the Euclidean volume with diagnostics."""

    value: float
    imag: float
    n_resampled: int
    n_fallback: int = 0
    n_roots: int = 0


def _fiber_estimate(s, p, nodes, rng):
    n, r = p.n, p.r
    alpha = sphere_nodes(n, nodes, rng)
    cm = _line_coefficients(s, alpha, r)
    N, dlog, nfb, nroot, small = winding_numbers(cm)
    n_res = 0
    while np.any(small):
        k = int(small.sum())
        n_res += k
        if n_res > MAX_RESAMPLE_FRACTION * nodes:
            raise DegenerateSampleError(f"{n_res} of {nodes} nodes hit |f| < {ZERO_FLOOR}")
        fresh = sphere_nodes(n, k, rng)
        N2, d2, nfb2, nroot2, small2 = winding_numbers(_line_coefficients(s, fresh, r))
        pos = np.flatnonzero(small)
        N[pos], dlog[pos] = N2, d2
        nfb += nfb2
        nroot += nroot2
        small[pos] = small2
    fact = math.factorial(n - 1)
    mean_E = expected_euclidean_volume(p)
    value = r ** (2 * n - 2) * float(np.mean(N)) / fact - mean_E
    imag = r ** (2 * n - 2) * float(np.mean(dlog)) / (2.0 * math.pi) / fact
    return FluctuationResult(value, imag, n_res, nfb, nroot)


def _pointwise_values(s, p, alpha):
    z = p.r * alpha
    return eval_gaf(s, z), eval_gaf_grad(s, z)


def _pointwise_estimate(s, p, nodes, rng):
    n, r, L = p.n, p.r, p.L
    alpha = sphere_nodes(n, nodes, rng)
    f, grad = _pointwise_values(s, p, alpha)
    n_res = 0
    bad = np.abs(f) < ZERO_FLOOR
    while np.any(bad):
        k = int(bad.sum())
        n_res += k
        if n_res > MAX_RESAMPLE_FRACTION * nodes:
            raise DegenerateSampleError(f"{n_res} of {nodes} nodes hit |f| < {ZERO_FLOOR}")
        fresh = sphere_nodes(n, k, rng)
        pos = np.flatnonzero(bad)
        alpha[pos] = fresh
        f[pos], grad[pos] = _pointwise_values(s, p, fresh)
        bad = np.abs(f) < ZERO_FLOOR
    z = r * alpha
    u = np.conj(grad / f[:, None]) - L * z / (1.0 - r * r)
    weights = np.conj(alpha)  # boundary-form weights in (w, psi) coordinates
    integrand = r ** (2 * n - 1) * np.sum(u * weights, axis=1)
    est = np.mean(integrand) / math.factorial(n - 1)
    return FluctuationResult(float(est.real), float(est.imag), n_res)


def fluctuation_estimate(s, p, nodes, rng, method="fiber"):
    """Estimate E(r) - E[E(r)] for one GAF sample.

    Parameters
    ----------
    s : GafSample
    p : Params
    nodes : int
        Number of sphere nodes (>= 64).
    rng : numpy.random.Generator
        Stream used for the node scramble and any resampling.
    method : {"fiber", "pointwise"}

    Returns
    -------
    FluctuationResult
    """
    if nodes < 64:
        raise DomainError("need at least 64 nodes")
    if method == "fiber":
        return _fiber_estimate(s, p, nodes, rng)
    if method == "pointwise":
        return _pointwise_estimate(s, p, nodes, rng)
    raise DomainError(f"unknown method {method!r}")


def bootstrap_var_stderr(x, n_boot, rng):
    """Standard deviation of the sample variance over bootstrap resamples."""
    x = np.asarray(x, dtype=float)
    reps = np.empty(n_boot)
    for b in range(n_boot):
        reps[b] = np.var(x[rng.integers(0, x.size, x.size)], ddof=1)
    return float(np.std(reps, ddof=1))


@dataclass(frozen=True)
class VarianceEstimate:
    """Monte Carlo variance of the zero-set volume.

    ``var``/``stderr`` refer to the Euclidean volume; ``var_I``/``stderr_I``
    to the invariant volume.
    """

    var: float
    stderr: float
    n_samples: int
    mean_fluct: float
    mean_stderr: float
    imag_residual_max: float
    var_I: float
    stderr_I: float
    M: int
    nodes: int
    method: str
    n_aborted: int
    n_resampled: int
    n_fallback: int
    n_roots: int
    fluctuations: np.ndarray = field(repr=False, compare=False, default=None)


def _one_sample(p, M, nodes, seed, method, i):
    s = sample_gaf(p, M, sample_stream(seed, i))
    try:
        return fluctuation_estimate(s, p, nodes, node_stream(seed, i), method)
    except DegenerateSampleError:
        return None


def variance_mc(
    p,
    M=None,
    n_samples=2000,
    nodes=2**14,
    seed=0,
    trunc_tol=1e-6,
    method="fiber",
    threads=1,
    n_boot=1000,
):
    """Monte Carlo estimate of Var E and Var I.

    Sample i draws its coefficients from ``SeedSequence(seed, spawn_key=(i, 0))``
    and its nodes from ``spawn_key=(i, 1)``, so results do not depend on the
    number of threads. The standard error of the variance is the bootstrap
    standard deviation over ``n_boot`` resamples.

    Parameters
    ----------
    p : Params
    M : int, optional
        Truncation degree; by default from :func:`truncation_degree` at ``trunc_tol``.
    n_samples : int
        Number of GAF samples (>= 100).
    nodes : int
        Sphere nodes per sample.
    seed : int
    method : {"fiber", "pointwise"}
    threads : int
        Worker threads.
    n_boot : int
        Bootstrap resamples.

    Returns
    -------
    VarianceEstimate
    """
    if n_samples < 100:
        raise DomainError("need at least 100 samples")
    if M is None:
        M = truncation_degree(p, trunc_tol)

    def work(i):
        return _one_sample(p, M, nodes, seed, method, i)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, range(n_samples)))
    else:
        results = [work(i) for i in range(n_samples)]
    good = [res for res in results if res is not None]
    n_abort = len(results) - len(good)
    if len(good) < 2:
        raise DegenerateSampleError("too few valid samples")
    x = np.array([res.value for res in good])
    imag = max(abs(res.imag) / (1.0 + abs(res.value)) for res in good)
    brng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(BOOT_KEY,)))
    var = float(np.var(x, ddof=1))
    se = bootstrap_var_stderr(x, n_boot, brng)
    scale = (1.0 - p.r * p.r) ** (-(2 * p.n - 2))
    return VarianceEstimate(
        var=var,
        stderr=se,
        n_samples=len(good),
        mean_fluct=float(np.mean(x)),
        mean_stderr=float(np.std(x, ddof=1) / math.sqrt(x.size)),
        imag_residual_max=float(imag),
        var_I=var * scale,
        stderr_I=se * scale,
        M=int(M),
        nodes=int(nodes),
        method=method,
        n_aborted=n_abort,
        n_resampled=sum(res.n_resampled for res in good),
        n_fallback=sum(res.n_fallback for res in good),
        n_roots=sum(res.n_roots for res in good),
        fluctuations=x,
    )
