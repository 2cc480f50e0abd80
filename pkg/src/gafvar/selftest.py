"""Identity suites run by ``gafvar selftest``.

Each check returns a :class:`CheckResult`. A check listed in ``perturb``
scales one of its constants by 1 + 1e-3, which must make it fail; this is how
the suite demonstrates that it can detect a broken identity.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import bipotential as bp
from . import geometry as geo
from . import specfun as sf
from .variance_exact import var_E_disk, var_E_polar

__all__ = ["CheckResult", "CHECKS", "run_selftest"]

PERTURBATION = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str = ""


def _rng():
    return np.random.default_rng(20261014)


def _rand_ball(rng, n, rmax=0.9):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v) * rmax * rng.uniform() ** (1.0 / (2 * n))


def check_binomial(quick, k):
    rng = _rng()
    worst = 0.0
    zs = np.concatenate([rng.uniform(0.05, 30.0, 15 if quick else 80), -rng.uniform(0.05, 12.0, 5 if quick else 20)])
    zs = zs[np.abs(zs - np.round(zs)) > 1e-3]
    for m in range(13):
        for z in zs:
            a = sf.binom_reciprocal_sum(m, z) * k
            b = sf.binom_alternating_sum(m, z)
            worst = max(worst, abs(a - b) / abs(b))
    return worst, 1e-11, "closed form vs alternating sum, m <= 12"


def check_cos_power(quick, k):
    worst = 0.0
    for m in range(2, 31):
        a = sf.cos_power_integral(m) * k
        b = (m - 1) / m * sf.cos_power_integral(m - 2)
        worst = max(worst, abs(a - b) / b)
    v = integrate.quad(lambda t: math.cos(t) ** 5, 0, math.pi / 2, epsabs=0, epsrel=1e-13)[0]
    worst = max(worst, abs(sf.cos_power_integral(5) - v) / v)
    return worst, 1e-12, "I_m = (m-1)/m I_(m-2), 2 <= m <= 30, and quadrature at m = 5"


def check_duplication(quick, k):
    rng = _rng()
    z = rng.uniform(0.1, 20.0, 200)
    lhs = sf.log_gamma(2 * z)
    rhs = (2 * z - 1) * math.log(2.0) - 0.5 * math.log(math.pi) + sf.log_gamma(z) + sf.log_gamma(z + 0.5)
    worst = float(np.max(np.abs(np.expm1(rhs + math.log(k) - lhs))))
    return worst, 1e-11, "Legendre duplication at 200 points of (0.1, 20)"


def check_boundary_term(quick, k):
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 7))
        M = n / 2.0 + 0.1 + rng.uniform(0.0, 15.0)
        a = sf.boundary_series_term(M, n) * k
        b = sf.boundary_series_term_expanded(M, n)
        worst = max(worst, abs(a - b) / abs(a))
    return worst, 1e-11, "three-term Gamma combination vs closed form, 50 random (M, n)"


def check_dilog(quick, k):
    worst = 0.0
    for x in np.linspace(0.4, 0.6, 21):
        a = sf.dilog_series(x) * k
        b = math.pi**2 / 6 - math.log(x) * math.log(1 - x) - sf.dilog_series(1 - x)
        worst = max(worst, abs(a - b))
    worst = max(worst, abs(sf.dilog(1.0) - math.pi**2 / 6))
    return worst, 1e-12, "series vs reflection on [0.4, 0.6]"


def check_zeta(quick, k):
    worst = max(
        abs(sf.riemann_zeta(2.0) * k - math.pi**2 / 6),
        abs(sf.riemann_zeta(4.0) - math.pi**4 / 90),
    )
    return worst, 1e-12, "zeta(2), zeta(4)"


def check_bipotential_fd(quick, k):
    rng = _rng()
    worst = 0.0
    L = 2.5
    for t in range(5 if quick else 25):
        n = 2 + t % 2
        z = _rand_ball(rng, n, 0.8)
        w = _rand_ball(rng, n, 0.8)
        pp = bp.PointPair(z, w)
        M = bp.mixed_derivative_matrix(pp, L) * k
        f = lambda a, b: float(sf.dilog(float(geo.theta(a, b)) ** L))  # noqa: E731
        j, kk = int(rng.integers(n)), int(rng.integers(n))
        fd = bp.mixed_wirtinger_fd(f, z, w, j, kk)
        worst = max(worst, abs(fd - M[j, kk]) / np.abs(M).max())
    return worst, 1e-5, "closed-form mixed derivative vs Richardson finite differences"


def check_bipotential_sphere(quick, k):
    rng = _rng()
    worst = 0.0
    for t in range(20):
        n = 2 + t % 3
        xi = _rand_ball(rng, n)
        xi /= np.linalg.norm(xi)
        eta = _rand_ball(rng, n)
        eta /= np.linalg.norm(eta)
        r = rng.uniform(0.1, 0.95)
        L = rng.uniform(0.3, 5.0)
        S = bp.mixed_derivative_sphere(r, xi, eta, L) * k
        G = bp.mixed_derivative_matrix(bp.PointPair(r * xi, r * eta), L)
        worst = max(worst, float(np.abs(S - G).max() / np.abs(G).max()))
    return worst, 1e-12, "sphere form vs general-point form"


def check_sphere_measure(quick, k):
    worst = 0.0
    r = 0.7
    for n in (2, 3):
        alpha, wts = geo.sphere_quadrature(n, 8, 6)
        val = r ** (2 * n - 1) * np.sum(wts * np.sum(alpha * np.conj(alpha), axis=1)).real * k
        ref = r ** (2 * n - 1) / math.factorial(n - 1)
        worst = max(worst, abs(val - ref) / ref)
    return worst, 1e-8, "boundary-form integral of sum eta_k gamma_k equals r^(2n-1)/(n-1)!"


def check_moebius(quick, k):
    rng = _rng()
    worst = 0.0
    for t in range(40 if quick else 200):
        n = 2 + t % 2
        w = _rand_ball(rng, n)
        z = _rand_ball(rng, n)
        back = geo.moebius(w, geo.moebius(w, z) * k)
        worst = max(worst, float(np.abs(back - z).max()))
    return worst, 1e-12, "phi_w(phi_w(z)) = z"


def check_distance_theta(quick, k):
    rng = _rng()
    worst = 0.0
    for t in range(40 if quick else 200):
        n = 2 + t % 2
        z = _rand_ball(rng, n)
        w = _rand_ball(rng, n)
        d = float(geo.pseudo_hyperbolic_distance(z, w))
        worst = max(worst, abs(1 - d * d * k - float(geo.theta(z, w))))
    return worst, 1e-12, "1 - rho(z,w)^2 = theta(z,w)"


def check_kernel_psd(quick, k):
    rng = _rng()
    worst = 0.0
    for n in (2, 3):
        for L in (0.5, 2.0):
            pts = [_rand_ball(rng, n) for _ in range(5)]
            G = np.array([[complex(geo.covariance_kernel(a, b, L)) for b in pts] for a in pts])
            G[0, 1] *= k
            herm = float(np.abs(G - G.conj().T).max())
            ev = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
            worst = max(worst, herm, max(0.0, -float(ev.min())))
    return worst, 1e-10, "Hermitian Gram matrices with nonnegative spectrum"


def check_quadrature_routes(quick, k):
    p = geo.Params(2, 2.0, 0.5)
    a = var_E_disk(p, 1e-10).value * k
    b = var_E_polar(p, 1e-10).value
    return abs(a - b) / b, 1e-8, "disk route vs (s, theta) route at n=2, L=2, r=0.5"


CHECKS = {
    "binomial-reciprocal-sum": check_binomial,
    "cos-power-recurrence": check_cos_power,
    "legendre-duplication": check_duplication,
    "boundary-series-term": check_boundary_term,
    "dilog-reflection": check_dilog,
    "zeta-values": check_zeta,
    "bipotential-finite-difference": check_bipotential_fd,
    "bipotential-sphere-form": check_bipotential_sphere,
    "sphere-measure": check_sphere_measure,
    "moebius-involution": check_moebius,
    "distance-theta": check_distance_theta,
    "kernel-positive-definite": check_kernel_psd,
    "quadrature-routes": check_quadrature_routes,
}


def run_selftest(quick=False, perturb=()):
    """Run every check; ``perturb`` names checks whose constant is scaled by 1 + 1e-3."""
    perturb = set(perturb)
    unknown = perturb - set(CHECKS)
    if unknown:
        raise KeyError(f"unknown checks {sorted(unknown)}")
    out = []
    for name, fn in CHECKS.items():
        k = 1.0 + PERTURBATION if name in perturb else 1.0
        try:
            worst, tol, detail = fn(quick, k)
            ok = bool(worst <= tol)
        except Exception as exc:  # a crash is a failure of that identity
            worst, tol, detail, ok = float("nan"), 0.0, f"raised {exc!r}", False
        out.append(CheckResult(name, ok, float(worst), tol, detail))
    return out
