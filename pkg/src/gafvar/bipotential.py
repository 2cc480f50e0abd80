"""Two-point potential rho_L = Li_2(theta^L) and its mixed Wirtinger derivative.

rho_L(z, w) is the covariance of log|f_hat|^2 at z and w, f_hat being the GAF
normalised by the square root of its variance. The mixed derivative
d^2 rho / dzbar_j dwbar_k has the closed form

    (L^2 / theta^2) * theta^L / (1 - theta^L) * dtheta/dzbar_j * dtheta/dwbar_k,

which rests on theta * d^2theta/dzbar_j dwbar_k = dtheta/dzbar_j * dtheta/dwbar_k.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import as_point, hermitian_inner, theta
from .specfun import dilog

__all__ = [
    "PointPair",
    "rho",
    "dtheta_dzbar",
    "dtheta_dwbar",
    "mixed_derivative",
    "mixed_derivative_matrix",
    "mixed_derivative_sphere",
    "wirtinger_fd",
    "mixed_wirtinger_fd",
]

DIAGONAL_GUARD = 1e-14


@dataclass(frozen=True)
class PointPair:
    """Two points of the open unit ball."""

    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        z = as_point(self.z)
        w = as_point(self.w)
        if z.shape != w.shape or z.ndim != 1:
            raise DomainError("z and w must be vectors of equal length")
        for v in (z, w):
            if np.sum(np.abs(v) ** 2) >= 1.0:
                raise DomainError("points must lie in the open unit ball")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)


def rho(pp, L):
    """Li_2(theta(z, w)^L)."""
    th = float(theta(pp.z, pp.w))
    return float(dilog(th**L))


def dtheta_dzbar(pp, j=None):
    """d theta / d zbar_j = (1-|w|^2)/|1-zbar.w|^2 * ((1-|z|^2) w_j / (1-zbar.w) - z_j).

    Returns the full gradient when ``j`` is None.
    """
    z, w = pp.z, pp.w
    zz = float(np.sum(np.abs(z) ** 2))
    ww = float(np.sum(np.abs(w) ** 2))
    d = 1.0 - complex(hermitian_inner(w, z))  # 1 - zbar . w
    g = (1.0 - ww) / abs(d) ** 2 * ((1.0 - zz) * w / d - z)
    return g if j is None else complex(g[j])


def dtheta_dwbar(pp, k=None):
    """d theta / d wbar_k, by the symmetry theta(z, w) = theta(w, z)."""
    return dtheta_dzbar(PointPair(pp.w, pp.z), k)


def _kernel_factor(th, L):
    lt = L * math.log(th)
    if lt > -DIAGONAL_GUARD:
        raise DomainError("mixed derivative is singular on the diagonal (theta^L -> 1)")
    return L * L / (th * th) * math.exp(lt) / (-math.expm1(lt))


def mixed_derivative_matrix(pp, L):
    """Matrix of d^2 rho_L / dzbar_j dwbar_k (shape n x n)."""
    th = float(theta(pp.z, pp.w))
    return _kernel_factor(th, L) * np.outer(dtheta_dzbar(pp), dtheta_dwbar(pp))


def mixed_derivative(pp, L, j, k):
    """d^2 rho_L / dzbar_j dwbar_k at a point pair off the diagonal."""
    th = float(theta(pp.z, pp.w))
    return complex(_kernel_factor(th, L) * dtheta_dzbar(pp, j) * dtheta_dwbar(pp, k))


def mixed_derivative_sphere(r, xi, eta, L):
    """Mixed derivative matrix at z = r xi, w = r eta with xi, eta unit vectors.

    Entry (j, k) is

        L^2 (1-r^2)^(2L-2) r^2 / (|1 - r^2 xibar.eta|^(2L) - (1-r^2)^(2L))
        * [(1-r^2) eta_j - xi_j (1 - r^2 xibar.eta)]
        * [(1-r^2) xi_k - eta_k (1 - r^2 xi.etabar)] / |1 - r^2 xibar.eta|^2.

    The r^2 in the second bracket is required for agreement with the
    general-point formula.
    """
    xi = as_point(xi)
    eta = as_point(eta)
    r2 = r * r
    q = 1.0 - r2
    d = 1.0 - r2 * complex(hermitian_inner(eta, xi))  # 1 - r^2 xibar.eta
    x = 2.0 * L * math.log(abs(d) / q)
    if x < DIAGONAL_GUARD:
        raise DomainError("mixed derivative is singular on the diagonal (theta^L -> 1)")
    # q^(2L) / (|d|^(2L) - q^(2L)) = 1 / expm1(x)
    pref = L * L * r2 / (q * q * math.expm1(x)) / abs(d) ** 2
    u = q * eta - xi * d
    v = q * xi - eta * np.conj(d)
    return pref * np.outer(u, v)


def wirtinger_fd(func, z, j, h=1e-4, conj=True):
    """Richardson-extrapolated central difference of d func / d zbar_j (or d/dz_j).

    d/dzbar = (d/dx + i d/dy)/2. Central differences with steps h and h/2
    are combined as (4 D(h/2) - D(h))/3.
    """
    z = as_point(z)
    e = np.zeros_like(z)
    e[j] = 1.0
    sgn = 1.0 if conj else -1.0

    def central(step):
        dx = (func(z + step * e) - func(z - step * e)) / (2 * step)
        dy = (func(z + 1j * step * e) - func(z - 1j * step * e)) / (2 * step)
        return 0.5 * (dx + sgn * 1j * dy)

    return (4.0 * central(h / 2) - central(h)) / 3.0


def mixed_wirtinger_fd(func, z, w, j, k, h=1e-4):
    """Finite-difference d^2 func(z, w) / dzbar_j dwbar_k.

    Uses the four-point real stencils in Re z_j, Im z_j, Re w_k, Im w_k at
    steps h and h/2, combined by Richardson extrapolation to fourth order.
    """
    z = as_point(z)
    w = as_point(w)
    ez = np.zeros_like(z)
    ez[j] = 1.0
    ew = np.zeros_like(w)
    ew[k] = 1.0

    def central(step):
        out = 0.0 + 0.0j
        # (d_x + i d_y)_z (d_u + i d_v)_w / 4
        for cz, dz in ((1.0, ez), (1j, 1j * ez)):
            for cw, dw in ((1.0, ew), (1j, 1j * ew)):
                val = (
                    func(z + step * dz, w + step * dw)
                    - func(z + step * dz, w - step * dw)
                    - func(z - step * dz, w + step * dw)
                    + func(z - step * dz, w - step * dw)
                ) / (4 * step * step)
                out += cz * cw * val
        return out / 4.0

    return (4.0 * central(h / 2) - central(h)) / 3.0
