import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from gafvar import asymptotics as asy
from gafvar.errors import DomainError
from gafvar.geometry import Params
from gafvar.specfun import riemann_zeta
from gafvar.variance_exact import var_I

C_SUPER_2_2 = 0.42944297173216


def test_classify_regime_examples():
    r = asy.classify_regime(Params(2, 0.5, 0.5))
    assert (r.tag, r.exponent, r.has_log_factor) == ("subcritical", 3.0, False)
    r = asy.classify_regime(Params(2, 1.0, 0.5))
    assert (r.tag, r.exponent, r.has_log_factor) == ("critical", 2.0, True)
    r = asy.classify_regime(Params(3, 2.0, 0.5))
    assert (r.tag, r.exponent, r.has_log_factor) == ("supercritical", 3.0, False)


def test_subcritical_and_critical_constants():
    assert asy.subcritical_constant(2, 0.5) == pytest.approx(1 / math.pi, rel=1e-14)
    assert asy.critical_constant(2) == pytest.approx(1.0, rel=1e-15)
    assert asy.critical_constant(4) == pytest.approx(2 / 3, rel=1e-15)
    with pytest.raises(DomainError):
        asy.subcritical_constant(2, 1.0)


def direct_series(n, L, K):
    """Oracle: plain partial sum of the series plus an integral-test tail estimate."""
    k = np.arange(1, K + 1, dtype=float)
    M = L * k
    t = np.exp(gammaln(M - n / 2) + gammaln(M - (n - 1) / 2) - 2 * gammaln(M + 1)) * (M + n * (n - 1) / 2)
    s = np.sum(t[::-1])
    # terms ~ (Lk)^-(n+1/2) / 2^n ... tail approximated from the last term's decay
    tail = t[-1] * K / (n - 0.5)
    return L * L / (4 * math.sqrt(math.pi) * math.factorial(n - 1)) * (s + tail)


@pytest.mark.parametrize("n,L", [(2, 2.0), (2, 1.3), (3, 2.5), (4, 6.0)])
def test_supercritical_constant_matches_direct_sum(n, L):
    assert asy.supercritical_constant(n, L) == pytest.approx(direct_series(n, L, 200000), rel=1e-8)


def test_supercritical_frozen_value():
    assert asy.supercritical_constant(2, 2.0) == pytest.approx(C_SUPER_2_2, rel=1e-12)


def test_supercritical_domain():
    with pytest.raises(DomainError):
        asy.supercritical_constant(2, 1.0)


@given(st.integers(2, 5), st.floats(0.05, 10.0))
@settings(max_examples=30, deadline=None)
def test_supercritical_tail_bound_certified(n, excess):
    L = n / 2 + excess
    a = asy.supercritical_series(n, L, tol=1e-9)
    b = asy.supercritical_series(n, L, tol=1e-13)
    assert b.n_terms >= a.n_terms
    assert abs(a.value - b.value) <= a.err_bound + b.err_bound
    assert a.err_bound <= 1e-9 * max(1.0, abs(a.value))


def test_supercritical_terms_positive_decreasing():
    n, L = 3, 2.0
    k = np.arange(1, 400, dtype=float)
    M = L * k
    M = M[M > n]
    t = np.exp(gammaln(M - n / 2) + gammaln(M - (n - 1) / 2) - 2 * gammaln(M + 1)) * (M + n * (n - 1) / 2)
    assert np.all(t > 0) and np.all(np.diff(t) < 0)


def test_var_I_near_boundary_assembly():
    r = 0.99
    q = 1 - r * r
    p = Params(2, 2.0, r)
    assert asy.var_I_near_boundary(p) == pytest.approx(asy.supercritical_constant(2, 2.0) / q**2, rel=1e-12)
    p = Params(2, 1.0, r)
    assert asy.var_I_near_boundary(p) == pytest.approx(math.log(1 / q) / q**2, rel=1e-12)
    p = Params(2, 0.4, r)
    assert asy.var_I_near_boundary(p) == pytest.approx(asy.subcritical_constant(2, 0.4) / q**3.2, rel=1e-12)


def test_var_I_large_L_formula():
    n, L, r = 3, 10.0, 0.4
    expected = riemann_zeta(3.5) / (4 * math.sqrt(math.pi) * 2) * r**5 / (1 - r * r) ** 3 * L ** -1.5
    assert asy.var_I_large_L(Params(n, L, r)) == pytest.approx(expected, rel=1e-13)


def test_large_L_ratio_approaches_one():
    ratios = [var_I(Params(2, L, 0.5), 1e-10, "polar").value / asy.var_I_large_L(Params(2, L, 0.5))
              for L in (50, 100, 200, 400)]
    assert ratios == pytest.approx([1.0841, 1.0422, 1.0212, 1.0106], abs=1e-4)
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))


def test_interchange_ratio_approaches_one():
    vals = [abs(asy.interchange_ratio(2, L) - 1) for L in (10, 50, 200, 1000)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[2] < 0.02


def test_regime_continuity_across_critical_L():
    lo = var_I(Params(2, 0.999, 0.99), 1e-10, "polar").value
    hi = var_I(Params(2, 1.001, 0.99), 1e-10, "polar").value
    assert abs(hi - lo) / lo < 0.05


def test_self_averaging_ratio_decreasing():
    vals = [asy.self_averaging_ratio(Params(2, L, 0.5)) for L in (5, 10, 20, 40)]
    assert all(v > 0 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_self_averaging_rate():
    scaled = [asy.self_averaging_ratio(Params(2, L, 0.5), route="polar") * L**2.5 for L in (50, 100, 200, 400)]
    assert 0.5 < min(scaled) and max(scaled) / min(scaled) < 1.2
