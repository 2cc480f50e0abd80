import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gafvar import variance_exact as ve
from gafvar.errors import DomainError
from gafvar.geometry import Params

# Independent high-accuracy values computed with both routes (they agree to ~1e-15)
FROZEN_VAR_E = {
    (2, 2.0, 0.5): 0.015679830874499572,
    (2, 0.8, 0.5): 0.009229849052283082,
    (2, 50.0, 0.5): 0.003626131313260682,
    (2, 400.0, 0.5): 0.0011951051245973996,
}


def test_integrand_disk_examples():
    p = Params(2, 1.0, math.sqrt(0.5))
    assert ve.integrand_disk(0.0, p) == pytest.approx(4 / 3, rel=1e-14)
    for x in (-0.1, -0.5, -0.99):
        assert ve.integrand_disk(x, p) > 0


def test_integrand_disk_domain():
    p = Params(2, 1.0, 0.5)
    with pytest.raises(DomainError):
        ve.integrand_disk(1.0, p)
    with pytest.raises(DomainError):
        ve.integrand_disk(1.5j, p)


def test_alpha_angle_examples():
    p = Params(2, 1.0, 0.6)
    eps = ve.epsilon_r(p.r)
    assert ve.alpha_angle(1.0, p) == pytest.approx(0.0, abs=1e-7)
    assert ve.alpha_angle(eps, p) == pytest.approx(0.0, abs=1e-7)
    assert ve.alpha_angle(math.sqrt(eps), p) == pytest.approx(math.acos(math.sqrt(1 - p.r**4)), rel=1e-12)
    assert ve.alpha_max(p.r) == pytest.approx(ve.alpha_angle(math.sqrt(eps), p), rel=1e-12)
    with pytest.raises(DomainError):
        ve.alpha_angle(eps / 2, p)


@given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
@settings(max_examples=60, deadline=None)
def test_alpha_angle_peaks_at_sqrt_eps(r, t):
    p = Params(2, 1.0, r)
    eps = ve.epsilon_r(r)
    s = eps + t * (1 - eps)
    assert ve.alpha_angle(s, p) <= ve.alpha_max(r) + 1e-12


def test_polar_inner_vanishes_at_endpoints():
    p = Params(2, 2.0, 0.5)
    assert ve.polar_inner(1.0, p) == 0.0
    assert ve.polar_inner(ve.epsilon_r(p.r), p) == 0.0


@pytest.mark.parametrize("key", sorted(FROZEN_VAR_E))
def test_frozen_values(key):
    n, L, r = key
    p = Params(n, L, r)
    v = ve.var_E_polar(p, 1e-12).value
    assert v == pytest.approx(FROZEN_VAR_E[key], rel=1e-10)
    if L <= 20:
        assert ve.var_E_disk(p, 1e-12).value == pytest.approx(FROZEN_VAR_E[key], rel=1e-10)


@pytest.mark.parametrize("n,L,r", [(2, 2.0, 0.5), (3, 1.0, 0.7), (2, 0.5, 0.3), (3, 5.0, 0.9)])
def test_routes_agree(n, L, r):
    p = Params(n, L, r)
    a = ve.var_E_disk(p, 1e-10)
    b = ve.var_E_polar(p, 1e-10)
    assert abs(a.value - b.value) <= max(1e-8 * abs(b.value), a.abs_err_est + b.abs_err_est)


@given(st.sampled_from([2, 3]), st.floats(0.3, 6.0), st.floats(0.2, 0.85))
@settings(max_examples=15, deadline=None)
def test_routes_agree_random(n, L, r):
    p = Params(n, L, r)
    a = ve.var_E_disk(p, 1e-10).value
    b = ve.var_E_polar(p, 1e-10).value
    assert a > 0 and b > 0
    assert a == pytest.approx(b, rel=1e-8)


def test_var_I_relation_and_positivity():
    p = Params(3, 2.0, 0.6)
    e = ve.var_E(p).value
    i = ve.var_I(p).value
    assert i > 0
    assert i == pytest.approx(e / (1 - 0.36) ** 4, rel=1e-14)


@pytest.mark.parametrize("n,L", [(2, 0.5), (2, 2.0), (3, 1.0)])
def test_var_I_increases_in_r(n, L):
    rs = np.linspace(0.3, 0.99, 10)
    vals = [ve.var_I(Params(n, L, r), 1e-9).value for r in rs]
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("route", ["disk", "polar"])
@pytest.mark.parametrize("n,L,r", [(2, 0.5, 0.3), (2, 2.0, 0.7), (3, 5.0, 0.9), (3, 1.0, 0.5)])
def test_error_estimate_is_honest(route, n, L, r):
    p = Params(n, L, r)
    for tol in (1e-6, 1e-8):
        a = ve.var_E(p, tol, route)
        b = ve.var_E(p, tol / 2, route)
        assert abs(a.value - b.value) <= a.abs_err_est


def test_choose_route():
    assert ve.choose_route(Params(2, 2.0, 0.5)) == "disk"
    assert ve.choose_route(Params(2, 50.0, 0.5)) == "polar"
    assert ve.choose_route(Params(2, 2.0, 0.95)) == "polar"
    with pytest.raises(DomainError):
        ve.var_E(Params(2, 2.0, 0.5), route="bogus")


def test_near_boundary_values():
    # polar route close to the boundary, frozen from the quadrature at tol 1e-12
    p = Params(2, 1.0, 0.99)
    assert ve.var_E_polar(p, 1e-10).value == pytest.approx(2.6399828957333, rel=1e-9)
