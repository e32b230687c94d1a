import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamcoherence.fresnel import (
    DomainError,
    brewster_angle,
    fresnel_coefficients,
    fresnel_derivatives,
    interface,
    snell,
)

mp.mp.dps = 40

# 40-digit evaluations at theta = 60 deg, n = 1.5
FROZEN_60 = dict(
    r_p=-0.042449234640745129,
    r_s=-0.42020410288672876,
    t_p=0.63836717690616991,
    t_s=0.57979589711327124,
    dr_p=-0.7203874000955947,
    dr_s=-0.59425834126723123,
    dt_p=-0.48025826673039646,
    dt_s=-0.59425834126723123,
)

angles_deg = st.floats(0.5, 89.5)
indices = st.floats(1.0, 4.0)


def mp_coefficients(theta, n):
    theta, n = mp.mpf(theta), mp.mpf(n)
    c = mp.cos(theta)
    ct = mp.sqrt(1 - (mp.sin(theta) / n) ** 2)
    return dict(
        r_p=(n * c - ct) / (n * c + ct),
        r_s=(c - n * ct) / (c + n * ct),
        t_p=2 * c / (n * c + ct),
        t_s=2 * c / (c + n * ct),
    )


def test_frozen_values_at_60_degrees():
    f = fresnel_derivatives(snell(math.radians(60.0), 1.5))
    for name, ref in FROZEN_60.items():
        assert getattr(f, name) == pytest.approx(ref, rel=1e-13), name


def test_refraction_angle_and_obliquity():
    a = snell(math.radians(60.0), 1.5)
    assert math.degrees(a.theta_t) == pytest.approx(35.264389682754654, rel=1e-14)
    assert a.eta == pytest.approx(1.6329931618554521, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(angles_deg, indices)
def test_coefficients_match_high_precision(deg, n):
    theta = math.radians(deg)
    f = fresnel_coefficients(snell(theta, n))
    ref = mp_coefficients(theta, n)
    # differences of O(1) terms divided by ~cos(theta): absolute error ~ eps / cos(theta)
    floor = 8 * 2.2e-16 / math.cos(theta)
    for name, v in ref.items():
        assert getattr(f, name) == pytest.approx(float(v), rel=1e-12, abs=floor), name


@settings(max_examples=100, deadline=None)
@given(angles_deg, st.floats(1.01, 4.0))
def test_derivatives_match_high_precision(deg, n):
    theta = math.radians(deg)
    f = fresnel_derivatives(snell(theta, n))
    for name in ("r_p", "r_s", "t_p", "t_s"):
        exact = mp.diff(lambda t: mp_coefficients(t, n)[name], mp.mpf(theta))
        assert getattr(f, "d" + name) == pytest.approx(float(exact), rel=1e-10, abs=1e-13), name


@settings(max_examples=200, deadline=None)
@given(angles_deg, indices)
def test_energy_conservation(deg, n):
    a = snell(math.radians(deg), n)
    f = fresnel_coefficients(a)
    ratio = n * math.cos(a.theta_t) / math.cos(a.theta)
    assert f.r_s**2 + ratio * f.t_s**2 == pytest.approx(1.0, abs=1e-12)
    assert f.r_p**2 + ratio * f.t_p**2 == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(angles_deg, indices)
def test_boundary_continuity_identities(deg, n):
    f = fresnel_derivatives(snell(math.radians(deg), n))
    assert f.t_s - f.r_s == pytest.approx(1.0, abs=1e-13)
    assert 1.0 + f.r_p == pytest.approx(n * f.t_p, abs=1e-13)
    # derivative of t_s - r_s = 1; both vanish as n -> 1, leaving rounding noise
    assert f.dr_s == pytest.approx(f.dt_s, rel=1e-12, abs=1e-13)


def test_brewster_zero_and_sign_change():
    tb = brewster_angle(1.5)
    assert math.degrees(tb) == pytest.approx(56.309932474020215, rel=1e-14)
    assert abs(fresnel_coefficients(snell(tb, 1.5)).r_p) < 1e-12
    assert fresnel_coefficients(snell(tb - 1e-3, 1.5)).r_p > 0
    assert fresnel_coefficients(snell(tb + 1e-3, 1.5)).r_p < 0
    # r_p decreases through its zero
    assert fresnel_derivatives(snell(tb, 1.5)).dr_p < 0


def test_normal_incidence_limit():
    f = fresnel_coefficients(snell(1e-8, 1.5))
    assert f.r_s == pytest.approx(-0.2, abs=1e-12)
    assert f.r_p == pytest.approx(0.2, abs=1e-12)
    assert f.t_s == pytest.approx(0.8, abs=1e-12)


def test_index_matched_interface_is_transparent():
    f = fresnel_derivatives(snell(0.7, 1.0))
    assert (f.r_p, f.r_s) == (0.0, 0.0)
    assert f.t_p == pytest.approx(1.0) and f.t_s == pytest.approx(1.0)


def test_coefficients_without_derivatives():
    f = fresnel_coefficients(snell(0.5))
    assert not f.has_derivatives
    assert math.isnan(f.dr_p)
    assert fresnel_derivatives(snell(0.5)).has_derivatives


def test_interface_shorthand():
    a, f = interface(math.radians(30.0), 1.7)
    assert a == snell(math.radians(30.0), 1.7)
    assert f == fresnel_derivatives(a)


@pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 2, 2.0, math.nan])
def test_angle_outside_open_interval(theta):
    with pytest.raises(DomainError):
        snell(theta, 1.5)


@pytest.mark.parametrize("n", [0.9, 0.0, -1.5, math.nan, math.inf])
def test_invalid_index(n):
    with pytest.raises(DomainError):
        snell(0.5, n)
    if not math.isinf(n):
        with pytest.raises(DomainError):
            brewster_angle(n)


def test_domain_error_is_value_error():
    assert issubclass(DomainError, ValueError)
