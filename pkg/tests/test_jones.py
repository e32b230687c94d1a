import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamcoherence.fresnel import fresnel_coefficients, interface, snell
from beamcoherence.jones import (
    PARAXIAL_LIMIT,
    JonesMatrix,
    ParaxialWarning,
    TransverseMomenta,
    jones,
    jones_array,
    jones_reflected,
    jones_transmitted,
    polarization_transfer,
)

ANGLES, FRES = interface(math.radians(60.0), 1.5)
small = st.floats(-0.2, 0.2)


def test_zero_momentum_is_diagonal_fresnel():
    r = jones_reflected(FRES, ANGLES, TransverseMomenta()).elements
    t = jones_transmitted(FRES, ANGLES, TransverseMomenta()).elements
    np.testing.assert_array_equal(r, np.diag([FRES.r_p, FRES.r_s]))
    np.testing.assert_array_equal(t, np.diag([FRES.t_p, FRES.t_s]))


def test_frozen_reflected_matrix():
    m = jones_reflected(FRES, ANGLES, TransverseMomenta(0.1, 0.05)).elements
    cot = 1 / math.sqrt(3)
    expected = [
        [-0.042449234640745129 - 0.07203874000955947, (-0.46265333752747389) * cot * 0.05],
        [0.46265333752747389 * cot * 0.05, -0.42020410288672876 - 0.059425834126723123],
    ]
    np.testing.assert_allclose(m, expected, rtol=1e-13)


def test_frozen_transmitted_matrix():
    m = jones_transmitted(FRES, ANGLES, TransverseMomenta(0.1, 0.05)).elements
    eta, cot = 1.6329931618554521, 1 / math.sqrt(3)
    tp, ts = 0.63836717690616991, 0.57979589711327124
    expected = [
        [tp + eta * -0.48025826673039646 * 0.1, (tp - eta * ts) * cot * 0.05],
        [(eta * tp - ts) * cot * 0.05, ts + eta * -0.59425834126723123 * 0.1],
    ]
    np.testing.assert_allclose(m, expected, rtol=1e-13)


@settings(max_examples=100, deadline=None)
@given(small, small, st.sampled_from(["reflected", "transmitted"]))
def test_first_order_linearity(kx, ky, kind):
    # entries are affine in (kx, ky): J(k) - J(0) scales linearly
    j0 = jones_array(kind, FRES, ANGLES, 0.0, 0.0)
    j1 = jones_array(kind, FRES, ANGLES, kx, ky)
    j2 = jones_array(kind, FRES, ANGLES, 2 * kx, 2 * ky)
    np.testing.assert_allclose(j2 - j0, 2 * (j1 - j0), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(small, small)
def test_reflected_off_diagonal_antisymmetry(kx, ky):
    m = jones_array("reflected", FRES, ANGLES, kx, ky)
    assert m[0, 1] == -m[1, 0]


@settings(max_examples=50, deadline=None)
@given(small, small)
def test_ky_parity(kx, ky):
    # diagonal even and off-diagonal odd under ky -> -ky
    for kind in ("reflected", "transmitted"):
        a = jones_array(kind, FRES, ANGLES, kx, ky)
        b = jones_array(kind, FRES, ANGLES, kx, -ky)
        np.testing.assert_allclose(np.diag(a), np.diag(b), atol=0)
        np.testing.assert_allclose(a[0, 1], -b[0, 1], atol=1e-17)


def test_vectorised_shape_and_consistency():
    kx = np.linspace(-0.1, 0.1, 7)[:, None]
    ky = np.linspace(-0.05, 0.05, 5)[None, :]
    m = jones_array("transmitted", FRES, ANGLES, kx, ky)
    assert m.shape == (7, 5, 2, 2)
    single = jones_array("transmitted", FRES, ANGLES, kx[3, 0], ky[0, 1])
    np.testing.assert_array_equal(m[3, 1], single)


def test_complex_arguments_continue_analytically():
    z = 0.03 - 0.02j
    m = jones_array("reflected", FRES, ANGLES, z, 0.0)
    assert m[0, 0] == pytest.approx(FRES.r_p + FRES.dr_p * z)


def test_dispatch_matches_direct_calls():
    k = TransverseMomenta(0.02, -0.01)
    np.testing.assert_array_equal(jones("reflected", FRES, ANGLES, k).elements, jones_reflected(FRES, ANGLES, k).elements)
    assert jones("transmitted", FRES, ANGLES, k).kind == "transmitted"
    with pytest.raises(ValueError):
        jones("absorbed", FRES, ANGLES, k)
    with pytest.raises(ValueError):
        jones_array("absorbed", FRES, ANGLES, 0.0, 0.0)


def test_requires_derivatives():
    bare = fresnel_coefficients(ANGLES)
    with pytest.raises(ValueError, match="derivatives"):
        jones_reflected(bare, ANGLES, TransverseMomenta())


def test_paraxial_warning_threshold():
    with pytest.warns(ParaxialWarning):
        TransverseMomenta(PARAXIAL_LIMIT * 1.01, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        TransverseMomenta(PARAXIAL_LIMIT, -PARAXIAL_LIMIT)


@settings(max_examples=100, deadline=None)
@given(small, small, st.sampled_from(["reflected", "transmitted"]))
def test_polarization_transfer_is_hermitian_psd(kx, ky, kind):
    j = JonesMatrix(jones_array(kind, FRES, ANGLES, kx, ky), kind)
    p = polarization_transfer(j)
    np.testing.assert_allclose(p, p.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(p).min() >= -1e-15


def test_normal_incidence_limit_of_transfer():
    a, f = interface(1e-6, 1.5)
    p = polarization_transfer(jones_reflected(f, a, TransverseMomenta()))
    np.testing.assert_allclose(p, 0.04 * np.eye(2), atol=1e-10)
    assert snell(1e-6, 1.5).eta == pytest.approx(1.0)
