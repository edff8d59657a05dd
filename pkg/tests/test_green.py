import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from dressedvdw.errors import DomainError
from dressedvdw.green import near_field_green, scaled_green, vacuum_green
from dressedvdw.quantities import C

Z = np.array([0.0, 0.0, 1e-9])


def test_near_field_example_values():
    g = near_field_green(Z, 1e15)
    # 2 c^2 / (4 pi xi^2 r^3) with xi^2 r^3 = 1e3
    zz = 2.0 * 8.987551787368176e16 / (4.0 * math.pi * 1e3)
    assert g[2, 2] == pytest.approx(zz, rel=1e-12)
    assert g[2, 2] == pytest.approx(1.4304e13, rel=1e-4)
    assert g[0, 0] == pytest.approx(-zz / 2, rel=1e-12)
    assert g[1, 1] == pytest.approx(-zz / 2, rel=1e-12)
    assert np.count_nonzero(g - np.diag(np.diag(g))) == 0


def test_vacuum_green_example_close_to_near_field():
    g = vacuum_green(Z, 1e15)
    assert g[2, 2] == pytest.approx(1.4304e13, rel=1e-4)
    assert g[0, 0] == pytest.approx(-7.152e12, rel=1e-4)


@pytest.mark.parametrize("x", [1e-6, 1e-5, 1e-4, 1e-3])
def test_near_field_agreement_first_order(x):
    r = 5e-9
    xi = x * C / r
    g, g0 = vacuum_green([0, 0, r], xi), near_field_green([0, 0, r], xi)
    mask = g0 != 0
    rel = np.abs((g - g0)[mask] / g0[mask])
    # leading correction is x^2/2 or smaller
    assert np.max(rel) <= x


def test_trace_vanishes_near_field():
    g = near_field_green([1e-9, 2e-9, -0.5e-9], 1e14)
    assert abs(np.trace(g)) < 1e-12 * np.max(np.abs(g))


def test_trace_identity():
    rhat = np.array([1.0, 2.0, 2.0]) / 3.0
    m = np.eye(3) - 3 * np.outer(rhat, rhat)
    assert np.trace(m @ m) == pytest.approx(6.0, rel=1e-14)


vectors = st.lists(st.floats(-1e-6, 1e-6, allow_nan=False), min_size=3, max_size=3).filter(
    lambda v: np.linalg.norm(v) > 1e-11)
xis = st.floats(1e12, 1e18)


@given(vectors, xis)
def test_symmetry_and_parity(v, xi):
    g = vacuum_green(v, xi)
    assert np.array_equal(g, g.T)
    assert np.allclose(g, vacuum_green(-np.asarray(v), xi), rtol=1e-13, atol=0)


@given(vectors, xis)
def test_eigenstructure(v, xi):
    g = vacuum_green(v, xi)
    rhat = np.asarray(v) / np.linalg.norm(v)
    lam = np.linalg.eigvalsh(g)
    longitudinal = rhat @ g @ rhat
    # longitudinal eigenvector along rhat; transverse pair degenerate
    assert np.allclose(g @ rhat, longitudinal * rhat, rtol=1e-10, atol=1e-10 * np.max(np.abs(lam)))
    trans = np.sort(lam)
    idx = np.argmin(np.abs(trans - longitudinal))
    rest = np.delete(trans, idx)
    assert rest[0] == pytest.approx(rest[1], rel=1e-9, abs=1e-12 * np.max(np.abs(lam)))


@settings(max_examples=50)
@given(vectors, xis, st.integers(0, 2**31))
def test_rotation_covariance(v, xi, seed):
    rot = Rotation.random(random_state=seed).as_matrix()
    g = near_field_green(rot @ np.asarray(v), xi)
    assert np.allclose(g, rot @ near_field_green(v, xi) @ rot.T, rtol=1e-10,
                       atol=1e-12 * np.max(np.abs(g)))


def test_retardation_damping():
    r = 100e-9
    for x1, x2 in [(5.0, 10.0), (10.0, 20.0), (20.0, 40.0)]:
        g1 = scaled_green([0, 0, r], x1 * C / r)[2, 2]
        g2 = scaled_green([0, 0, r], x2 * C / r)[2, 2]
        poly = (2 + 2 * x2) / (2 + 2 * x1)
        assert abs(g2 / g1) <= math.exp(-(x2 - x1)) * poly * (1 + 1e-12)


def test_decay_faster_than_exponential_envelope():
    r = 1e-9
    x = np.array([50.0, 100.0, 200.0])
    g = vacuum_green([0, 0, r], x * C / r)
    bound = np.exp(-x) * (3 + 3 * x + x**2) * C**2 / (4 * math.pi * (x * C / r) ** 2 * r**3)
    assert np.all(np.abs(g) <= bound[:, None, None] * (1 + 1e-12))


def test_vectorised_shape():
    assert vacuum_green(Z, np.array([1e14, 1e15, 1e16])).shape == (3, 3, 3)


@pytest.mark.parametrize("fn", [vacuum_green, near_field_green])
def test_domain_errors(fn):
    with pytest.raises(DomainError, match="coincident"):
        fn([0.0, 0.0, 0.0], 1e15)
    with pytest.raises(DomainError, match="static pole"):
        fn(Z, 0.0)


def test_scaled_green_regular_at_zero():
    k = scaled_green(Z, 0.0)
    assert np.all(np.isfinite(k))
    assert np.allclose(k, scaled_green(Z, 0.0, near_field=True))
