import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kusuoka.disk import CENTER, R_MAX, DomainError, angle, b_of_c, disk_point, phi, plane_point, radius, reduce_angle

thetas = st.floats(-math.pi, math.pi, exclude_min=True, allow_nan=False)


def test_radius_examples():
    assert radius(CENTER) == 0.0
    assert radius(np.array([41, 17, 17]) / 75) == pytest.approx(8 * math.sqrt(6) / 75, rel=1e-15)
    np.testing.assert_allclose(radius(phi(np.linspace(-3, 3, 50))), R_MAX, atol=1e-15)


def test_angle_examples():
    assert angle(CENTER) == 0.0
    assert angle(phi(math.pi / 3)) == pytest.approx(math.pi / 3, abs=1e-15)
    assert angle(np.array([41, 17, 17]) / 75) == pytest.approx(2 * math.pi / 3, abs=1e-15)
    assert angle(phi(math.pi)) == pytest.approx(math.pi, abs=1e-15)


def test_phi_examples():
    np.testing.assert_allclose(phi(0.0), [1 / 5, 3 / 5, 1 / 5], atol=1e-16)
    np.testing.assert_allclose(phi(math.pi / 3), [7 / 15, 7 / 15, 1 / 15], atol=1e-16)


@given(thetas)
def test_angle_phi_roundtrip(t):
    assert angle(phi(t)) == pytest.approx(t, abs=1e-12)
    assert abs(radius(phi(t)) - R_MAX) <= 1e-15


def test_roundtrip_grid():
    t = np.random.default_rng(0).uniform(-math.pi, math.pi, 1000)
    assert np.max(np.abs(angle(phi(t)) - t)) < 1e-12


@given(st.floats(-50, 50, allow_nan=False))
def test_phi_periodic(t):
    np.testing.assert_allclose(phi(t + 2 * math.pi), phi(t), atol=1e-13)
    assert -math.pi < reduce_angle(t) <= math.pi


def test_coordinate_range_on_circle():
    p = phi(np.linspace(-math.pi, math.pi, 10_001))
    assert p.min() >= 1 / 15 - 1e-12
    assert p.max() <= 3 / 5 + 1e-12


def test_b_of_c():
    np.testing.assert_allclose(b_of_c(CENTER), CENTER, atol=1e-16)
    np.testing.assert_allclose(b_of_c([1 / 5, 3 / 5, 1 / 5]), [1 / 6, 2 / 3, 1 / 6], atol=1e-16)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_b_of_c_preserves_plane(a, b):
    p = np.array([a, b, 1 - a - b])
    assert b_of_c(p).sum() == pytest.approx(1.0, abs=1e-12)


def test_plane_point_rejects_drift():
    plane_point([0.2, 0.3, 0.5 + 1e-10])
    with pytest.raises(DomainError):
        plane_point([0.2, 0.3, 0.6])


def test_disk_point_clips_tiny_overshoot():
    p = CENTER + (phi(0.4) - CENTER) * (1 + 1e-12)
    q = disk_point(p)
    assert radius(q) <= R_MAX + 1e-16
    with pytest.raises(DomainError):
        disk_point(CENTER + (phi(0.4) - CENTER) * 1.01)
