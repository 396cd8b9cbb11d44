"""Geometry of the unit-sum plane H and the disk of ratio vectors inside it."""

from __future__ import annotations

import math

import numpy as np

CENTER = np.full(3, 1.0 / 3.0)
R_MAX_SQ = 8.0 / 75.0
R_MAX = math.sqrt(R_MAX_SQ)

# Orthonormal frame of the direction space of H.
E_COS = np.array([-1.0, 2.0, -1.0]) / math.sqrt(6.0)
E_SIN = np.array([1.0, 0.0, -1.0]) / math.sqrt(2.0)

SUM_TOL = 1e-9
RADIUS_TOL = 1e-9


class DomainError(ValueError):
    """Point outside the plane H or the closed disk."""


def plane_point(x) -> np.ndarray:
    """Validate a point of H (coordinates summing to 1)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 3:
        raise DomainError(f"expected 3 coordinates, got shape {x.shape}")
    drift = np.abs(x.sum(axis=-1) - 1.0)
    if np.any(drift > SUM_TOL):
        raise DomainError(f"coordinates must sum to 1 (off by {float(np.max(drift)):.3e})")
    return x


def disk_point(x) -> np.ndarray:
    """Validate a point of the closed disk; tiny radial overshoot is clipped back."""
    x = plane_point(x)
    d = x - CENTER
    r = np.sqrt(np.sum(d * d, axis=-1))
    over = r - R_MAX
    if np.any(over > RADIUS_TOL):
        raise DomainError(f"point lies outside the closed disk (radius excess {float(np.max(over)):.3e})")
    if np.any(over > 0):
        factor = np.where(over > 0, R_MAX / np.where(r > 0, r, 1.0), 1.0)
        x = CENTER + d * np.asarray(factor)[..., None]
    return x


def radius(p) -> np.ndarray | float:
    d = np.asarray(p, dtype=float) - CENTER
    r = np.sqrt(np.sum(d * d, axis=-1))
    return float(r) if r.ndim == 0 else r


def angle(p) -> np.ndarray | float:
    """Polar angle in (-pi, pi] about the center; 0 at the center itself."""
    d = np.asarray(p, dtype=float) - CENTER
    t = np.arctan2(d @ E_SIN, d @ E_COS)
    # arctan2 returns -pi for (-0.0 sin, negative cos); fold onto the closed end.
    t = np.where(t == -math.pi, math.pi, t)
    return float(t) if t.ndim == 0 else t


def phi(theta) -> np.ndarray:
    """Boundary parametrization of the circle of radius sqrt(8/75)."""
    t = np.asarray(theta, dtype=float)
    c = 2.0 / 15.0 * np.cos(t)
    s = 2.0 * math.sqrt(3.0) / 15.0 * np.sin(t)
    third = 1.0 / 3.0
    return np.stack([third - c + s, third + 2.0 * c, third - c - s], axis=-1)


def b_of_c(p) -> np.ndarray:
    """Affine change of variables b = (5/4) c - 1/12 used in older literature."""
    return 1.25 * np.asarray(p, dtype=float) - 1.0 / 12.0


def reduce_angle(theta: float) -> float:
    """Map to the branch (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t
