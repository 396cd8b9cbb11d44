"""The ratio-vector map Psi, the function g and the transition operator P.

``P f(x) = sum_j f(Psi_j(x)) x_j`` is the transition operator of the Markov
chain that moves from ``x`` to ``Psi_j(x)`` with probability ``x_j``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .disk import disk_point
from .gasket import DepthError, S

PNG_CAP = 12
# Leaves of the 3**n recursion evaluated per vectorized chunk.
PNG_BLOCK = 2**21

_ROT = [1, 2, 0]    # R(x1, x2, x3) = (x2, x3, x1)
_UNROT = [2, 0, 1]  # R^{-1}


def rotate(x: np.ndarray) -> np.ndarray:
    return np.asarray(x)[..., _ROT]


def unrotate(x: np.ndarray) -> np.ndarray:
    return np.asarray(x)[..., _UNROT]


def psi1(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    x1 = x[..., 0:1]
    num = np.stack([10.0 * x[..., 0], 4.0 * x[..., 0] + 3.0 * x[..., 1], 4.0 * x[..., 0] + 3.0 * x[..., 2]], axis=-1)
    return num / (15.0 * x1) - np.array([1.0, 2.0, 2.0]) / (25.0 * x1)


def psi_all(x: np.ndarray) -> np.ndarray:
    """Stack ``(Psi_1(x), Psi_2(x), Psi_3(x))`` along a new axis -2; no domain check."""
    x = np.asarray(x, dtype=float)
    return np.stack([psi1(x), unrotate(psi1(rotate(x))), rotate(psi1(unrotate(x)))], axis=-2)


def psi(j: int, p) -> np.ndarray:
    """Psi_j on the closed disk."""
    if j not in S:
        raise ValueError(f"symbol must be in {S}, got {j}")
    p = disk_point(p)
    if j == 1:
        return psi1(p)
    if j == 2:
        return unrotate(psi1(rotate(p)))
    return rotate(psi1(unrotate(p)))


def entropy_g(p) -> np.ndarray | float:
    """g(x) = sum_j x_j log x_j with 0 log 0 = 0."""
    x = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
    val = terms[..., 0] + terms[..., 1] + terms[..., 2]
    return float(val) if val.ndim == 0 else val


def apply_P(f: Callable, p) -> float:
    """One application of the transition operator at a single point."""
    x = disk_point(p)
    return sum(float(f(psi(j, x))) * float(x[j - 1]) for j in S)


def _png(n: int, x: np.ndarray, leaf: Callable, psi_fn: Callable) -> np.ndarray:
    if n == 0:
        return leaf(x)
    if x.shape[0] > 1 and x.shape[0] * 3**n > PNG_BLOCK:
        step = max(1, PNG_BLOCK // 3**n)
        return np.concatenate([_png(n, x[i:i + step], leaf, psi_fn) for i in range(0, x.shape[0], step)])
    kids = psi_fn(x).reshape(-1, 3)
    vals = _png(n - 1, kids, leaf, psi_fn).reshape(-1, 3)
    return vals[:, 0] * x[:, 0] + vals[:, 1] * x[:, 1] + vals[:, 2] * x[:, 2]


def iterate_Png(n: int, p, cap: int = PNG_CAP, f: Callable = entropy_g, psi_fn: Callable = psi_all):
    """(P^n f)(p), default f = g, by the 3**n-leaf recursion.

    Accepts one point or an array of shape ``(N, 3)``.
    """
    if n < 0 or n > cap:
        raise DepthError(f"iteration count {n} outside [0, {cap}]")
    x = disk_point(p)
    single = x.ndim == 1
    out = _png(n, np.atleast_2d(x), lambda y: np.asarray(f(y), dtype=float) * np.ones(y.shape[0]), psi_fn)
    return float(out[0]) if single else out
