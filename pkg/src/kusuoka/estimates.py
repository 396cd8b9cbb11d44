"""Two-sided bounds on rho and on the local spectral dimension.

rho is the limit of ``rho_m = (1/m) sum_{|w|=m} nu(K_w) log nu(K_w)`` and is
also the integral of ``P^n g`` against an invariant law carried by the
boundary circle, so ``min P^n g <= rho <= max P^n g`` there for every n.
The dimension is the decreasing function
``d(rho) = 2 - 2 log(5/3) / (log(5/3) - rho)`` of rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .disk import phi, reduce_angle
from .dynamics import PNG_CAP, _png, entropy_g, psi_all
from .gasket import BLOCK_LEAVES, MAX_DEPTH, DepthError, mass_blocks

LOG53 = math.log(5.0 / 3.0)
PERIOD = 2.0 * math.pi / 3.0
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RhoEstimate:
    m: int
    value: float
    method: str = "direct"

    @property
    def dsloc(self) -> float:
        return dsloc_from_rho(self.value)


@dataclass(frozen=True)
class BoundsRow:
    n: int
    g_min: float
    g_max: float
    d_lower: float
    d_upper: float
    theta_min: float
    theta_max: float
    # max |f(t) - f(2pi/3 - t)| on the scan grid; reported, never used to prune
    reflection_defect: float = float("nan")


def _check_m(m: int) -> None:
    if m < 1 or m > MAX_DEPTH:
        raise DepthError(f"depth m must lie in [1, {MAX_DEPTH}], got {m}")


def rho_direct(m: int, pair=None) -> RhoEstimate:
    """rho_m from the cell masses, streamed in lexicographic blocks."""
    _check_m(m)
    partials = []
    for block in mass_blocks(m, pair):
        partials.append(math.fsum((block * np.log(block)).tolist()))
    return RhoEstimate(m, math.fsum(partials) / m, "direct")


def _cesaro_walk(x: np.ndarray, w: np.ndarray, depth: int, m: int, sums: list, block: int) -> None:
    while True:
        sums[depth].append(math.fsum((w * entropy_g(x)).tolist()))
        if depth == m - 1:
            return
        kids = psi_all(x).reshape(-1, 3)
        # weights of the children: nu(K_wj) = nu(K_w) c_j^(w)
        kw = (w[:, None] * x).reshape(-1)
        depth += 1
        if kids.shape[0] <= block:
            x, w = kids, kw
            continue
        for i in range(0, kids.shape[0], block):
            _cesaro_walk(kids[i:i + block], kw[i:i + block], depth, m, sums, block)
        return


def chain_expectations(m: int, block: int = BLOCK_LEAVES) -> list[float]:
    """E[g(X_k)] = sum_{|w|=k} nu(K_w) g(c^(w)) for k = 0 .. m-1."""
    _check_m(m)
    sums: list[list[float]] = [[] for _ in range(m)]
    _cesaro_walk(np.full((1, 3), 1.0 / 3.0), np.ones(1), 0, m, sums, block)
    return [math.fsum(s) for s in sums]


def rho_cesaro(m: int, block: int = BLOCK_LEAVES) -> RhoEstimate:
    """rho_m as the time average (1/m) sum_{k<m} E[g(X_k)] over the Psi-tree."""
    return RhoEstimate(m, math.fsum(chain_expectations(m, block)) / m, "cesaro")


def rho_cesaro_all(m: int) -> list[RhoEstimate]:
    """rho_1 .. rho_m from a single tree walk (prefix averages)."""
    terms = chain_expectations(m)
    return [RhoEstimate(k, math.fsum(terms[:k]) / k, "cesaro") for k in range(1, m + 1)]


def rho_shifted(m: int, pair=None) -> RhoEstimate:
    """(1/m) sum nu(K_w) log(2 nu(K_w)), i.e. rho_m + log(2)/m.

    Inside the logarithm the cells are weighed by the unnormalized sum
    nu_h1 + nu_h2 (total mass 2).  Unlike rho_m, which increases towards rho
    from -log 3, this sequence decreases towards rho, so d(rho_shifted(m))
    is a lower estimate of the local spectral dimension.
    """
    base = rho_direct(m, pair)
    return RhoEstimate(m, base.value + math.log(2.0) / m, "shifted")


def dsloc_from_rho(rho: float) -> float:
    if rho >= LOG53:
        raise ValueError(f"rho must be below log(5/3) = {LOG53}, got {rho}")
    return 2.0 - 2.0 * LOG53 / (LOG53 - rho)


def golden_section_min(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
                       max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [a, b]; returns (x, f(x))."""
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    return (x1, f1) if f1 <= f2 else (x2, f2)


def png_on_circle(n: int, theta, psi_fn: Callable = psi_all) -> np.ndarray:
    """theta -> (P^n g)(phi(theta)), vectorized over theta."""
    if n < 0 or n > PNG_CAP:
        raise DepthError(f"iteration count {n} outside [0, {PNG_CAP}]")
    pts = np.atleast_2d(phi(np.atleast_1d(np.asarray(theta, dtype=float))))
    return _png(n, pts, entropy_g, psi_fn)


def _local_extrema(vals: np.ndarray, sign: float) -> np.ndarray:
    v = sign * vals
    left, right = np.roll(v, 1), np.roll(v, -1)
    return np.nonzero((v <= left) & (v <= right))[0]


def _refine(vals: np.ndarray, thetas: np.ndarray, h: float, sign: float, f: Callable, tol: float) -> tuple[float, float]:
    best_i = int(np.argmin(sign * vals))
    best_t, best_v = float(thetas[best_i]), float(sign * vals[best_i])
    for i in _local_extrema(vals, sign):
        t0 = float(thetas[i])
        t, v = golden_section_min(lambda s: sign * f(s), t0 - h, t0 + h, tol)
        if v < best_v:
            best_t, best_v = t, v
    return best_t, sign * best_v


def bound_scan(n: int, grid_size: int = 4096, tol: float = 1e-12, psi_fn: Callable = psi_all) -> BoundsRow:
    """Global min and max of P^n g on the boundary circle.

    Dense scan over one period [0, 2pi/3), then golden-section refinement of
    every bracketed local extremum.
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be at least 64, got {grid_size}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    h = PERIOD / grid_size
    thetas = np.arange(grid_size) * h
    vals = png_on_circle(n, thetas, psi_fn)

    def f(t: float) -> float:
        return float(png_on_circle(n, t, psi_fn)[0])

    t_min, g_min = _refine(vals, thetas, h, 1.0, f, tol)
    t_max, g_max = _refine(vals, thetas, h, -1.0, f, tol)
    mirror = vals[(-np.arange(grid_size)) % grid_size]
    return BoundsRow(
        n=n,
        g_min=g_min,
        g_max=g_max,
        d_lower=dsloc_from_rho(g_max),
        d_upper=dsloc_from_rho(g_min),
        theta_min=reduce_angle(t_min),
        theta_max=reduce_angle(t_max),
        reflection_defect=float(np.max(np.abs(vals - mirror))),
    )


def closed_form_n0() -> tuple[float, float, float, float]:
    """(min g, max g, lower dimension bound, upper dimension bound) in closed form."""
    g_lo = 0.6 * math.log(3.0) - math.log(5.0)
    g_hi = 14.0 / 15.0 * math.log(7.0) - math.log(15.0)
    l3, l5, l7 = math.log(3.0), math.log(5.0), math.log(7.0)
    d_lo = (15 * l3 + 15 * l5 - 14 * l7) / (15 * l5 - 7 * l7)
    d_hi = (5 * l5 - 3 * l3) / (5 * l5 - 4 * l3)
    return g_lo, g_hi, d_lo, d_hi


def dg_dtheta(theta):
    """Closed-form derivative of theta -> g(phi(theta)), valid on [0, pi/3]."""
    t = np.asarray(theta, dtype=float)
    x = 0.4 * np.cos(t)
    y = 2.0 * math.sqrt(3.0) / 15.0 * np.sin(t)
    r3 = math.sqrt(3.0)
    val = ((-x + y) * np.log(1 / 3 - x / 3 - y) - 2.0 * y * np.log(1 / 3 + 2.0 * x / 3)
           + (x + y) * np.log(1 / 3 - x / 3 + y)) / r3
    return float(val) if val.ndim == 0 else val


def reference_dimensions() -> tuple[float, float]:
    """Spectral dimension 2 log_5 3 and walk dimension log_2 5 of Brownian motion on K."""
    return 2.0 * math.log(3.0) / math.log(5.0), math.log(5.0) / math.log(2.0)
