"""Invariant checks run by ``kusuoka verify``.

Every check that touches Psi takes the map as an argument so a perturbed
version can be substituted to confirm the suite actually detects faults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dynamics
from .chain import exact_law
from .disk import R_MAX, angle, phi, radius
from .estimates import bound_scan, dg_dtheta, rho_cesaro, rho_direct
from .gasket import (
    SCALE,
    cell_mass,
    graph_energy,
    harmonic_matrix,
    masses_at_depth,
    orthonormal_pair,
    ratios_at_depth,
)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _result(suite: str, name: str, err: float, tol: float) -> CheckResult:
    return CheckResult(suite, name, bool(err <= tol), f"max error {err:.3e} (tol {tol:.0e})")


def check_normalization(depth: int = 8) -> CheckResult:
    err = max(abs(math.fsum(masses_at_depth(m)) - 1.0) for m in range(depth + 1))
    return _result("gasket", "normalization", err, 1e-12)


def check_additivity(depth: int = 8) -> CheckResult:
    err = 0.0
    for m in range(depth):
        parent = masses_at_depth(m)
        kids = masses_at_depth(m + 1).reshape(-1, 3).sum(axis=1)
        err = max(err, float(np.max(np.abs(kids - parent) / parent)))
    return _result("gasket", "additivity", err, 1e-12)


def check_self_similarity(samples: int = 100, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    err = 0.0
    for v in rng.normal(size=(samples, 3)):
        q = graph_energy(v)
        split = SCALE * sum(graph_energy(harmonic_matrix(i) @ v) for i in (1, 2, 3))
        err = max(err, abs(split - q) / max(q, 1e-300))
    return _result("gasket", "energy self-similarity", err, 1e-12)


def rotated_pair(angle_rad: float = 0.7) -> tuple[np.ndarray, np.ndarray]:
    """Default pair turned inside the energy-orthonormal plane."""
    v1, v2 = orthonormal_pair()
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return c * v1 + s * v2, -s * v1 + c * v2


def check_basis_independence(depth: int = 5) -> CheckResult:
    pair = rotated_pair()
    err = max(float(np.max(np.abs(masses_at_depth(m, pair) - masses_at_depth(m)) / masses_at_depth(m)))
              for m in range(depth + 1))
    return _result("gasket", "basis independence", err, 1e-12)


def check_psi_consistency(psi_fn: Callable, depth: int = 8) -> CheckResult:
    err = 0.0
    child = ratios_at_depth(0)
    for m in range(depth + 1):
        parent, child = child, ratios_at_depth(m + 1)
        err = max(err, float(np.max(np.abs(child.reshape(-1, 3, 3) - psi_fn(parent)))))
    return _result("gasket", "psi consistency", err, 1e-12)


def check_phi_roundtrip(samples: int = 1000, seed: int = 1) -> CheckResult:
    t = np.random.default_rng(seed).uniform(-math.pi, math.pi, samples)
    p = phi(t)
    err = max(float(np.max(np.abs(angle(p) - t))), float(np.max(np.abs(radius(p) - R_MAX))))
    return _result("disk", "phi roundtrip", err, 1e-12)


def check_markov(psi_fn: Callable, samples: int = 500, seed: int = 2) -> CheckResult:
    t = np.random.default_rng(seed).uniform(-math.pi, math.pi, samples)
    r = np.random.default_rng(seed + 1).uniform(0, R_MAX, samples)
    pts = phi(t)
    pts = 1 / 3 + (pts - 1 / 3) * (r / R_MAX)[:, None]
    err = 0.0
    for n in range(6):
        ones = dynamics._png(n, pts, lambda y: np.ones(y.shape[0]), psi_fn)
        err = max(err, float(np.max(np.abs(ones - 1.0))))
    return _result("dynamics", "markov property", err, 1e-12)


def check_boundary_preservation(psi_fn: Callable, samples: int = 1000) -> CheckResult:
    t = np.linspace(-math.pi, math.pi, samples)
    err = float(np.max(np.abs(radius(psi_fn(phi(t))) - R_MAX)))
    return _result("dynamics", "boundary preservation", err, 1e-12)


def check_equivariance(psi_fn: Callable, samples: int = 400, seed: int = 3) -> CheckResult:
    t = np.random.default_rng(seed).uniform(-math.pi, math.pi, samples)
    p = phi(t)
    a = psi_fn(dynamics.rotate(p))
    b = dynamics.rotate(psi_fn(p))
    # Psi_1 o R = R o Psi_2, Psi_2 o R = R o Psi_3, Psi_3 o R = R o Psi_1
    err = float(np.max(np.abs(a - b[:, [1, 2, 0], :])))
    return _result("dynamics", "rotation equivariance", err, 1e-14)


def check_prop2(max_m: int = 6) -> CheckResult:
    err = max(abs(rho_direct(m).value - rho_cesaro(m).value) for m in range(1, max_m + 1))
    return _result("estimates", "direct = cesaro", err, 1e-10)


def check_nesting(psi_fn: Callable, max_n: int = 3, grid: int = 512) -> CheckResult:
    rows = [bound_scan(n, grid, 1e-10, psi_fn) for n in range(max_n + 1)]
    bad = [r.n for a, r in zip(rows, rows[1:]) if r.g_min < a.g_min - 1e-12 or r.g_max > a.g_max + 1e-12]
    return CheckResult("estimates", "bound nesting", not bad, f"violations at n={bad}" if bad else f"n=0..{max_n} nested")


def check_derivative(points: int = 10_000) -> CheckResult:
    t = np.linspace(0.0, math.pi / 3, points)
    worst = float(np.min(dg_dtheta(t)))
    return CheckResult("estimates", "derivative sign", worst >= -1e-12, f"min derivative {worst:.3e}")


def check_exact_law(depth: int = 6) -> CheckResult:
    err = max(float(np.max(np.abs(exact_law(m).weights - masses_at_depth(m)))) for m in range(depth + 1))
    return _result("chain", "exact law = cell masses", err, 1e-12)


def check_containment(depth: int = 10) -> CheckResult:
    worst = max(float(np.max(radius(ratios_at_depth(m)))) for m in range(depth + 1))
    return CheckResult("chain", "containment", worst < R_MAX, f"max radius {worst:.16f} < {R_MAX:.16f}")


def run_all(psi_fn: Callable | None = None) -> list[CheckResult]:
    psi_fn = dynamics.psi_all if psi_fn is None else psi_fn
    return [
        check_normalization(),
        check_additivity(),
        check_self_similarity(),
        check_basis_independence(),
        check_psi_consistency(psi_fn),
        check_phi_roundtrip(),
        check_markov(psi_fn),
        check_boundary_preservation(psi_fn),
        check_equivariance(psi_fn),
        check_prop2(),
        check_nesting(psi_fn),
        check_derivative(),
        check_exact_law(),
        check_containment(),
    ]
