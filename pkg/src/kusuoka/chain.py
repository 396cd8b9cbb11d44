"""Monte Carlo and exact laws of the disk-valued Markov chain X_m.

From ``x`` the chain jumps to ``Psi_j(x)`` with probability ``x_j``; started at
the center, the law of ``X_m`` is ``sum_{|w|=m} nu(K_w) delta_{c^(w)}``.

Random streams: path ``p`` under seed ``s`` draws its uniforms from a
Philox4x64-10 generator keyed by ``(s, p)``, so each path is reproducible on
its own regardless of how many paths run alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import stats

from .disk import CENTER, R_MAX, angle, disk_point, radius
from .dynamics import psi, psi_all
from .gasket import DepthError

EXACT_CAP = 10
EXHAUSTIVE_CAP = 12
GOF_CAP = 6


@dataclass(frozen=True)
class ChainSample:
    path: int
    m: int
    point: np.ndarray
    r: float
    theta: float


@dataclass(frozen=True)
class DiscreteLaw:
    """Atoms in lexicographic word order with their weights."""

    points: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)

    def mean(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class GofReport:
    m: int
    n_paths: int
    statistic: float
    dof: int
    p_value: float
    observed: np.ndarray
    expected: np.ndarray


def path_rng(seed: int, path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, path], dtype=np.uint64)))


def _select(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Branch index 0, 1, 2 from uniforms by cumulative sums in coordinate order."""
    return (u >= x[..., 0]).astype(np.int64) + (u >= x[..., 0] + x[..., 1])


def chain_step(p, rng: np.random.Generator) -> np.ndarray:
    x = disk_point(p)
    j = int(_select(x, np.float64(rng.random()))) + 1
    return psi(j, x)


def _uniforms(m: int, n_paths: int, seed: int) -> np.ndarray:
    return np.array([path_rng(seed, p).random(m) for p in range(n_paths)]).reshape(n_paths, m)


def simulate(m: int, n_paths: int, seed: int, checkpoints: Sequence[int] | None = None):
    """Run ``n_paths`` chains for ``m`` steps from the center.

    Returns ``(words, snapshots)``: the chosen symbols ``(n_paths, m)`` in 1..3
    and a dict mapping each checkpoint step to the ``(n_paths, 3)`` positions.
    """
    if m < 0 or n_paths < 0:
        raise ValueError("steps and path count must be nonnegative")
    marks = set(range(m + 1)) if checkpoints is None else set(checkpoints)
    u = _uniforms(m, n_paths, seed)
    x = np.tile(CENTER, (n_paths, 1))
    words = np.empty((n_paths, m), dtype=np.int8)
    snaps = {}
    if 0 in marks:
        snaps[0] = x.copy()
    rows = np.arange(n_paths)
    for k in range(m):
        j = _select(x, u[:, k])
        words[:, k] = j + 1
        x = psi_all(x)[rows, j]
        if k + 1 in marks:
            snaps[k + 1] = x.copy()
    return words, snaps


def sample_paths(m: int, n_paths: int, seed: int, checkpoints: Sequence[int] | None = None) -> Iterator[ChainSample]:
    """Stream ``ChainSample`` records path by path at the requested steps (default: step m only)."""
    marks = sorted({m} if checkpoints is None else set(checkpoints))
    _, snaps = simulate(m, n_paths, seed, marks)
    for p in range(n_paths):
        for k in marks:
            pt = snaps[k][p]
            yield ChainSample(p, k, pt, radius(pt), angle(pt))


def _tree(m: int) -> tuple[np.ndarray, np.ndarray]:
    """All c^(w), |w| = m, with their nu-weights, via Psi."""
    x = CENTER[None].copy()
    w = np.ones(1)
    for _ in range(m):
        w = (w[:, None] * x).reshape(-1)
        x = psi_all(x).reshape(-1, 3)
    return x, w


def exact_law(m: int) -> DiscreteLaw:
    if m < 0 or m > EXACT_CAP:
        raise DepthError(f"depth {m} outside [0, {EXACT_CAP}]")
    x, w = _tree(m)
    return DiscreteLaw(x, w)


def uniform_word_law(m: int, mode: str = "exhaustive", n: int = 0, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """(r, theta) of c^(w) for w uniform on W_m.

    ``exhaustive`` lists every word once (m <= 12); ``sampled`` draws ``n``
    words from a Philox stream keyed by ``(seed, 0)``.
    """
    if mode == "exhaustive":
        if m < 0 or m > EXHAUSTIVE_CAP:
            raise DepthError(f"exhaustive mode needs 0 <= m <= {EXHAUSTIVE_CAP}, got {m}")
        x, _ = _tree(m)
    elif mode == "sampled":
        if m < 0 or n < 0:
            raise ValueError("depth and sample count must be nonnegative")
        sym = path_rng(seed, 0).integers(0, 3, size=(n, m))
        x = np.tile(CENTER, (n, 1))
        rows = np.arange(n)
        for k in range(m):
            x = psi_all(x)[rows, sym[:, k]]
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    return np.atleast_1d(radius(x)), np.atleast_1d(angle(x))


def histogram(values: np.ndarray, bins: int, lo: float, hi: float, weights=None) -> tuple[np.ndarray, np.ndarray]:
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi), weights=weights)
    return edges, counts


def radius_histogram(values: np.ndarray, bins: int, weights=None):
    return histogram(values, bins, 0.0, R_MAX * (1 + 1e-12), weights)


def angle_histogram(values: np.ndarray, bins: int, weights=None):
    return histogram(values, bins, -np.pi, np.pi, weights)


def word_codes(words: np.ndarray) -> np.ndarray:
    """Base-3 index of each word row (lexicographic rank)."""
    words = np.asarray(words, dtype=np.int64)
    m = words.shape[1]
    return (words - 1) @ (3 ** np.arange(m - 1, -1, -1)) if m else np.zeros(len(words), dtype=np.int64)


def empirical_vs_exact(m: int, n_paths: int, seed: int, weights: np.ndarray | None = None) -> GofReport:
    """Chi-square fit of simulated X_m atoms (identified by word) to a reference law.

    ``weights`` defaults to ``exact_law(m)``; pass another vector for a
    negative control.
    """
    if m < 0 or m > GOF_CAP:
        raise DepthError(f"depth {m} outside [0, {GOF_CAP}]")
    ref = exact_law(m).weights if weights is None else np.asarray(weights, dtype=float)
    words, _ = simulate(m, n_paths, seed, checkpoints=[])
    observed = np.bincount(word_codes(words), minlength=3**m).astype(float)
    expected = ref / ref.sum() * n_paths
    if m == 0:
        return GofReport(0, n_paths, 0.0, 0, 1.0, observed, expected)
    res = stats.chisquare(observed, expected)
    return GofReport(m, n_paths, float(res.statistic), 3**m - 1, float(res.pvalue), observed, expected)


def radial_second_moment(m: int) -> float:
    """E[r(X_m)^2] under the exact law."""
    law = exact_law(m)
    d = law.points - CENTER
    return law.mean(np.sum(d * d, axis=1))
