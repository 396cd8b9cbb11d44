"""Combinatorics, graph energy and the Kusuoka measure of the Sierpinski gasket.

Cells are addressed by words over ``S = (1, 2, 3)``.  A harmonic function is
represented by its boundary values on the three corners ``p1, p2, p3``; the
restriction ``h o psi_i`` is again harmonic with boundary values ``A_i @ v``.
Cell masses follow from the energy-measure identity

    nu(K_w) = (5/3)^|w| * sum_k Q0(T_w v_k),    T_w = A_{w_n} ... A_{w_1},

summed over an energy-orthonormal pair ``v_1, v_2``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

S = (1, 2, 3)
SCALE = 5.0 / 3.0
MAX_DEPTH = 18

Word = tuple  # tuple[int, ...] of symbols in S

# v^T M v = Q0(v); row sums are zero.
ENERGY_MATRIX = np.array([[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]])

# Row k of A_i is the value of h at psi_i(p_k).  The value at the midpoint of
# p_i p_k is (2 v_i + 2 v_k + v_l) / 5 ("1/5-2/5 rule").
_HARMONIC_EXACT = (
    ((1, 0, 0), (Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)), (Fraction(2, 5), Fraction(1, 5), Fraction(2, 5))),
    ((Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)), (0, 1, 0), (Fraction(1, 5), Fraction(2, 5), Fraction(2, 5))),
    ((Fraction(2, 5), Fraction(1, 5), Fraction(2, 5)), (Fraction(1, 5), Fraction(2, 5), Fraction(2, 5)), (0, 0, 1)),
)
HARMONIC_MATRICES = np.array([[[float(a) for a in row] for row in mat] for mat in _HARMONIC_EXACT])

_PAIR = (
    np.array([1.0, 0.0, -1.0]) / (2.0 * np.sqrt(3.0)),
    np.array([-1.0, 2.0, -1.0]) / 6.0,
)

# Leaves expanded at once in the vectorized tree walks.
BLOCK_LEAVES = 3**10


class DepthError(ValueError):
    """Requested depth exceeds the configured cap."""


def _check_depth(m: int, cap: int) -> None:
    if m < 0:
        raise DepthError(f"depth must be nonnegative, got {m}")
    if m > cap:
        raise DepthError(f"depth {m} exceeds cap {cap}")


def parse_word(w: Union[str, Iterable[int]]) -> Word:
    """Turn ``"132"`` or ``[1, 3, 2]`` into a word tuple; reject symbols outside S."""
    if isinstance(w, str):
        w = w.strip()
        if w in ("", "-", "()"):
            return ()
        try:
            symbols = tuple(int(ch) for ch in w)
        except ValueError:
            raise ValueError(f"invalid word {w!r}: symbols must be 1, 2 or 3") from None
    else:
        symbols = tuple(int(s) for s in w)
    bad = [s for s in symbols if s not in S]
    if bad:
        raise ValueError(f"invalid word symbols {bad}: symbols must be 1, 2 or 3")
    return symbols


def word_str(w: Word) -> str:
    return "".join(str(s) for s in w)


def graph_energy(v) -> np.ndarray | float:
    """Level-0 graph energy Q0(v); vectorized over the last axis."""
    v = np.asarray(v, dtype=float)
    a, b, c = v[..., 0], v[..., 1], v[..., 2]
    q = (a - b) ** 2 + (b - c) ** 2 + (a - c) ** 2
    return float(q) if q.ndim == 0 else q


def energy_bilinear(u, v) -> float:
    """Q0(u, v) = u^T M v, so that Q0(v, v) = Q0(v)."""
    return float(np.asarray(u, dtype=float) @ ENERGY_MATRIX @ np.asarray(v, dtype=float))


def harmonic_matrix(i: int) -> np.ndarray:
    if i not in S:
        raise ValueError(f"symbol must be in {S}, got {i}")
    return HARMONIC_MATRICES[i - 1].copy()


def harmonic_matrix_exact(i: int) -> tuple:
    if i not in S:
        raise ValueError(f"symbol must be in {S}, got {i}")
    return tuple(tuple(Fraction(a) for a in row) for row in _HARMONIC_EXACT[i - 1])


def orthonormal_pair() -> tuple[np.ndarray, np.ndarray]:
    """Default boundary data with 2E(h_i, h_j) = delta_ij (here E(h) = Q0(v))."""
    return _PAIR[0].copy(), _PAIR[1].copy()


def _pair_matrix(pair) -> np.ndarray:
    if pair is None:
        pair = _PAIR
    return np.array([np.asarray(pair[0], dtype=float), np.asarray(pair[1], dtype=float)])


def restriction_matrix(w: Sequence[int]) -> np.ndarray:
    """T_w = A_{w_n} ... A_{w_1}: boundary map for ``h -> h o psi_w``."""
    t = np.eye(3)
    for s in parse_word(w):
        t = HARMONIC_MATRICES[s - 1] @ t
    return t


def _center(u: np.ndarray) -> np.ndarray:
    # Constants are harmonic and carry no energy; removing them keeps the
    # shrinking differences from cancelling against O(1) values.
    return u - u.mean(axis=-1, keepdims=True)


def _restrict(u: np.ndarray, w: Word) -> np.ndarray:
    for s in w:
        u = _center(u @ HARMONIC_MATRICES[s - 1].T)
    return u


def cell_mass(w: Sequence[int], pair=None) -> float:
    """nu(K_w) computed from the energy-orthonormal pair (default pair)."""
    w = parse_word(w)
    u = _restrict(_center(_pair_matrix(pair)), w)
    return SCALE ** len(w) * float(graph_energy(u[0]) + graph_energy(u[1]))


def cell_ratio(w: Sequence[int], pair=None) -> np.ndarray:
    """c^(w) = (nu(K_w1), nu(K_w2), nu(K_w3)) / nu(K_w)."""
    w = parse_word(w)
    total = cell_mass(w, pair)
    return np.array([cell_mass(w + (j,), pair) for j in S]) / total


def enumerate_masses(m: int, pair=None, cap: int = MAX_DEPTH) -> Iterator[tuple[Word, float]]:
    """Yield every ``(w, nu(K_w))`` with ``|w| = m`` in lexicographic order.

    Depth-first; each child reuses its parent's restricted boundary data.
    """
    _check_depth(m, cap)
    root = _center(_pair_matrix(pair))  # rows are the two boundary vectors

    def walk(prefix: Word, u: np.ndarray, depth: int) -> Iterator[tuple[Word, float]]:
        if depth == m:
            yield prefix, SCALE**depth * float(graph_energy(u[0]) + graph_energy(u[1]))
            return
        for j in S:
            yield from walk(prefix + (j,), _center(u @ HARMONIC_MATRICES[j - 1].T), depth + 1)

    yield from walk((), root, 0)


def _expand(u: np.ndarray) -> np.ndarray:
    """Children of a block of nodes, parent-major then symbol order."""
    # u: (N, 2, 3) -> (N, 3, 2, 3) -> (3N, 2, 3)
    kids = np.einsum("npk,jlk->njpl", u, HARMONIC_MATRICES)
    return _center(kids.reshape(-1, 2, 3))


def _block_masses(u: np.ndarray, depth: int) -> np.ndarray:
    return SCALE**depth * (graph_energy(u[:, 0]) + graph_energy(u[:, 1]))


def _walk_blocks(u: np.ndarray, depth: int, m: int, block: int) -> Iterator[np.ndarray]:
    while depth < m and u.shape[0] * 3 ** (m - depth) <= block:
        u = _expand(u)
        depth += 1
    if depth == m:
        yield _block_masses(u, depth)
        return
    u = _expand(u)
    step = max(1, block // 3 ** (m - depth - 1))
    for start in range(0, u.shape[0], step):
        yield from _walk_blocks(u[start:start + step], depth + 1, m, block)


def mass_blocks(m: int, pair=None, cap: int = MAX_DEPTH, block: int = BLOCK_LEAVES) -> Iterator[np.ndarray]:
    """Stream the depth-m masses as numpy chunks, lexicographic order overall."""
    _check_depth(m, cap)
    yield from _walk_blocks(_center(_pair_matrix(pair))[None], 0, m, block)


def masses_at_depth(m: int, pair=None, cap: int = 13) -> np.ndarray:
    """All ``3**m`` masses at depth m as one array (index = base-3 word code)."""
    _check_depth(m, cap)
    return np.concatenate(list(mass_blocks(m, pair)))


def ratios_at_depth(m: int, pair=None, cap: int = 12) -> np.ndarray:
    """c^(w) for every |w| = m from the energy definition, shape ``(3**m, 3)``."""
    _check_depth(m, cap)
    parent = masses_at_depth(m, pair)
    children = masses_at_depth(m + 1, pair).reshape(-1, 3)
    return children / parent[:, None]


def words_at_depth(m: int) -> Iterator[Word]:
    """Lexicographic words of length m, matching the order of ``mass_blocks``."""
    if m == 0:
        yield ()
        return
    for prefix in words_at_depth(m - 1):
        for j in S:
            yield prefix + (j,)


# exact rational cross-check --------------------------------------------------

def _q0_exact(v) -> Fraction:
    a, b, c = v
    return (a - b) ** 2 + (b - c) ** 2 + (a - c) ** 2


def _apply_exact(mat, v):
    return tuple(sum(mat[r][k] * v[k] for k in range(3)) for r in range(3))


def cell_mass_exact(w: Sequence[int]) -> Fraction:
    """nu(K_w) as an exact rational for the default pair.

    The pair carries factors 1/(2 sqrt 3) and 1/6, so Q0 of the unscaled
    vectors (1, 0, -1) and (-1, 2, -1) is divided by 12 and 36.
    """
    w = parse_word(w)
    u1, u2 = (1, 0, -1), (-1, 2, -1)
    for s in w:
        u1 = _apply_exact(_HARMONIC_EXACT[s - 1], u1)
        u2 = _apply_exact(_HARMONIC_EXACT[s - 1], u2)
    return Fraction(5, 3) ** len(w) * (_q0_exact(u1) / 12 + _q0_exact(u2) / 36)
