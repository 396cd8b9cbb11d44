import math

import numpy as np
import pytest

from kusuoka.chain import (
    angle_histogram,
    chain_step,
    empirical_vs_exact,
    exact_law,
    path_rng,
    radial_second_moment,
    sample_paths,
    simulate,
    uniform_word_law,
    word_codes,
)
from kusuoka.disk import CENTER, R_MAX, radius
from kusuoka.dynamics import psi
from kusuoka.gasket import DepthError, masses_at_depth


def test_chain_step_from_center_is_uniform():
    rng = path_rng(3, 0)
    n = 30_000
    hits = {j: 0 for j in (1, 2, 3)}
    targets = {j: psi(j, CENTER) for j in (1, 2, 3)}
    for _ in range(n):
        q = chain_step(CENTER, rng)
        for j, t in targets.items():
            if np.allclose(q, t):
                hits[j] += 1
    sd = math.sqrt(n * (1 / 3) * (2 / 3))
    for j in (1, 2, 3):
        assert abs(hits[j] - n / 3) < 5 * sd


def test_chain_step_deterministic_and_in_disk():
    a, b = path_rng(9, 4), path_rng(9, 4)
    p = q = CENTER
    for _ in range(50):
        p, q = chain_step(p, a), chain_step(q, b)
        np.testing.assert_array_equal(p, q)
        assert radius(p) <= R_MAX + 1e-12


def test_simulation_stays_in_disk():
    _, snaps = simulate(60, 500, 1)
    for pts in snaps.values():
        assert np.max(radius(pts)) <= R_MAX + 1e-12
        np.testing.assert_allclose(pts.sum(axis=1), 1.0, atol=1e-12)


def test_per_path_streams_independent_of_batch():
    w_small, _ = simulate(10, 5, 42, checkpoints=[])
    w_big, _ = simulate(10, 50, 42, checkpoints=[])
    np.testing.assert_array_equal(w_small, w_big[:5])


def test_sample_paths_zero_steps():
    samples = list(sample_paths(0, 20, 0))
    assert len(samples) == 20
    assert all(s.r == 0.0 and s.m == 0 for s in samples)


def test_sample_paths_reproducible():
    a = [(s.r, s.theta) for s in sample_paths(30, 40, 5, checkpoints=[10, 30])]
    b = [(s.r, s.theta) for s in sample_paths(30, 40, 5, checkpoints=[10, 30])]
    assert a == b
    assert len(a) == 80


def test_mean_radius_at_200_steps():
    # pilot run (seed 7): mean r equals sqrt(8/75) to ~1e-14
    r = np.array([s.r for s in sample_paths(200, 10_000, 7)])
    assert abs(r.mean() - R_MAX) < 1e-6
    counts, _ = np.histogram(r, bins=10)
    assert counts.sum() == 10_000


def test_exact_law_small():
    law0 = exact_law(0)
    assert len(law0) == 1 and law0.weights[0] == 1.0
    np.testing.assert_allclose(law0.points[0], CENTER)
    law1 = exact_law(1)
    np.testing.assert_allclose(law1.weights, [1 / 3] * 3, rtol=1e-15)
    for j in (1, 2, 3):
        np.testing.assert_allclose(law1.points[j - 1], psi(j, CENTER), atol=1e-15)
    with pytest.raises(DepthError):
        exact_law(11)


def test_exact_law_weights_are_cell_masses():
    for m in range(7):
        law = exact_law(m)
        assert abs(law.weights.sum() - 1.0) < 1e-12
        np.testing.assert_allclose(law.weights, masses_at_depth(m), rtol=1e-12, atol=0)


def test_radial_second_moment_increases():
    vals = [radial_second_moment(m) for m in range(1, 11)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 8 / 75
    assert vals[-1] > 0.95 * 8 / 75


def test_uniform_word_law_depth_one():
    r, th = uniform_word_law(1)
    np.testing.assert_allclose(r, 8 * math.sqrt(6) / 75, rtol=1e-14)
    assert len(set(np.round(th, 12))) == 3


def test_uniform_word_law_concentrates():
    r4, _ = uniform_word_law(4)
    r10, _ = uniform_word_law(10)
    assert np.mean(r10 > 0.95 * R_MAX) > np.mean(r4 > 0.95 * R_MAX)


def test_uniform_angle_histogram_rotation_invariant():
    _, th = uniform_word_law(0, "sampled", n=0)
    assert len(th) == 0
    _, th = uniform_word_law(12, "sampled", n=60_000, seed=3)
    _, counts = angle_histogram(th, 9)
    rolled = np.roll(counts, 3)
    n = counts.sum()
    sd = np.sqrt(counts.mean())
    assert n == 60_000
    assert np.max(np.abs(counts - rolled)) < 6 * sd * math.sqrt(2)


def test_uniform_word_law_modes_checked():
    with pytest.raises(DepthError):
        uniform_word_law(13)
    with pytest.raises(ValueError):
        uniform_word_law(3, "bogus")


def test_word_codes_lexicographic():
    w = np.array([[1, 1], [1, 3], [3, 2]])
    np.testing.assert_array_equal(word_codes(w), [0, 2, 7])


def test_gof_zero_steps_exact():
    rep = empirical_vs_exact(0, 100, 0)
    assert rep.p_value == 1.0
    assert rep.observed[0] == 100


def test_gof_small_run():
    rep = empirical_vs_exact(2, 20_000, 11)
    assert rep.dof == 8
    assert rep.observed.sum() == 20_000
    assert rep.p_value > 0.001
