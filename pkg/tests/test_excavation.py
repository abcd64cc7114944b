import numpy as np
import pytest
from hypothesis import given, strategies as st

from hivelab.hive_gt import gt_boundary, hive_boundary
from hivelab.harness.generators import random_gt_pair, random_square
from hivelab.octahedron import (
    SquareFunction,
    excavate,
    excavate_field,
    gt_pair_to_square,
    inverse_excavate,
    oct_map,
)
from hivelab.rmt import RngStream


def _square(n, fn):
    i, j = np.indices((n + 1, n + 1))
    return SquareFunction(n, fn(i, j).astype(float))


def test_affine_two_by_two():
    assert excavate(_square(2, lambda i, j: i + j))[1, 1] == 2


def test_single_bump():
    v = np.zeros((3, 3))
    v[2, 1] = 1
    assert excavate(SquareFunction(2, v))[1, 1] == 1


@given(st.lists(st.floats(-10, 10), min_size=9, max_size=9))
def test_single_octahedron_rule(vals):
    kt = SquareFunction(2, np.array(vals).reshape(3, 3))
    k = kt.values
    expected = max(k[1, 0] + k[1, 2], k[2, 1] + k[0, 1]) - k[1, 1]
    ht = excavate(kt)
    assert ht[1, 1] == pytest.approx(expected, abs=1e-12)
    assert inverse_excavate(ht)[1, 1] == pytest.approx(k[1, 1], abs=1e-9)


def test_boundary_is_unchanged():
    kt = random_square(6, RngStream(1))
    ht = excavate(kt).values
    edge = np.ones((7, 7), dtype=bool)
    edge[1:-1, 1:-1] = False
    assert np.array_equal(ht[edge], kt.values[edge])


def test_field_respects_face_identifications():
    n = 4
    kt = random_square(n, RngStream(6))
    f = excavate_field(kt)
    ht = excavate(kt)
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j >= n:
                assert f[n - j, n - i, 0, i + j - n] == kt[i, j]
            if i <= j:
                assert f[0, j - i, n - j, i] == ht[i, j]
            if i >= j:
                assert f[i - j, 0, n - i, j] == ht[i, j]
    with pytest.raises(IndexError):
        f[1, 1, 1, 0]


def test_round_trip_many():
    worst = 0.0
    for t in range(1000):
        n = 2 + t % 7
        kt = random_square(n, RngStream(21, t))
        worst = max(worst, float(np.max(np.abs(inverse_excavate(excavate(kt)).values - kt.values))))
    assert worst < 1e-9


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_affine_in_affine_out(n):
    kt = _square(n, lambda i, j: 0.5 * i - 2 * j + 3)
    assert np.allclose(excavate(kt).values, kt.values)
    assert np.allclose(inverse_excavate(kt).values, kt.values)


@given(st.integers(2, 7), st.integers(0, 2**32), st.sampled_from([0.5, 2.0]))
def test_positive_homogeneity(n, seed, t):
    kt = random_square(n, RngStream(seed, 2))
    scaled = SquareFunction(n, t * kt.values)
    assert np.allclose(excavate(scaled).values, t * excavate(kt).values, atol=1e-9)


@given(st.integers(2, 7), st.integers(0, 2**32), st.floats(-5, 5), st.floats(-5, 5))
def test_adding_affine_commutes(n, seed, a, b):
    kt = random_square(n, RngStream(seed, 5))
    i, j = np.indices(kt.values.shape)
    shift = a * i + b * j
    out = excavate(SquareFunction(n, kt.values + shift)).values
    assert np.allclose(out, excavate(kt).values + shift, atol=1e-9)


@given(st.integers(0, 2**32))
def test_two_by_two_boundary_formula(seed):
    g1, g2 = random_gt_pair(2, RngStream(seed, 8))
    p = gt_pair_to_square(g1, g2)
    lam, mu, gamma = g1.top, g2.top, p.gamma
    sigma = gamma + gt_boundary(g1)[1]
    pi = hive_boundary(p.k)[2].entries
    nu1 = oct_map(g1, g2).hive[1, 1]
    expected = max(lam.sum() + mu[0] + gamma[0] - sigma[0], lam[0] + pi[0] - sigma[0])
    assert nu1 == pytest.approx(expected, abs=1e-9)


@given(st.integers(1, 6), st.integers(0, 2**32))
def test_gap_constant_does_not_matter(n, seed):
    g1, g2 = random_gt_pair(n, RngStream(seed, 1))
    G = g1.spread() + g2.spread() + 1.0
    a, b = oct_map(g1, g2, G), oct_map(g1, g2, 2 * G)
    assert np.max(np.abs(a.hive.values - b.hive.values)) < 1e-8
    assert np.max(np.abs(a.pattern.entries - b.pattern.entries)) < 1e-8
