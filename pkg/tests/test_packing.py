import numpy as np
import pytest
from hypothesis import given, strategies as st

from hivelab.hive_gt import GTPattern, Hive, PreconditionError, check_rhombus_concave, gt_boundary, hive_boundary
from hivelab.harness.generators import random_gt_pair, random_square
from hivelab.octahedron import (
    ConsistencyError,
    SquareFunction,
    dumps_square,
    excavate,
    gt_pair_to_square,
    loads_square,
    oct_map,
    pack_lower,
    pack_upper,
    staircase_gamma,
    unpack_lower,
    unpack_to_augmented,
    unpack_upper,
)
from hivelab.rmt import RngStream
from hivelab.spectra import weyl_trace_check

pairs = st.builds(lambda n, seed: random_gt_pair(n, RngStream(seed, 9)), st.integers(1, 7), st.integers(0, 2**32))


def _is_affine(points, values) -> bool:
    X = np.column_stack([np.ones(len(points)), points])
    coef, *_ = np.linalg.lstsq(X, values, rcond=None)
    return bool(np.max(np.abs(X @ coef - values)) < 1e-9)


def test_affine_upper_pair_is_affine_on_each_triangle():
    n, s = 4, 3.0
    h = Hive.from_function(n, lambda i, j: float(i + j))
    # h'(p, q) = 2p + q + s - n agrees with h on the shared diagonal
    hp = Hive.from_function(n, lambda p, q: 2.0 * p + q + s - n)
    sq = pack_upper(h, hp, s)
    i, j = np.indices(sq.values.shape)
    for region in (i <= j, i >= j):
        assert _is_affine(np.column_stack([i[region], j[region]]), sq.values[region])


def test_same_affine_hive_twice_is_inconsistent():
    # with h = h' = i + j the diagonal values 2i and i + n - sum(gamma) cannot agree for every i
    h = Hive.from_function(3, lambda i, j: float(i + j))
    for s in (0.0, 1.0, 3.0):
        with pytest.raises(ConsistencyError):
            pack_upper(h, h, s)


def test_lower_packing_checks_anti_diagonal():
    h = Hive.from_function(3, lambda i, j: float(i + j))
    with pytest.raises(ConsistencyError):
        pack_lower(h, h, 0.0)
    kp = Hive.from_function(3, lambda p, q: float(q))
    sq = pack_lower(h, kp, 2.0)
    d = np.arange(4)
    assert np.allclose(sq.values[d, 3 - d], (3 - d) - 2.0)


@given(pairs)
def test_lower_packing_round_trip(pair):
    g1, g2 = pair
    p = gt_pair_to_square(g1, g2)
    k, kp = unpack_lower(p.square, p.sum_gamma)
    assert np.max(np.abs(k.values - p.k.values)) < 1e-12 * (1 + np.max(np.abs(k.values)))
    assert np.max(np.abs(kp.values - p.kp.values)) < 1e-12 * (1 + np.max(np.abs(kp.values)))
    again = pack_lower(k, kp, p.sum_gamma)
    assert np.array_equal(again.values, p.square.values)


@given(st.integers(1, 7), st.integers(0, 2**32))
def test_upper_unpack_then_pack(n, seed):
    ht = random_square(n, RngStream(seed, 4))
    d = np.arange(n + 1)
    # force diagonal agreement h(i, i) = h'(i, n) - s, which pack_upper requires
    s = 1.5
    h, hp = unpack_upper(ht, s)
    assert np.allclose(h.dense()[d, d], hp.dense()[d, np.full(n + 1, n)] - s)
    assert np.allclose(pack_upper(h, hp, s).values, ht.values, rtol=0, atol=1e-12)


def test_constant_patterns_closed_form():
    # with constant rows the hives are gap partial sums plus i * c, affine in the pattern direction
    n, c1, c2, G = 5, 1.0, -2.0, 4.0
    g1 = GTPattern.from_rows([[c1] * k for k in range(1, n + 1)])
    g2 = GTPattern.from_rows([[c2] * k for k in range(1, n + 1)])
    p = gt_pair_to_square(g1, g2, G)
    gamma = staircase_gamma(n, G)
    part_gamma = np.concatenate([[0.0], np.cumsum(gamma)])
    part_sigma = np.concatenate([[0.0], np.cumsum(gamma + c1)])
    v, s = p.square.values, p.sum_gamma
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j <= n:
                assert v[i, j] == pytest.approx(part_gamma[n - i] + j * c1 - s)
            if i + j >= n:
                assert v[i, j] == pytest.approx(part_sigma[j] + (i + j - n) * c2 - s)
    # affine along one lattice direction in each region
    i, j = np.indices(v.shape)
    low = (i + j <= n)[:, :-2] & (i + j <= n)[:, 2:]
    assert np.allclose((v[:, 2:] - 2 * v[:, 1:-1] + v[:, :-2])[low], 0)
    up = (i + j >= n)[:-2] & (i + j >= n)[2:]
    assert np.allclose((v[2:] - 2 * v[1:-1] + v[:-2])[up], 0)


def test_gap_constant_precondition():
    g1, g2 = random_gt_pair(4, RngStream(2))
    with pytest.raises(PreconditionError):
        gt_pair_to_square(g1, g2, G=0.5 * (g1.spread() + g2.spread()))


def test_staircase_gamma():
    assert staircase_gamma(4, 2.0).tolist() == [6, 4, 2, 0]


@given(pairs)
def test_augmented_output_is_valid(pair):
    g1, g2 = pair
    aug = oct_map(g1, g2)
    assert check_rhombus_concave(aug.hive) == []
    lam, mu, nu = hive_boundary(aug.hive, tol=1e-8)
    assert abs(nu.entries.sum() - lam.entries.sum() - mu.entries.sum()) < 1e-8
    assert weyl_trace_check(lam, mu, nu).passed
    assert np.allclose(lam.entries, g1.top) and np.allclose(mu.entries, g2.top)
    assert np.allclose(aug.pattern.top, nu.entries, atol=1e-9)
    a = gt_boundary(aug.pattern)[1]
    assert np.allclose(a, gt_boundary(g1)[1] + gt_boundary(g2)[1], atol=1e-9)


def test_unpack_rejects_wrong_gap_sum():
    g1, g2 = random_gt_pair(3, RngStream(8))
    p = gt_pair_to_square(g1, g2)
    ht = excavate(p.square)
    with pytest.raises(ConsistencyError):
        unpack_to_augmented(ht, p.sum_gamma + 1.0)


def test_square_text_round_trip():
    sq = random_square(4, RngStream(3))
    back = loads_square(dumps_square(sq))
    assert back.n == 4 and np.array_equal(back.values, sq.values)
    with pytest.raises(ValueError):
        loads_square("n=2 kind=hive\n0\n0 0\n0 0 0\n")


def test_square_shape_checked():
    with pytest.raises(ValueError):
        SquareFunction(2, np.zeros((2, 2)))
