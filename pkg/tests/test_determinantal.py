import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hivelab.determinantal import (
    PRACTICAL_MAX_N,
    InterpolantQ,
    density_gap_moments,
    expected_gap,
    expected_gaps,
    gap_covariance,
    gap_intervals,
    jackknife_moments,
    kernel_eval,
    kernel_trace,
    mc_gap_moments,
    q_deriv,
    q_eval,
)
from hivelab.rmt import RngStream


@st.composite
def strict_spectra(draw, min_size=2, max_size=6):
    n = draw(st.integers(min_size, max_size))
    gaps = draw(st.lists(st.floats(0.2, 3.0), min_size=n - 1, max_size=n - 1))
    top = draw(st.floats(-5, 5))
    return top - np.concatenate([[0.0], np.cumsum(gaps)])


def test_q_examples():
    assert q_eval([1.0, 0.0], 1, 0.25) == pytest.approx(0.25)
    lam = [2.0, 1.0, 0.0]
    for x in (-1.3, 0.4, 1.7, 3.0):
        assert q_eval(lam, 1, x) == pytest.approx(x * (x - 1) / 2)
        assert q_deriv(lam, 1, x) == pytest.approx(x - 0.5)
    assert [q_eval(lam, 1, x) for x in lam] == [1, 0, 0]


@given(strict_spectra())
def test_q_node_values_and_top_level(lam):
    n = lam.size
    for j in range(1, n + 1):
        q = InterpolantQ(lam, j)
        assert np.allclose(q(lam), (np.arange(1, n + 1) <= j), atol=1e-10)
    xs = np.linspace(lam[-1] - 1, lam[0] + 1, 7)
    assert np.allclose(InterpolantQ(lam, n)(xs), 1.0, atol=1e-9)
    assert np.allclose(InterpolantQ(lam, n).derivative(xs), 0.0, atol=1e-8)


@given(strict_spectra(max_size=5))
def test_q_derivative_matches_finite_difference(lam):
    x = np.array([lam[-1] - 0.3, 0.5 * (lam[0] + lam[-1]) + 0.0123, lam[1] if lam.size > 2 else lam[0]])
    h = 1e-6
    for j in range(1, lam.size):
        fd = (q_eval(lam, j, x + h) - q_eval(lam, j, x - h)) / (2 * h)
        assert np.allclose(q_deriv(lam, j, x), fd, rtol=1e-5, atol=1e-5)


def test_interpolant_errors():
    with pytest.raises(ValueError):
        InterpolantQ(np.array([1.0, 1.0]), 1)
    with pytest.raises(ValueError):
        InterpolantQ(np.array([2.0, 1.0]), 3)
    with pytest.warns(RuntimeWarning):
        gap_intervals(np.arange(PRACTICAL_MAX_N + 1, 0, -1.0))


def test_expected_gap_examples():
    assert expected_gap([1.0, 0.0], 1) == pytest.approx(0.5, abs=1e-14)
    assert expected_gap([2.0, 1.0, 0.0], 1) == pytest.approx(5 / 12, abs=1e-14)
    assert expected_gap([2.0, 1.0, 0.0], 2) == pytest.approx(1 - 5 / 12, abs=1e-14)


def test_covariance_example():
    assert gap_covariance([2.0, 1.0, 0.0], 1, 2) == pytest.approx(1 / 144, abs=1e-14)


def test_index_errors():
    with pytest.raises(ValueError):
        expected_gap([2.0, 1.0, 0.0], 3)
    with pytest.raises(ValueError):
        gap_covariance([2.0, 1.0, 0.0], 2, 1)
    with pytest.raises(ValueError):
        gap_covariance([3.0, 2.0, 1.0, 0.0], 1, 1)
    with pytest.raises(ValueError):
        expected_gap([1.0], 1)


@given(strict_spectra(), st.floats(-10, 10))
def test_translation_invariance(lam, c):
    assert np.allclose(expected_gaps(lam + c), expected_gaps(lam), atol=1e-9)


@given(strict_spectra(min_size=3), st.floats(0.1, 10))
def test_scaling(lam, t):
    n = lam.size
    for i in range(1, n - 1):
        for j in range(i + 1, n):
            a = gap_covariance(t * lam, i, j)
            assert a == pytest.approx(t * t * gap_covariance(lam, i, j), rel=1e-8, abs=1e-12)
    assert np.allclose(expected_gaps(t * lam), t * expected_gaps(lam), rtol=1e-9)


@given(strict_spectra())
def test_sum_of_gaps_identity(lam):
    n = lam.size
    expected = lam[:-1].sum() - (n - 1) / n * lam.sum()
    assert expected_gaps(lam).sum() == pytest.approx(expected, abs=1e-9 * (1 + np.abs(lam).max()))


@given(strict_spectra())
def test_gaps_lie_in_their_intervals(lam):
    g = expected_gaps(lam)
    widths = lam[:-1] - lam[1:]
    assert np.all(g >= -1e-12) and np.all(g <= widths + 1e-12)


@pytest.mark.parametrize(
    "lam",
    [[2.0, 1.0, 0.0], [3.0, 1.0, 0.5], [4.0, 2.5, 1.0, -1.0], [2.0, 0.0, -0.5, -3.0, -3.5]],
)
def test_formulas_match_density_quadrature(lam):
    lam = np.array(lam)
    means, cov = density_gap_moments(lam)
    assert np.allclose(expected_gaps(lam), means, atol=1e-12)
    n = lam.size
    for i in range(1, n - 1):
        for j in range(i + 1, n):
            assert gap_covariance(lam, i, j) == pytest.approx(cov[i - 1, j - 1], abs=1e-12)


def test_kernel_reproduces():
    lam = np.array([2.0, 1.0, 0.0])
    t, w = np.polynomial.legendre.leggauss(12)
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, z = rng.uniform(0, 2, size=2)
        total = 0.0
        for iv in gap_intervals(lam):
            ys = iv.lo + 0.5 * iv.length * (t + 1)
            kyz = np.array([kernel_eval(lam, y, z) for y in ys])
            total += 0.5 * iv.length * np.sum(w * kernel_eval(lam, x, ys) * kyz)
        assert abs(total - kernel_eval(lam, x, z)) < 1e-8


@given(strict_spectra())
def test_kernel_trace_is_minor_size(lam):
    assert kernel_trace(lam) == pytest.approx(lam.size - 1, abs=1e-9)


def test_kernel_vanishes_outside_support():
    lam = [2.0, 1.0, 0.0]
    assert kernel_eval(lam, 2.5, 0.3) == 0
    assert kernel_eval(lam, -0.1, 0.3) == 0
    assert np.all(kernel_eval(lam, 3.0, np.array([0.1, 0.2])) == 0)
    # intervals are half-open at the bottom except the top one
    assert kernel_eval(lam, 1.0, 0.3) == pytest.approx(q_deriv(lam, 1, 0.3))
    assert kernel_eval(lam, 2.0, 0.3) == pytest.approx(q_deriv(lam, 1, 0.3))
    assert kernel_eval(lam, 0.0, 0.3) == pytest.approx(q_deriv(lam, 2, 0.3))


def test_jackknife_of_iid_normals():
    g = np.random.default_rng(1).normal(size=(20_000, 2))
    m = jackknife_moments(g, blocks=50)
    assert m.se_means == pytest.approx([1 / math.sqrt(20_000)] * 2, rel=0.3)


def test_mc_smoke():
    m = mc_gap_moments([1.0, 0.0], 2, RngStream(0), blocks=2)
    assert np.all(np.isfinite(m.means)) and np.all(m.se_means > 0)
    with pytest.raises(ValueError):
        mc_gap_moments([1.0, 0.0], 1, RngStream(0))


def test_mc_is_chunk_independent():
    lam = [2.0, 1.0, 0.0]
    a = mc_gap_moments(lam, 300, RngStream(5), chunk=300)
    b = mc_gap_moments(lam, 300, RngStream(5), chunk=70)
    assert np.array_equal(a.means, b.means) and np.array_equal(a.cov, b.cov)


@pytest.mark.slow
@pytest.mark.parametrize(
    "lam",
    [[3.0, 1.0, 0.5], [4.0, 2.5, 1.0, -1.0], [2.0, 0.0, -0.5, -3.0, -3.5]],
)
def test_mc_agrees_with_exact_moments(lam):
    lam = np.array(lam)
    n = lam.size
    m = mc_gap_moments(lam, 20_000, RngStream(8, n))
    assert np.all(np.abs(m.means - expected_gaps(lam)) <= 4 * m.se_means)
    for i in range(1, n - 1):
        for j in range(i + 1, n):
            assert abs(m.cov[i - 1, j - 1] - gap_covariance(lam, i, j)) <= 4 * m.se_cov[i - 1, j - 1]


def test_q_derivative_next_to_a_node():
    # x a rounding error away from a node must not lose the derivative to cancellation
    lam = 2.0 - np.concatenate([[0.0], np.cumsum([0.2] * 4)])
    x = np.array([1.6, np.nextafter(lam[2], 3.0), np.nextafter(lam[2], 0.0)])
    assert np.allclose(InterpolantQ(lam, 5).derivative(x), 0.0, atol=1e-9)
    assert q_deriv([2.0, 1.0, 0.0], 1, np.nextafter(1.0, 2.0)) == pytest.approx(0.5, abs=1e-12)
