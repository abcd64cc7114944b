"""Exact gap moments of the (n-1)-minor spectrum of a Haar-isospectral matrix.

For a strict spectrum lam_1 > ... > lam_n, the minor eigenvalues x_1 > ... >
x_{n-1} satisfy x_i in I_i = [lam_{i+1}, lam_i] and form a determinantal
process.  With Q_j the degree n-1 interpolant of Q_j(lam_i) = [i <= j]:

    E(lam_i - x_i)               = int_{I_i} Q_i
    cov(lam_i - x_i, lam_j - x_j) = int_{I_i} (1 - Q_j) * int_{I_j} Q_i     (i < j)
    K(x, y)                      = sum_j 1_{I_j}(x) Q_j'(y)

Q_j is evaluated in barycentric form; integrals use Gauss-Legendre rules of
sufficient order to be exact for polynomials of degree n - 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product

import numpy as np

from .rmt import RngStream, eigvals_batch, haar_isospectral
from .spectra import as_array, vandermonde

# barycentric weights lose accuracy quickly past this length
PRACTICAL_MAX_N = 64


def _strict(lam) -> np.ndarray:
    lam = as_array(lam)
    if lam.size < 2:
        raise ValueError("need at least two eigenvalues")
    if np.any(np.diff(lam) >= 0):
        raise ValueError(f"spectrum must be strictly decreasing: {lam}")
    if lam.size > PRACTICAL_MAX_N:
        warnings.warn(
            f"n={lam.size} exceeds {PRACTICAL_MAX_N}; barycentric weights may be badly conditioned",
            RuntimeWarning,
            stacklevel=3,
        )
    return lam


@dataclass(frozen=True)
class GapInterval:
    index: int  # 1-based
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo


def gap_intervals(lam) -> list[GapInterval]:
    lam = _strict(lam)
    return [GapInterval(j + 1, float(lam[j + 1]), float(lam[j])) for j in range(lam.size - 1)]


def barycentric_weights(lam) -> np.ndarray:
    """w_i = 1 / prod_{l != i} (lam_i - lam_l)."""
    lam = as_array(lam)
    d = lam[:, None] - lam[None, :]
    np.fill_diagonal(d, 1.0)
    return 1.0 / np.prod(d, axis=1)


@dataclass(frozen=True)
class InterpolantQ:
    """Q_j with Q_j(lam_i) = 1 for i <= j and 0 otherwise."""

    lam: np.ndarray
    level: int

    def __post_init__(self):
        lam = _strict(self.lam)
        if not 1 <= self.level <= lam.size:
            raise ValueError(f"level {self.level} outside 1..{lam.size}")
        object.__setattr__(self, "lam", lam)

    @property
    def weights(self) -> np.ndarray:
        return barycentric_weights(self.lam)

    @property
    def node_values(self) -> np.ndarray:
        return (np.arange(1, self.lam.size + 1) <= self.level).astype(float)

    def __call__(self, x):
        return _bary_eval(self.lam, self.weights, self.node_values, x)

    def derivative(self, x):
        return _bary_deriv(self.lam, self.weights, self.node_values, x)


def _bary_eval(lam, w, f, x):
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    diff = flat[:, None] - lam[None, :]
    hit = diff == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = w[None, :] / diff
        out = (t @ f) / t.sum(axis=1)
    rows, cols = np.nonzero(hit)
    out[rows] = f[cols]
    return out.reshape(x.shape) if x.ndim else float(out[0])


def _bary_deriv(lam, w, f, x):
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1)
    diff = flat[:, None] - lam[None, :]
    hit = diff == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = w[None, :] / diff
        # p(x) - f_i = sum_j t_j (f_j - f_i) / sum_j t_j; the j = i term is exactly zero,
        # so near a node the huge t_i never meets a cancelling difference
        s = t @ (f[:, None] - f[None, :])
        total = t.sum(axis=1)
        out = np.sum(t * s / diff, axis=1) / (total * total)
    rows, cols = np.nonzero(hit)
    for r, k in zip(rows, cols):
        # differentiation-matrix row at the node lam_k
        others = np.arange(lam.size) != k
        out[r] = np.sum(w[others] / w[k] * (f[others] - f[k]) / (lam[k] - lam[others]))
    return out.reshape(x.shape) if x.ndim else float(out[0])


def q_eval(lam, j: int, x):
    return InterpolantQ(as_array(lam), j)(x)


def q_deriv(lam, j: int, x):
    return InterpolantQ(as_array(lam), j).derivative(x)


def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [-1, 1] exact to degree n - 1 (ceil(n/2) + 1 nodes)."""
    return np.polynomial.legendre.leggauss(math.ceil(n / 2) + 1)


def _integrate(fn, lo: float, hi: float, n: int) -> float:
    t, wt = _gauss(n)
    half = 0.5 * (hi - lo)
    return float(half * np.sum(wt * fn(lo + half * (t + 1.0))))


def _q_integral(lam: np.ndarray, level: int, interval: int) -> float:
    """int_{I_interval} Q_level."""
    q = InterpolantQ(lam, level)
    return _integrate(q, lam[interval], lam[interval - 1], lam.size)


def expected_gap(lam, i: int) -> float:
    """E(lam_i - x_i)."""
    lam = _strict(lam)
    if not 1 <= i <= lam.size - 1:
        raise ValueError(f"gap index {i} outside 1..{lam.size - 1}")
    return _q_integral(lam, i, i)


def expected_gaps(lam) -> np.ndarray:
    lam = _strict(lam)
    return np.array([expected_gap(lam, i) for i in range(1, lam.size)])


def gap_covariance(lam, i: int, j: int) -> float:
    """cov(lam_i - x_i, lam_j - x_j) for 1 <= i < j <= n - 1."""
    lam = _strict(lam)
    if not 1 <= i < j <= lam.size - 1:
        raise ValueError(f"need 1 <= i < j <= {lam.size - 1}, got i={i}, j={j}")
    length = lam[i - 1] - lam[i]
    return (length - _q_integral(lam, j, i)) * _q_integral(lam, i, j)


def kernel_eval(lam, x, y):
    """K(x, y) = sum_j 1_{I_j}(x) Q_j'(y), with I_j = [lam_{j+1}, lam_j) and I_1 closed."""
    lam = _strict(lam)
    x = float(x)
    if x > lam[0] or x < lam[-1]:
        return np.zeros_like(np.asarray(y, dtype=float)) if np.ndim(y) else 0.0
    # x in [lam_{j+1}, lam_j) exactly when j eigenvalues exceed x
    j = max(1, int(np.searchsorted(-lam, -x, side="left")))
    return q_deriv(lam, j, y)


def kernel_trace(lam) -> float:
    """int K(y, y) dy, piecewise over the gap intervals."""
    lam = _strict(lam)
    total = 0.0
    for iv in gap_intervals(lam):
        total += _integrate(lambda y: q_deriv(lam, iv.index, y), iv.lo, iv.hi, lam.size)
    return total


# ---- direct-density oracle ----------------------------------------------------

def minor_density(lam, x) -> float:
    """(n-1)! V_{n-1}(x) / V_n(lam) for interlacing x, zero otherwise."""
    lam = _strict(lam)
    x = as_array(x)
    n = lam.size
    if x.size != n - 1:
        raise ValueError(f"expected {n - 1} minor eigenvalues")
    if np.any(x > lam[:-1]) or np.any(x < lam[1:]):
        return 0.0
    return math.factorial(n - 1) * vandermonde(x) / vandermonde(lam)


def density_gap_moments(lam, nodes: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Means and covariance of the gaps by tensor Gauss quadrature of the density.

    Independent of the interpolant formulas; practical for n <= 5.
    """
    lam = _strict(lam)
    n = lam.size
    m = nodes or n + 1
    t, wt = np.polynomial.legendre.leggauss(m)
    pts, wts = [], []
    for k in range(n - 1):
        lo, hi = lam[k + 1], lam[k]
        pts.append(lo + 0.5 * (hi - lo) * (t + 1))
        wts.append(0.5 * (hi - lo) * wt)
    grid = np.array(list(product(*pts)))
    weights = np.prod(np.array(list(product(*wts))), axis=1)
    ii, jj = np.triu_indices(n - 1, 1)
    vand = np.prod(grid[:, ii] - grid[:, jj], axis=1) if ii.size else np.ones(len(grid))
    dens = math.factorial(n - 1) * vand / vandermonde(lam)
    w = weights * dens
    gaps = lam[None, :-1] - grid
    mean = w @ gaps
    second = (gaps * w[:, None]).T @ gaps
    return mean, second - np.outer(mean, mean)


# ---- Monte Carlo oracle ---------------------------------------------------------

@dataclass(frozen=True)
class GapMoments:
    means: np.ndarray  # (n-1,)
    cov: np.ndarray  # (n-1, n-1)
    se_means: np.ndarray
    se_cov: np.ndarray
    trials: int


def sample_minor_gaps(lam, N: int, rng: RngStream, start: int = 0) -> np.ndarray:
    """(N, n-1) array of lam_i - x_i; trial t draws from stream (seed, start + t)."""
    lam = as_array(lam)
    n = lam.size
    mats = np.stack([haar_isospectral(lam, rng.child(start + t)) for t in range(N)])
    if n == 2:
        x = np.real(mats[:, :1, 0])
    else:
        x = eigvals_batch(mats[:, : n - 1, : n - 1])
    return lam[None, :-1] - x


def _moments(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mu = g.mean(axis=0)
    d = g - mu
    return mu, d.T @ d / max(len(g) - 1, 1)


def jackknife_moments(g: np.ndarray, blocks: int = 100) -> GapMoments:
    """Block-jackknife standard errors for the gap means and covariances.

    With fewer than two samples left in a replicate its covariance is taken as 0.
    """
    N = len(g)
    if N < 2:
        raise ValueError("need at least two samples")
    mu, cov = _moments(g)
    b = min(blocks, N)
    edges = np.linspace(0, N, b + 1).astype(int)
    reps_mu, reps_cov = [], []
    for k in range(b):
        keep = np.ones(N, dtype=bool)
        keep[edges[k] : edges[k + 1]] = False
        m, c = _moments(g[keep])
        reps_mu.append(m)
        reps_cov.append(c)
    reps_mu, reps_cov = np.array(reps_mu), np.array(reps_cov)
    B = len(reps_mu)
    se_mu = np.sqrt((B - 1) / B * np.sum((reps_mu - reps_mu.mean(0)) ** 2, axis=0))
    se_cov = np.sqrt((B - 1) / B * np.sum((reps_cov - reps_cov.mean(0)) ** 2, axis=0))
    return GapMoments(mu, cov, se_mu, se_cov, N)


def mc_gap_moments(lam, N: int, rng: RngStream, blocks: int = 100, chunk: int = 20000) -> GapMoments:
    """Monte Carlo gap moments from Haar-isospectral samples, in trial-indexed chunks."""
    if N < 2:
        raise ValueError("need N >= 2")
    parts = [sample_minor_gaps(lam, min(chunk, N - s), rng, start=s) for s in range(0, N, chunk)]
    return jackknife_moments(np.concatenate(parts), blocks)
