"""Ordered spectra and the scalar identities they satisfy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

# Above this length the Vandermonde product is accumulated in log form.
EXACT_VANDERMONDE_MAX_N = 30


@dataclass(frozen=True)
class SpecTuple:
    """A non-increasing real vector x_1 >= ... >= x_n (an eigenvalue list)."""

    entries: np.ndarray
    tol: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.entries, dtype=float).reshape(-1)
        if x.size == 0:
            raise ValueError("a spectrum needs at least one entry")
        if np.any(np.diff(x) > self.tol):
            raise ValueError(f"entries are not non-increasing: {x}")
        object.__setattr__(self, "entries", x)

    @property
    def n(self) -> int:
        return self.entries.size

    def is_strict(self) -> bool:
        """True when every inequality is strict (the open cone)."""
        return bool(np.all(np.diff(self.entries) < 0))

    def spread(self) -> float:
        return float(self.entries[0] - self.entries[-1])

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]


def as_array(x) -> np.ndarray:
    if isinstance(x, SpecTuple):
        return x.entries
    return np.asarray(x, dtype=float).reshape(-1)


def staircase(n: int) -> SpecTuple:
    """The tuple (n, n-1, ..., 1)."""
    return SpecTuple(np.arange(n, 0, -1, dtype=float))


def log_vandermonde(x) -> tuple[float, float]:
    """Return (sign, log|V(x)|) with V(x) = prod_{i<j} (x_i - x_j)."""
    x = as_array(x)
    i, j = np.triu_indices(x.size, k=1)
    d = x[i] - x[j]
    if np.any(d == 0):
        return 0.0, -math.inf
    sign = -1.0 if np.count_nonzero(d < 0) % 2 else 1.0
    return sign, float(np.sum(np.log(np.abs(d))))


def vandermonde(x) -> float:
    """prod_{i<j} (x_i - x_j).

    Integer input of length <= 30 is multiplied exactly; longer input goes
    through :func:`log_vandermonde` and may overflow to inf.
    """
    xs = list(x.entries) if isinstance(x, SpecTuple) else list(x)
    if len(xs) > EXACT_VANDERMONDE_MAX_N:
        sign, logabs = log_vandermonde(xs)
        return sign * math.exp(logabs) if sign else 0.0
    return math.prod(xs[i] - xs[j] for i in range(len(xs)) for j in range(i + 1, len(xs)))


def semicircle_cdf(x: float) -> float:
    x = min(max(x, -2.0), 2.0)
    return 0.5 + (x * math.sqrt(4.0 - x * x) + 4.0 * math.asin(x / 2.0)) / (4.0 * math.pi)


def semicircle_quantile(n: int, i: int, xtol: float = 1e-12) -> float:
    """Classical location: the gamma with semicircle mass i/n to its left."""
    if not 0 <= i <= n:
        raise ValueError(f"index {i} outside 0..{n}")
    if i == 0:
        return -2.0
    if i == n:
        return 2.0
    p = i / n
    # the CDF is flat at the endpoints, so Newton is a poor fit there
    return bisect(lambda g: semicircle_cdf(g) - p, -2.0, 2.0, xtol=xtol, rtol=4 * np.finfo(float).eps)


def semicircle_cdf_array(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, -2.0, 2.0)
    return 0.5 + (x * np.sqrt(4.0 - x * x) + 4.0 * np.arcsin(x / 2.0)) / (4.0 * np.pi)


def semicircle_quantiles(n: int) -> np.ndarray:
    """Classical locations for i = 1..n (increasing), by vectorized bisection."""
    p = np.arange(1, n + 1) / n
    lo, hi = np.full(n, -2.0), np.full(n, 2.0)
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = semicircle_cdf_array(mid) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out[-1] = 2.0
    return out


@dataclass
class WeylTraceReport:
    trace_ok: bool
    weyl_ok: bool
    trace_residual: float
    violations: list = field(default_factory=list)  # (i, j, excess), 1-based

    @property
    def passed(self) -> bool:
        return self.trace_ok and self.weyl_ok


def weyl_trace_check(lam, mu, nu, trace_tol: float = 1e-8, weyl_tol: float = 1e-9) -> WeylTraceReport:
    """Necessary conditions for lam [+] mu -> nu: the trace identity and Weyl's inequalities.

    The trace tolerance is relative: ``trace_tol * n * max(1, max |entry|)``.
    """
    lam, mu, nu = as_array(lam), as_array(mu), as_array(nu)
    n = lam.size
    if mu.size != n or nu.size != n:
        raise ValueError(f"length mismatch: {lam.size}, {mu.size}, {nu.size}")
    scale = max(1.0, float(np.max(np.abs(np.concatenate([lam, mu, nu])))))
    resid = float(nu.sum() - lam.sum() - mu.sum())
    trace_ok = abs(resid) <= trace_tol * n * scale

    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ok = i + j < n
    excess = nu[(i + j)[ok]] - lam[i[ok]] - mu[j[ok]]
    bad = excess > weyl_tol
    violations = [(int(a) + 1, int(b) + 1, float(e)) for a, b, e in zip(i[ok][bad], j[ok][bad], excess[bad])]
    return WeylTraceReport(trace_ok, not violations, resid, violations)


def majorization_check(lam, a, trace_tol: float = 1e-8, tol: float = 1e-9) -> bool:
    """Schur-Horn test: is ``a`` a possible diagonal of a Hermitian matrix with spectrum ``lam``?"""
    lam, a = as_array(lam), as_array(a)
    if lam.size != a.size:
        raise ValueError(f"length mismatch: {lam.size} vs {a.size}")
    if abs(a.sum() - lam.sum()) > trace_tol:
        return False
    # the worst k-subset of a is its k largest entries
    prefix_a = np.cumsum(np.sort(a)[::-1])
    prefix_l = np.cumsum(np.sort(lam)[::-1])
    return bool(np.all(prefix_a <= prefix_l + tol))
