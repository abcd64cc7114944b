"""Packing pairs of hives into one function on the square {0..n}^2 and back.

Upper packing (h, h'): T = {i <= j} carries h, the opposite triangle
T' = {i >= j} carries h' shifted by -sum(gamma).  Lower packing (k, k'):
U = {i + j >= n} carries k, U' = {i + j <= n} carries k'; both shifted by
-sum(gamma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hive_gt import (
    AugmentedHive,
    GTPattern,
    Hive,
    PreconditionError,
    _gt_to_hive_unchecked,
    default_tol,
    gt_boundary,
    hive_to_gt,
)


class ConsistencyError(ValueError):
    pass


@dataclass
class SquareFunction:
    """Real values on {0..n}^2, indexed ``values[i, j]``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n + 1, self.n + 1):
            raise ValueError(f"expected shape {(self.n + 1, self.n + 1)}, got {self.values.shape}")

    def __getitem__(self, ij) -> float:
        return float(self.values[ij])

    def copy(self) -> "SquareFunction":
        return SquareFunction(self.n, self.values.copy())


def _check(a, b, what, tol):
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    if err > tol:
        raise ConsistencyError(f"{what} disagree by {err}")


def pack_upper(h: Hive, hp: Hive, sum_gamma: float, tol: float | None = None) -> SquareFunction:
    """h~(i,j) = h(i,j) on T and h'(j, n-i+j) - sum(gamma) on T'."""
    n = h.n
    if hp.n != n:
        raise ValueError("hives of different sides")
    dh, dp = h.dense(), hp.dense()
    out = np.empty((n + 1, n + 1))
    i, j = np.indices(out.shape)
    upper = i <= j
    out[upper] = dh[i[upper], j[upper]]
    low = ~upper
    out[low] = dp[j[low], n - i[low] + j[low]] - sum_gamma
    if tol is None:
        tol = default_tol(np.concatenate([h.values, hp.values]))
    d = np.arange(n + 1)
    _check(dh[d, d], dp[d, np.full(n + 1, n)] - sum_gamma, "diagonal values of h and h'", tol)
    return SquareFunction(n, out)


def pack_lower(k: Hive, kp: Hive, sum_gamma: float, tol: float | None = None) -> SquareFunction:
    """k~(i,j) = k(i+j-n, j) - sum(gamma) on U and k'(j, n-i) - sum(gamma) on U'."""
    n = k.n
    if kp.n != n:
        raise ValueError("hives of different sides")
    dk, dp = k.dense(), kp.dense()
    out = np.empty((n + 1, n + 1))
    i, j = np.indices(out.shape)
    up = i + j >= n
    out[up] = dk[i[up] + j[up] - n, j[up]] - sum_gamma
    low = ~up
    out[low] = dp[j[low], n - i[low]] - sum_gamma
    if tol is None:
        tol = default_tol(np.concatenate([k.values, kp.values]))
    d = np.arange(n + 1)
    _check(dk[0, d], dp[d, d], "anti-diagonal values of k and k'", tol)
    return SquareFunction(n, out)


def unpack_upper(ht: SquareFunction, sum_gamma: float) -> tuple[Hive, Hive]:
    """Inverse of :func:`pack_upper`."""
    n = ht.n
    v = ht.values
    h = Hive.from_function(n, lambda i, j: v[i, j])
    # h'(p, q) sits at (i, j) = (n - q + p, p)
    hp = Hive.from_function(n, lambda p, q: v[n - q + p, p] + sum_gamma)
    return h, hp


def unpack_lower(kt: SquareFunction, sum_gamma: float) -> tuple[Hive, Hive]:
    """Inverse of :func:`pack_lower`."""
    n = kt.n
    v = kt.values
    # k(p, q) sits at (i, j) = (n + p - q, q); k'(p, q) at (n - q, p)
    k = Hive.from_function(n, lambda p, q: v[n + p - q, q] + sum_gamma)
    kp = Hive.from_function(n, lambda p, q: v[n - q, p] + sum_gamma)
    return k, kp


def staircase_gamma(n: int, G: float) -> np.ndarray:
    """gamma_i = G (n - i), i = 1..n: every consecutive gap equals G."""
    return G * (n - np.arange(1, n + 1, dtype=float))


def default_gap_constant(g1: GTPattern, g2: GTPattern) -> float:
    return g1.spread() + g2.spread() + 1.0


@dataclass
class PackedPair:
    square: SquareFunction
    gamma: np.ndarray
    k: Hive  # from g2, boundary sigma [+] mu -> pi
    kp: Hive  # from g1, boundary gamma [+] lambda -> sigma

    @property
    def sum_gamma(self) -> float:
        return float(self.gamma.sum())


def gt_pair_to_square(g1: GTPattern, g2: GTPattern, G: float | None = None) -> PackedPair:
    """Embed (g1, g2) as the hive pair (k', k) with a staircase gap tuple and pack it.

    g1 (spectrum lambda, diagonal b) becomes k' with boundary gamma [+] lambda -> sigma,
    sigma = gamma + b; g2 (spectrum mu) becomes k with boundary sigma [+] mu -> pi.
    """
    n = g1.n
    if g2.n != n:
        raise ValueError("patterns of different sizes")
    if G is None:
        G = default_gap_constant(g1, g2)
    if n > 1 and not G > g1.spread() + g2.spread():
        raise PreconditionError(f"gap constant {G} must exceed {g1.spread() + g2.spread()}")
    gamma = staircase_gamma(n, G)
    _, b = gt_boundary(g1)
    sigma = gamma + b
    kp = _gt_to_hive_unchecked(g1, gamma)
    k = _gt_to_hive_unchecked(g2, sigma)
    sq = pack_lower(k, kp, float(gamma.sum()))
    return PackedPair(sq, gamma, k, kp)


def unpack_to_augmented(ht: SquareFunction, sum_gamma: float, tol: float | None = None) -> AugmentedHive:
    """Split h~ into the hive h on T and the GT pattern encoded by h' on T'.

    The gap tuple is recovered from the bottom edge of the square, where
    h~(n - q, 0) + sum(gamma) = gamma_1 + ... + gamma_q.
    """
    n = ht.n
    v = ht.values
    if tol is None:
        tol = default_tol(v) + 1e-9 * abs(sum_gamma)
    if abs(v[n, 0] + sum_gamma) > tol:
        raise ConsistencyError(f"h~(n, 0) = {v[n, 0]} but sum(gamma) = {sum_gamma}")
    h, hp = unpack_upper(ht, sum_gamma)
    partial = np.array([v[n - q, 0] + sum_gamma for q in range(n + 1)])
    gamma = np.diff(partial)
    try:
        pattern = hive_to_gt(hp, gamma, tol=tol)
    except PreconditionError as e:
        raise ConsistencyError(str(e)) from e
    return AugmentedHive(h, pattern)


def dumps_square(f: SquareFunction) -> str:
    """Header ``n=<n> kind=square``, then row i holds f(i, 0), ..., f(i, n)."""
    lines = [f"n={f.n} kind=square"]
    lines += [" ".join(format(float(v), ".17g") for v in row) for row in f.values]
    return "\n".join(lines) + "\n"


def loads_square(text: str) -> SquareFunction:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    if header.get("kind") != "square":
        raise ValueError(f"expected kind=square, got {header.get('kind')!r}")
    n = int(header["n"])
    vals = np.array([ln.split() for ln in lines[1:]], dtype=float)
    return SquareFunction(n, vals)
