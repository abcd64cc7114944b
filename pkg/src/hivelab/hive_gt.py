"""Hives on the triangle T, Gelfand-Tsetlin patterns, and the embedding between them.

Hive values live on T = {(i, j) : 0 <= i <= j <= n}, stored row-major by j
with (i, j) -> j(j+1)/2 + i.  GT entries lambda_{j,k} (1 <= j <= k <= n)
are stored row-major by k with (j, k) -> k(k-1)/2 + (j-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .spectra import SpecTuple, as_array


class InvalidHiveError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def default_tol(values) -> float:
    """Scale-aware slack; hive entries grow like n^2."""
    v = np.asarray(values, dtype=float)
    return 1e-9 * (1.0 + (float(np.nanmax(np.abs(v))) if v.size else 0.0))


def tri_index(i: int, j: int) -> int:
    return j * (j + 1) // 2 + i


class Hive:
    """Real values on T. Concavity is checked on demand, not at construction."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values):
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != (n + 1) * (n + 2) // 2:
            raise ValueError(f"a hive of side {n} has {(n + 1) * (n + 2) // 2} values, got {values.size}")
        self.n = n
        self.values = values

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int], float]) -> "Hive":
        return cls(n, [f(i, j) for j in range(n + 1) for i in range(j + 1)])

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "Hive":
        n = dense.shape[0] - 1
        j, i = _tri_coords(n)
        return cls(n, dense[i, j])

    def __getitem__(self, ij) -> float:
        i, j = ij
        if not 0 <= i <= j <= self.n:
            raise IndexError(f"{ij} not in T for n={self.n}")
        return float(self.values[tri_index(i, j)])

    def dense(self) -> np.ndarray:
        """(n+1) x (n+1) array with D[i, j] = h(i, j) on T and NaN elsewhere."""
        d = np.full((self.n + 1, self.n + 1), np.nan)
        j, i = _tri_coords(self.n)
        d[i, j] = self.values
        return d

    def __repr__(self):
        return f"Hive(n={self.n})"


def _tri_coords(n: int):
    j = np.repeat(np.arange(n + 1), np.arange(1, n + 2))
    i = np.concatenate([np.arange(k + 1) for k in range(n + 1)])
    return j, i


class GTPattern:
    """Triangular array lambda_{j,k}, 1 <= j <= k <= n; row k is the spectrum of the k-th minor."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries, validate: bool = True, tol: float | None = None):
        entries = np.asarray(entries, dtype=float).reshape(-1)
        if entries.size != n * (n + 1) // 2:
            raise ValueError(f"a GT pattern of size {n} has {n * (n + 1) // 2} entries, got {entries.size}")
        self.n = n
        self.entries = entries
        if validate:
            bad = interlacing_violations(self, tol)
            if bad:
                raise ValueError(f"pattern does not interlace, e.g. at {bad[0]}")

    @classmethod
    def from_rows(cls, rows, **kw) -> "GTPattern":
        rows = [np.asarray(r, dtype=float).reshape(-1) for r in rows]
        for k, r in enumerate(rows, start=1):
            if r.size != k:
                raise ValueError(f"row {k} must have {k} entries, got {r.size}")
        return cls(len(rows), np.concatenate(rows), **kw)

    def row(self, k: int) -> np.ndarray:
        """Row k (1-based), entries lambda_{1,k} >= ... >= lambda_{k,k}."""
        s = k * (k - 1) // 2
        return self.entries[s : s + k]

    def rows(self) -> list[np.ndarray]:
        return [self.row(k) for k in range(1, self.n + 1)]

    def __getitem__(self, jk) -> float:
        j, k = jk
        if not 1 <= j <= k <= self.n:
            raise IndexError(f"{jk} outside the pattern")
        return float(self.entries[k * (k - 1) // 2 + j - 1])

    @property
    def top(self) -> np.ndarray:
        return self.row(self.n)

    def spread(self) -> float:
        t = self.top
        return float(t[0] - t[-1])

    def dense(self) -> np.ndarray:
        """(n+1) x (n+1) array with D[j, k] = lambda_{j,k} and NaN elsewhere."""
        d = np.full((self.n + 1, self.n + 1), np.nan)
        for k in range(1, self.n + 1):
            d[1 : k + 1, k] = self.row(k)
        return d

    def __repr__(self):
        return f"GTPattern(n={self.n})"


def interlacing_violations(g: GTPattern, tol: float | None = None) -> list[tuple[int, int, float]]:
    """Entries (j, k, excess) where lambda_{j,k+1} >= lambda_{j,k} >= lambda_{j+1,k+1} fails."""
    if tol is None:
        tol = default_tol(g.entries)
    out = []
    for k in range(1, g.n):
        lo, hi = g.row(k), g.row(k + 1)
        above = lo - hi[:-1]
        below = hi[1:] - lo
        for j in range(k):
            e = max(above[j], below[j])
            if e > tol:
                out.append((j + 1, k, float(e)))
    return out


@dataclass(frozen=True)
class GapTuple:
    """A spectrum Lambda whose consecutive gaps all exceed ``spread_bound``."""

    entries: SpecTuple
    spread_bound: float

    def __post_init__(self):
        if not isinstance(self.entries, SpecTuple):
            object.__setattr__(self, "entries", SpecTuple(self.entries))
        if self.min_gap <= self.spread_bound:
            raise PreconditionError(f"min gap {self.min_gap} does not exceed {self.spread_bound}")

    @property
    def min_gap(self) -> float:
        e = self.entries.entries
        return float(np.min(-np.diff(e))) if e.size > 1 else np.inf


@dataclass(frozen=True)
class AugmentedHive:
    hive: Hive
    pattern: GTPattern

    def __post_init__(self):
        nu = np.diff(np.array([self.hive[i, i] for i in range(self.hive.n + 1)]))
        top = self.pattern.top
        if np.max(np.abs(nu - top)) > default_tol(self.hive.values):
            raise ValueError("pattern top row differs from the hive's nu-boundary")


class RhombusViolation(NamedTuple):
    kind: str  # "i", "ii" or "iii"
    A: tuple[int, int]
    excess: float


# (A, B, C, D) offsets from the anchor; concavity is h(A) + h(C) <= h(B) + h(D)
RHOMBI = {
    "i": ((0, 0), (1, 0), (2, 1), (1, 1)),
    "ii": ((0, 0), (1, 1), (1, 2), (0, 1)),
    "iii": ((0, 0), (0, -1), (1, -1), (1, 0)),
}


def rhombus_slacks(h: Hive) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """For each rhombus type: (anchors, slack h(B)+h(D)-h(A)-h(C)) over rhombi inside T."""
    d = h.dense()
    n = h.n
    ii, jj = np.meshgrid(np.arange(-2, n + 3), np.arange(-2, n + 3), indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    out = {}
    for kind, offs in RHOMBI.items():
        pts = [(ii + a, jj + b) for a, b in offs]
        inside = np.ones_like(ii, dtype=bool)
        for pi, pj in pts:
            inside &= (0 <= pi) & (pi <= pj) & (pj <= n)
        vals = [d[pi[inside], pj[inside]] for pi, pj in pts]
        slack = vals[1] + vals[3] - vals[0] - vals[2]
        out[kind] = (np.stack([ii[inside], jj[inside]], axis=1), slack)
    return out


def check_rhombus_concave(h: Hive, tol: float | None = None) -> list[RhombusViolation]:
    if tol is None:
        tol = default_tol(h.values)
    bad = []
    for kind, (anchors, slack) in rhombus_slacks(h).items():
        for (i, j), s in zip(anchors, slack):
            if s < -tol:
                bad.append(RhombusViolation(kind, (int(i), int(j)), float(-s)))
    return bad


def hive_boundary(h: Hive, tol: float | None = None) -> tuple[SpecTuple, SpecTuple, SpecTuple]:
    """Boundary tuples (lambda, mu, nu) read off the three edges of T."""
    if tol is None:
        tol = default_tol(h.values)
    n = h.n
    lam = np.diff([h[0, i] for i in range(n + 1)])
    mu = np.diff([h[i, n] for i in range(n + 1)])
    nu = np.diff([h[i, i] for i in range(n + 1)])
    out = []
    for name, t in (("lambda", lam), ("mu", mu), ("nu", nu)):
        try:
            out.append(SpecTuple(t, tol=tol))
        except ValueError as e:
            raise InvalidHiveError(f"{name}-boundary is not non-increasing: {t}") from e
    return tuple(out)


def gt_boundary(g: GTPattern) -> tuple[SpecTuple, np.ndarray]:
    """(lambda, a) with lambda the top row and a_k = (row k sum) - (row k-1 sum)."""
    sums = np.array([0.0] + [g.row(k).sum() for k in range(1, g.n + 1)])
    return SpecTuple(g.top, tol=default_tol(g.entries)), np.diff(sums)


def _gap_entries(Lam) -> np.ndarray:
    if isinstance(Lam, GapTuple):
        return Lam.entries.entries
    return as_array(Lam)


def gt_to_hive(g: GTPattern, Lam) -> Hive:
    """h(i, j) = Lambda_1 + ... + Lambda_j + lambda_{1,j} + ... + lambda_{i,j}."""
    L = _gap_entries(Lam)
    if L.size != g.n:
        raise ValueError(f"Lambda has length {L.size}, pattern has size {g.n}")
    gaps = -np.diff(L)
    if gaps.size and np.min(gaps) <= g.spread():
        raise PreconditionError(f"Lambda gaps (min {np.min(gaps)}) must exceed the top-row spread {g.spread()}")
    return _gt_to_hive_unchecked(g, L)


def _gt_to_hive_unchecked(g: GTPattern, L: np.ndarray) -> Hive:
    n = g.n
    prefix = np.concatenate([[0.0], np.cumsum(L)])
    vals = np.empty((n + 1) * (n + 2) // 2)
    vals[0] = 0.0
    for j in range(1, n + 1):
        s = tri_index(0, j)
        vals[s] = prefix[j]
        vals[s + 1 : s + j + 1] = prefix[j] + np.cumsum(g.row(j))
    return Hive(n, vals)


def hive_to_gt(h: Hive, Lam, tol: float | None = None) -> GTPattern:
    """Left inverse of :func:`gt_to_hive`: lambda_{i,j} = h(i,j) - h(i-1,j)."""
    L = _gap_entries(Lam)
    n = h.n
    if L.size != n:
        raise ValueError(f"Lambda has length {L.size}, hive has side {n}")
    if tol is None:
        tol = default_tol(h.values)
    edge = np.array([h[0, j] for j in range(n + 1)])
    expected = np.concatenate([[0.0], np.cumsum(L)])
    err = np.max(np.abs(edge - expected))
    if err > tol:
        raise PreconditionError(f"hive edge h(0, j) differs from Lambda partial sums by {err}")
    rows = []
    for j in range(1, n + 1):
        s = tri_index(0, j)
        rows.append(np.diff(h.values[s : s + j + 1]))
    return GTPattern(n, np.concatenate(rows), validate=False)


def gt_to_hive_matrix(n: int) -> np.ndarray:
    """Matrix of the GT -> hive map on the free coordinates h(i, j), 1 <= i <= j <= n.

    The Lambda edge carries no pattern data, so with Lambda = 0 the map is
    linear; rows and columns are both ordered by (j, i).
    """
    size = n * (n + 1) // 2
    cols = []
    zero = np.zeros(n)
    free = [tri_index(i, j) for j in range(1, n + 1) for i in range(1, j + 1)]
    for e in np.eye(size):
        h = _gt_to_hive_unchecked(GTPattern(n, e, validate=False), zero)
        cols.append(h.values[free])
    return np.array(cols).T


def gt_volume_exact(lam, nodes: int = 6) -> float:
    """Volume of the GT polytope with top row ``lam`` by nested Gauss-Legendre integration.

    The integrand at each level is a polynomial, so the rule is exact.
    Only n = 2, 3 are supported; the result is an oracle for V(lam)/V(tau).
    """
    lam = as_array(lam)
    if lam.size not in (2, 3):
        raise ValueError("gt_volume_exact supports n = 2 or 3 only")
    if np.any(np.diff(lam) >= 0):
        raise ValueError("gt_volume_exact needs a strictly decreasing top row")
    x, w = np.polynomial.legendre.leggauss(nodes)

    def vol(row: np.ndarray) -> float:
        if row.size == 1:
            return 1.0
        # integrate over the next row down: entry m lies in [row[m+1], row[m]]
        lo, hi = row[1:], row[:-1]
        half = (hi - lo) / 2
        mid = (hi + lo) / 2
        total = 0.0
        for idx in np.ndindex(*([nodes] * lo.size)):
            idx = np.array(idx)
            sub = mid + half * x[idx]
            total += np.prod(w[idx] * half) * vol(sub)
        return total

    return float(vol(lam))


# ---- text format -------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def dumps(obj) -> str:
    """Header ``n=<n> kind=<hive|gt>`` then one space-separated line per row."""
    if isinstance(obj, Hive):
        rows = [obj.values[tri_index(0, j) : tri_index(0, j) + j + 1] for j in range(obj.n + 1)]
        kind = "hive"
    elif isinstance(obj, GTPattern):
        rows = obj.rows()
        kind = "gt"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines = [f"n={obj.n} kind={kind}"] + [" ".join(_fmt(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def loads(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty input")
    header = dict(tok.split("=", 1) for tok in lines[0].split())
    n, kind = int(header["n"]), header["kind"]
    rows = [np.array(ln.split(), dtype=float) for ln in lines[1:]]
    if kind == "hive":
        if len(rows) != n + 1:
            raise ValueError(f"hive of side {n} needs {n + 1} rows, got {len(rows)}")
        return Hive(n, np.concatenate(rows))
    if kind == "gt":
        if len(rows) != n:
            raise ValueError(f"GT pattern of size {n} needs {n} rows, got {len(rows)}")
        return GTPattern.from_rows(rows, validate=False)
    raise ValueError(f"unknown kind {kind!r}")


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def load(path):
    return loads(Path(path).read_text())


def dumps_many(objs) -> str:
    """Concatenate several records; each starts with its own header line."""
    return "".join(dumps(o) for o in objs)


def loads_many(text: str) -> list:
    records, current = [], []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        if ln.startswith("n=") and current:
            records.append(loads("\n".join(current)))
            current = []
        current.append(ln)
    if current:
        records.append(loads("\n".join(current)))
    return records
