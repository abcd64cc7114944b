"""Tropical octahedron recurrence on the tetrahedron {[x,y,z,w] >= 0 : x+y+z+w = n}.

Square points are glued onto the four faces:

    T  (i <= j)      -> [0, j-i, n-j, i]        face x = 0
    T' (i >= j)      -> [i-j, 0, n-i, j]        face y = 0
    U  (i + j >= n)  -> [n-j, n-i, 0, i+j-n]    face z = 0
    U' (i + j <= n)  -> [i, j, n-i-j, 0]        face w = 0

Every unit octahedron with bottom vertex [x+1,y+1,z,w] and top vertex
[x,y,z+1,w+1] obeys

    top + bottom = max(o[x+1,y,z+1,w] + o[x,y+1,z,w+1], o[x+1,y,z,w+1] + o[x,y+1,z+1,w]).

Values are stored as o[x, y, z] with w implied; cells with x+y+z > n are NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .packing import SquareFunction


@dataclass
class TetrahedronField:
    n: int
    values: np.ndarray  # shape (n+1, n+1, n+1), indexed [x, y, z]

    def __getitem__(self, xyzw) -> float:
        x, y, z, w = xyzw
        if min(xyzw) < 0 or x + y + z + w != self.n:
            raise IndexError(f"{xyzw} is not a point of the tetrahedron")
        return float(self.values[x, y, z])


def _empty(n: int) -> np.ndarray:
    return np.full((n + 1, n + 1, n + 1), np.nan)


def _seed_lower(o: np.ndarray, kt: np.ndarray, n: int) -> None:
    i, j = np.indices(kt.shape)
    up = i + j >= n
    o[n - j[up], n - i[up], 0] = kt[up]
    low = i + j <= n
    o[i[low], j[low], n - i[low] - j[low]] = kt[low]


def _seed_upper(o: np.ndarray, ht: np.ndarray, n: int) -> None:
    i, j = np.indices(ht.shape)
    t = i <= j
    o[0, j[t] - i[t], n - j[t]] = ht[t]
    tp = i >= j
    o[i[tp] - j[tp], 0, n - i[tp]] = ht[tp]


def _read_upper(o: np.ndarray, n: int) -> np.ndarray:
    i, j = np.indices((n + 1, n + 1))
    out = np.empty((n + 1, n + 1))
    t = i <= j
    out[t] = o[0, j[t] - i[t], n - j[t]]
    tp = ~t
    out[tp] = o[i[tp] - j[tp], 0, n - i[tp]]
    return out


def _read_lower(o: np.ndarray, n: int) -> np.ndarray:
    i, j = np.indices((n + 1, n + 1))
    out = np.empty((n + 1, n + 1))
    up = i + j >= n
    out[up] = o[n - j[up], n - i[up], 0]
    low = ~up
    out[low] = o[i[low], j[low], n - i[low] - j[low]]
    return out


def _layer_indices(n: int, s: int, first: str):
    """All (x, y, z) with the given layer sum, as index arrays.

    first == "zw": targets with z, w >= 1 and z + w = s (x + y = n - s)
    first == "xy": targets with x, y >= 1 and x + y = s (z + w = n - s)
    """
    if first == "zw":
        zz, xx = np.meshgrid(np.arange(1, s), np.arange(0, n - s + 1), indexing="ij")
        x = xx.ravel()
        y = n - s - x
        z = zz.ravel()
    else:
        xx, zz = np.meshgrid(np.arange(1, s), np.arange(0, n - s + 1), indexing="ij")
        x = xx.ravel()
        y = s - x
        z = zz.ravel()
    return x, y, z


def excavate_field(kt: SquareFunction) -> TetrahedronField:
    """Fill the whole tetrahedron upward from the lower faces (z = 0, w = 0)."""
    n = kt.n
    o = _empty(n)
    _seed_lower(o, kt.values, n)
    for s in range(2, n + 1):
        x, y, zt = _layer_indices(n, s, "zw")
        z = zt - 1
        a = o[x + 1, y, z + 1] + o[x, y + 1, z]
        b = o[x + 1, y, z] + o[x, y + 1, z + 1]
        o[x, y, zt] = np.maximum(a, b) - o[x + 1, y + 1, z]
    return TetrahedronField(n, o)


def excavate(kt: SquareFunction) -> SquareFunction:
    """The octahedron recurrence k~ -> h~; boundary values of the square are unchanged."""
    field = excavate_field(kt)
    return SquareFunction(kt.n, _read_upper(field.values, kt.n))


def inverse_excavate_field(ht: SquareFunction) -> TetrahedronField:
    """Fill the tetrahedron downward from the upper faces (x = 0, y = 0)."""
    n = ht.n
    o = _empty(n)
    _seed_upper(o, ht.values, n)
    for s in range(2, n + 1):
        xt, yt, z = _layer_indices(n, s, "xy")
        x, y = xt - 1, yt - 1
        a = o[x + 1, y, z + 1] + o[x, y + 1, z]
        b = o[x + 1, y, z] + o[x, y + 1, z + 1]
        o[xt, yt, z] = np.maximum(a, b) - o[x, y, z + 1]
    return TetrahedronField(n, o)


def inverse_excavate(ht: SquareFunction) -> SquareFunction:
    """Inverse recurrence h~ -> k~, solving the same rule for the bottom vertex."""
    field = inverse_excavate_field(ht)
    return SquareFunction(ht.n, _read_lower(field.values, ht.n))
