"""Excavation hexagons, their lozenge/border-triangle tilings, and tiling weights.

Geometry.  The square {0..n}^2 is cut into unit triangles by the
anti-diagonals of its unit squares.  For the unit square with lower-left
corner (a, b):

    upper-right triangle ("up")   (a, b+1), (a+1, b+1), (a+1, b)
    lower-left triangle ("down")  (a, b+1), (a, b),     (a+1, b)

Every lozenge is one up triangle glued to one down triangle:

    green  (type iii)  up(a, b) + down(a, b)      across the anti-diagonal
    type ii            up(a, b) + down(a, b+1)    across a horizontal edge
    type i             up(a, b) + down(a+1, b)    across a vertical edge

Squares with a + b = n - 1 straddle the equator i + j = n; their halves are
the border triangles, and a green lozenge there is not allowed.

Border-triangle sign.  A border triangle with equator vertex P and apex Q
contributes ``border_sign * (k(Q) - k(P)) / 3``.  The default ``+1`` is
the convention under which the tiling maximum reproduces the excavation
recurrence (see ``calibrate_border_sign``); ``-1`` is the literal
``(k(P) - k(Q)) / 3`` reading.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

from .packing import SquareFunction

DEFAULT_BUDGET = 10_000_000
BORDER_SIGN = 1


class EnumerationOverflow(RuntimeError):
    def __init__(self, budget: int, partial: int):
        super().__init__(f"more than {budget} tilings (stopped after {partial})")
        self.budget = budget
        self.partial = partial


class Triangle(NamedTuple):
    a: int
    b: int
    up: bool

    def vertices(self):
        a, b = self.a, self.b
        if self.up:
            return (a, b + 1), (a + 1, b + 1), (a + 1, b)
        return (a, b + 1), (a, b), (a + 1, b)

    def centroid(self):
        d = 2 / 3 if self.up else 1 / 3
        return self.a + d, self.b + d


@dataclass(frozen=True)
class Hexagon:
    n: int
    center: tuple[int, int]
    A: tuple[int, int]
    B: tuple[int, int]
    C: tuple[int, int]
    D: tuple[int, int]
    E: tuple[int, int]
    F: tuple[int, int]

    @property
    def vertices(self):
        return (self.A, self.B, self.C, self.D, self.E, self.F)

    @property
    def O(self) -> tuple[int, int]:
        """Where the diagonal BE meets the equator AD."""
        j = self.B[1]
        return (self.n - j, j)

    def contains(self, p) -> bool:
        """Closed-polygon membership for a point in (i, j) coordinates."""
        x, y = p
        eps = 1e-9
        vs = self.vertices
        for k in range(6):
            (x0, y0), (x1, y1) = vs[k], vs[(k + 1) % 6]
            if (x0, y0) == (x1, y1):
                continue
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) < -eps:
                return False
        return True

    def lattice_points(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n + 1) for j in range(self.n + 1) if self.contains((i, j))]

    def triangles(self) -> list[Triangle]:
        out = []
        for a in range(self.n):
            for b in range(self.n):
                for up in (False, True):
                    t = Triangle(a, b, up)
                    if self.contains(t.centroid()):
                        out.append(t)
        return out


def build_hexagon(v, n: int) -> Hexagon:
    i, j = v
    if not (0 < i < n and 0 < j < n):
        raise ValueError(f"{v} is not interior to the square of side {n}")
    if i <= j:
        verts = ((0, n), (0, j), (i, j - i), (n + i - j, j - i), (n + i - j, j), (i, n))
    else:
        verts = ((i - j, n + j - i), (i - j, j), (i, 0), (n, 0), (n, j), (i, n + j - i))
    return Hexagon(n, (i, j), *verts)


@dataclass(frozen=True)
class Lozenge:
    kind: str  # "i", "ii", "iii"
    anchor: tuple[int, int]  # vertex A of the quadruple ABCD
    region: str  # "U" or "U'"

    @property
    def color(self) -> str:
        if self.kind == "iii":
            return "green"
        if self.kind == "i":
            return "blue" if self.region == "U" else "red"
        return "red" if self.region == "U" else "blue"

    def quad(self):
        i, j = self.anchor
        if self.kind == "i":
            return (i, j), (i + 1, j - 1), (i + 2, j - 1), (i + 1, j)
        if self.kind == "ii":
            return (i, j), (i, j + 1), (i - 1, j + 2), (i - 1, j + 1)
        return (i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)


@dataclass(frozen=True)
class BorderTriangle:
    edge: int  # border edge ((edge, n-edge), (edge+1, n-edge-1))
    orientation: str  # "upward" (in U) or "downward" (in U')

    def vertices(self, n: int):
        i = self.edge
        if self.orientation == "upward":
            return (i, n - i), (i + 1, n - i), (i + 1, n - i - 1)
        return (i, n - i), (i, n - i - 1), (i + 1, n - i - 1)


@dataclass(frozen=True)
class LozengeTiling:
    lozenges: tuple[Lozenge, ...]
    triangles: tuple[BorderTriangle, ...]


def _lozenge_from(up: Triangle, down: Triangle, n: int) -> Lozenge:
    a, b = up.a, up.b
    if (down.a, down.b) == (a, b):
        region = "U" if a + b >= n else "U'"
        return Lozenge("iii", (a, b), region)
    region = "U" if a + b + 1 >= n else "U'"
    if (down.a, down.b) == (a, b + 1):
        return Lozenge("ii", (a + 1, b), region)
    return Lozenge("i", (a, b + 1), region)


def _lozenge_cells(loz: Lozenge) -> tuple[Triangle, Triangle]:
    i, j = loz.anchor
    if loz.kind == "iii":
        return Triangle(i, j, True), Triangle(i, j, False)
    if loz.kind == "ii":
        return Triangle(i - 1, j, True), Triangle(i - 1, j + 1, False)
    return Triangle(i, j - 1, True), Triangle(i + 1, j - 1, False)


def _neighbors(t: Triangle) -> list[Triangle]:
    a, b = t.a, t.b
    if t.up:
        return [Triangle(a, b, False), Triangle(a, b + 1, False), Triangle(a + 1, b, False)]
    return [Triangle(a, b, True), Triangle(a, b - 1, True), Triangle(a - 1, b, True)]


def enumerate_tilings(hexagon: Hexagon, budget: int = DEFAULT_BUDGET) -> Iterator[LozengeTiling]:
    """Yield every tiling of the hexagon once, in a deterministic order.

    Backtracking: the first uncovered triangle in scan order is covered by a
    lozenge with an uncovered neighbour on its own side of the equator, or,
    on the equator, left as a border triangle.  Each equator square must end
    with exactly one border half.
    """
    n = hexagon.n
    cells = sorted(hexagon.triangles(), key=lambda t: (t.a + t.b, t.a, t.up))
    index = {t: k for k, t in enumerate(cells)}
    on_equator = [t.a + t.b == n - 1 for t in cells]

    options: list[list[tuple]] = []
    for k, t in enumerate(cells):
        opts = []
        for nb in _neighbors(t):
            m = index.get(nb)
            if m is None:
                continue
            if t.a + t.b == n - 1 and (nb.a, nb.b) == (t.a, t.b):
                continue  # green across the equator
            up, down = (t, nb) if t.up else (nb, t)
            opts.append(("loz", m, _lozenge_from(up, down, n)))
        if on_equator[k]:
            opts.append(("tri", None, BorderTriangle(t.a, "upward" if t.up else "downward")))
        options.append(opts)

    # equator square -> state: borders used, halves covered by lozenges
    borders: dict[int, int] = {}
    paired: dict[int, int] = {}
    covered = [False] * len(cells)
    pieces: list = []
    count = 0

    def equator_ok_for_lozenge(k: int) -> bool:
        if not on_equator[k]:
            return True
        return paired.get(cells[k].a, 0) == 0

    def rec(start: int):
        nonlocal count
        k = start
        while k < len(cells) and covered[k]:
            k += 1
        if k == len(cells):
            count += 1
            if count > budget:
                raise EnumerationOverflow(budget, count - 1)
            loz = tuple(p for p in pieces if isinstance(p, Lozenge))
            tri = tuple(p for p in pieces if isinstance(p, BorderTriangle))
            yield LozengeTiling(loz, tri)
            return
        for kind, m, piece in options[k]:
            if kind == "tri":
                e = cells[k].a
                if borders.get(e, 0):
                    continue
                borders[e] = 1
                covered[k] = True
                pieces.append(piece)
                yield from rec(k + 1)
                pieces.pop()
                covered[k] = False
                borders[e] = 0
            else:
                if covered[m] or not equator_ok_for_lozenge(k) or not equator_ok_for_lozenge(m):
                    continue
                marks = [cells[c].a for c in (k, m) if on_equator[c]]
                for e in marks:
                    paired[e] = paired.get(e, 0) + 1
                covered[k] = covered[m] = True
                pieces.append(piece)
                yield from rec(k + 1)
                pieces.pop()
                covered[k] = covered[m] = False
                for e in marks:
                    paired[e] -= 1

    yield from rec(0)


def tiling_cells(tiling: LozengeTiling, n: int) -> list[Triangle]:
    out = []
    for loz in tiling.lozenges:
        out.extend(_lozenge_cells(loz))
    for t in tiling.triangles:
        out.append(Triangle(t.edge, n - t.edge - 1, t.orientation == "upward"))
    return out


def is_valid_tiling(tiling: LozengeTiling, hexagon: Hexagon) -> bool:
    """Exact cover of the hexagon's triangles with one border half per equator square."""
    n = hexagon.n
    cells = tiling_cells(tiling, n)
    if sorted(cells) != sorted(hexagon.triangles()):
        return False
    edges = [t.edge for t in tiling.triangles]
    if len(set(edges)) != len(edges):
        return False
    equator_squares = {t.a for t in hexagon.triangles() if t.a + t.b == n - 1}
    if set(edges) != equator_squares:
        return False
    for loz in tiling.lozenges:
        if loz.kind == "iii" and sum(loz.anchor) == n - 1:
            return False
    return True


def standard_tiling(hexagon: Hexagon) -> LozengeTiling:
    """The canonical tiling built directly from its description.

    Above the diagonal BE (j >= j_B): type-(i) lozenges in U, green lozenges
    and downward border triangles in U'.  Below BE: green lozenges and upward
    border triangles in U, type-(i) lozenges in U'.
    """
    n = hexagon.n
    jb = hexagon.B[1]
    cells = set(hexagon.triangles())
    used: set[Triangle] = set()
    loz: list[Lozenge] = []
    tri: list[BorderTriangle] = []
    for t in sorted(cells):
        if t in used:
            continue
        above = t.centroid()[1] > jb
        in_u = t.a + t.b + (1 if t.up else 0) >= n
        if above == in_u:
            # type (i): up(a, b) with down(a+1, b)
            up = t if t.up else Triangle(t.a - 1, t.b, True)
            down = Triangle(up.a + 1, up.b, False)
        elif t.a + t.b == n - 1:
            tri.append(BorderTriangle(t.a, "upward" if t.up else "downward"))
            used.add(t)
            continue
        else:
            up, down = Triangle(t.a, t.b, True), Triangle(t.a, t.b, False)
        if up not in cells or down not in cells or up in used or down in used:
            raise RuntimeError(f"standard tiling construction failed at {t}")
        used.update((up, down))
        loz.append(_lozenge_from(up, down, n))
    return LozengeTiling(tuple(loz), tuple(tri))


# ---- weights -------------------------------------------------------------------

def lozenge_coefficients(loz: Lozenge) -> dict:
    A, B, C, D = loz.quad()
    return {A: 1 / 3, C: 1 / 3, B: -1 / 3, D: -1 / 3}


def border_coefficients(t: BorderTriangle, n: int, border_sign: int = BORDER_SIGN) -> dict:
    P, Q, _ = t.vertices(n)
    return {Q: border_sign / 3, P: -border_sign / 3}


def hexagon_coefficients(hexagon: Hexagon) -> dict:
    h = hexagon
    out: dict = {}
    for p, c in ((h.B, 1), (h.C, 1), (h.D, -1), (h.E, 1), (h.F, 1)):
        out[p] = out.get(p, 0) + c / 3
    return out


def hexagon_coefficients_alt(hexagon: Hexagon) -> dict:
    h = hexagon
    out: dict = {}
    for p, c in ((h.A, -1), (h.B, 2), (h.F, 2)):
        out[p] = out.get(p, 0) + c / 3
    return out


def _accumulate(arr: np.ndarray, coeffs: dict, scale: float = 1.0) -> None:
    for (i, j), c in coeffs.items():
        arr[i, j] += scale * c


def tiling_coefficients(tiling: LozengeTiling, hexagon: Hexagon, border_sign: int = BORDER_SIGN) -> np.ndarray:
    """Coefficient array c with w(tiling) = sum c[i, j] k~(i, j)."""
    n = hexagon.n
    c = np.zeros((n + 1, n + 1))
    for loz in tiling.lozenges:
        _accumulate(c, lozenge_coefficients(loz))
    for t in tiling.triangles:
        _accumulate(c, border_coefficients(t, n, border_sign))
    _accumulate(c, hexagon_coefficients(hexagon))
    return c


def tiling_coefficients_alt(tiling: LozengeTiling, hexagon: Hexagon, border_sign: int = BORDER_SIGN) -> np.ndarray:
    """Red-free form: twice the blue lozenges, the green ones, triangles, modified hexagon weight."""
    n = hexagon.n
    c = np.zeros((n + 1, n + 1))
    for loz in tiling.lozenges:
        color = loz.color
        if color == "red":
            continue
        _accumulate(c, lozenge_coefficients(loz), 2.0 if color == "blue" else 1.0)
    for t in tiling.triangles:
        _accumulate(c, border_coefficients(t, n, border_sign))
    _accumulate(c, hexagon_coefficients_alt(hexagon))
    return c


def _values(kt) -> np.ndarray:
    return kt.values if isinstance(kt, SquareFunction) else np.asarray(kt, dtype=float)


def tiling_weight(tiling: LozengeTiling, kt, hexagon: Hexagon, border_sign: int = BORDER_SIGN) -> float:
    return float(np.sum(tiling_coefficients(tiling, hexagon, border_sign) * _values(kt)))


def tiling_weight_alt(tiling: LozengeTiling, kt, hexagon: Hexagon, border_sign: int = BORDER_SIGN) -> float:
    return float(np.sum(tiling_coefficients_alt(tiling, hexagon, border_sign) * _values(kt)))


def color_sums(tiling: LozengeTiling, kt) -> dict[str, float]:
    v = _values(kt)
    out = {"red": 0.0, "blue": 0.0, "green": 0.0}
    for loz in tiling.lozenges:
        A, B, C, D = loz.quad()
        out[loz.color] += (v[A] + v[C] - v[B] - v[D]) / 3
    return out


@lru_cache(maxsize=None)
def _functionals(v: tuple[int, int], n: int, border_sign: int, budget: int) -> np.ndarray:
    hexagon = build_hexagon(v, n)
    rows = [tiling_coefficients(t, hexagon, border_sign).ravel() for t in enumerate_tilings(hexagon, budget)]
    out = np.array(rows)
    out.setflags(write=False)
    return out


def tiling_functionals(v, n: int, border_sign: int = BORDER_SIGN, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """One row of coefficients (over the flattened square) per tiling of the hexagon at v."""
    return _functionals(tuple(int(x) for x in v), n, border_sign, budget)


def speyer_value(v, kt, border_sign: int = BORDER_SIGN, budget: int = DEFAULT_BUDGET) -> float:
    """max over tilings of the hexagon at v of the tiling weight."""
    vals = _values(kt)
    n = vals.shape[0] - 1
    return float(np.max(tiling_functionals(v, n, border_sign, budget) @ vals.ravel()))


def speyer_square(kt, border_sign: int = BORDER_SIGN, budget: int = DEFAULT_BUDGET) -> SquareFunction:
    """h~ computed entirely from tiling maxima (boundary copied from k~)."""
    vals = _values(kt)
    n = vals.shape[0] - 1
    out = vals.copy()
    for i in range(1, n):
        for j in range(1, n):
            out[i, j] = speyer_value((i, j), vals, border_sign, budget)
    return SquareFunction(n, out)


def calibrate_border_sign(max_n: int = 3, trials: int = 20, seed: int = 0) -> int:
    """Pick the border-triangle sign that makes the tiling maximum match excavation.

    Returns +1 or -1; raises if neither or both agree on random inputs.
    """
    from .excavation import excavate

    rng = np.random.default_rng(seed)
    agree = {}
    for sign in (1, -1):
        ok = True
        for n in range(2, max_n + 1):
            for _ in range(trials):
                kt = SquareFunction(n, rng.normal(size=(n + 1, n + 1)))
                ht = excavate(kt).values
                for i in range(1, n):
                    for j in range(1, n):
                        if abs(speyer_value((i, j), kt, sign) - ht[i, j]) > 1e-9:
                            ok = False
        agree[sign] = ok
    winners = [s for s, ok in agree.items() if ok]
    if len(winners) != 1:
        raise RuntimeError(f"border sign calibration inconclusive: {agree}")
    return winners[0]
