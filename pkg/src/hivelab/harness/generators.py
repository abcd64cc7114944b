"""Random inputs for the equivalence batteries."""

from __future__ import annotations

import numpy as np

from ..hive_gt import GTPattern
from ..octahedron import SquareFunction
from ..rmt import RngStream


def random_gt_pattern(n: int, rng: RngStream, scale: float = 1.0) -> GTPattern:
    """Top row from sorted gaussians; each lower row uniform in its interlacing boxes."""
    top = np.sort(rng.normal(n, scale=scale))[::-1]
    rows = [top]
    for k in range(n - 1, 0, -1):
        above = rows[-1]
        hi, lo = above[:-1], above[1:]
        rows.append(lo + (hi - lo) * rng.uniform(k))
    return GTPattern.from_rows(rows[::-1])


def random_gt_pair(n: int, rng: RngStream, scale: float = 1.0) -> tuple[GTPattern, GTPattern]:
    return random_gt_pattern(n, rng, scale), random_gt_pattern(n, rng, scale)


def random_square(n: int, rng: RngStream, scale: float = 1.0) -> SquareFunction:
    return SquareFunction(n, rng.normal((n + 1, n + 1), scale=scale))
