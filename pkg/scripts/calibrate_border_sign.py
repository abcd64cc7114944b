"""Which border-triangle sign makes the tiling maximum reproduce excavation?

Compares both signs against the recurrence on random squares and prints the
worst deviation for each, n = 2..max_n.

    python scripts/calibrate_border_sign.py --max-n 5
"""

from __future__ import annotations

import argparse

import numpy as np

from hivelab.octahedron import calibrate_border_sign, excavate, speyer_square
from hivelab.harness.generators import random_square
from hivelab.rmt import RngStream


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--trials", type=int, default=20)
    a = p.parse_args(argv)
    for sign in (1, -1):
        worst = 0.0
        for n in range(2, a.max_n + 1):
            for t in range(a.trials):
                kt = random_square(n, RngStream(n, t))
                worst = max(worst, float(np.max(np.abs(speyer_square(kt, sign).values - excavate(kt).values))))
        print(f"border sign {sign:+d}: worst deviation from excavation {worst:.3e}")
    print(f"calibrated sign: {calibrate_border_sign():+d}")


if __name__ == "__main__":
    main()
