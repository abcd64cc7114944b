"""Net coefficients of k~ at the six hexagon vertices, tallied over all tilings.

Writes one line per (n, v, coefficient pattern): the pattern lists
3 * coefficient at A, B, C, D, E, F, and the count of tilings that produce it.

    python scripts/coefficient_table.py --max-n 5 --out tests/data/coefficient_table.txt
"""

from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from hivelab.octahedron import build_hexagon, enumerate_tilings, tiling_coefficients


def coefficient_table(max_n: int) -> str:
    lines = ["# n i j | 3*coef at A B C D E F | tilings"]
    for n in range(2, max_n + 1):
        for i in range(1, n):
            for j in range(1, n):
                hexagon = build_hexagon((i, j), n)
                tally = Counter()
                for t in enumerate_tilings(hexagon):
                    c = tiling_coefficients(t, hexagon)
                    tally[tuple(int(round(3 * c[p])) for p in hexagon.vertices)] += 1
                for pattern in sorted(tally):
                    lines.append(f"{n} {i} {j} | {' '.join(str(x) for x in pattern)} | {tally[pattern]}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--out")
    a = p.parse_args(argv)
    text = coefficient_table(a.max_n)
    if a.out:
        Path(a.out).write_text(text)
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
