"""Oracle-equivalence batteries with a timing line per size.

    python scripts/run_equivalence.py --max-n 6 --trials 100 --seed 7
"""

from __future__ import annotations

import argparse
import sys
import time

from hivelab.harness import run_equivalence_suite


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    a = p.parse_args(argv)
    ok = True
    for n in range(2, a.max_n + 1):
        t0 = time.perf_counter()
        rep = run_equivalence_suite(n, a.trials, a.seed, min_n=n)
        ok = ok and rep.passed
        for line in rep.format().splitlines()[1:-1]:
            print(line)
        print(f"  n={n} took {time.perf_counter() - t0:.2f}s")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
