"""Variance-decay experiment: var h(v) / n^4 across sizes, with bootstrap intervals.

    python scripts/run_concentration.py --n 8 16 32 --trials 200 --out results/concentration.csv
"""

from __future__ import annotations

import argparse
import logging
import sys

from hivelab.harness import ExperimentConfig, decay_check, emit, format_table, run_concentration


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[8, 16, 32])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--out")
    a = p.parse_args(argv)
    logging.basicConfig(level=logging.WARNING)
    cfg = ExperimentConfig(ns=a.n, trials=a.trials, seed=a.seed, workers=a.workers)
    result = run_concentration(cfg)
    if a.out:
        emit(result.rows, a.out)
    else:
        sys.stdout.write(format_table(result.rows))
    ok = result.passed
    for probe in cfg.probes:
        v = decay_check(result, probe, a.threshold)
        print(
            f"{probe:>9}: var/n^4 ratio n={v.n_large} vs n={v.n_small} = {v.ratio:.4f}, "
            f"intervals disjoint: {v.intervals_disjoint}",
            file=sys.stderr,
        )
        ok = ok and (v.passed or probe != "centroid")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
