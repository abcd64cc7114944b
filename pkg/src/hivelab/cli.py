"""Command-line entry point ``hivelab``."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import hive_gt
from .determinantal import expected_gap, gap_covariance, mc_gap_moments
from .harness import decay_check, emit, format_table, load_config, run_equivalence_suite, run_concentration
from .octahedron import (
    BORDER_SIGN,
    build_hexagon,
    enumerate_tilings,
    loads_square,
    oct_map,
    tiling_coefficients,
    tiling_weight,
)
from .rmt import RIGIDITY_FLAG, RngStream, eigvals_batch, minor_process, rigidity_report, sample_gue


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_concentration(a) -> int:
    cfg = load_config(
        a.config,
        ns=a.n,
        trials=a.trials,
        seed=a.seed,
        sigma_lambda=a.sigma_lambda,
        sigma_mu=a.sigma_mu,
        output=a.out,
        format=a.format,
        workers=a.workers,
    )
    result = run_concentration(cfg)
    if cfg.output:
        emit(result.rows, cfg.output, cfg.format)
    else:
        sys.stdout.write(format_table(result.rows, cfg.format))
    ok = result.passed
    print(f"failed trials: {len(result.failures)}/{len(result.records)}", file=sys.stderr)
    if a.decay_check:
        v = decay_check(result, a.probe, a.threshold)
        print(
            f"decay {v.probe}: ratio n={v.n_large}/n={v.n_small} = {v.ratio:.4g} "
            f"(threshold {v.threshold}), intervals disjoint: {v.intervals_disjoint} -> {'PASS' if v.passed else 'FAIL'}",
            file=sys.stderr,
        )
        ok = ok and v.passed
    return 0 if ok else 1


def cmd_equivalence(a) -> int:
    rep = run_equivalence_suite(a.max_n, a.trials, a.seed, border_sign=a.border_sign)
    _write(rep.format(), a.out)
    return 0 if rep.passed else 1


def cmd_oct(a) -> int:
    g1 = hive_gt.loads_many(Path(a.g1).read_text())[a.index]
    g2 = hive_gt.loads_many(Path(a.g2).read_text())[a.index]
    aug = oct_map(g1, g2, a.gap)
    _write(hive_gt.dumps_many([aug.hive, aug.pattern]), a.out)
    return 0


def cmd_tilings(a) -> int:
    i, j = a.v
    hexagon = build_hexagon((i, j), a.n)
    kt = None
    if a.k:
        kt = loads_square(Path(a.k).read_text())
        if kt.n != a.n:
            print(f"k file has n={kt.n}, expected {a.n}", file=sys.stderr)
            return 1
    lines = [f"hexagon v={(i, j)} n={a.n} vertices={hexagon.vertices}"]
    best = -math.inf
    for idx, t in enumerate(enumerate_tilings(hexagon)):
        c = tiling_coefficients(t, hexagon, a.border_sign)
        terms = " ".join(f"{c[tuple(p)]:+.4g}*k{tuple(int(x) for x in p)}" for p in np.argwhere(np.abs(c) > 1e-12))
        line = f"tiling {idx}: {len(t.lozenges)} lozenges, {len(t.triangles)} triangles; weight = {terms}"
        if kt is not None:
            w = tiling_weight(t, kt, hexagon, a.border_sign)
            best = max(best, w)
            line += f" = {w:.17g}"
        lines.append(line)
    if kt is not None:
        lines.append(f"max = {best:.17g}")
    _write("\n".join(lines) + "\n", a.out)
    return 0


def cmd_sample(a) -> int:
    root = RngStream(a.seed)
    mats = np.stack([sample_gue(a.n, a.sigma, root.child(t)) for t in range(a.trials)])
    pats = minor_process(mats)
    _write(hive_gt.dumps_many(pats), a.out)
    return 0


def _read_spectrum(path) -> np.ndarray:
    return np.array(Path(path).read_text().split(), dtype=float)


def cmd_moments(a) -> int:
    lam = _read_spectrum(a.spectrum)
    n = lam.size
    mc = mc_gap_moments(lam, a.mc, RngStream(a.seed)) if a.mc else None
    rows = [["kind", "i", "j", "exact"] + (["mc", "mc_se"] if mc else [])]
    for i in range(1, n):
        r = ["gap", i, "", format(expected_gap(lam, i), ".17g")]
        if mc:
            r += [format(mc.means[i - 1], ".17g"), format(mc.se_means[i - 1], ".17g")]
        rows.append(r)
    for i in range(1, n):
        for j in range(i + 1, n):
            r = ["cov", i, j, format(gap_covariance(lam, i, j), ".17g")]
            if mc:
                r += [format(mc.cov[i - 1, j - 1], ".17g"), format(mc.se_cov[i - 1, j - 1], ".17g")]
            rows.append(r)
    out = open(a.out, "w", newline="") if a.out else sys.stdout
    try:
        csv.writer(out, lineterminator="\n").writerows(rows)
    finally:
        if a.out:
            out.close()
    return 0


def cmd_rigidity(a) -> int:
    root = RngStream(a.seed)
    mats = np.stack([sample_gue(a.n, a.sigma, root.child(t)) for t in range(a.trials)])
    spectra = eigvals_batch(mats)
    # the "natural" scale compares eigenvalues of A with their actual size sigma * n * gamma
    scale = a.sigma * math.sqrt(a.n) if a.scale == "natural" else a.sigma
    rep = rigidity_report(spectra, scale, a.flag_at)
    rows = [("i", "gamma_i", "max_norm_dev", "flag")]
    rows += [(i, format(g, ".17g"), format(d, ".17g"), int(f)) for i, g, d, f in rep.rows()]
    text = "".join(",".join(str(x) for x in r) + "\n" for r in rows)
    _write(text, a.out)
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hivelab", description="Random hives, GT patterns and the octahedron recurrence.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("concentration", help="run the variance-decay experiment")
    c.add_argument("--config")
    c.add_argument("--n", type=int, nargs="+")
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int)
    c.add_argument("--sigma-lambda", type=float)
    c.add_argument("--sigma-mu", type=float)
    c.add_argument("--out")
    c.add_argument("--format", choices=("csv", "json"))
    c.add_argument("--workers", type=int)
    c.add_argument("--decay-check", action="store_true", help="also require var/n^4 to decay at the probe")
    c.add_argument("--probe", default="centroid")
    c.add_argument("--threshold", type=float, default=0.9)
    c.set_defaults(func=cmd_concentration)

    e = sub.add_parser("equivalence", help="tiling maximum vs excavation and other batteries")
    e.add_argument("--max-n", type=int, default=6)
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--seed", type=int, default=7)
    e.add_argument("--border-sign", type=int, choices=(1, -1), default=BORDER_SIGN)
    e.add_argument("--out")
    e.set_defaults(func=cmd_equivalence)

    o = sub.add_parser("oct", help="map two GT-pattern files to an augmented hive")
    o.add_argument("g1")
    o.add_argument("g2")
    o.add_argument("--gap", type=float, help="gap constant G (default: spreads + 1)")
    o.add_argument("--index", type=int, default=0, help="record to use from multi-record files")
    o.add_argument("--out")
    o.set_defaults(func=cmd_oct)

    t = sub.add_parser("tilings", help="list the tilings of an excavation hexagon")
    t.add_argument("--v", type=int, nargs=2, required=True, metavar=("I", "J"))
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", help="square-function file to evaluate the weights on")
    t.add_argument("--border-sign", type=int, choices=(1, -1), default=BORDER_SIGN)
    t.add_argument("--out")
    t.set_defaults(func=cmd_tilings)

    s = sub.add_parser("sample", help="GT patterns from the minor process of GUE samples")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    m = sub.add_parser("moments", help="exact gap moments of a spectrum file")
    m.add_argument("spectrum")
    m.add_argument("--mc", type=int, help="add Monte Carlo columns from this many samples")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")
    m.set_defaults(func=cmd_moments)

    r = sub.add_parser("rigidity", help="normalized eigenvalue deviations from classical locations")
    r.add_argument("--n", type=int, default=64)
    r.add_argument("--trials", type=int, default=200)
    r.add_argument("--sigma", type=float, default=1.0)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--flag-at", type=float, default=RIGIDITY_FLAG)
    r.add_argument("--scale", choices=("literal", "natural"), default="literal")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rigidity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
