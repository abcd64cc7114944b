"""Oracle-equivalence batteries: tiling maximum vs excavation, round trip, gap-constant
independence, and output validity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hive_gt import gt_boundary
from ..octahedron import (
    BORDER_SIGN,
    excavate,
    gt_pair_to_square,
    inverse_excavate,
    oct_map,
    tiling_functionals,
)
from ..rmt import RngStream
from .concentration import output_problems
from .generators import random_gt_pair, random_square

BATTERIES = ("oracle", "roundtrip", "gamma", "validity")


@dataclass(frozen=True)
class CheckResult:
    battery: str
    n: int
    trials: int
    worst: float
    tol: float
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and bool(self.worst <= self.tol)


@dataclass
class EquivalenceReport:
    checks: list[CheckResult]
    seed: int
    border_sign: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst(self, battery: str) -> float:
        return max(c.worst for c in self.checks if c.battery == battery)

    def format(self) -> str:
        lines = [f"equivalence seed={self.seed} border_sign={self.border_sign}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status} {c.battery:<9} n={c.n} trials={c.trials} worst={c.worst:.17g} tol={c.tol:g} failures={c.failures}"
            )
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def _stream(seed: int, battery: str, n: int, trial: int) -> RngStream:
    return RngStream(seed, (BATTERIES.index(battery) << 48) | (n << 32) | trial)


def speyer_all(kt: np.ndarray, border_sign: int = BORDER_SIGN) -> np.ndarray:
    """Tiling maxima at every interior vertex; boundary copied from the input."""
    n = kt.shape[0] - 1
    out = kt.copy()
    flat = kt.ravel()
    for i in range(1, n):
        for j in range(1, n):
            out[i, j] = np.max(tiling_functionals((i, j), n, border_sign) @ flat)
    return out


def oracle_battery(n: int, trials: int, seed: int, border_sign: int = BORDER_SIGN, tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for t in range(trials):
        g1, g2 = random_gt_pair(n, _stream(seed, "oracle", n, t))
        kt = gt_pair_to_square(g1, g2).square
        ht = excavate(kt).values
        worst = max(worst, float(np.max(np.abs(speyer_all(kt.values, border_sign) - ht))))
    return CheckResult("oracle", n, trials, worst, tol)


def roundtrip_battery(n: int, trials: int, seed: int, tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for t in range(trials):
        kt = random_square(n, _stream(seed, "roundtrip", n, t))
        back = inverse_excavate(excavate(kt))
        worst = max(worst, float(np.max(np.abs(back.values - kt.values))))
    return CheckResult("roundtrip", n, trials, worst, tol)


def gamma_battery(n: int, trials: int, seed: int, tol: float = 1e-8) -> CheckResult:
    worst = 0.0
    for t in range(trials):
        g1, g2 = random_gt_pair(n, _stream(seed, "gamma", n, t))
        G = g1.spread() + g2.spread() + 1.0
        a, b = oct_map(g1, g2, G), oct_map(g1, g2, 2 * G)
        d = max(
            float(np.max(np.abs(a.hive.values - b.hive.values))),
            float(np.max(np.abs(a.pattern.entries - b.pattern.entries))),
        )
        worst = max(worst, d)
    return CheckResult("gamma", n, trials, worst, tol)


def validity_battery(n: int, trials: int, seed: int, trace_tol: float = 1e-7, weyl_tol: float = 1e-9) -> CheckResult:
    failures = 0
    for t in range(trials):
        g1, g2 = random_gt_pair(n, _stream(seed, "validity", n, t))
        try:
            aug = oct_map(g1, g2)
            a_exp = gt_boundary(g1)[1] + gt_boundary(g2)[1]
            if output_problems(aug, g1, g2, a_exp, trace_tol, weyl_tol):
                failures += 1
        except Exception:
            failures += 1
    return CheckResult("validity", n, trials, float(failures), 0.0, failures)


def run_equivalence_suite(
    max_n: int = 6,
    trials: int = 100,
    seed: int = 0,
    border_sign: int = BORDER_SIGN,
    batteries=BATTERIES,
    min_n: int = 2,
) -> EquivalenceReport:
    if max_n > 8:
        raise ValueError("the tiling oracle is limited to n <= 8")
    checks = []
    for n in range(min_n, max_n + 1):
        if "oracle" in batteries:
            checks.append(oracle_battery(n, trials, seed, border_sign))
        if "roundtrip" in batteries:
            checks.append(roundtrip_battery(n, trials, seed))
        if "gamma" in batteries:
            checks.append(gamma_battery(n, trials, seed))
        if "validity" in batteries:
            checks.append(validity_battery(n, trials, seed))
    return EquivalenceReport(checks, seed, border_sign)
