"""End-to-end concentration experiment: GUE pair -> GT pair -> augmented hive -> h(v)."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..hive_gt import AugmentedHive, GTPattern, check_rhombus_concave, gt_boundary, hive_boundary, interlacing_violations
from ..octahedron import oct_map
from ..rmt import RngStream, minor_process, sample_gue
from ..spectra import weyl_trace_check
from .config import ExperimentConfig, probe_vertex

log = logging.getLogger(__name__)

CHUNK = 50


def stream_key(n: int, trial: int) -> int:
    """Per-(n, trial) stream index, so each size draws independent matrices."""
    return (n << 32) | trial


@dataclass
class TrialRecord:
    n: int
    trial: int
    seed: int
    values: dict[str, float]  # probe name -> h(v)
    wall_time: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class SummaryRow:
    n: int
    v_i: int
    v_j: int
    N: int
    mean: float
    var: float
    var_over_n4: float
    ci_lo: float
    ci_hi: float
    seed: int


COLUMNS = tuple(SummaryRow.__dataclass_fields__)


@dataclass
class ConcentrationResult:
    config: ExperimentConfig
    rows: list[SummaryRow]
    records: list[TrialRecord]
    probe_names: list[str] = field(default_factory=list)  # parallel to rows

    @property
    def failures(self) -> list[TrialRecord]:
        return [r for r in self.records if not r.ok]

    @property
    def failure_rate(self) -> float:
        return len(self.failures) / max(1, len(self.records))

    @property
    def passed(self) -> bool:
        return self.failure_rate <= self.config.max_failure_rate

    def row(self, n: int, probe: str) -> SummaryRow:
        for r, p in zip(self.rows, self.probe_names):
            if r.n == n and p == probe:
                return r
        raise KeyError((n, probe))


def sample_pair(n: int, cfg: ExperimentConfig, trial: int) -> tuple[np.ndarray, np.ndarray]:
    rng = RngStream(cfg.seed, stream_key(n, trial))
    return sample_gue(n, cfg.sigma_lambda, rng), sample_gue(n, cfg.sigma_mu, rng)


def output_problems(
    aug: AugmentedHive,
    g1: GTPattern,
    g2: GTPattern,
    a_expected: np.ndarray,
    trace_tol: float,
    weyl_tol: float,
) -> list[str]:
    """Everything that makes ``aug`` fail to be a genuine output for (g1, g2)."""
    problems = []
    bad = check_rhombus_concave(aug.hive)
    if bad:
        problems.append(f"{len(bad)} rhombus violations, worst {max(b.excess for b in bad):.3e}")
    bad = interlacing_violations(aug.pattern)
    if bad:
        problems.append(f"{len(bad)} interlacing violations")
    lam, mu, nu = hive_boundary(aug.hive)
    scale = max(1.0, float(np.max(np.abs(np.concatenate([lam.entries, mu.entries, nu.entries])))))
    n = aug.hive.n
    if np.max(np.abs(lam.entries - g1.top)) > trace_tol * n * scale:
        problems.append("lambda boundary differs from the first pattern's top row")
    if np.max(np.abs(mu.entries - g2.top)) > trace_tol * n * scale:
        problems.append("mu boundary differs from the second pattern's top row")
    rep = weyl_trace_check(lam, mu, nu, trace_tol=trace_tol, weyl_tol=weyl_tol)
    if not rep.trace_ok:
        problems.append(f"trace residual {rep.trace_residual:.3e}")
    if not rep.weyl_ok:
        problems.append(f"{len(rep.violations)} Weyl violations")
    _, a = gt_boundary(aug.pattern)
    if np.max(np.abs(a - a_expected)) > trace_tol * n * scale:
        problems.append("diagonal tuple differs from diag(A) + diag(B)")
    return problems


def _run_chunk(args) -> list[TrialRecord]:
    n, cfg, trials = args
    t0 = time.perf_counter()
    mats = [sample_pair(n, cfg, t) for t in trials]
    A = np.stack([m[0] for m in mats])
    B = np.stack([m[1] for m in mats])
    g1s = minor_process(A, cfg.backend)
    g2s = minor_process(B, cfg.backend)
    shared = (time.perf_counter() - t0) / len(trials)
    probes = {p: probe_vertex(p, n) for p in cfg.probes}
    out = []
    for k, t in enumerate(trials):
        t1 = time.perf_counter()
        try:
            aug = oct_map(g1s[k], g2s[k])
            err = None
            if cfg.validate:
                a_exp = np.real(np.diagonal(A[k]) + np.diagonal(B[k]))
                problems = output_problems(aug, g1s[k], g2s[k], a_exp, cfg.trace_tol, cfg.weyl_tol)
                err = "; ".join(problems) or None
            values = {p: aug.hive[v] for p, v in probes.items()}
        except Exception as e:  # a failed trial is counted, not fatal
            err, values = f"{type(e).__name__}: {e}", {}
        if err:
            log.warning("n=%d trial %d failed: %s", n, t, err)
        out.append(TrialRecord(n, t, cfg.seed, values, shared + time.perf_counter() - t1, err))
    return out


def run_trials(n: int, cfg: ExperimentConfig) -> list[TrialRecord]:
    chunks = [(n, cfg, list(range(s, min(s + CHUNK, cfg.trials)))) for s in range(0, cfg.trials, CHUNK)]
    workers = cfg.effective_workers()
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, chunks))
    else:
        parts = [_run_chunk(c) for c in chunks]
    records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.trial)
    return records


def bootstrap_var_ci(x: np.ndarray, scale: float, resamples: int, key) -> tuple[float, float]:
    """95% percentile interval for var(x) / scale."""
    rng = np.random.default_rng(key)
    idx = rng.integers(0, x.size, size=(resamples, x.size))
    stats = x[idx].var(axis=1, ddof=1) / scale
    lo, hi = np.percentile(stats, [2.5, 97.5])
    return float(lo), float(hi)


def summarize(n: int, probe_index: int, probe: str, records: list[TrialRecord], cfg: ExperimentConfig) -> SummaryRow:
    x = np.array([r.values[probe] for r in records if r.ok])
    i, j = probe_vertex(probe, n)
    n4 = float(n) ** 4
    if x.size < 2:
        nan = float("nan")
        return SummaryRow(n, i, j, int(x.size), nan, nan, nan, nan, nan, cfg.seed)
    var = float(x.var(ddof=1))
    lo, hi = bootstrap_var_ci(x, n4, cfg.bootstrap, [cfg.seed, n, probe_index])
    return SummaryRow(n, i, j, int(x.size), float(x.mean()), var, var / n4, lo, hi, cfg.seed)


def run_concentration(cfg: ExperimentConfig) -> ConcentrationResult:
    rows, names, records = [], [], []
    for n in cfg.ns:
        recs = run_trials(n, cfg)
        records.extend(recs)
        for k, p in enumerate(cfg.probes):
            rows.append(summarize(n, k, p, recs, cfg))
            names.append(p)
    result = ConcentrationResult(cfg, rows, records, names)
    if not result.passed:
        log.error("failure rate %.2f%% exceeds %.2f%%", 100 * result.failure_rate, 100 * cfg.max_failure_rate)
    return result


@dataclass(frozen=True)
class DecayVerdict:
    probe: str
    n_small: int
    n_large: int
    ratio: float
    threshold: float
    intervals_disjoint: bool

    @property
    def passed(self) -> bool:
        return self.ratio < self.threshold and self.intervals_disjoint


def decay_check(result: ConcentrationResult, probe: str = "centroid", threshold: float = 0.9) -> DecayVerdict:
    """var/n^4 at the largest n must be below ``threshold`` times its value at the smallest n,
    with disjoint bootstrap intervals."""
    ns = sorted(result.config.ns)
    small, large = result.row(ns[0], probe), result.row(ns[-1], probe)
    ratio = large.var_over_n4 / small.var_over_n4
    disjoint = large.ci_hi < small.ci_lo or small.ci_hi < large.ci_lo
    return DecayVerdict(probe, ns[0], ns[-1], ratio, threshold, disjoint)
