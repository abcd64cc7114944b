import math
from pathlib import Path

import numpy as np
import pytest

from hivelab.hive_gt import gt_boundary, hive_boundary
from hivelab.harness import (
    ExperimentConfig,
    decay_check,
    emit,
    format_table,
    load_config,
    parse,
    parse_config_text,
    run_concentration,
    run_equivalence_suite,
)
from hivelab.harness.concentration import COLUMNS, SummaryRow, sample_pair
from hivelab.harness.config import dump_config, probe_vertex
from hivelab.harness.io import parse_table
from hivelab.octahedron import gt_pair_to_square
from hivelab.rmt import minor_process

DATA = Path(__file__).parent / "data"


def _mini(**kw):
    base = dict(ns=[3, 5], trials=12, seed=4, bootstrap=40)
    base.update(kw)
    return ExperimentConfig(**base)


def test_probe_positions():
    assert probe_vertex("midpoint", 8) == (4, 4)
    assert probe_vertex("centroid", 32) == (10, 21)
    assert probe_vertex("corner", 8) == (1, 7)
    with pytest.raises(ValueError):
        probe_vertex("edge", 8)


def test_config_text_and_overrides(tmp_path):
    text = "ns = 4, 6  # sizes\ntrials=30\nsigma_mu = 2.5\nvalidate = no\noutput = none\n\n"
    d = parse_config_text(text)
    assert d == {"ns": [4, 6], "trials": 30, "sigma_mu": 2.5, "validate": False, "output": None}
    path = tmp_path / "c.cfg"
    path.write_text(text)
    cfg = load_config(path, trials=50, seed=None)
    assert cfg.trials == 50 and cfg.ns == [4, 6] and cfg.seed == 0
    assert load_config(None) == ExperimentConfig()
    again = parse_config_text(dump_config(cfg))
    assert ExperimentConfig(**again) == cfg


def test_config_errors():
    with pytest.raises(KeyError):
        parse_config_text("colour = red")
    with pytest.raises(ValueError):
        parse_config_text("trials 3")
    with pytest.raises(ValueError):
        ExperimentConfig(trials=1)
    with pytest.raises(ValueError):
        ExperimentConfig(sigma_lambda=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig(format="xml")
    with pytest.raises(ValueError):
        ExperimentConfig(ns=[1])


def test_worker_cap(monkeypatch):
    cfg = ExperimentConfig(workers=8)
    monkeypatch.delenv("HIVELAB_WORKERS", raising=False)
    assert cfg.effective_workers() == 8
    monkeypatch.setenv("HIVELAB_WORKERS", "2")
    assert cfg.effective_workers() == 2
    monkeypatch.setenv("HIVELAB_WORKERS", "0")
    assert cfg.effective_workers() == 1


ROW = SummaryRow(5, 2, 3, 100, 1.0 / 3.0, 2.5e-7, float("nan"), -1e300, 0.1, 9)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_emit_parse_round_trip(tmp_path, fmt):
    path = emit([ROW], tmp_path / f"t.{fmt}", fmt)
    (back,) = parse(path)
    for c in COLUMNS:
        a, b = getattr(ROW, c), getattr(back, c)
        assert (math.isnan(a) and math.isnan(b)) or a == b


def test_empty_table_is_header_only():
    assert format_table([], "csv") == ",".join(COLUMNS) + "\n"
    assert format_table([], "json") == "[]\n"
    with pytest.raises(ValueError):
        format_table([], "xml")


def test_emit_reports_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        emit([ROW], tmp_path / "missing" / "t.csv")
    with pytest.raises(OSError, match="nothing"):
        parse(tmp_path / "nothing.csv")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_golden_miniature_run(fmt):
    cfg = load_config(DATA / "mini.cfg", format=fmt)
    text = format_table(run_concentration(cfg).rows, fmt)
    golden = (DATA / f"golden_concentration.{fmt}").read_text()
    if fmt == "csv":
        assert text.splitlines()[0] == golden.splitlines()[0] == ",".join(COLUMNS)
    ours, ref = parse(DATA / f"golden_concentration.{fmt}"), parse_table(text, fmt)
    assert len(ours) == len(ref) == 6
    for a, b in zip(ours, ref):
        for c in COLUMNS:
            assert getattr(a, c) == pytest.approx(getattr(b, c), rel=1e-12)


def test_runs_are_deterministic():
    a = format_table(run_concentration(_mini()).rows)
    b = format_table(run_concentration(_mini()).rows)
    assert a == b
    c = format_table(run_concentration(_mini(seed=5)).rows)
    assert a != c


def test_parallel_run_matches_serial():
    serial = run_concentration(_mini(trials=120))
    parallel = run_concentration(_mini(trials=120, workers=2))
    assert format_table(serial.rows) == format_table(parallel.rows)
    assert [r.values for r in serial.records] == [r.values for r in parallel.records]


def test_degenerate_scale():
    r = run_concentration(_mini(sigma_lambda=1e-12, sigma_mu=1e-12))
    assert r.passed and not r.failures
    for row in r.rows:
        assert abs(row.mean) < 1e-9 and row.var < 1e-20


def test_scaling_by_two():
    a = run_concentration(_mini())
    b = run_concentration(_mini(sigma_lambda=2.0, sigma_mu=2.0))
    for ra, rb in zip(a.records, b.records):
        for p in ra.values:
            assert rb.values[p] == pytest.approx(2 * ra.values[p], rel=1e-9, abs=1e-9)
    for ra, rb in zip(a.rows, b.rows):
        assert rb.mean == pytest.approx(2 * ra.mean, rel=1e-9)


def test_every_trial_passes_bookkeeping_checks():
    r = run_concentration(_mini(ns=[6], trials=40))
    assert r.failure_rate == 0 and r.passed


@pytest.mark.slow
def test_two_by_two_matches_boundary_formula_per_trial():
    cfg = ExperimentConfig(ns=[2], trials=10_000, probes=["midpoint"], bootstrap=50, seed=6)
    r = run_concentration(cfg)
    assert not r.failures
    worst = 0.0
    for rec in r.records:
        A, B = sample_pair(2, cfg, rec.trial)
        g1, g2 = minor_process(A), minor_process(B)
        p = gt_pair_to_square(g1, g2)
        lam, mu, gamma = g1.top, g2.top, p.gamma
        sigma = gamma + gt_boundary(g1)[1]
        pi = hive_boundary(p.k)[2].entries
        nu1 = max(lam.sum() + mu[0] + gamma[0] - sigma[0], lam[0] + pi[0] - sigma[0])
        worst = max(worst, abs(rec.values["midpoint"] - nu1))
    assert worst < 1e-9


def test_decay_check_reads_rows():
    r = run_concentration(_mini())
    v = decay_check(r, "centroid")
    assert (v.n_small, v.n_large) == (3, 5)
    small, large = r.row(3, "centroid"), r.row(5, "centroid")
    assert v.ratio == pytest.approx(large.var_over_n4 / small.var_over_n4)
    with pytest.raises(KeyError):
        r.row(4, "centroid")


def test_equivalence_suite_passes_and_is_reproducible():
    a = run_equivalence_suite(max_n=4, trials=10, seed=7)
    assert a.passed and a.worst("oracle") < 1e-9
    assert a.format() == run_equivalence_suite(max_n=4, trials=10, seed=7).format()


def test_equivalence_suite_catches_sign_flip():
    rep = run_equivalence_suite(max_n=3, trials=5, seed=1, border_sign=-1, batteries=("oracle",))
    assert not rep.passed and "FAIL" in rep.format()


def test_equivalence_suite_limit():
    with pytest.raises(ValueError):
        run_equivalence_suite(max_n=9)
