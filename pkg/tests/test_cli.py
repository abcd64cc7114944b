import csv

import numpy as np
import pytest

from hivelab import hive_gt
from hivelab.cli import main
from hivelab.determinantal import gap_covariance
from hivelab.harness import parse
from hivelab.harness.generators import random_gt_pattern
from hivelab.octahedron import SquareFunction, dumps_square
from hivelab.rmt import RngStream


def test_concentration_command(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(["concentration", "--n", "3", "4", "--trials", "6", "--seed", "2", "--out", str(out)])
    assert code == 0
    rows = parse(out)
    assert [r.n for r in rows] == [3, 3, 3, 4, 4, 4]
    assert "failed trials: 0/12" in capsys.readouterr().err


def test_concentration_decay_flag(capsys):
    code = main(["concentration", "--n", "3", "4", "--trials", "6", "--decay-check", "--threshold", "1e-9"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().err


def test_equivalence_command(tmp_path):
    out = tmp_path / "rep.txt"
    assert main(["equivalence", "--max-n", "3", "--trials", "3", "--out", str(out)]) == 0
    assert out.read_text().endswith("PASS\n")
    assert main(["equivalence", "--max-n", "3", "--trials", "3", "--border-sign", "-1", "--out", str(out)]) == 1


def test_oct_command(tmp_path):
    g1, g2 = random_gt_pattern(4, RngStream(1)), random_gt_pattern(4, RngStream(2))
    (tmp_path / "a.txt").write_text(hive_gt.dumps_many([g1, g1]))
    (tmp_path / "b.txt").write_text(hive_gt.dumps(g2))
    out = tmp_path / "aug.txt"
    assert main(["oct", str(tmp_path / "a.txt"), str(tmp_path / "b.txt"), "--out", str(out)]) == 0
    hive, pattern = hive_gt.loads_many(out.read_text())
    assert hive.n == 4 and pattern.n == 4
    assert np.allclose(pattern.top, hive_gt.hive_boundary(hive)[2].entries)


def test_tilings_command(tmp_path, capsys):
    assert main(["tilings", "--v", "1", "2", "--n", "3"]) == 0
    text = capsys.readouterr().out
    assert text.count("tiling ") == 2
    i, j = np.indices((4, 4))
    sq = SquareFunction(3, (i * j + (i - j) ** 2).astype(float))
    kfile = tmp_path / "k.txt"
    kfile.write_text(dumps_square(sq))
    assert main(["tilings", "--v", "1", "1", "--n", "3", "--k", str(kfile)]) == 0
    assert "max = " in capsys.readouterr().out
    assert main(["tilings", "--v", "1", "1", "--n", "4", "--k", str(kfile)]) == 1


def test_sample_command(tmp_path):
    out = tmp_path / "p.txt"
    assert main(["sample", "--n", "5", "--trials", "3", "--seed", "4", "--out", str(out)]) == 0
    pats = hive_gt.loads_many(out.read_text())
    assert len(pats) == 3 and all(p.n == 5 for p in pats)


def test_moments_command(tmp_path):
    spectrum = tmp_path / "lam.txt"
    spectrum.write_text("2 1 0\n")
    out = tmp_path / "m.csv"
    assert main(["moments", str(spectrum), "--mc", "200", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["kind", "i", "j", "exact", "mc", "mc_se"]
    cov = [r for r in rows if r[0] == "cov"][0]
    assert float(cov[3]) == pytest.approx(gap_covariance([2.0, 1.0, 0.0], 1, 2))


def test_rigidity_command(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["rigidity", "--n", "16", "--trials", "5", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["i", "gamma_i", "max_norm_dev", "flag"] and len(rows) == 17
    assert main(["rigidity", "--n", "16", "--trials", "5", "--flag-at", "0", "--out", str(out)]) == 1


def test_requires_a_command():
    with pytest.raises(SystemExit):
        main([])
