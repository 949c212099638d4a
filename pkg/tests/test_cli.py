import csv
import json
import subprocess
import sys

import pytest

from erarec.cli import main


@pytest.fixture
def raw(tmp_path, rng):
    lines = []
    for u in range(40):
        for o in rng.choice(25, size=int(rng.integers(3, 10)), replace=False):
            lines.append(f"u{u}\ti{o}\t{int(rng.integers(1, 6))}\t0")
    p = tmp_path / "raw.tsv"
    p.write_text("\n".join(lines) + "\n")
    return p


def test_ingest_split_eval(tmp_path, raw, capsys):
    assert main(["ingest", "--input", str(raw), "--out", str(tmp_path / "d")]) == 0
    assert json.loads((tmp_path / "d" / "dataset.json").read_text())["m"] == 40
    assert main(["split", "--data", str(tmp_path / "d"), "--seed", "7", "--out", str(tmp_path / "s")]) == 0
    assert json.loads((tmp_path / "s" / "split.json").read_text())["seed"] == 7
    out = tmp_path / "report.csv"
    rc = main(["eval", "--data", str(tmp_path / "s"), "--algo", "hhp", "--sigma", "0.8", "--lambda", "0.3",
               "--list-len", "5", "--out", str(out)])
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert rows[0]["algorithm"] == "hhp" and rows[0]["seed"] == "7" and rows[0]["L"] == "5"
    assert 0 < float(rows[0]["rs"]) <= 1


def test_min_rating(tmp_path, raw):
    assert main(["ingest", "--input", str(raw), "--min-rating", "4", "--out", str(tmp_path / "d")]) == 0
    q_all = sum(1 for _ in raw.open())
    assert json.loads((tmp_path / "d" / "dataset.json").read_text())["q"] < q_all


def test_sweep_and_figures(tmp_path, raw):
    main(["ingest", "--input", str(raw), "--out", str(tmp_path / "d")])
    rc = main(["sweep", "--data", str(tmp_path / "d"), "--algo", "hhp", "--sigma-grid", "0.5,1.0",
               "--lambda-grid", "0:1:0.5", "--refine-step", "0", "--seeds", "1,2", "--list-len", "3",
               "--out", str(tmp_path / "sw")])
    assert rc == 0
    with open(tmp_path / "sw" / "reports.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 2 * 3 * 2
    rc = main(["figures", "--data", str(tmp_path / "d"), "--sigma", "0.7", "--sigma-grid", "0.7",
               "--list-len", "3", "--out", str(tmp_path / "fig")])
    assert rc == 0
    assert (tmp_path / "fig" / "sweep_curves.csv").exists()


def test_errors_give_nonzero_exit(tmp_path, capsys):
    assert main(["ingest", "--input", str(tmp_path / "missing.txt"), "--out", str(tmp_path / "d")]) == 1
    assert "error" in capsys.readouterr().err
    (tmp_path / "bad.txt").write_text("1 2\nonly\n")
    assert main(["ingest", "--input", str(tmp_path / "bad.txt"), "--out", str(tmp_path / "d")]) == 1


def test_module_entry_point(tmp_path, raw):
    res = subprocess.run([sys.executable, "-m", "erarec", "ingest", "--input", str(raw), "--out", str(tmp_path / "d")],
                         capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert "m=40" in res.stdout
