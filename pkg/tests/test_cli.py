import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from mugiqa.cli import main
from mugiqa.images import encode, encode_jpeg, synthesize_chessboard


@pytest.fixture
def constant_png(tmp_path):
    path = tmp_path / "flat.png"
    encode(np.full((64, 64, 3), 120, np.uint8), "PNG").save(path)
    return path


@pytest.fixture
def small_manifest(tmp_path, photo):
    lines = ["path,mos,group"]
    for q in (90, 70, 50, 30, 10):
        encode_jpeg(photo[:256, :256], q).save(tmp_path / f"q{q}.jpg")
        lines.append(f"q{q}.jpg,{q},astro")
    path = tmp_path / "manifest.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_score_constant_json(constant_png, capsys):
    assert main(["score", str(constant_png), "--metric", "all", "--json"]) == 0
    assert capsys.readouterr().out.strip() == '{"nug":1,"mug":0.0,"mug_plus":0.0,"n_available":1}'


def test_score_chessboard_divisor(tmp_path, capsys):
    path = tmp_path / "chess.png"
    encode(synthesize_chessboard(1024, 128), "PNG").save(path)
    assert main(["score", str(path), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    ratio = out["mug"] / out["mug_plus"]
    assert round(ratio) == 19 - out["n_available"] + 1 == 18
    assert ratio == pytest.approx(18, rel=1e-15)


def test_score_single_metric_text(constant_png, capsys):
    assert main(["score", str(constant_png), "--metric", "nug"]) == 0
    assert capsys.readouterr().out == "nug\t1\n"


def test_score_missing_file(tmp_path, capsys):
    assert main(["score", str(tmp_path / "nope.jpg")]) == 2
    assert "error" in capsys.readouterr().err


def test_score_undecodable(tmp_path):
    path = tmp_path / "junk.jpg"
    path.write_bytes(b"\xff\xd8\xff\xe0 truncated")
    assert main(["score", str(path)]) == 2


def test_score_too_small(tmp_path):
    path = tmp_path / "tiny.png"
    encode(np.zeros((2, 9, 3), np.uint8), "PNG").save(path)
    assert main(["score", str(path)]) == 3


def test_batch_deterministic(small_manifest, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["batch", "--manifest", str(small_manifest), "--out", str(a), "--jobs", "1"]) == 0
    assert main(["batch", "--manifest", str(small_manifest), "--out", str(b), "--jobs", "8"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 6


def test_batch_corrupt_entry(small_manifest, tmp_path, capsys):
    (tmp_path / "broken.jpg").write_bytes(b"not a jpeg")
    with open(small_manifest, "a") as fh:
        fh.write("broken.jpg,5,astro\n")
    out = tmp_path / "s.csv"
    assert main(["batch", "--manifest", str(small_manifest), "--out", str(out)]) == 2
    assert "broken.jpg" in capsys.readouterr().err
    assert not out.exists()
    assert main(["batch", "--manifest", str(small_manifest), "--out", str(out), "--skip-errors"]) == 0
    assert len(out.read_text().splitlines()) == 6


def test_batch_bad_manifest(tmp_path):
    bad = tmp_path / "m.csv"
    bad.write_text("path,mos\na.jpg,excellent\n")
    assert main(["batch", "--manifest", str(bad), "--out", str(tmp_path / "o.csv")]) == 3


def test_eval_linear_table(tmp_path, capsys):
    scores = tmp_path / "scores.csv"
    rows = ["path,nug,mug,mug_plus,mos"] + [f"i{k},{100 + k},{0.01 * k!r},{0.005 * k!r},{2.0 * k + 1!r}" for k in range(1, 11)]
    scores.write_text("\n".join(rows) + "\n")
    report, scatter = tmp_path / "r.json", tmp_path / "scatter.csv"
    assert main(["eval", "--scores", str(scores), "--metric", "mug", "--out", str(report), "--scatter", str(scatter)]) == 0
    data = json.loads(report.read_text())
    assert data["srcc"] == 1.0 and data["n"] == 10
    with open(scatter) as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["score", "mos", "fitted"] and len(table) == 11


def test_eval_degenerate_scores(tmp_path):
    scores = tmp_path / "scores.csv"
    scores.write_text("path,nug,mug,mug_plus,mos\n" + "".join(f"i{k},1,0.0,0.0,{k}\n" for k in range(6)))
    assert main(["eval", "--scores", str(scores), "--out", str(tmp_path / "r.json")]) == 4


def test_misalign(small_manifest, tmp_path):
    out = tmp_path / "mis.json"
    assert main(["misalign", "--manifest", str(small_manifest), "--k", "0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["aligned"] == data["cropped"] and data["max_abs_score_delta"] == 0.0
    assert main(["misalign", "--manifest", str(small_manifest), "--k", "1", "--metric", "mug+", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["metric"] == "mug_plus" and data["max_abs_score_delta"] > 0


def test_misalign_crop_too_large(small_manifest, tmp_path):
    assert main(["misalign", "--manifest", str(small_manifest), "--k", "200"]) == 3


def test_ladder(tmp_path, photo, capsys):
    src = tmp_path / "src.png"
    encode(photo, "PNG").save(src)
    out = tmp_path / "ladder"
    assert main(["ladder", "--input", str(src), "--qualities", "90,70,50,30,10", "--out", str(out)]) == 0
    summary = json.loads((out / "ladder.json").read_text())
    assert summary["monotonicity"]["nug"] >= 0.9
    assert sorted(p.name for p in out.glob("*.jpg")) == ["q010.jpg", "q030.jpg", "q050.jpg", "q070.jpg", "q090.jpg"]


def test_ladder_constant_input(constant_png, tmp_path):
    out = tmp_path / "ladder"
    assert main(["ladder", "--input", str(constant_png), "--out", str(out)]) == 0
    assert json.loads((out / "ladder.json").read_text())["degenerate"] is True


def test_ladder_single_quality(constant_png, tmp_path):
    assert main(["ladder", "--input", str(constant_png), "--qualities", "50", "--out", str(tmp_path / "l")]) == 3


def test_usage_error_is_invalid_input():
    with pytest.raises(SystemExit) as info:
        main(["score"])
    assert info.value.code == 3


def test_bench_single_iteration(capsys):
    assert main(["bench", "--width", "64", "--height", "48", "--iters", "1", "--metric", "mug"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["iterations"] == 1 and report["p95_ms"] == report["mean_ms"]
    assert report["image_size"] == "64x48"


def test_bench_both_backends(capsys):
    assert main(["bench", "--width", "80", "--height", "60", "--iters", "2", "--backend", "both"]) == 0
    reports = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert {r["backend"] for r in reports} == {"compiled", "python"}
    assert len({r["score"] for r in reports}) == 1


def test_console_entry_point(constant_png):
    proc = subprocess.run([sys.executable, "-m", "mugiqa.cli", "score", str(constant_png), "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["nug"] == 1
