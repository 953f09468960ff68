import json

import numpy as np
import pytest

from approxfrechet.cli import main
from approxfrechet.geometry import write_csv

from conftest import SEG_A, SEG_B


@pytest.fixture
def pair(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gen", "--kind", "walk", "--n", "30", "--seed", "1", "--out", str(a)]) == 0
    assert main(["gen", "--kind", "walk", "--n", "25", "--seed", "2", "--out", str(b)]) == 0
    return str(a), str(b)


@pytest.fixture
def segs(tmp_path):
    a, b = tmp_path / "sa.csv", tmp_path / "sb.csv"
    write_csv(a, SEG_A)
    write_csv(b, SEG_B)
    return str(a), str(b)


def test_decide_exit_codes(segs, capsys):
    a, b = segs
    assert main(["decide", "--curve-a", a, "--curve-b", b, "--delta", "1.0"]) == 0
    assert main(["decide", "--curve-a", a, "--curve-b", b, "--delta", "0.999"]) == 1
    assert capsys.readouterr().out.split() == ["yes", "no"]


@pytest.mark.parametrize("mode", ["exact", "approx", "discrete", "discrete-approx"])
def test_compute_json(pair, mode, capsys):
    a, b = pair
    args = ["compute", "--curve-a", a, "--curve-b", b, "--mode", mode, "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    r = json.loads(first)
    assert r["mode"] == mode and r["wall_time"] is None
    assert r["lower"] <= r["value"] <= r["upper"]
    assert set(r["counters"]) == {"wavefront_cells", "cover_queries", "surrogate_tests",
                                  "samples_drawn", "fallbacks_triggered", "reach_calls"}


def test_timing_flag(pair, capsys):
    a, b = pair
    main(["compute", "--curve-a", a, "--curve-b", b, "--json", "--timing"])
    assert json.loads(capsys.readouterr().out)["wall_time"] >= 0


def test_bad_csv(tmp_path, segs, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0\n1,x\n")
    assert main(["compute", "--curve-a", str(bad), "--curve-b", segs[1]]) == 2
    assert "bad.csv:2" in capsys.readouterr().err


def test_parameter_inconsistency(pair, capsys):
    a, b = pair
    rc = main(["decide", "--curve-a", a, "--curve-b", b, "--delta", "1", "--mode", "approx",
               "--mu2", "2", "--mu3", "3"])
    assert rc == 2
    assert "mu3 > mu2" in capsys.readouterr().err


def test_missing_delta(pair):
    assert main(["decide", "--curve-a", pair[0], "--curve-b", pair[1]]) == 2


def test_unknown_mode(pair):
    with pytest.raises(SystemExit) as ei:
        main(["compute", "--curve-a", pair[0], "--curve-b", pair[1], "--mode", "fast"])
    assert ei.value.code == 2


def test_gen_stdout(capsys):
    assert main(["gen", "--kind", "zigzag", "--n", "4"]) == 0
    rows = [list(map(float, l.split(","))) for l in capsys.readouterr().out.split()]
    assert np.array_equal(rows, [[0, 1], [1, -1], [2, 1], [3, -1]])


def test_plot(segs, tmp_path):
    out = tmp_path / "f.svg"
    assert main(["plot", "--curve-a", segs[0], "--curve-b", segs[1], "--delta", "1.2",
                 "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and "<polyline" in svg
    assert main(["plot", "--curve-a", segs[0], "--curve-b", segs[1], "--delta", "0.5",
                 "--out", str(out)]) == 0
    assert "<polyline" not in out.read_text()


def test_bench_json(tmp_path):
    out = tmp_path / "bench.json"
    assert main(["bench", "--sizes", "16,24", "--reps", "1", "--modes", "exact,approx",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert set(rep["summary"]) == {"exact", "approx"}
    assert rep["summary"]["exact"]["slope"] == pytest.approx(1.0, abs=0.05)


def test_bench_bad_sizes():
    assert main(["bench", "--sizes", "a,b"]) == 2
    assert main(["bench", "--modes", "nope"]) == 2


def test_deterministic_fallback_seed_invariant(pair, capsys):
    a, b = pair
    outs = set()
    for seed in range(4):
        for extra in ([], ["--deterministic-fallback"]):
            main(["decide", "--curve-a", a, "--curve-b", b, "--delta", "3.0", "--mode", "approx",
                  "--seed", str(seed)] + extra)
            outs.add(capsys.readouterr().out)
    assert len(outs) == 1
