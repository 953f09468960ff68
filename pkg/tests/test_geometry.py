import math

import numpy as np
import pytest

from approxfrechet.geometry import (CurveError, CurvePoint, clip_segment_to_ball, dist,
                                    generate_synthetic, point_at, read_csv, subcurve, write_csv)


def test_dist_examples():
    assert dist((0, 0), (0, 0)) == 0
    assert dist((0, 0), (3, 4)) == 5
    assert dist((1, 1, 1), (2, 2, 2)) == pytest.approx(math.sqrt(3))
    assert dist((0, 0), (3, 4)) == dist((3, 4), (0, 0))


def test_dist_dimension_mismatch():
    with pytest.raises(CurveError):
        dist((0, 0), (1, 1, 1))


def test_clip_tangent():
    lo, hi = clip_segment_to_ball((0, 0), (2, 0), (1, 1), 1.0)
    assert lo == pytest.approx(0.5) and hi == pytest.approx(0.5)


def test_clip_contains_and_disjoint():
    assert clip_segment_to_ball((0, 0), (2, 0), (1, 0), 10.0) == (0.0, 1.0)
    assert clip_segment_to_ball((0, 0), (2, 0), (5, 5), 1.0) is None


def test_clip_sampled(rng):
    for _ in range(200):
        a, b, c = rng.normal(size=(3, 2))
        r = abs(rng.normal()) + 0.1
        iv = clip_segment_to_ball(a, b, c, r)
        if iv is None:
            continue
        lo, hi = iv
        for t in np.linspace(lo, hi, 100):
            assert np.linalg.norm(a + t * (b - a) - c) <= r + 1e-9
        if hi > lo:
            for t in (lo - 1e-3, hi + 1e-3):
                if 0 <= t <= 1:
                    assert np.linalg.norm(a + t * (b - a) - c) > r - 1e-9


def test_subcurve_examples():
    c = np.array([[0, 0], [1, 0], [1, 1], [2, 1]], dtype=float)
    assert np.array_equal(subcurve(c, 0.0, 3.0), c)
    s = subcurve(c, 1.3, 1.3)
    assert len(s) == 1 and np.allclose(s[0], point_at(c, 1.3))
    s = subcurve(c, CurvePoint(0, 0.5), CurvePoint(2, 0.5))
    assert len(s) == 4
    assert np.allclose(s, [[0.5, 0], [1, 0], [1, 1], [1.5, 1]])
    with pytest.raises(CurveError):
        subcurve(c, 2.0, 1.0)


def test_curvepoint_order(rng):
    pts = [CurvePoint.from_position(x, 5) for x in rng.uniform(0, 5, 60)]
    for a in pts[:20]:
        for b in pts[20:40]:
            assert (a <= b) == (a.position <= b.position)
    assert CurvePoint.canonical(1, 1.0, 3) == CurvePoint(2, 0.0)
    assert CurvePoint.canonical(2, 1.0, 3) == CurvePoint(2, 1.0)


def test_generate_examples():
    z = generate_synthetic("zigzag", 4, seed=3, amplitude=1)
    assert len(z) == 4
    assert list(z[:, 1]) == [1, -1, 1, -1]
    a = generate_synthetic("walk", 30, seed=7)
    b = generate_synthetic("walk", 30, seed=7)
    assert np.array_equal(a, b)
    p = generate_synthetic("perturbed-copy", 0, seed=1, base=a, noise=0.0)
    assert np.array_equal(p, a)
    with pytest.raises(CurveError):
        generate_synthetic("spiral", 10)


def test_csv_roundtrip(tmp_path):
    c = generate_synthetic("walk", 20, seed=1, dim=3)
    path = tmp_path / "c.csv"
    write_csv(path, c)
    assert np.array_equal(read_csv(path), c)


def test_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("0,0\n1,x\n")
    with pytest.raises(CurveError, match=":2:"):
        read_csv(p)
    p.write_text("0,0\n1,2,3\n")
    with pytest.raises(CurveError, match="expected 2"):
        read_csv(p)
    p.write_text("0,0\nnan,1\n")
    with pytest.raises(CurveError):
        read_csv(p)
    p.write_text("# nothing\n")
    with pytest.raises(CurveError):
        read_csv(p)
