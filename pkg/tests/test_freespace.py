import numpy as np
import pytest

from approxfrechet.freespace import (compute_exact, decide_exact, dis_wave, discrete_compute_exact,
                                     discrete_decide_exact, new_counters, wavefront)
from approxfrechet.geometry import IntervalArray, tolerance
from approxfrechet.oracles import (brute_decide, brute_discrete, brute_dis_wave, brute_reachable,
                                   reach_grid)

from conftest import SEG_A, SEG_B, walk


def test_wavefront_no_sources():
    out = wavefront(SEG_A, SEG_B, 5.0)
    assert all(out.per_tau_vertex(i).is_empty() for i in range(2))
    assert all(out.per_sigma_vertex(j).is_empty() for j in range(2))


def test_wavefront_everything_free(rng):
    P, Q = walk(rng, 6), walk(rng, 5)
    pts = np.vstack([P, Q])
    diam = np.linalg.norm(pts.max(0) - pts.min(0))
    out = wavefront(P, Q, diam + 1, IntervalArray.point(5, 0, 0.0), IntervalArray.point(4, 0, 0.0))
    for i in range(1, 6):
        assert out.per_tau_vertex(i).as_list() == [(0.0, 1.0)] * 4
    for j in range(1, 5):
        assert out.per_sigma_vertex(j).as_list() == [(0.0, 1.0)] * 5


def test_wavefront_tangent_interval():
    out = wavefront(SEG_A, SEG_B, 1.0, IntervalArray.point(1, 0, 0.0), IntervalArray.point(1, 0, 0.0))
    lo, hi = out.per_tau_vertex(1)[0]
    assert lo == pytest.approx(1.0) and hi == pytest.approx(1.0)


def test_wavefront_matches_oracle(rng):
    for _ in range(40):
        n, m = rng.integers(2, 8, size=2)
        P, Q = walk(rng, n), walk(rng, m)
        delta = rng.uniform(0.5, 3.0)
        S = [(0.0, 0.0)] + [None] * (n - 2)
        S2 = [(0.0, 0.0)] + [None] * (m - 2)
        eta = tolerance(P, Q)
        RV, RH = reach_grid(P, Q, delta, S, S2, eta)
        out = wavefront(P, Q, delta, IntervalArray.point(n - 1, 0, 0.0),
                        IntervalArray.point(m - 1, 0, 0.0), eta=eta)
        for i in range(1, n):
            for a, b in zip(out.per_tau_vertex(i).as_list(), RV[i]):
                assert (a is None) == (b is None)
                if a is not None:
                    assert a[0] == pytest.approx(b[0], abs=1e-7)
                    assert a[1] == pytest.approx(b[1], abs=1e-7)


def test_decide_examples():
    assert decide_exact(SEG_A, SEG_A, 0.0)
    assert not decide_exact(SEG_A, SEG_B, 0.999)
    assert decide_exact(SEG_A, SEG_B, 1.0)


def test_decide_agrees_with_oracle(rng):
    for _ in range(100):
        n, m = rng.integers(2, 10, size=2)
        P, Q = walk(rng, n), walk(rng, m)
        for delta in rng.uniform(0.2, 4.0, 3):
            assert decide_exact(P, Q, delta) == brute_decide(P, Q, delta)


def test_decide_monotone(rng):
    for _ in range(30):
        P, Q = walk(rng, 12), walk(rng, 9)
        answers = [decide_exact(P, Q, d) for d in np.linspace(0, 6, 40)]
        first = answers.index(True) if True in answers else len(answers)
        assert all(answers[first:])


def test_planarity(rng):
    checked = 0
    while checked < 200:
        P, Q = walk(rng, 5), walk(rng, 4)
        x1, x2, y2, y1 = np.sort(rng.uniform(0, 4, 4))
        p, q = np.sort(rng.uniform(0, 3, 2))
        delta = rng.uniform(1.0, 4.0)
        if brute_reachable(P, Q, x1, p, y1, q, delta) and brute_reachable(P, Q, x2, p, y2, q, delta):
            assert brute_reachable(P, Q, x1, p, y2, q, delta)
            checked += 1


def test_compute_examples(rng):
    assert compute_exact(SEG_A, SEG_A) == 0
    assert compute_exact(SEG_A, SEG_B) == pytest.approx(1.0, rel=1e-9)
    P, Q = walk(rng, 16), walk(rng, 16)
    v = compute_exact(P, Q)
    ends = max(np.linalg.norm(P[0] - Q[0]), np.linalg.norm(P[-1] - Q[-1]))
    assert ends - 1e-12 <= v <= discrete_compute_exact(P, Q) + 1e-9
    assert decide_exact(P, Q, v * (1 + 1e-9))
    assert not decide_exact(P, Q, v * (1 - 1e-8))


def test_counters_count_cells(rng):
    P, Q = walk(rng, 10), walk(rng, 7)
    c = new_counters()
    decide_exact(P, Q, 100.0, counters=c)
    # interior cells plus the two initialised boundary lines
    assert c[0] == 9 * 6 + 9 + 6


def test_dis_wave_matches_oracle(rng):
    for _ in range(40):
        n, m = rng.integers(1, 9, size=2)
        P, Q = walk(rng, n), walk(rng, m)
        delta = rng.uniform(0.5, 3.0)
        S = [i for i in range(n) if rng.random() < 0.3]
        S2 = [j for j in range(m) if rng.random() < 0.3]
        DV, _ = dis_wave(P, Q, delta, S, S2)
        ref = brute_dis_wave(P, Q, delta, S, S2)
        for i in range(n):
            for j in range(m):
                assert DV[i, j] == ((i, j) in ref)


def test_discrete_exact(rng):
    assert discrete_compute_exact(SEG_A, SEG_B) == 1.0
    for _ in range(30):
        P, Q = walk(rng, rng.integers(1, 10)), walk(rng, rng.integers(1, 10))
        d = discrete_compute_exact(P, Q)
        assert d == pytest.approx(brute_discrete(P, Q))
        assert discrete_decide_exact(P, Q, d)
        assert not discrete_decide_exact(P, Q, d * (1 - 1e-9))
