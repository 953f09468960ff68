import math

import numpy as np
import pytest

from approxfrechet.approx import (BlockIndex, CoverIndex, Decider, Params, audit, compute_approx,
                                  decide_approx, pad_curve, partition, reach, sub_ranges)
from approxfrechet.freespace import compute_exact, decide_exact, new_counters
from approxfrechet.geometry import CurveError, subcurve, tolerance
from approxfrechet.oracles import brute_cover, brute_marked_edges

from conftest import SEG_A, SEG_B, walk


def test_audit_constants():
    a = audit(0.5)
    assert a.eps_inner == pytest.approx(0.05)
    assert (a.wave, a.surrogate, a.cover) == (3.0, 5.0, 6.0)
    assert a.ratio == pytest.approx(11.3)
    # with c_simp = 1 + e the same formula gives 7 + 8e + 2e^2
    e = 0.05
    assert audit(0.5, 1 + e).ratio == pytest.approx(7 + 8 * e + 2 * e * e)


def test_params_schedule_and_validate():
    p = Params.schedule(1000)
    assert (p.mu1, p.mu2, p.mu3, p.omega) == (round(1000 ** 0.24), 2, 1, round(1000 ** 0.12))
    with pytest.raises(ValueError):
        Params.schedule(100, mu2=2, mu3=3)
    with pytest.raises(ValueError):
        Params.schedule(100, mu1=2, mu2=3)
    with pytest.raises(ValueError):
        Params.schedule(100, eps=1.5)
    p = Params(mu1=5, mu2=2, mu3=1, omega=2)
    assert p.samples_per_subblock(100) == math.ceil(2 * math.log(100) * 5 / 2)


def test_partition_formulas():
    tau = np.column_stack([np.arange(11.0), np.zeros(11)])
    sigma = np.column_stack([np.arange(5.0), np.ones(5)])
    part = partition(tau, sigma, Params(mu1=5, mu2=2, mu3=1))
    assert part.tau_blocks == [1, 6, 11]
    assert part.sigma_blocks == [1, 3, 5]
    assert part.sub_blocks[0][:2] == [2, 3]
    assert sub_ranges(2, 1) == [(0, 2)]
    assert sub_ranges(6, 2) == [(0, 3), (3, 5), (5, 6)]


def test_padding_keeps_curve():
    c = np.column_stack([np.arange(8.0), (np.arange(8.0) % 2)])
    padded = pad_curve(c, 3)
    assert len(padded) - 1 == 9
    assert compute_exact(c, padded) == pytest.approx(0.0, abs=1e-7)


def test_straight_block():
    B = np.column_stack([np.arange(9.0), np.zeros(9)])
    ix = BlockIndex(B, 0.1, Params(mu1=8, mu2=2, mu3=1))
    assert list(ix.zeta_k) == [0, 8]
    assert ix.i_pre == 8 and ix.i_suf == 0


def test_zigzag_block_has_no_simplification():
    B = np.array([[i, 10.0 * (i % 2)] for i in range(9)])
    ix = BlockIndex(B, 0.01, Params(mu1=8, mu2=2, mu3=1))
    assert ix.zeta_k is None


def test_cover_entries_match_fresh_wavefront(rng):
    for _ in range(5):
        B = walk(rng, 9)
        ix = CoverIndex(B, 2.0, 0.05)
        for _ in range(10):
            i1, i2 = sorted(rng.integers(0, 9, 2))
            i = int(rng.integers(0, 8))
            t = ix.point(i1, i, 0)
            if t is None:
                continue
            lo, hi, mx = ix.entry(i1, i2, i, 0)
            S = [None] * 8
            # the source sits on the ball boundary; give the oracle an ulp of slack
            S[i] = (max(t - 1e-9, 0.0), min(t + 1e-9, 1.0))
            ref = brute_cover(B, B[i1:i2 + 1], 2.0, S, tolerance(B))
            for e in range(8):
                got = None if lo[e] > hi[e] else (lo[e], hi[e])
                assert (got is None) == (ref[e] is None)
                if got is not None:
                    assert got == pytest.approx(ref[e], abs=1e-7)


def test_cover_trivial_cases(rng):
    B = walk(rng, 10)
    ix = CoverIndex(B, 1.0, 0.05)
    lo, hi = ix.query(0, 9, (np.full(9, np.inf), np.full(9, -np.inf)))
    assert np.all(lo > hi)
    S = (np.r_[0.0, np.full(8, np.inf)], np.r_[0.0, np.full(8, -np.inf)])
    lo, hi = ix.query(0, 9, S)
    assert lo[8] <= 1.0 <= hi[8]
    with pytest.raises(ValueError):
        ix.query(0, 9, S, delta_prime=2.0)


def test_surrogate_examples(rng):
    p = Params(mu1=10, mu2=3, mu3=1)
    B = walk(rng, 11)
    delta = 0.5
    ix = BlockIndex(B, delta, p)
    sig = subcurve(B, 2.3, 5.7)
    r = ix.find_surrogate(sig, 3)
    assert r is not None
    assert decide_exact(subcurve(B, *r), sig, ix.surrogate_bound)
    assert ix.find_surrogate(sig + 1000.0, 3) is None


def test_null_surrogate_means_unmarked(rng):
    p = Params(mu1=8, mu2=3, mu3=1)
    for _ in range(15):
        B = walk(rng, 9)
        sig = walk(rng, 4) + B[rng.integers(0, 9)]
        delta = rng.uniform(0.3, 2.0)
        ix = BlockIndex(B, delta, p)
        marked = brute_marked_edges(B, sig, delta)
        for e in range(8):
            if ix.find_surrogate(sig, e) is None:
                assert e not in marked


def test_reach_empty_sources(rng):
    p = Params(mu1=6, mu2=3, mu3=1)
    B, sig = walk(rng, 7), walk(rng, 4)
    ix = BlockIndex(B, 0.5, p)
    empty = lambda k: (np.full(k, np.inf), np.full(k, -np.inf))
    out = reach(ix, sig, empty(3), empty(6))
    assert np.all(out.Av[0] > out.Av[1]) and np.all(out.Aw[0] > out.Aw[1])


def test_reach_everything_free(rng):
    p = Params(mu1=6, mu2=3, mu3=1)
    B, sig = walk(rng, 7), walk(rng, 4)
    ix = BlockIndex(B, 100.0, p)
    Av = (np.r_[0.0, np.full(2, np.inf)], np.r_[0.0, np.full(2, -np.inf)])
    out = reach(ix, sig, Av, (np.full(6, np.inf), np.full(6, -np.inf)))
    assert np.all(out.Av[0] == 0.0) and np.all(out.Av[1] == 1.0)
    assert np.all(out.Aw[0] == 0.0) and np.all(out.Aw[1] == 1.0)


def test_decide_examples(rng):
    P = walk(rng, 30)
    assert decide_approx(P, P, 0.1)
    Q = walk(rng, 25)
    d = compute_exact(P, Q)
    assert decide_approx(P, Q, d)
    # B_impl is 11.3 here, so a shift of 10 does not force the answer; 12 does
    for shift in (10.0, 12.0):
        dec = Decider(SEG_A, SEG_A + [shift, 0.0])
        assert not dec.decide(1.0)
    assert dec.ratio_bound < 12
    with pytest.raises(CurveError):
        decide_approx(SEG_A[:1], SEG_B, 1.0)


def test_decide_contract(rng):
    for it in range(15):
        P, Q = walk(rng, int(rng.integers(3, 40))), walk(rng, int(rng.integers(3, 40)))
        d = compute_exact(P, Q)
        dec = Decider(P, Q, seed=it)
        assert dec.decide(d * (1 + 1e-9))
        assert not dec.decide(d * 0.999 / dec.ratio_bound)


def test_swap_when_sigma_longer(rng):
    P, Q = walk(rng, 8), walk(rng, 30)
    assert Decider(P, Q).swapped
    d = compute_exact(P, Q)
    assert decide_approx(P, Q, d) == decide_approx(Q, P, d)


def test_compute_examples():
    r = compute_approx(SEG_A, SEG_A)
    assert r.value == 0
    r = compute_approx(SEG_A, SEG_B)
    assert 1.0 <= r.value <= 1.5 * r.ratio_bound + 1e-9
    assert r.lower <= 1.0


def test_compute_decision_count(rng):
    P, Q = walk(rng, 40), walk(rng, 40)
    r = compute_approx(P, Q)
    d = compute_exact(P, Q)
    lo0 = max(np.linalg.norm(P[0] - Q[0]), np.linalg.norm(P[-1] - Q[-1]))
    ratio = (lo0 + np.sum(np.linalg.norm(np.diff(P, axis=0), axis=1))
             + np.sum(np.linalg.norm(np.diff(Q, axis=0), axis=1))) / lo0
    assert r.decisions <= math.ceil(math.log2(math.log(ratio) / math.log(1.5))) + 2 + math.ceil(math.log2(2))
    assert d <= r.value <= 1.5 * r.ratio_bound * d


def test_sampling_count(rng):
    P, Q = walk(rng, 60), walk(rng, 60)
    dec = Decider(P, Q, params=Params(mu1=6, mu2=3, mu3=1, omega=2))
    assert dec.n_samples == math.ceil(2 * math.log(60) * 6 / 2)
    assert dec.samples.shape[-1] == dec.n_samples
    c = new_counters()
    dec.decide(compute_exact(P, Q), c)
    assert c[5] > 0
