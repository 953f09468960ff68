"""Benchmark sweeps over generated random-walk pairs.

The unit of work is one decision at delta = the exact distance of the pair
(continuous or discrete depending on the mode); compute runs need a varying
number of decisions, which would blur the slope.  Work is the
wavefront_cells counter, which also absorbs the Cover merges.
"""

import logging
import math
import time

import numpy as np

from .approx import Decider
from .approx_discrete import DiscreteDecider
from .freespace import (COUNTER_NAMES, compute_exact, decide_exact, discrete_compute_exact,
                        discrete_decide_exact, new_counters)
from .geometry import generate_synthetic

log = logging.getLogger(__name__)

MODES = ("exact", "approx", "discrete", "discrete-approx")


def walk_pair(n, seed):
    return (generate_synthetic("walk", n, seed=2 * seed),
            generate_synthetic("walk", n, seed=2 * seed + 1))


def one_decision(mode, tau, sigma, delta, eps=0.5, seed=0):
    counters = new_counters()
    t0 = time.perf_counter()
    if mode == "exact":
        ans = decide_exact(tau, sigma, delta, counters=counters)
    elif mode == "discrete":
        ans = discrete_decide_exact(tau, sigma, delta, counters=counters)
    elif mode == "approx":
        ans = Decider(tau, sigma, eps=eps, seed=seed).decide(delta, counters)
    elif mode == "discrete-approx":
        ans = DiscreteDecider(tau, sigma, eps=eps, seed=seed).decide(delta, counters)
    else:
        raise ValueError("unknown mode %r" % mode)
    return bool(ans), counters, time.perf_counter() - t0


def loglog_slope(xs, ys):
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.maximum(np.asarray(ys, dtype=float), 1.0))
    if len(x) < 2:
        return float("nan")
    return float(np.polyfit(x, y, 1)[0])


def run_bench(modes=("exact", "approx"), sizes=(128, 256, 512, 1024), reps=3, eps=0.5, seed=0):
    for mode in modes:
        if mode not in MODES:
            raise ValueError("unknown mode %r" % mode)
    rows = []
    for n in sizes:
        for r in range(reps):
            tau, sigma = walk_pair(n, seed + r)
            d_cont = d_disc = None
            for mode in modes:
                if mode in ("exact", "approx"):
                    if d_cont is None:
                        d_cont = compute_exact(tau, sigma)
                    delta = d_cont
                else:
                    if d_disc is None:
                        d_disc = discrete_compute_exact(tau, sigma)
                    delta = d_disc
                ans, c, wall = one_decision(mode, tau, sigma, delta, eps, seed + r)
                rows.append(dict(mode=mode, n=n, m=n, rep=r, delta=delta, decision=ans,
                                 work=int(c[0]), wall_time=wall,
                                 counters={k: int(v) for k, v in zip(COUNTER_NAMES, c)}))
                log.info("bench %s n=%d rep=%d work=%d wall=%.3fs", mode, n, r, c[0], wall)
    summary = {}
    for mode in modes:
        nm, work, wall = [], [], []
        for n in sizes:
            sel = [x for x in rows if x["mode"] == mode and x["n"] == n]
            nm.append(n * n)
            work.append(float(np.median([x["work"] for x in sel])))
            wall.append(float(np.median([x["wall_time"] for x in sel])))
        summary[mode] = dict(nm=nm, median_work=work, median_wall_time=wall,
                             slope=loglog_slope(nm, work))
    return dict(unit="one decision at delta = d_F", sizes=list(sizes), reps=reps, eps=eps,
                seed=seed, summary=summary, runs=rows)


def format_report(rep):
    lines = ["%-16s %8s %14s %10s" % ("mode", "n", "median work", "wall [s]")]
    for mode, s in rep["summary"].items():
        for nm, w, t in zip(s["nm"], s["median_work"], s["median_wall_time"]):
            lines.append("%-16s %8d %14.0f %10.3f" % (mode, int(math.isqrt(nm)), w, t))
        lines.append("%-16s slope %.3f" % (mode, s["slope"]))
    return "\n".join(lines)
