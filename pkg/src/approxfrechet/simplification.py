"""Vertex-restricted simplification under the continuous and discrete distance.

A shortcut v_i v_j is feasible when the segment is within c_simp * delta of
tau[v_i, v_j] (continuous case).  The simplification is a minimum-vertex path
of feasible shortcuts from the first to the last vertex, found by dynamic
programming over the shortcut graph.  In the discrete case we search for the
shortest subsequence (first and last vertex kept) whose discrete distance to
tau is at most c_simp * delta.
"""

import numpy as np
from numba import njit

from .freespace import decide_kernel, new_counters, vdist
from .geometry import as_curve, tolerance
from .matching import build_discrete_matching, build_matching

C_SIMP = 2.0
BIG = 1 << 30


@njit(cache=True)
def shortcut_ok(P, i, j, thr, eta, counters):
    seg = np.empty((2, P.shape[1]))
    seg[0] = P[i]
    seg[1] = P[j]
    return decide_kernel(seg, P[i:j + 1], thr, eta, counters)


@njit(cache=True)
def feasibility(P, thr, eta, counters):
    n = P.shape[0]
    feas = np.zeros((n, n), dtype=np.bool_)
    for i in range(n - 1):
        feas[i, i + 1] = True
        for j in range(i + 2, n):
            feas[i, j] = shortcut_ok(P, i, j, thr, eta, counters)
    return feas


@njit(cache=True)
def min_paths_from(feas, s):
    """Fewest vertices on a shortcut path from s to every j >= s."""
    n = feas.shape[0]
    cnt = np.full(n, BIG, dtype=np.int64)
    pred = np.full(n, -1, dtype=np.int64)
    cnt[s] = 1
    for j in range(s + 1, n):
        for h in range(s, j):
            if feas[h, j] and cnt[h] + 1 < cnt[j]:
                cnt[j] = cnt[h] + 1
                pred[j] = h
    return cnt, pred


@njit(cache=True)
def all_min_paths(feas):
    n = feas.shape[0]
    cnt = np.full((n, n), BIG, dtype=np.int64)
    pred = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        c, p = min_paths_from(feas, s)
        cnt[s] = c
        pred[s] = p
    return cnt, pred


@njit(cache=True)
def path_of(pred_row, s, t):
    k = 1
    j = t
    while j != s:
        j = pred_row[j]
        k += 1
    out = np.empty(k, dtype=np.int64)
    j = t
    for q in range(k - 1, -1, -1):
        out[q] = j
        if q > 0:
            j = pred_row[j]
    return out


@njit(cache=True)
def discrete_dp(P, thr):
    """f[t, q]: fewest chosen vertices when tau vertex t is coupled with the
    chosen vertex q (q >= t is allowed only along the coupling).

    back[t, q] is the predecessor state t' * n + q' or -1.
    """
    n = P.shape[0]
    f = np.full((n, n), BIG, dtype=np.int64)
    back = np.full((n, n), -1, dtype=np.int64)
    ok = np.zeros((n, n), dtype=np.bool_)
    for t in range(n):
        for q in range(n):
            ok[t, q] = vdist(P, t, P, q) <= thr
    if not ok[0, 0]:
        return f, back
    f[0, 0] = 1
    for t in range(n):
        for q in range(n):
            cur = f[t, q]
            if cur >= BIG:
                continue
            key = t * n + q
            if t + 1 < n and ok[t + 1, q] and cur < f[t + 1, q]:
                f[t + 1, q] = cur
                back[t + 1, q] = key
            for q2 in range(q + 1, n):
                if ok[t, q2] and cur + 1 < f[t, q2]:
                    f[t, q2] = cur + 1
                    back[t, q2] = key
                if t + 1 < n and ok[t + 1, q2] and cur + 1 < f[t + 1, q2]:
                    f[t + 1, q2] = cur + 1
                    back[t + 1, q2] = key
    return f, back


@njit(cache=True)
def discrete_trace(f, back, t):
    """Coupling states (tau vertex, chosen vertex) ending at (t, t), in order,
    and the chosen indices.  Both empty when infeasible."""
    n = f.shape[0]
    if f[t, t] >= BIG:
        return np.empty((0, 2), dtype=np.int64), np.empty(0, dtype=np.int64)
    k = 1
    key = back[t, t]
    while key >= 0:
        k += 1
        key = back[key // n, key % n]
    states = np.empty((k, 2), dtype=np.int64)
    a = t
    b = t
    for r in range(k - 1, -1, -1):
        states[r, 0] = a
        states[r, 1] = b
        if r > 0:
            key = back[a, b]
            a = key // n
            b = key % n
    idx = np.empty(f[t, t], dtype=np.int64)
    c = 0
    for r in range(k):
        if r == 0 or states[r, 1] != states[r - 1, 1]:
            idx[c] = states[r, 1]
            c += 1
    return states, idx


@njit(cache=True)
def discrete_min_subsequence(P, thr):
    """Shortest subsequence Z of P (ends kept) with discrete d_F(P, Z) <= thr.

    Returns the chosen indices (empty if infeasible).
    """
    f, back = discrete_dp(P, thr)
    states, idx = discrete_trace(f, back, P.shape[0] - 1)
    return idx


class Simplification:
    """Result of a simplification call."""

    def __init__(self, simplified, indices, matching, error_bound):
        self.simplified = simplified
        self.indices = indices
        self.matching = matching
        self.error_bound = error_bound
        self.budget_used = len(indices)

    def __repr__(self):
        return "Simplification(%d vertices, error<=%g)" % (self.budget_used, self.error_bound)


def simplify_continuous(tau, delta, budget, c_simp=C_SIMP, counters=None):
    """Minimum vertex-restricted simplification with shortcuts within c_simp*delta.

    Returns None when the minimum exceeds ``budget``.
    """
    tau = as_curve(tau)
    if delta < 0 or budget < 2:
        raise ValueError("need delta >= 0 and budget >= 2")
    if counters is None:
        counters = new_counters()
    thr = c_simp * float(delta)
    if len(tau) == 1:
        return Simplification(tau.copy(), np.zeros(1, dtype=np.int64),
                              build_matching(tau, tau, thr), thr)
    eta = tolerance(tau)
    feas = feasibility(tau, thr, eta, counters)
    cnt, pred = min_paths_from(feas, 0)
    if cnt[-1] > budget:
        return None
    idx = path_of(pred, 0, len(tau) - 1)
    simp = tau[idx]
    return Simplification(simp, idx, build_matching(tau, simp, thr, counters=counters), thr)


def simplify_discrete(tau, delta, budget, c_simp=C_SIMP, counters=None):
    """Shortest vertex subsequence within discrete distance c_simp*delta."""
    tau = as_curve(tau)
    if delta < 0 or budget < 2:
        raise ValueError("need delta >= 0 and budget >= 2")
    thr = c_simp * float(delta)
    idx = discrete_min_subsequence(tau, thr)
    if len(idx) == 0 or len(idx) > budget:
        return None
    simp = tau[idx]
    return Simplification(simp, idx, build_discrete_matching(tau, simp, thr, counters), thr)


def shortcut_feasible(tau, i, j, delta, c_simp=C_SIMP):
    """The shortcut test used by :func:`simplify_continuous` (for tests)."""
    tau = as_curve(tau, collapse=False)
    return bool(shortcut_ok(tau, i, j, c_simp * float(delta), tolerance(tau), new_counters()))

