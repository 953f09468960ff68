"""Reachability propagation through the free space of two curves.

``wavefront`` takes two curves tau (n points) and sigma (m points), a radius
delta and two source arrays: S over tau's edges (start pairs (x, w_1)) and
S2 over sigma's edges (start pairs (v_1, p)).  It returns, for every vertex
v_i of tau, the part of each sigma edge reachable together with v_i, and
symmetrically for the vertices of sigma.

Array layout used by all kernels:
    Wv_lo[i, j], Wv_hi[i, j]  interval on sigma edge j for tau vertex i
    Ww_lo[j, i], Ww_hi[j, i]  interval on tau edge i for sigma vertex j
An interval is empty when lo > hi.

Counters are int64 arrays shared by every kernel; index CELLS counts the
cells relaxed.
"""

import math

import numpy as np
from numba import njit

from .geometry import as_curve, clip, curve_length, tolerance

CELLS = 0
COVER_QUERIES = 1
SURROGATE_TESTS = 2
SAMPLES = 3
FALLBACKS = 4
REACH_CALLS = 5
N_COUNTERS = 6
COUNTER_NAMES = ("wavefront_cells", "cover_queries", "surrogate_tests",
                 "samples_drawn", "fallbacks_triggered", "reach_calls")


def new_counters():
    return np.zeros(N_COUNTERS, dtype=np.int64)


@njit(cache=True)
def _init_line(P, Q, delta, eta, S2lo, S2hi, corner, outlo, outhi):
    """Reachable parts of Q's edges paired with the single point P[0].

    ``corner`` says whether the pair (P[0], Q[0]) is itself a source.
    """
    m = Q.shape[0]
    for j in range(m - 1):
        blo, bhi = clip(Q[j], Q[j + 1], P[0], delta, eta)
        if blo > bhi:
            outlo[j] = math.inf
            outhi[j] = -math.inf
            continue
        if j == 0:
            entered = corner
        else:
            entered = outlo[j - 1] <= outhi[j - 1] and outhi[j - 1] >= 1.0
        if entered:
            outlo[j] = blo
            outhi[j] = bhi
            continue
        slo = S2lo[j]
        shi = S2hi[j]
        lo = max(slo, blo)
        if slo <= shi and lo <= min(shi, bhi):
            outlo[j] = lo
            outhi[j] = bhi
        else:
            outlo[j] = math.inf
            outhi[j] = -math.inf


@njit(cache=True)
def _corner(P, Q, eta, delta, Slo, Shi, S2lo, S2hi):
    d2 = 0.0
    for q in range(P.shape[1]):
        z = P[0, q] - Q[0, q]
        d2 += z * z
    if d2 > (delta + eta) * (delta + eta):
        return False
    if P.shape[0] > 1 and Slo[0] <= Shi[0] and Slo[0] <= 0.0:
        return True
    if Q.shape[0] > 1 and S2lo[0] <= S2hi[0] and S2lo[0] <= 0.0:
        return True
    return False


@njit(cache=True)
def wavefront_full(P, Q, delta, eta, Slo, Shi, S2lo, S2hi, counters):
    """Full output of the propagation (all vertex rows and columns)."""
    n = P.shape[0]
    m = Q.shape[0]
    Wv_lo = np.empty((n, max(m - 1, 0)))
    Wv_hi = np.empty((n, max(m - 1, 0)))
    Ww_lo = np.empty((m, max(n - 1, 0)))
    Ww_hi = np.empty((m, max(n - 1, 0)))
    corner = _corner(P, Q, eta, delta, Slo, Shi, S2lo, S2hi)
    _init_line(P, Q, delta, eta, S2lo, S2hi, corner, Wv_lo[0], Wv_hi[0])
    _init_line(Q, P, delta, eta, Slo, Shi, corner, Ww_lo[0], Ww_hi[0])
    for i in range(n - 1):
        for j in range(m - 1):
            llo = Wv_lo[i, j]
            lhi = Wv_hi[i, j]
            blo = Ww_lo[j, i]
            bhi = Ww_hi[j, i]
            left = llo <= lhi
            bottom = blo <= bhi
            # tau vertex i+1 on sigma edge j
            if left or bottom:
                flo, fhi = clip(Q[j], Q[j + 1], P[i + 1], delta, eta)
                if bottom:
                    Wv_lo[i + 1, j] = flo
                    Wv_hi[i + 1, j] = fhi
                else:
                    lo = max(llo, flo)
                    if lo <= fhi:
                        Wv_lo[i + 1, j] = lo
                        Wv_hi[i + 1, j] = fhi
                    else:
                        Wv_lo[i + 1, j] = math.inf
                        Wv_hi[i + 1, j] = -math.inf
                # sigma vertex j+1 on tau edge i
                flo, fhi = clip(P[i], P[i + 1], Q[j + 1], delta, eta)
                if left:
                    Ww_lo[j + 1, i] = flo
                    Ww_hi[j + 1, i] = fhi
                else:
                    lo = max(blo, flo)
                    if lo <= fhi:
                        Ww_lo[j + 1, i] = lo
                        Ww_hi[j + 1, i] = fhi
                    else:
                        Ww_lo[j + 1, i] = math.inf
                        Ww_hi[j + 1, i] = -math.inf
            else:
                Wv_lo[i + 1, j] = math.inf
                Wv_hi[i + 1, j] = -math.inf
                Ww_lo[j + 1, i] = math.inf
                Ww_hi[j + 1, i] = -math.inf
    counters[CELLS] += (n - 1) * (m - 1) + (n - 1) + (m - 1)
    return Wv_lo, Wv_hi, Ww_lo, Ww_hi


@njit(cache=True)
def wavefront_last(P, Q, delta, eta, Slo, Shi, S2lo, S2hi, counters):
    """Only W^{v_n} (over Q's edges) and W^{w_m} (over P's edges).

    Same recurrence as :func:`wavefront_full` in O(n + m) memory.
    """
    n = P.shape[0]
    m = Q.shape[0]
    rlo = np.empty(max(m - 1, 0))
    rhi = np.empty(max(m - 1, 0))
    clo = np.empty(max(n - 1, 0))
    chi = np.empty(max(n - 1, 0))
    corner = _corner(P, Q, eta, delta, Slo, Shi, S2lo, S2hi)
    _init_line(P, Q, delta, eta, S2lo, S2hi, corner, rlo, rhi)
    _init_line(Q, P, delta, eta, Slo, Shi, corner, clo, chi)
    # rlo/rhi hold row i; clo/chi hold W^{w_0} on entry and W^{w_{m-1}} on exit
    for i in range(n - 1):
        blo = clo[i]
        bhi = chi[i]
        for j in range(m - 1):
            llo = rlo[j]
            lhi = rhi[j]
            left = llo <= lhi
            bottom = blo <= bhi
            if not left and not bottom:
                rlo[j] = math.inf
                rhi[j] = -math.inf
                blo = math.inf
                bhi = -math.inf
                continue
            flo, fhi = clip(Q[j], Q[j + 1], P[i + 1], delta, eta)
            if bottom:
                rlo[j] = flo
                rhi[j] = fhi
            else:
                lo = max(llo, flo)
                if lo <= fhi:
                    rlo[j] = lo
                    rhi[j] = fhi
                else:
                    rlo[j] = math.inf
                    rhi[j] = -math.inf
            flo, fhi = clip(P[i], P[i + 1], Q[j + 1], delta, eta)
            if left:
                blo = flo
                bhi = fhi
            else:
                lo = max(blo, flo)
                if lo <= fhi:
                    blo = lo
                    bhi = fhi
                else:
                    blo = math.inf
                    bhi = -math.inf
        clo[i] = blo
        chi[i] = bhi
    counters[CELLS] += (n - 1) * (m - 1) + (n - 1) + (m - 1)
    return rlo, rhi, clo, chi


@njit(cache=True)
def point_source(k, edge, t):
    lo = np.full(k, math.inf)
    hi = np.full(k, -math.inf)
    if k > 0:
        lo[edge] = t
        hi[edge] = t
    return lo, hi


@njit(cache=True)
def no_source(k):
    return np.full(k, math.inf), np.full(k, -math.inf)


@njit(cache=True)
def _max_dist_to_point(p, Q):
    best = 0.0
    for j in range(Q.shape[0]):
        d2 = 0.0
        for q in range(Q.shape[1]):
            z = Q[j, q] - p[q]
            d2 += z * z
        if d2 > best:
            best = d2
    return math.sqrt(best)


@njit(cache=True)
def decide_kernel(P, Q, delta, eta, counters):
    """d_F(P, Q) <= delta, up to the tolerance eta."""
    n = P.shape[0]
    m = Q.shape[0]
    if n == 1:
        return _max_dist_to_point(P[0], Q) <= delta + eta
    if m == 1:
        return _max_dist_to_point(Q[0], P) <= delta + eta
    Slo, Shi = point_source(n - 1, 0, 0.0)
    S2lo, S2hi = point_source(m - 1, 0, 0.0)
    rlo, rhi, clo, chi = wavefront_last(P, Q, delta, eta, Slo, Shi, S2lo, S2hi, counters)
    return rlo[m - 2] <= rhi[m - 2] and rhi[m - 2] >= 1.0


# ---------------------------------------------------------------------------
# Python API

class WaveFrontOutput:
    """Per-vertex reachability arrays returned by :func:`wavefront`."""

    def __init__(self, Wv_lo, Wv_hi, Ww_lo, Ww_hi):
        self.Wv_lo = Wv_lo
        self.Wv_hi = Wv_hi
        self.Ww_lo = Ww_lo
        self.Ww_hi = Ww_hi

    def per_tau_vertex(self, i):
        from .geometry import IntervalArray
        return IntervalArray(self.Wv_lo[i].copy(), self.Wv_hi[i].copy())

    def per_sigma_vertex(self, j):
        from .geometry import IntervalArray
        return IntervalArray(self.Ww_lo[j].copy(), self.Ww_hi[j].copy())


def _arrays(S, k, name):
    from .geometry import IntervalArray
    if S is None:
        return no_source(k)
    if isinstance(S, IntervalArray):
        lo, hi = S.lo, S.hi
    else:
        lo, hi = S
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if len(lo) != k or len(hi) != k:
        raise ValueError("%s must have one entry per edge (%d), got %d" % (name, k, len(lo)))
    return lo, hi


def wavefront(tau, sigma, delta, S=None, S2=None, eta=None, counters=None):
    """Run the propagation; S over tau's edges, S2 over sigma's edges.

    S and S2 may be IntervalArray objects, (lo, hi) pairs or None.
    """
    tau = as_curve(tau, collapse=False)
    sigma = as_curve(sigma, collapse=False)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    Slo, Shi = _arrays(S, len(tau) - 1, "S")
    S2lo, S2hi = _arrays(S2, len(sigma) - 1, "S2")
    if eta is None:
        eta = tolerance(tau, sigma)
    if counters is None:
        counters = new_counters()
    return WaveFrontOutput(*wavefront_full(tau, sigma, float(delta), float(eta),
                                           Slo, Shi, S2lo, S2hi, counters))


def decide_exact(tau, sigma, delta, eta=None, counters=None):
    """Exact decision d_F(tau, sigma) <= delta (within the tolerance)."""
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if delta < 0:
        return False
    if eta is None:
        eta = tolerance(tau, sigma)
    if counters is None:
        counters = new_counters()
    return bool(decide_kernel(tau, sigma, float(delta), float(eta), counters))


def exact_bracket(tau, sigma):
    lo = max(float(np.linalg.norm(tau[0] - sigma[0])), float(np.linalg.norm(tau[-1] - sigma[-1])))
    return lo, lo + curve_length(tau) + curve_length(sigma)


def compute_exact(tau, sigma, rel_tol=1e-9, counters=None):
    """Frechet distance by bisection on :func:`decide_exact`.

    Returns v with decide_exact(v) true and decide_exact(v * (1 - rel_tol))
    false (or 0 for identical curves).
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    eta = tolerance(tau, sigma)
    if counters is None:
        counters = new_counters()
    lo, hi = exact_bracket(tau, sigma)
    if decide_kernel(tau, sigma, lo, eta, counters):
        return lo
    return float(_bisect(tau, sigma, lo, hi, rel_tol, eta, counters))


@njit(cache=True)
def _bisect(tau, sigma, lo, hi, rel_tol, eta, counters):
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if decide_kernel(tau, sigma, mid, eta, counters):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# discrete propagation

@njit(cache=True)
def vdist(P, i, Q, j):
    d2 = 0.0
    for q in range(P.shape[1]):
        z = P[i, q] - Q[j, q]
        d2 += z * z
    return math.sqrt(d2)


@njit(cache=True)
def dis_wave_full(P, Q, delta, S, S2, counters):
    """Discrete reachability: DW[i, j] iff (v_i, w_j) is reachable.

    Sources are pairs (v_x, w_0) for S[x] and (v_0, w_p) for S2[p].
    """
    n = P.shape[0]
    m = Q.shape[0]
    DW = np.zeros((n, m), dtype=np.bool_)
    for j in range(m):
        if vdist(P, 0, Q, j) <= delta:
            DW[0, j] = S2[j] or (j == 0 and S[0]) or (j > 0 and DW[0, j - 1])
    for i in range(1, n):
        if vdist(P, i, Q, 0) <= delta:
            DW[i, 0] = S[i] or DW[i - 1, 0]
        for j in range(1, m):
            if DW[i - 1, j] or DW[i, j - 1] or DW[i - 1, j - 1]:
                if vdist(P, i, Q, j) <= delta:
                    DW[i, j] = True
    counters[CELLS] += n * m
    return DW


@njit(cache=True)
def dis_wave_last(P, Q, delta, S, S2, counters):
    """Last row DW[n-1, :] and last column DW[:, m-1] in O(n + m) memory."""
    n = P.shape[0]
    m = Q.shape[0]
    row = np.zeros(m, dtype=np.bool_)
    col = np.zeros(n, dtype=np.bool_)
    for j in range(m):
        if vdist(P, 0, Q, j) <= delta:
            row[j] = S2[j] or (j == 0 and S[0]) or (j > 0 and row[j - 1])
    col[0] = row[m - 1]
    for i in range(1, n):
        diag = row[0]
        if vdist(P, i, Q, 0) <= delta:
            row[0] = S[i] or row[0]
        else:
            row[0] = False
        for j in range(1, m):
            up = row[j]
            val = False
            if up or row[j - 1] or diag:
                val = vdist(P, i, Q, j) <= delta
            diag = up
            row[j] = val
        col[i] = row[m - 1]
    counters[CELLS] += n * m
    return row, col


@njit(cache=True)
def dis_decide_kernel(P, Q, delta, counters):
    S = np.zeros(P.shape[0], dtype=np.bool_)
    S2 = np.zeros(Q.shape[0], dtype=np.bool_)
    S[0] = True
    S2[0] = True
    row, col = dis_wave_last(P, Q, delta, S, S2, counters)
    return row[Q.shape[0] - 1]


def _flags(S, k, name):
    out = np.zeros(k, dtype=np.bool_)
    if S is None:
        return out
    S = np.asarray(S)
    if S.dtype == np.bool_:
        if len(S) != k:
            raise ValueError("%s must have %d flags" % (name, k))
        return S.copy()
    for x in S.tolist():
        if not 0 <= x < k:
            raise ValueError("%s index %d out of range" % (name, x))
        out[x] = True
    return out


def dis_wave(tau, sigma, delta, S=None, S2=None, counters=None):
    """Discrete propagation.  S, S2: index collections or boolean masks.

    Returns (per_tau_vertex, per_sigma_vertex): boolean matrices where
    per_tau_vertex[i, j] says w_j is in DW^{v_i} and per_sigma_vertex[j, i]
    says v_i is in DW^{w_j}.
    """
    tau = as_curve(tau, collapse=False)
    sigma = as_curve(sigma, collapse=False)
    if counters is None:
        counters = new_counters()
    DW = dis_wave_full(tau, sigma, float(delta), _flags(S, len(tau), "S"),
                       _flags(S2, len(sigma), "S2"), counters)
    return DW, DW.T.copy()


def discrete_decide_exact(tau, sigma, delta, counters=None):
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if counters is None:
        counters = new_counters()
    return bool(dis_decide_kernel(tau, sigma, float(delta), counters))


def pairwise_distances(tau, sigma):
    tau = np.asarray(tau, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    return _pairwise(tau, sigma)


@njit(cache=True)
def _pairwise(P, Q):
    out = np.empty(P.shape[0] * Q.shape[0])
    k = 0
    for i in range(P.shape[0]):
        for j in range(Q.shape[0]):
            out[k] = vdist(P, i, Q, j)
            k += 1
    return out


def discrete_compute_exact(tau, sigma, counters=None):
    """Discrete Frechet distance: binary search over the pairwise distances."""
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if counters is None:
        counters = new_counters()
    cand = np.unique(_pairwise(tau, sigma))
    lo = max(vdist(tau, 0, sigma, 0), vdist(tau, len(tau) - 1, sigma, len(sigma) - 1))
    cand = cand[cand >= lo]
    a, b = 0, len(cand) - 1
    while a < b:
        mid = (a + b) // 2
        if dis_decide_kernel(tau, sigma, cand[mid], counters):
            b = mid
        else:
            a = mid + 1
    return float(cand[a])
