"""Explicit matchings realizing a distance bound.

A continuous matching is stored as a monotone chain of breakpoints
(bx[k], by[k]): bx are positions on tau, by positions on sigma, and between
consecutive breakpoints both curves stay inside one edge, so the matching is
the linear interpolation between them.  The breakpoints are the vertex
images M(v_i) and M(w_j) merged in order.
"""

import numpy as np
from numba import njit

from .freespace import (dis_wave_full, new_counters, point_source,
                        wavefront_full)
from .geometry import CurvePoint, as_curve, point_at, tolerance


class MatchingError(ValueError):
    """The requested bound is below the distance; carries a witness."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@njit(cache=True)
def backtrack(n, m, Wv_lo, Wv_hi, Ww_lo, Ww_hi):
    """Vertex images from the full propagation output.

    Returns (A, B): A[i] is the sigma position matched to v_i and B[j] the
    tau position matched to w_j.  Assumes v_n and w_m are matched.
    """
    A = np.zeros(n)
    B = np.zeros(m)
    A[n - 1] = m - 1
    B[m - 1] = n - 1
    i = n - 1
    j = m - 1
    # on_tau: M(w_j) lies on tau edge i-1; otherwise M(v_i) lies on sigma edge j-1
    on_tau = True
    while i > 0 and j > 0:
        vfree = Wv_lo[i - 1, j - 1] <= Wv_hi[i - 1, j - 1]
        wfree = Ww_lo[j - 1, i - 1] <= Ww_hi[j - 1, i - 1]
        if (on_tau and vfree) or (not on_tau and not wfree):
            A[i - 1] = (j - 1) + Wv_lo[i - 1, j - 1]
            i -= 1
            on_tau = False
        else:
            B[j - 1] = (i - 1) + Ww_lo[j - 1, i - 1]
            j -= 1
            on_tau = True
    # the rest of one curve collapses onto the other's first vertex
    for jj in range(j):
        B[jj] = 0.0
    for ii in range(i):
        A[ii] = 0.0
    return A, B


@njit(cache=True)
def merge_breakpoints(A, B):
    n = A.shape[0]
    m = B.shape[0]
    bx = np.empty(n + m)
    by = np.empty(n + m)
    a = 0
    b = 0
    k = 0
    while a < n or b < m:
        take_a = False
        if b >= m:
            take_a = True
        elif a < n:
            if a < B[b] or (a == B[b] and A[a] <= b):
                take_a = True
        if take_a:
            bx[k] = a
            by[k] = A[a]
            a += 1
        else:
            bx[k] = B[b]
            by[k] = b
            b += 1
        k += 1
    return bx, by


@njit(cache=True)
def query_min(bx, by, x):
    """Smallest partner of position x in the chain (bx -> by)."""
    k = np.searchsorted(bx, x, side="left")
    if k >= bx.shape[0]:
        return by[bx.shape[0] - 1]
    if bx[k] == x or k == 0:
        return by[k]
    x0 = bx[k - 1]
    x1 = bx[k]
    return by[k - 1] + (by[k] - by[k - 1]) * (x - x0) / (x1 - x0)


@njit(cache=True)
def query_max(bx, by, x):
    """Largest partner of position x in the chain (bx -> by)."""
    k = np.searchsorted(bx, x, side="right") - 1
    if k < 0:
        return by[0]
    if bx[k] == x or k == bx.shape[0] - 1:
        return by[k]
    x0 = bx[k]
    x1 = bx[k + 1]
    return by[k] + (by[k + 1] - by[k]) * (x - x0) / (x1 - x0)


@njit(cache=True)
def matching_kernel(P, Q, delta, eta, counters):
    """Breakpoints of a matching within delta; ok=False when none exists."""
    n = P.shape[0]
    m = Q.shape[0]
    if n == 1 or m == 1:
        A = np.zeros(n)
        B = np.zeros(m)
        if n == 1:
            for j in range(m):
                B[j] = 0.0
            A[0] = m - 1
        else:
            for i in range(n):
                A[i] = 0.0
            B[0] = n - 1
        bx, by = merge_breakpoints(A, B)
        return True, A, B, bx, by
    Slo, Shi = point_source(n - 1, 0, 0.0)
    S2lo, S2hi = point_source(m - 1, 0, 0.0)
    Wv_lo, Wv_hi, Ww_lo, Ww_hi = wavefront_full(P, Q, delta, eta, Slo, Shi, S2lo, S2hi, counters)
    ok = Wv_lo[n - 1, m - 2] <= Wv_hi[n - 1, m - 2] and Wv_hi[n - 1, m - 2] >= 1.0
    if not ok:
        A = np.zeros(n)
        B = np.zeros(m)
        return False, A, B, A, A
    A, B = backtrack(n, m, Wv_lo, Wv_hi, Ww_lo, Ww_hi)
    bx, by = merge_breakpoints(A, B)
    return True, A, B, bx, by


class Matching:
    """Monotone matching between tau and sigma realizing ``realized_bound``."""

    def __init__(self, tau, sigma, A, B, bx, by, bound):
        self.tau = tau
        self.sigma = sigma
        self.A = A
        self.B = B
        self.bx = bx
        self.by = by
        self.realized_bound = bound

    @property
    def tau_vertex_images(self):
        return [CurvePoint.from_position(p, len(self.sigma) - 1) for p in self.A]

    @property
    def sigma_vertex_images(self):
        return [CurvePoint.from_position(p, len(self.tau) - 1) for p in self.B]

    def query(self, x):
        """Image on sigma of the tau point x (CurvePoint or position)."""
        pos = x.position if isinstance(x, CurvePoint) else float(x)
        if pos == int(pos) and 0 <= pos < len(self.A):
            # vertices answer with their stored image
            return CurvePoint.from_position(self.A[int(pos)], len(self.sigma) - 1)
        return CurvePoint.from_position(query_min(self.bx, self.by, pos), len(self.sigma) - 1)

    def query_sigma(self, y):
        """Image on tau of the sigma point y."""
        pos = y.position if isinstance(y, CurvePoint) else float(y)
        if pos == int(pos) and 0 <= pos < len(self.B):
            return CurvePoint.from_position(self.B[int(pos)], len(self.tau) - 1)
        return CurvePoint.from_position(query_min(self.by, self.bx, pos), len(self.tau) - 1)

    def sample(self, k=1000):
        """k pairs of points (on tau, on sigma) spread along the matching."""
        s = np.linspace(0.0, 1.0, k)
        seg = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(self.bx)) + np.abs(np.diff(self.by)))])
        total = seg[-1]
        if total == 0:
            return [(point_at(self.tau, self.bx[0]), point_at(self.sigma, self.by[0]))] * k
        u = s * total
        xs = np.interp(u, seg, self.bx)
        ys = np.interp(u, seg, self.by)
        return [(point_at(self.tau, x), point_at(self.sigma, y)) for x, y in zip(xs, ys)]

    def realized_distance(self, k=1000):
        return max(float(np.linalg.norm(p - q)) for p, q in self.sample(k))


def build_matching(tau, sigma, delta, eta=None, counters=None):
    """A matching with distance at most delta (plus tolerance)."""
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if eta is None:
        eta = tolerance(tau, sigma)
    if counters is None:
        counters = new_counters()
    ok, A, B, bx, by = matching_kernel(tau, sigma, float(delta), float(eta), counters)
    if not ok:
        from .freespace import compute_exact
        raise MatchingError("no matching within %g" % delta,
                            witness=compute_exact(tau, sigma, 1e-9))
    return Matching(tau, sigma, A, B, bx, by, float(delta))


# ---------------------------------------------------------------------------
# discrete

@njit(cache=True)
def dis_backtrack(DW):
    """Pair list from (n-1, m-1) back to (0, 0) through reachable pairs."""
    n, m = DW.shape
    out = np.empty((n + m, 2), dtype=np.int64)
    i = n - 1
    j = m - 1
    k = 0
    out[k, 0] = i
    out[k, 1] = j
    k += 1
    while i > 0 or j > 0:
        if i > 0 and j > 0 and DW[i - 1, j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and DW[i - 1, j]:
            i -= 1
        else:
            j -= 1
        out[k, 0] = i
        out[k, 1] = j
        k += 1
    return out[:k][::-1].copy()


@njit(cache=True)
def partner_ranges(pairs, n, m):
    """Smallest and largest partner of every vertex on both sides."""
    tmin = np.full(n, m, dtype=np.int64)
    tmax = np.full(n, -1, dtype=np.int64)
    smin = np.full(m, n, dtype=np.int64)
    smax = np.full(m, -1, dtype=np.int64)
    for k in range(pairs.shape[0]):
        i = pairs[k, 0]
        j = pairs[k, 1]
        tmin[i] = min(tmin[i], j)
        tmax[i] = max(tmax[i], j)
        smin[j] = min(smin[j], i)
        smax[j] = max(smax[j], i)
    return tmin, tmax, smin, smax


class DiscreteMatching:
    """Coupling of vertex sequences; ``pairs`` runs from (0, 0) to (n-1, m-1)."""

    def __init__(self, pairs, n, m, bound):
        self.pairs = pairs
        self.realized_bound = bound
        self.tmin, self.tmax, self.smin, self.smax = partner_ranges(pairs, n, m)

    @property
    def L(self):
        """Pairs in the order they are found, from (v_n, w_m) down to (v_1, w_1)."""
        return [tuple(int(v) for v in p) for p in self.pairs[::-1]]

    def image_of_tau_vertex(self, i):
        return int(self.tmin[i])

    def image_of_sigma_vertex(self, j):
        return int(self.smin[j])


def build_discrete_matching(tau, sigma, delta, counters=None):
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if counters is None:
        counters = new_counters()
    S = np.zeros(len(tau), dtype=np.bool_)
    S2 = np.zeros(len(sigma), dtype=np.bool_)
    S[0] = True
    S2[0] = True
    DW = dis_wave_full(tau, sigma, float(delta), S, S2, counters)
    if not DW[-1, -1]:
        from .freespace import discrete_compute_exact
        raise MatchingError("no discrete coupling within %g" % delta,
                            witness=discrete_compute_exact(tau, sigma))
    return DiscreteMatching(dis_backtrack(DW), len(tau), len(sigma), float(delta))


__all__ = ["Matching", "DiscreteMatching", "MatchingError", "build_matching",
           "build_discrete_matching", "query_min", "query_max"]
