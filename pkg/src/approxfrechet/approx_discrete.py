"""Approximate decision and computation of the discrete Frechet distance.

Same block sweep as :mod:`approxfrechet.approx` with vertex sets in place of
interval arrays.  DAv (over the vertices of sigma_l) holds the vertices that
pair with v_{a_k}; DAw (over the vertices of tau_k) those that pair with
w_{b_l}.  Every member of a set is within delta of its partner vertex.

The discrete Cover is exact, so the ratio bound is 3 + 4 c_simp.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit, types
from numba.typed import Dict, List

from .approx import ApproxResult, Params, bracket_search, counters_dict, sub_ranges
from .approx import discrete_ratio
from .freespace import (CELLS, COVER_QUERIES, FALLBACKS, REACH_CALLS, SAMPLES,
                        SURROGATE_TESTS, dis_wave_last, new_counters, vdist)
from .geometry import CurveError, as_curve
from .simplification import BIG, discrete_dp, discrete_trace


def discrete_budget(p):
    return p.mu2 + 2


# ---------------------------------------------------------------------------
# block preprocessing

@njit(cache=True)
def dprep_block(B, thr, f_all, back_all, cnt):
    """One simplification table per start vertex; cnt[h, t] for all ranges."""
    M = B.shape[0] - 1
    for h in range(M + 1):
        nh = M + 1 - h
        f, back = discrete_dp(B[h:], thr)
        f_all[h, :nh, :nh] = f
        back_all[h, :nh, :nh] = back
        for t in range(h, M + 1):
            cnt[h, t] = f[t - h, t - h]


@njit(cache=True)
def dsimp(f_all, back_all, M, h, t):
    """Simplification of B[h..t] with its coupling as partner ranges.

    Returns (Z, zmin, zmax, tmin, tmax): Z global block indices, zmin/zmax
    the Z positions coupled with block vertex h + u, tmin/tmax the block
    vertices coupled with Z position z.
    """
    nh = M + 1 - h
    states, idx = discrete_trace(f_all[h, :nh, :nh], back_all[h, :nh, :nh], t - h)
    L = idx.shape[0]
    Z = idx + h
    zmin = np.full(t - h + 1, BIG, dtype=np.int64)
    zmax = np.full(t - h + 1, -1, dtype=np.int64)
    tmin = np.full(L, BIG, dtype=np.int64)
    tmax = np.full(L, -1, dtype=np.int64)
    z = -1
    prev = -1
    for r in range(states.shape[0]):
        a = states[r, 0]
        b = states[r, 1]
        if b != prev:
            z += 1
            prev = b
        if z < zmin[a]:
            zmin[a] = z
        if z > zmax[a]:
            zmax[a] = z
        if a + h < tmin[z]:
            tmin[z] = a + h
        if a + h > tmax[z]:
            tmax[z] = a + h
    return Z, zmin, zmax, tmin, tmax


@njit(cache=True)
def extents(cnt, budget, M):
    """(whole block fits, i_pre, i_suf)."""
    ipre = 0
    for t in range(M + 1):
        if cnt[0, t] <= budget:
            ipre = t
    isuf = M
    for h in range(M, -1, -1):
        if cnt[h, M] <= budget:
            isuf = h
    return cnt[0, M] <= budget, ipre, isuf


@njit(cache=True)
def vbar_of(cnt, budget, e):
    vb = e
    for h in range(e, -1, -1):
        if cnt[h, e] <= budget:
            vb = h
    return vb


@njit(cache=True)
def vtil_of(cnt, budget, e, M):
    vt = e
    for h in range(e, M + 1):
        if cnt[e, h] <= budget:
            vt = h
    return vt


@njit(cache=True)
def gather(B, Z):
    out = np.empty((Z.shape[0], B.shape[1]))
    for q in range(Z.shape[0]):
        out[q] = B[Z[q]]
    return out


# ---------------------------------------------------------------------------
# DisCover

@njit(cache=True)
def dis_entry(B, key, i1, i2, i, dprime, counters, dindex, dsets, dmax):
    if key in dindex:
        return dindex[key]
    M = B.shape[0] - 1
    S = np.zeros(M + 1, dtype=np.bool_)
    S[i] = True
    S2 = np.zeros(i2 - i1 + 1, dtype=np.bool_)
    row, col = dis_wave_last(B, B[i1:i2 + 1], dprime, S, S2, counters)
    mx = -1
    for u in range(M + 1):
        if col[u]:
            mx = u
    slot = len(dsets)
    dsets.append(col)
    dmax.append(mx)
    dindex[key] = slot
    return slot


@njit(cache=True)
def dis_cover_kernel(B, kblock, i1, i2, dprime, S, counters, dindex, dsets, dmax):
    """Vertices v with some v' <= v in S and d(B[v'..v], B[i1..i2]) <= dprime."""
    counters[COVER_QUERIES] += 1
    M = B.shape[0] - 1
    out = np.zeros(M + 1, dtype=np.bool_)
    istar = -1
    for i in range(M + 1):
        if not S[i]:
            continue
        key = ((kblock * (M + 1) + i1) * (M + 1) + i2) * (M + 1) + i
        slot = dis_entry(B, key, i1, i2, i, dprime, counters, dindex, dsets, dmax)
        mx = dmax[slot]
        if mx <= istar:
            continue
        D = dsets[slot]
        start = istar + 1
        if start < i:
            start = i
        for u in range(start, mx + 1):
            if D[u]:
                out[u] = True
        istar = mx
    counters[CELLS] += M + 1
    return out


def new_dis_pool():
    dindex = Dict.empty(key_type=types.int64, value_type=types.int64)
    dsets = List.empty_list(types.boolean[::1])
    dmax = List.empty_list(types.int64)
    return dindex, dsets, dmax


# ---------------------------------------------------------------------------
# surrogate search

@njit(cache=True)
def dis_find_surrogate(B, sig, e, thr, f_all, back_all, cnt, budget, counters):
    """(found, x', y'): block vertex range within the audited distance of sig."""
    M = B.shape[0] - 1
    vb = vbar_of(cnt, budget, e)
    vt = vtil_of(cnt, budget, e, M)
    Z1, a1, b1, tmin1, tmax1 = dsimp(f_all, back_all, M, vb, e)
    Z2, a2, b2, tmin2, tmax2 = dsimp(f_all, back_all, M, e, vt)
    n1 = Z1.shape[0]
    L = n1 + Z2.shape[0] - 1
    Z = np.empty(L, dtype=np.int64)
    tmin = np.empty(L, dtype=np.int64)
    tmax = np.empty(L, dtype=np.int64)
    Z[:n1] = Z1
    tmin[:n1] = tmin1
    tmax[:n1] = tmax1
    Z[n1:] = Z2[1:]
    tmin[n1:] = tmin2[1:]
    tmax[n1:] = tmax2[1:]
    tmax[n1 - 1] = tmax2[0]
    Zc = gather(B, Z)
    ms = sig.shape[0]
    X = np.zeros(L, dtype=np.bool_)
    anyx = False
    for a in range(L):
        if vdist(Zc, a, sig, 0) <= thr:
            X[a] = True
            anyx = True
    if not anyx:
        return False, 0, 0
    S2 = np.zeros(ms, dtype=np.bool_)
    counters[SURROGATE_TESTS] += 1
    row, col = dis_wave_last(Zc, sig, thr, X, S2, counters)
    yb = -1
    for a in range(L):
        if col[a]:
            yb = a
            break
    if yb < 0:
        return False, 0, 0
    for a in range(yb + 1):
        if not X[a]:
            continue
        S = np.zeros(L, dtype=np.bool_)
        S[a] = True
        counters[SURROGATE_TESTS] += 1
        row, col = dis_wave_last(Zc, sig, thr, S, S2, counters)
        if col[yb]:
            return True, tmin[a], tmax[yb]
    return False, 0, 0


@njit(cache=True)
def dis_marked_ends(B, sig, delta, counters):
    M = B.shape[0] - 1
    S = np.zeros(M + 1, dtype=np.bool_)
    for u in range(M + 1):
        S[u] = vdist(B, u, sig, 0) <= delta
    S2 = np.zeros(sig.shape[0], dtype=np.bool_)
    row, col = dis_wave_last(B, sig, delta, S, S2, counters)
    return col


@njit(cache=True)
def dis_canonical_surrogate(B, sig, thr, delta, f_all, back_all, cnt, budget, samples,
                            det_only, counters):
    """Surrogate through the smallest vertex for which the search succeeds."""
    M = B.shape[0] - 1
    status = np.zeros(M + 1, dtype=np.int64)
    xr = np.zeros(M + 1, dtype=np.int64)
    yr = np.zeros(M + 1, dtype=np.int64)
    found = -1
    upper = M
    if not det_only:
        for s in range(samples.shape[0]):
            counters[SAMPLES] += 1
            e = samples[s]
            if status[e] == 0:
                ok, xp, yp = dis_find_surrogate(B, sig, e, thr, f_all, back_all, cnt, budget, counters)
                status[e] = 1 if ok else 2
                xr[e] = xp
                yr[e] = yp
            if status[e] == 1:
                found = e
                break
        if found >= 0:
            upper = found - 1
        else:
            counters[FALLBACKS] += 1
            col = dis_marked_ends(B, sig, delta, counters)
            for u in range(M + 1):
                if col[u]:
                    upper = u
                    break
    e = 0
    while e <= M:
        if e > upper and found >= 0:
            break
        if status[e] == 0:
            ok, xp, yp = dis_find_surrogate(B, sig, e, thr, f_all, back_all, cnt, budget, counters)
            status[e] = 1 if ok else 2
            xr[e] = xp
            yr[e] = yp
        if status[e] == 1:
            found = e
            break
        e += 1
    if found < 0:
        return -1, 0, 0
    return found, xr[found], yr[found]


# ---------------------------------------------------------------------------
# DisReach

@njit(cache=True)
def dis_reach_kernel(B, kblock, sig, delta, thr_wave, thr_cover, budget, DAv, DAw,
                     f_all, back_all, cnt, samples, subr, det_only, counters,
                     dindex, dsets, dmax):
    """One block pair; returns (DAv', DAw', I1, I2, I3, I4)."""
    M = B.shape[0] - 1
    ms = sig.shape[0]
    counters[REACH_CALLS] += 1
    have_v = False
    for j in range(ms):
        have_v = have_v or DAv[j]
    have_w = False
    for u in range(M + 1):
        have_w = have_w or DAw[u]
    I1 = np.zeros(ms, dtype=np.bool_)
    I2 = np.zeros(ms, dtype=np.bool_)
    I3 = np.zeros(M + 1, dtype=np.bool_)
    I4 = np.zeros(M + 1, dtype=np.bool_)
    whole, ipre, isuf = extents(cnt, budget, M)
    if have_v and whole:
        Z, zmin, zmax, tmin, tmax = dsimp(f_all, back_all, M, 0, M)
        S = np.zeros(Z.shape[0], dtype=np.bool_)
        row, col = dis_wave_last(gather(B, Z), sig, thr_wave, S, DAv, counters)
        I1 = row
    if have_w:
        Z, zmin, zmax, tmin, tmax = dsimp(f_all, back_all, M, isuf, M)
        S = np.zeros(Z.shape[0], dtype=np.bool_)
        anys = False
        for u in range(isuf, M + 1):
            if DAw[u]:
                for z in range(zmin[u - isuf], zmax[u - isuf] + 1):
                    S[z] = True
                anys = True
        if anys:
            S2 = np.zeros(ms, dtype=np.bool_)
            row, col = dis_wave_last(gather(B, Z), sig, thr_wave, S, S2, counters)
            I2 = row
    if have_v:
        Z, zmin, zmax, tmin, tmax = dsimp(f_all, back_all, M, 0, ipre)
        S = np.zeros(Z.shape[0], dtype=np.bool_)
        row, col = dis_wave_last(gather(B, Z), sig, thr_wave, S, DAv, counters)
        for u in range(ipre + 1):
            for z in range(zmin[u], zmax[u] + 1):
                if col[z]:
                    I3[u] = True
    if have_w:
        R = subr.shape[0]
        xs = np.zeros(R, dtype=np.int64)
        ys = np.zeros(R, dtype=np.int64)
        ok = True
        for r in range(R):
            piece = sig[subr[r, 0]:subr[r, 1] + 1]
            e, xp, yp = dis_canonical_surrogate(B, piece, thr_wave, delta, f_all, back_all, cnt,
                                                budget, samples[r], det_only, counters)
            if e < 0:
                ok = False
                break
            xs[r] = xp
            ys[r] = yp
        if ok:
            S = DAw.copy()
            for r in range(R):
                S = dis_cover_kernel(B, kblock, xs[r], ys[r], thr_cover, S, counters,
                                     dindex, dsets, dmax)
            I4 = S
    DAv_n = np.zeros(ms, dtype=np.bool_)
    for j in range(ms):
        DAv_n[j] = (I1[j] or I2[j]) and vdist(B, M, sig, j) <= delta
    DAw_n = np.zeros(M + 1, dtype=np.bool_)
    for u in range(M + 1):
        DAw_n[u] = (I3[u] or I4[u]) and vdist(B, u, sig, ms - 1) <= delta
    return DAv_n, DAw_n, I1, I2, I3, I4


@njit(cache=True)
def dis_decide_driver(T, S, delta, M, mu2, subr, budget, wave_k, cover_k, c_simp, samples,
                      det_only, counters, record, rowDA, colDA):
    N = T.shape[0]
    Ms = S.shape[0]
    K = (N - 1) // M
    L = (Ms - 1) // mu2
    if vdist(T, 0, S, 0) > delta:
        return False
    if vdist(T, N - 1, S, Ms - 1) > delta and not record:
        return False
    thr_simp = c_simp * delta
    thr_wave = wave_k * delta
    thr_cover = cover_k * delta
    row = np.zeros(Ms, dtype=np.bool_)
    for j in range(Ms):
        if vdist(T, 0, S, j) > delta:
            break
        row[j] = True
    col = np.zeros(N, dtype=np.bool_)
    for i in range(N):
        if vdist(T, i, S, 0) > delta:
            break
        col[i] = True
    counters[CELLS] += N + Ms
    DAw = np.zeros((K, M + 1), dtype=np.bool_)
    for k in range(K):
        DAw[k] = col[k * M:k * M + M + 1]
        if record:
            colDA[0, k] = DAw[k]
    f_all = np.full((K, M + 1, M + 1, M + 1), BIG, dtype=np.int64)
    back_all = np.full((K, M + 1, M + 1, M + 1), -1, dtype=np.int64)
    cnt = np.full((K, M + 1, M + 1), BIG, dtype=np.int64)
    ready = np.zeros(K, dtype=np.bool_)
    dindex = Dict.empty(key_type=types.int64, value_type=types.int64)
    dsets = List.empty_list(types.boolean[::1])
    dmax = List.empty_list(types.int64)
    for l in range(L):
        sig = S[l * mu2:(l + 1) * mu2 + 1]
        DAv = row[l * mu2:(l + 1) * mu2 + 1].copy()
        if record:
            rowDA[0, l] = DAv
        for k in range(K):
            hv = False
            for j in range(mu2 + 1):
                hv = hv or DAv[j]
            hw = False
            for u in range(M + 1):
                hw = hw or DAw[k, u]
            if hv or hw:
                B = T[k * M:k * M + M + 1]
                if not ready[k]:
                    dprep_block(B, thr_simp, f_all[k], back_all[k], cnt[k])
                    counters[CELLS] += (M + 1) ** 3
                    ready[k] = True
                out = dis_reach_kernel(B, k, sig, delta, thr_wave, thr_cover, budget, DAv, DAw[k].copy(),
                                       f_all[k], back_all[k], cnt[k], samples[k, l], subr, det_only,
                                       counters, dindex, dsets, dmax)
                DAv = out[0]
                DAw[k] = out[1]
            else:
                DAw[k] = False
            if record:
                rowDA[k + 1, l] = DAv
                colDA[l + 1, k] = DAw[k]
    return DAw[K - 1, M]


# ---------------------------------------------------------------------------
# Python API

@dataclass
class DiscreteTrace:
    tau: np.ndarray
    sigma: np.ndarray
    params: Params
    swapped: bool
    rowDA: np.ndarray   # [k boundary, l, vertex of sigma_l]
    colDA: np.ndarray   # [l boundary, k, vertex of tau_k]


class DiscreteDecider:
    """Reusable setup for repeated discrete decisions on one pair."""

    def __init__(self, tau, sigma, eps=0.5, seed=0, params=None, **kw):
        tau = as_curve(tau)
        sigma = as_curve(sigma)
        if len(tau) < 2 or len(sigma) < 2:
            raise CurveError("the approximation needs at least 2 vertices per curve")
        self.swapped = len(sigma) > len(tau)
        if self.swapped:
            tau, sigma = sigma, tau
        self.tau0, self.sigma0 = tau, sigma
        if params is None:
            params = Params.schedule(len(sigma), eps=eps, seed=seed, **kw)
        params.validate()
        self.params = p = params
        c = p.c_simp
        self.wave_k = 1.0 + c
        self.cover_k = 2.0 + 2.0 * c
        self.ratio_bound = discrete_ratio(c)
        # repeating the last vertex keeps the discrete distance
        self.T = pad_repeat(tau, p.mu1)
        self.S = pad_repeat(sigma, p.mu2)
        self.subr = np.array(sub_ranges(p.mu2, p.mu3), dtype=np.int64)
        self.K = (len(self.T) - 1) // p.mu1
        self.L = (len(self.S) - 1) // p.mu2
        ns = p.samples_per_subblock(len(tau))
        rng = np.random.Generator(np.random.Philox(p.seed))
        self.samples = rng.integers(0, p.mu1 + 1, size=(self.K, self.L, len(self.subr), max(ns, 1)),
                                    dtype=np.int64)

    def decide(self, delta, counters=None, record=False):
        if delta < 0:
            return False
        if counters is None:
            counters = new_counters()
        p = self.params
        mu2 = p.mu2
        if record:
            rowDA = np.zeros((self.K + 1, self.L, mu2 + 1), dtype=np.bool_)
            colDA = np.zeros((self.L + 1, self.K, p.mu1 + 1), dtype=np.bool_)
        else:
            rowDA = np.zeros((1, 1, 1), dtype=np.bool_)
            colDA = np.zeros((1, 1, 1), dtype=np.bool_)
        ans = dis_decide_driver(self.T, self.S, float(delta), p.mu1, mu2, self.subr,
                                discrete_budget(p), self.wave_k, self.cover_k, p.c_simp,
                                self.samples, bool(p.deterministic_fallback_only), counters,
                                record, rowDA, colDA)
        if record:
            self.last_trace = DiscreteTrace(self.T, self.S, p, self.swapped, rowDA, colDA)
        return bool(ans)


def pad_repeat(c, mu):
    """Append copies of the last vertex until mu divides the edge count.

    For vertex sequences this is the analogue of subdividing the last edge:
    the discrete distance to any other sequence is unchanged.
    """
    extra = (-(len(c) - 1)) % mu
    if extra == 0:
        return np.array(c, dtype=np.float64)
    return np.vstack([c, np.repeat(c[-1:], extra, axis=0)])


def decide_approx_discrete(tau, sigma, delta, eps=0.5, seed=0, params=None, counters=None, **kw):
    """yes => discrete d_F <= ratio_bound * delta;  no => discrete d_F > delta."""
    return DiscreteDecider(tau, sigma, eps=eps, seed=seed, params=params, **kw).decide(delta, counters)


def compute_approx_discrete(tau, sigma, eps=0.5, seed=0, params=None, **kw):
    dec = DiscreteDecider(tau, sigma, eps=eps, seed=seed, params=params, **kw)
    counters = new_counters()
    T, S = dec.tau0, dec.sigma0
    lo0 = max(float(np.linalg.norm(T[0] - S[0])), float(np.linalg.norm(T[-1] - S[-1])))
    span = np.vstack([T, S])
    hi0 = lo0 + float(np.linalg.norm(span.max(axis=0) - span.min(axis=0))) + 1e-300
    lo, hi, calls = bracket_search(lambda d: dec.decide(d, counters), lo0, hi0, eps)
    value = dec.ratio_bound * hi
    return ApproxResult(value, lo, value, eps, dec.ratio_bound, calls, counters_dict(counters))


class DisCoverIndex:
    """Lazy DisCover index of one block for a fixed delta'."""

    def __init__(self, block, delta_prime):
        self.block = np.asarray(block, dtype=np.float64)
        self.delta_prime = float(delta_prime)
        self.pool = new_dis_pool()
        self.counters = new_counters()

    def entry(self, i1, i2, i):
        M = len(self.block) - 1
        key = ((i1) * (M + 1) + i2) * (M + 1) + i
        slot = dis_entry(self.block, key, i1, i2, i, self.delta_prime, self.counters, *self.pool)
        return self.pool[1][slot].copy(), self.pool[2][slot]

    def query(self, i1, i2, S, delta_prime=None):
        if delta_prime is not None and float(delta_prime) != self.delta_prime:
            raise ValueError("index was built for delta' = %g" % self.delta_prime)
        M = len(self.block) - 1
        if not 0 <= i1 <= i2 <= M:
            raise ValueError("subcurve out of range")
        S = np.asarray(S, dtype=np.bool_)
        if len(S) != M + 1:
            raise ValueError("S must have one flag per block vertex")
        return dis_cover_kernel(self.block, 0, int(i1), int(i2), self.delta_prime, S,
                                self.counters, *self.pool)


def dis_cover_build(block, delta_prime):
    return DisCoverIndex(block, delta_prime)


def dis_cover_query(ix, i1, i2, S):
    return ix.query(i1, i2, S)


class DiscreteBlock:
    """Preprocessed block for the surrogate search (tests and inspection)."""

    def __init__(self, block, delta, params):
        self.block = np.asarray(block, dtype=np.float64)
        self.delta = float(delta)
        self.params = params
        M = len(self.block) - 1
        self.f = np.full((M + 1, M + 1, M + 1), BIG, dtype=np.int64)
        self.back = np.full((M + 1, M + 1, M + 1), -1, dtype=np.int64)
        self.cnt = np.full((M + 1, M + 1), BIG, dtype=np.int64)
        dprep_block(self.block, params.c_simp * self.delta, self.f, self.back, self.cnt)
        self.budget = discrete_budget(params)

    def find_surrogate(self, sigma_prime, vertex, counters=None):
        """Block vertex range (x', y') or None; None means the vertex is unmarked."""
        if counters is None:
            counters = new_counters()
        sig = np.asarray(sigma_prime, dtype=np.float64)
        ok, x, y = dis_find_surrogate(self.block, sig, int(vertex),
                                      (1.0 + self.params.c_simp) * self.delta,
                                      self.f, self.back, self.cnt, self.budget, counters)
        return (int(x), int(y)) if ok else None

    @property
    def surrogate_bound(self):
        return (1.0 + 2.0 * self.params.c_simp) * self.delta
