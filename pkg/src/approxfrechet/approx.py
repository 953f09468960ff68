"""Approximate decision and computation of the continuous Frechet distance.

tau is cut into blocks of mu1 edges and sigma into blocks of mu2 edges.  A
sweep over block pairs carries two kinds of arrays:

    Av  intervals on the edges of sigma_l reachable with the vertex v_{a_k}
    Aw  intervals on the edges of tau_k reachable with the vertex w_{b_l}

and ``reach`` advances them across one block pair.  The output covers every
truly reachable point (radius delta) and every covered point is reachable at
radius ratio_bound * delta.  The four partial results I1..I4 follow the four
ways a reachable pair can arise: I1-I3 come from simplified surrogates of
the tau block, I4 from surrogate subcurves of the block standing in for
pieces of sigma_l, propagated with the Cover index.

All block positions are local floats ``edge + t``.  Interval arrays are
(lo, hi) pairs with lo > hi meaning empty.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, types
from numba.typed import Dict, List

from .freespace import (CELLS, COVER_QUERIES, FALLBACKS, REACH_CALLS, SAMPLES,
                        SURROGATE_TESTS, COUNTER_NAMES, _init_line, compute_exact,
                        new_counters, no_source, point_source, wavefront_last)
from .geometry import CurveError, as_curve, clip, curve_length, tolerance, _point_at
from .matching import matching_kernel, query_max, query_min
from .simplification import C_SIMP, all_min_paths, feasibility, path_of

SNAP = 1e-12


# ---------------------------------------------------------------------------
# parameters

@dataclass
class Audit:
    """Thresholds of every stage as multiples of delta."""
    c_simp: float
    eps_inner: float
    wave: float        # I1-I3 propagation and the X/Y balls
    surrogate: float   # surrogate subcurve vs sigma piece
    cover: float       # delta' of the Cover queries
    ratio: float       # B_impl


def audit(eps, c_simp=C_SIMP):
    e = eps / 10.0
    wave = 1.0 + c_simp
    surrogate = 1.0 + 2.0 * c_simp
    cover = 1.0 + surrogate
    ratio = max(wave + c_simp, (1.0 + e) * cover + surrogate)
    return Audit(c_simp, e, wave, surrogate, cover, ratio)


def discrete_ratio(c_simp=C_SIMP):
    """B_impl of the discrete pipeline (its Cover is exact)."""
    return 3.0 + 4.0 * c_simp


@dataclass
class Params:
    delta: float = 0.0
    eps: float = 0.5
    mu1: int = 2
    mu2: int = 2
    mu3: int = 1
    omega: int = 1
    sample_constant: float = 1.0
    seed: int = 0
    deterministic_fallback_only: bool = False
    c_simp: float = C_SIMP

    @property
    def eps_inner(self):
        return self.eps / 10.0

    @classmethod
    def schedule(cls, m, **kw):
        """Default block sizes for a curve with m vertices."""
        base = dict(mu1=max(2, round(m ** 0.24)), mu2=max(2, round(m ** 0.02)),
                    mu3=max(1, round(m ** 0.01)), omega=max(1, round(m ** 0.12)))
        for k in ("mu1", "mu2", "mu3", "omega"):
            if kw.get(k) is None:
                kw[k] = base[k]
        p = cls(**kw)
        p.validate()
        return p

    def validate(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if min(self.mu1, self.mu2, self.mu3, self.omega) < 1:
            raise ValueError("block parameters must be positive")
        if self.mu3 > self.mu2:
            raise ValueError("mu3 > mu2")
        if self.mu2 > self.mu1:
            raise ValueError("mu2 > mu1")
        if self.sample_constant <= 0:
            raise ValueError("sample constant must be positive")

    @property
    def budget(self):
        return 2 * self.mu2 + 2

    def samples_per_subblock(self, n):
        return int(math.ceil(2.0 * self.sample_constant * math.log(max(n, 2)) * self.mu1 / self.omega))

    def n_subblocks(self):
        return max(1, -(-(self.mu2 - 1) // self.mu3))


# ---------------------------------------------------------------------------
# partition

def pad_curve(c, mu):
    """Split the final edge so the edge count becomes a multiple of mu."""
    c = np.asarray(c, dtype=np.float64)
    extra = (-(len(c) - 1)) % mu
    if extra == 0:
        return c.copy()
    a, b = c[-2], c[-1]
    parts = extra + 1
    mids = [a + (b - a) * (s / parts) for s in range(1, parts)]
    return np.vstack([c[:-1], np.array(mids), c[-1:]])


@dataclass
class Partition:
    tau: np.ndarray
    sigma: np.ndarray
    tau_blocks: list
    sigma_blocks: list
    sub_blocks: list
    tau_padding: int
    sigma_padding: int
    sub_ranges: list = field(default_factory=list)


def sub_ranges(mu2, mu3):
    """Local vertex ranges of the pieces sigma_{l,r} inside a sigma block.

    The first piece also takes the block's first edge (the boundary formula
    starts one vertex after b_l); a last piece may be shorter than mu3.
    """
    R = max(1, -(-(mu2 - 1) // mu3))
    out = []
    for r in range(1, R + 1):
        s = 0 if r == 1 else (r - 1) * mu3 + 1
        e = min(r * mu3 + 1, mu2) if mu2 > 1 else 1
        out.append((s, e))
    out[-1] = (out[-1][0], mu2)
    return out


def partition(tau, sigma, p):
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    if len(tau) < 2 or len(sigma) < 2:
        raise CurveError("the approximation needs at least 2 vertices per curve")
    T = pad_curve(tau, p.mu1)
    S = pad_curve(sigma, p.mu2)
    K = (len(T) - 1) // p.mu1
    L = (len(S) - 1) // p.mu2
    a = [k * p.mu1 + 1 for k in range(K + 1)]
    b = [l * p.mu2 + 1 for l in range(L + 1)]
    R = max(1, -(-(p.mu2 - 1) // p.mu3))
    subs = []
    for l in range(L):
        subs.append([min(b[l] + (r - 1) * p.mu3 + 1, b[l + 1]) for r in range(1, R + 2)])
    return Partition(T, S, a, b, subs, len(T) - len(tau), len(S) - len(sigma),
                     sub_ranges(p.mu2, p.mu3))


# ---------------------------------------------------------------------------
# small interval helpers

@njit(cache=True)
def any_nonempty(lo, hi):
    for i in range(lo.shape[0]):
        if lo[i] <= hi[i]:
            return True
    return False


@njit(cache=True)
def spread(lo, hi, za, zb):
    """Hull the position range [za, zb] into the per-edge arrays."""
    ne = lo.shape[0]
    e0 = int(math.ceil(za)) - 1
    if e0 < 0:
        e0 = 0
    for e in range(e0, ne):
        if e > zb:
            break
        a = max(za, float(e))
        b = min(zb, float(e + 1))
        if a <= b:
            if a - e < lo[e]:
                lo[e] = a - e
            if b - e > hi[e]:
                hi[e] = b - e


@njit(cache=True)
def merge_into(C, target, delta, eta, alo, ahi, blo, bhi, outlo, outhi):
    """Per edge: from the first covered point onwards, inside B(target, delta)."""
    for e in range(outlo.shape[0]):
        p = math.inf
        if alo[e] <= ahi[e]:
            p = alo[e]
        if blo[e] <= bhi[e] and blo[e] < p:
            p = blo[e]
        outlo[e] = math.inf
        outhi[e] = -math.inf
        if p < math.inf:
            flo, fhi = clip(C[e], C[e + 1], target, delta, eta)
            lo = max(p, flo)
            if flo <= fhi and lo <= fhi:
                outlo[e] = lo
                outhi[e] = fhi


# ---------------------------------------------------------------------------
# block preprocessing

@njit(cache=True)
def prep_block(B, thr, budget, eta, counters, feas, cnt, pred, mbx, mby, info, vbar, vtil):
    """Shortcut table, minimum paths, shortcut matchings and the extents.

    info = [zeta_k exists, i_pre, i_suf].  vbar[i] is the smallest h with a
    simplification of B[h..i] inside the budget, vtil[i] the largest.
    """
    M = B.shape[0] - 1
    f = feasibility(B, thr, eta, counters)
    c, pr = all_min_paths(f)
    feas[:, :] = f
    cnt[:, :] = c
    pred[:, :] = pr
    seg = np.empty((2, B.shape[1]))
    for i in range(M):
        for j in range(i + 1, M + 1):
            if f[i, j]:
                seg[0] = B[i]
                seg[1] = B[j]
                ok, A, Bm, bx, by = matching_kernel(seg, B[i:j + 1], thr, eta, counters)
                ln = bx.shape[0]
                mbx[i, j, :ln] = bx
                mby[i, j, :ln] = by
    info[0] = 1 if c[0, M] <= budget else 0
    ip = 1
    for j in range(1, M + 1):
        if c[0, j] <= budget:
            ip = j
    info[1] = ip
    isuf = M - 1
    for h in range(M - 1, -1, -1):
        if c[h, M] <= budget:
            isuf = h
    info[2] = isuf
    for i in range(M + 1):
        vb = i
        for h in range(i, -1, -1):
            if c[h, i] <= budget:
                vb = h
        vbar[i] = vb
        vt = i
        for h in range(i, M + 1):
            if c[i, h] <= budget:
                vt = h
        vtil[i] = vt


@njit(cache=True)
def z2t(path, pos, mbx, mby, use_max):
    """Block position matched to position ``pos`` of the simplified path."""
    L = path.shape[0]
    e = int(math.floor(pos))
    if e > L - 2:
        e = L - 2
    if e < 0:
        e = 0
    t = pos - e
    i = path[e]
    j = path[e + 1]
    ln = j - i + 3
    if use_max:
        r = query_max(mbx[i, j, :ln], mby[i, j, :ln], t)
    else:
        r = query_min(mbx[i, j, :ln], mby[i, j, :ln], t)
    return i + r


@njit(cache=True)
def t2z(path, x, mbx, mby, use_max):
    """Position on the simplified path matched to block position x."""
    L = path.shape[0]
    if use_max:
        e = 0
        for q in range(L - 1):
            if path[q] <= x:
                e = q
    else:
        e = L - 2
        for q in range(L - 2, -1, -1):
            if path[q + 1] >= x:
                e = q
    i = path[e]
    j = path[e + 1]
    ln = j - i + 3
    loc = x - i
    if use_max:
        r = query_max(mby[i, j, :ln], mbx[i, j, :ln], loc)
    else:
        r = query_min(mby[i, j, :ln], mbx[i, j, :ln], loc)
    return e + r


# ---------------------------------------------------------------------------
# Cover

@njit(cache=True)
def n_disc(flo, fhi, seglen, step):
    """Number of discretization points of the clipped part of an edge."""
    if step <= 0.0:
        return 1
    return int(math.floor((fhi - flo) * seglen / step + 1e-12)) + 1


@njit(cache=True)
def d_entry(B, key, i1, i2, i, tb, dprime, eta, counters, dindex, dlo, dhi, dmax):
    """D[i1, i2, i, b]: reachable part for v_{i2} from (p_b, v_{i1}); lazy."""
    if key in dindex:
        return dindex[key]
    M = B.shape[0] - 1
    Slo, Shi = point_source(M, i, tb)
    S2lo, S2hi = no_source(i2 - i1)
    rlo, rhi, clo, chi = wavefront_last(B, B[i1:i2 + 1], dprime, eta, Slo, Shi, S2lo, S2hi, counters)
    mx = -1
    for e in range(M):
        if clo[e] <= chi[e]:
            mx = e
    slot = len(dlo)
    dlo.append(clo)
    dhi.append(chi)
    dmax.append(mx)
    dindex[key] = slot
    return slot


@njit(cache=True)
def cover_kernel(B, kblock, x0, y0, dprime, eps_in, eta, Slo, Shi, counters, dindex, dlo, dhi, dmax):
    """Cover(tau[x0, y0], dprime, S) on the block B; returns (lo, hi)."""
    counters[COVER_QUERIES] += 1
    M = B.shape[0] - 1
    i1 = int(math.ceil(x0 - SNAP))
    i2 = int(math.floor(y0 + SNAP))
    head_v = i1 - x0 <= SNAP
    tail_v = y0 - i2 <= SNAP
    if i2 < i1:
        nedges = 1
    else:
        nedges = (i2 - i1) + (0 if head_v else 1) + (0 if tail_v else 1)
    d = B.shape[1]
    if nedges <= 2:
        if i2 < i1:
            sub = np.empty((2, d))
            sub[0] = _point_at(B, x0)
            sub[1] = _point_at(B, y0)
        else:
            sub = np.empty((nedges + 1, d))
            q = 0
            if not head_v:
                sub[q] = _point_at(B, x0)
                q += 1
            for v in range(i1, i2 + 1):
                sub[q] = B[v]
                q += 1
            if not tail_v:
                sub[q] = _point_at(B, y0)
                q += 1
        S2lo, S2hi = no_source(sub.shape[0] - 1)
        rlo, rhi, clo, chi = wavefront_last(B, sub, dprime, eta, Slo, Shi, S2lo, S2hi, counters)
        return clo, chi
    # head: x0 -> v_{i1}
    if head_v:
        head = np.empty((1, d))
        head[0] = B[i1]
    else:
        head = np.empty((2, d))
        head[0] = _point_at(B, x0)
        head[1] = B[i1]
    S2lo, S2hi = no_source(head.shape[0] - 1)
    rlo, rhi, s1lo, s1hi = wavefront_last(B, head, dprime, eta, Slo, Shi, S2lo, S2hi, counters)
    # vertex-to-vertex core via D and Max
    s2lo = np.full(M, math.inf)
    s2hi = np.full(M, -math.inf)
    step = eps_in * dprime
    NB = int(math.floor(2.0 / eps_in)) + 3
    ip = 0
    for i in range(M):
        if ip >= M:
            break
        if not s1lo[i] <= s1hi[i]:
            continue
        flo, fhi = clip(B[i], B[i + 1], B[i1], dprime, eta)
        lo = max(s1lo[i], flo)
        if not (flo <= fhi and lo <= min(s1hi[i], fhi)):
            continue
        seglen = 0.0
        for q in range(d):
            z = B[i + 1, q] - B[i, q]
            seglen += z * z
        seglen = math.sqrt(seglen)
        a = n_disc(flo, fhi, seglen, step)
        if step > 0.0 and seglen > 0.0:
            h = step / seglen
            b = int(math.floor((lo - flo) / h + 1e-12))
            if b > a - 1:
                b = a - 1
            if b < 0:
                b = 0
        else:
            h = 0.0
            b = 0
        tb = flo + b * h
        if tb > lo:
            tb = lo
        key = ((((kblock * (M + 1) + i1) * (M + 1) + i2) * M + i) * NB) + b
        slot = d_entry(B, key, i1, i2, i, tb, dprime, eta, counters, dindex, dlo, dhi, dmax)
        mx = dmax[slot]
        if mx < 0 or mx < ip:
            continue
        start = ip if ip > i else i
        dl = dlo[slot]
        dh = dhi[slot]
        for e in range(start, mx + 1):
            s2lo[e] = dl[e]
            s2hi[e] = dh[e]
        if start == i and s2lo[i] < lo:
            # p_b may precede the first covered point; nothing before it counts
            s2lo[i] = lo
            if lo > s2hi[i]:
                s2lo[i] = math.inf
                s2hi[i] = -math.inf
        ip = mx + 1
    counters[CELLS] += M
    # tail: v_{i2} -> y0
    if tail_v:
        tail = np.empty((1, d))
        tail[0] = B[i2]
    else:
        tail = np.empty((2, d))
        tail[0] = B[i2]
        tail[1] = _point_at(B, y0)
    S2lo, S2hi = no_source(tail.shape[0] - 1)
    rlo, rhi, clo, chi = wavefront_last(B, tail, dprime, eta, s2lo, s2hi, S2lo, S2hi, counters)
    return clo, chi


def new_pool():
    dindex = Dict.empty(key_type=types.int64, value_type=types.int64)
    dlo = List.empty_list(types.float64[::1])
    dhi = List.empty_list(types.float64[::1])
    dmax = List.empty_list(types.int64)
    return dindex, dlo, dhi, dmax


# ---------------------------------------------------------------------------
# surrogate search

@njit(cache=True)
def zeta_prime(e, pred, vbar, vtil):
    p1 = path_of(pred[vbar[e]], vbar[e], e)
    p2 = path_of(pred[e + 1], e + 1, vtil[e + 1])
    Z = np.empty(p1.shape[0] + p2.shape[0], dtype=np.int64)
    Z[:p1.shape[0]] = p1
    Z[p1.shape[0]:] = p2
    return Z


@njit(cache=True)
def find_surrogate_kernel(B, sig, e, thr, eta, pred, vbar, vtil, mbx, mby, counters):
    """Surrogate subcurve of the block for sig through edge e.

    Returns (found, x', y') with block positions.  found is False only if e
    is not marked by sig.
    """
    Z = zeta_prime(e, pred, vbar, vtil)
    Zc = np.empty((Z.shape[0], B.shape[1]))
    for q in range(Z.shape[0]):
        Zc[q] = B[Z[q]]
    ne = Z.shape[0] - 1
    xs = np.full(ne, math.inf)
    ys = np.full(ne, -math.inf)
    for a in range(ne):
        lo, hi = clip(Zc[a], Zc[a + 1], sig[0], thr, eta)
        if lo <= hi:
            xs[a] = lo
        lo, hi = clip(Zc[a], Zc[a + 1], sig[sig.shape[0] - 1], thr, eta)
        if lo <= hi:
            ys[a] = hi
    if not np.any(xs < math.inf):
        return False, 0.0, 0.0
    S2lo, S2hi = no_source(sig.shape[0] - 1)
    # one propagation from all of X at once finds the reachable ends
    counters[SURROGATE_TESTS] += 1
    rlo, rhi, clo, chi = wavefront_last(Zc, sig, thr, eta, xs, xs.copy(), S2lo, S2hi, counters)
    yb = -1
    for a in range(ne):
        if ys[a] > -math.inf and clo[a] <= ys[a] and ys[a] <= chi[a]:
            yb = a
            break
    if yb < 0:
        return False, 0.0, 0.0
    ypos = yb + ys[yb]
    for a in range(ne):
        if xs[a] == math.inf or a + xs[a] > ypos:
            continue
        counters[SURROGATE_TESTS] += 1
        Slo, Shi = point_source(ne, a, xs[a])
        rlo, rhi, clo, chi = wavefront_last(Zc, sig, thr, eta, Slo, Shi, S2lo, S2hi, counters)
        if clo[yb] <= ys[yb] and ys[yb] <= chi[yb]:
            xp = z2t(Z, a + xs[a], mbx, mby, False)
            yp = z2t(Z, ypos, mbx, mby, True)
            return True, xp, yp
    return False, 0.0, 0.0


@njit(cache=True)
def marked_end_edges(B, sig, delta, eta, counters):
    """Edges holding the end of a subcurve within delta of sig."""
    M = B.shape[0] - 1
    Slo = np.full(M, math.inf)
    Shi = np.full(M, -math.inf)
    for i in range(M):
        lo, hi = clip(B[i], B[i + 1], sig[0], delta, eta)
        if lo <= hi:
            Slo[i] = lo
            Shi[i] = hi
    S2lo, S2hi = no_source(sig.shape[0] - 1)
    rlo, rhi, clo, chi = wavefront_last(B, sig, delta, eta, Slo, Shi, S2lo, S2hi, counters)
    return clo, chi


@njit(cache=True)
def canonical_surrogate(B, sig, thr, delta, eta, pred, vbar, vtil, mbx, mby, samples,
                        det_only, counters):
    """Surrogate through the smallest edge for which the search succeeds.

    Sampling finds some succeeding edge fast when sig marks many edges; the
    smaller edges are then scanned so the answer never depends on the seed.
    When no sample succeeds the marked end edges bound the scan.
    """
    M = B.shape[0] - 1
    status = np.zeros(M, dtype=np.int64)   # 0 untried, 1 found, 2 failed
    xr = np.zeros(M)
    yr = np.zeros(M)
    found = -1
    upper = M - 1
    if not det_only:
        for s in range(samples.shape[0]):
            counters[SAMPLES] += 1
            e = samples[s]
            if status[e] == 0:
                ok, xp, yp = find_surrogate_kernel(B, sig, e, thr, eta, pred, vbar, vtil, mbx, mby, counters)
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
            clo, chi = marked_end_edges(B, sig, delta, eta, counters)
            for i in range(M):
                if clo[i] <= chi[i]:
                    upper = i
                    break
    e = 0
    while e < M:
        if e > upper and found >= 0:
            break
        if status[e] == 0:
            ok, xp, yp = find_surrogate_kernel(B, sig, e, thr, eta, pred, vbar, vtil, mbx, mby, counters)
            status[e] = 1 if ok else 2
            xr[e] = xp
            yr[e] = yp
        if status[e] == 1:
            found = e
            break
        e += 1
    if found < 0:
        return -1, 0.0, 0.0
    return found, xr[found], yr[found]


# ---------------------------------------------------------------------------
# Reach

@njit(cache=True)
def reach_kernel(B, kblock, sig, delta, thr_simp, thr_wave, thr_cover, eps_in, eta,
                 Avlo, Avhi, Awlo, Awhi, feas, cnt, pred, mbx, mby, info, vbar, vtil,
                 samples, subr, det_only, counters, dindex, dlo, dhi, dmax):
    """One block pair; returns (Av', Aw', I1, I2, I3, I4) as (lo, hi) pairs."""
    M = B.shape[0] - 1
    m2 = sig.shape[0] - 1
    d = B.shape[1]
    counters[REACH_CALLS] += 1
    have_v = any_nonempty(Avlo, Avhi)
    have_w = any_nonempty(Awlo, Awhi)
    I1lo, I1hi = no_source(m2)
    I2lo, I2hi = no_source(m2)
    I3lo, I3hi = no_source(M)
    I4lo, I4hi = no_source(M)
    # I1: the whole block through its simplification
    if have_v and info[0] == 1:
        Z = path_of(pred[0], 0, M)
        Zc = np.empty((Z.shape[0], d))
        for q in range(Z.shape[0]):
            Zc[q] = B[Z[q]]
        Slo, Shi = no_source(Z.shape[0] - 1)
        I1lo, I1hi, clo, chi = wavefront_last(Zc, sig, thr_wave, eta, Slo, Shi, Avlo, Avhi, counters)
    # I2: suffix simplification, sources mapped from Aw
    if have_w:
        isuf = info[2]
        Z = path_of(pred[isuf], isuf, M)
        nz = Z.shape[0] - 1
        Zc = np.empty((Z.shape[0], d))
        for q in range(Z.shape[0]):
            Zc[q] = B[Z[q]]
        Slo, Shi = no_source(nz)
        for i in range(M):
            if Awlo[i] <= Awhi[i]:
                a = max(i + Awlo[i], float(isuf))
                b = i + Awhi[i]
                if a <= b:
                    za = t2z(Z, a, mbx, mby, False)
                    zb = t2z(Z, b, mbx, mby, True)
                    spread(Slo, Shi, za, zb)
        if any_nonempty(Slo, Shi):
            S2lo, S2hi = no_source(m2)
            I2lo, I2hi, clo, chi = wavefront_last(Zc, sig, thr_wave, eta, Slo, Shi, S2lo, S2hi, counters)
    # I3: prefix simplification, mapped back onto the block
    if have_v:
        ipre = info[1]
        Z = path_of(pred[0], 0, ipre)
        Zc = np.empty((Z.shape[0], d))
        for q in range(Z.shape[0]):
            Zc[q] = B[Z[q]]
        Slo, Shi = no_source(Z.shape[0] - 1)
        rlo, rhi, clo, chi = wavefront_last(Zc, sig, thr_wave, eta, Slo, Shi, Avlo, Avhi, counters)
        for e in range(Z.shape[0] - 1):
            if clo[e] <= chi[e]:
                ta = z2t(Z, e + clo[e], mbx, mby, False)
                tb = z2t(Z, e + chi[e], mbx, mby, True)
                spread(I3lo, I3hi, ta, tb)
    # I4: surrogates for the pieces of sigma_l chained through Cover
    if have_w:
        R = subr.shape[0]
        xs = np.zeros(R)
        ys = np.zeros(R)
        ok = True
        for r in range(R):
            piece = sig[subr[r, 0]:subr[r, 1] + 1]
            e, xp, yp = canonical_surrogate(B, piece, thr_wave, delta, eta, pred, vbar, vtil,
                                            mbx, mby, samples[r], det_only, counters)
            if e < 0:
                ok = False
                break
            xs[r] = xp
            ys[r] = yp
        if ok:
            Slo = Awlo.copy()
            Shi = Awhi.copy()
            for r in range(R):
                Slo, Shi = cover_kernel(B, kblock, xs[r], ys[r], thr_cover, eps_in, eta, Slo, Shi,
                                        counters, dindex, dlo, dhi, dmax)
                if not any_nonempty(Slo, Shi):
                    break
            I4lo = Slo
            I4hi = Shi
    Avn_lo = np.empty(m2)
    Avn_hi = np.empty(m2)
    merge_into(sig, B[M], delta, eta, I1lo, I1hi, I2lo, I2hi, Avn_lo, Avn_hi)
    Awn_lo = np.empty(M)
    Awn_hi = np.empty(M)
    merge_into(B, sig[m2], delta, eta, I3lo, I3hi, I4lo, I4hi, Awn_lo, Awn_hi)
    return (Avn_lo, Avn_hi, Awn_lo, Awn_hi, I1lo, I1hi, I2lo, I2hi, I3lo, I3hi, I4lo, I4hi)


# ---------------------------------------------------------------------------
# driver

@njit(cache=True)
def vd(p, q):
    s = 0.0
    for i in range(p.shape[0]):
        z = p[i] - q[i]
        s += z * z
    return math.sqrt(s)


@njit(cache=True)
def decide_driver(T, S, delta, M, mu2, subr, budget, c_simp, wave_k, cover_k, eps_in, eta,
                  samples, det_only, counters, record, rowA_lo, rowA_hi, colA_lo, colA_hi):
    """Sweep Reach over all block pairs; True when v_n ends up covered."""
    N = T.shape[0]
    Ms = S.shape[0]
    K = (N - 1) // M
    L = (Ms - 1) // mu2
    if vd(T[0], S[0]) > delta + eta:
        return False
    if vd(T[N - 1], S[Ms - 1]) > delta + eta and not record:
        return False
    thr_simp = c_simp * delta
    thr_wave = wave_k * delta
    thr_cover = cover_k * delta
    row_lo = np.empty(Ms - 1)
    row_hi = np.empty(Ms - 1)
    col_lo = np.empty(N - 1)
    col_hi = np.empty(N - 1)
    e0, e1 = no_source(Ms - 1)
    _init_line(T, S, delta, eta, e0, e1, True, row_lo, row_hi)
    e0, e1 = no_source(N - 1)
    _init_line(S, T, delta, eta, e0, e1, True, col_lo, col_hi)
    counters[CELLS] += N + Ms
    Aw_lo = col_lo.copy()
    Aw_hi = col_hi.copy()
    if record:
        rowA_lo[0, :] = row_lo
        rowA_hi[0, :] = row_hi
        colA_lo[0, :] = col_lo
        colA_hi[0, :] = col_hi
    feas = np.zeros((K, M + 1, M + 1), dtype=np.bool_)
    cnt = np.zeros((K, M + 1, M + 1), dtype=np.int64)
    pred = np.zeros((K, M + 1, M + 1), dtype=np.int64)
    mbx = np.zeros((K, M + 1, M + 1, M + 3))
    mby = np.zeros((K, M + 1, M + 1, M + 3))
    info = np.zeros((K, 3), dtype=np.int64)
    vbar = np.zeros((K, M + 1), dtype=np.int64)
    vtil = np.zeros((K, M + 1), dtype=np.int64)
    ready = np.zeros(K, dtype=np.bool_)
    dindex = Dict.empty(key_type=types.int64, value_type=types.int64)
    dlo = List.empty_list(types.float64[::1])
    dhi = List.empty_list(types.float64[::1])
    dmax = List.empty_list(types.int64)
    for l in range(L):
        sig = S[l * mu2:(l + 1) * mu2 + 1]
        Av_lo = row_lo[l * mu2:(l + 1) * mu2].copy()
        Av_hi = row_hi[l * mu2:(l + 1) * mu2].copy()
        for k in range(K):
            a0 = k * M
            Wlo = Aw_lo[a0:a0 + M]
            Whi = Aw_hi[a0:a0 + M]
            if any_nonempty(Av_lo, Av_hi) or any_nonempty(Wlo, Whi):
                B = T[a0:a0 + M + 1]
                if not ready[k]:
                    prep_block(B, thr_simp, budget, eta, counters, feas[k], cnt[k], pred[k],
                               mbx[k], mby[k], info[k], vbar[k], vtil[k])
                    ready[k] = True
                out = reach_kernel(B, k, sig, delta, thr_simp, thr_wave, thr_cover, eps_in, eta,
                                   Av_lo, Av_hi, Wlo.copy(), Whi.copy(), feas[k], cnt[k], pred[k],
                                   mbx[k], mby[k], info[k], vbar[k], vtil[k],
                                   samples[k, l], subr, det_only, counters, dindex, dlo, dhi, dmax)
                Av_lo = out[0]
                Av_hi = out[1]
                Aw_lo[a0:a0 + M] = out[2]
                Aw_hi[a0:a0 + M] = out[3]
            else:
                Aw_lo[a0:a0 + M] = math.inf
                Aw_hi[a0:a0 + M] = -math.inf
            if record:
                rowA_lo[k + 1, l * mu2:(l + 1) * mu2] = Av_lo
                rowA_hi[k + 1, l * mu2:(l + 1) * mu2] = Av_hi
        if record:
            colA_lo[l + 1, :] = Aw_lo
            colA_hi[l + 1, :] = Aw_hi
    return Aw_lo[N - 2] <= Aw_hi[N - 2] and Aw_hi[N - 2] >= 1.0


# ---------------------------------------------------------------------------
# Python API

def draw_samples(K, L, R, ns, M, seed):
    """Edge samples for every (k, l, r); one counter-based stream per seed."""
    rng = np.random.Generator(np.random.Philox(seed))
    dtype = np.int64
    return rng.integers(0, M, size=(K, L, R, max(ns, 1)), dtype=dtype)


@dataclass
class Trace:
    """Boundary arrays of one decision run (for inspection and tests)."""
    tau: np.ndarray
    sigma: np.ndarray
    params: Params
    swapped: bool
    rowA: tuple = None   # per tau block boundary a_k: intervals over sigma's edges
    colA: tuple = None   # per sigma block boundary b_l: intervals over tau's edges


class Decider:
    """Reusable setup (padding, samples) for repeated decisions on one pair."""

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
        self.params = params
        self.audit = audit(params.eps, params.c_simp)
        self.part = partition(tau, sigma, params)
        self.eta = tolerance(tau, sigma)
        p = params
        self.subr = np.array(self.part.sub_ranges, dtype=np.int64)
        K = (len(self.part.tau) - 1) // p.mu1
        L = (len(self.part.sigma) - 1) // p.mu2
        self.K, self.L = K, L
        self.n_samples = p.samples_per_subblock(len(tau))
        self.samples = draw_samples(K, L, len(self.subr), self.n_samples, p.mu1, p.seed)

    @property
    def ratio_bound(self):
        return self.audit.ratio

    def decide(self, delta, counters=None, record=False):
        if delta < 0:
            return False
        if counters is None:
            counters = new_counters()
        p, a = self.params, self.audit
        T, S = self.part.tau, self.part.sigma
        if record:
            rl = np.full((self.K + 1, len(S) - 1), math.inf)
            rh = np.full((self.K + 1, len(S) - 1), -math.inf)
            cl = np.full((self.L + 1, len(T) - 1), math.inf)
            ch = np.full((self.L + 1, len(T) - 1), -math.inf)
        else:
            rl = rh = cl = ch = np.zeros((1, 1))
        ans = decide_driver(T, S, float(delta), p.mu1, p.mu2, self.subr, p.budget, p.c_simp,
                            a.wave, a.cover, a.eps_inner, self.eta, self.samples,
                            bool(p.deterministic_fallback_only), counters, record, rl, rh, cl, ch)
        if record:
            self.last_trace = Trace(T, S, p, self.swapped, (rl, rh), (cl, ch))
        return bool(ans)


def decide_approx(tau, sigma, delta, eps=0.5, seed=0, params=None, counters=None, **kw):
    """yes => d_F <= ratio_bound * delta;  no => d_F > delta."""
    return Decider(tau, sigma, eps=eps, seed=seed, params=params, **kw).decide(delta, counters)


@dataclass
class ApproxResult:
    value: float
    lower: float
    upper: float
    eps: float
    ratio_bound: float
    decisions: int
    counters: dict


def counters_dict(c):
    return {name: int(c[i]) for i, name in enumerate(COUNTER_NAMES)}


def bracket_search(decide, lo0, hi0, eps):
    """Shrink [lo, hi] until hi <= (1+eps) lo; decide(lo) is no, decide(hi) yes.

    Returns (lo, hi, calls).  lo = 0 with hi = 0 when decide(0) holds.
    """
    calls = 1
    if decide(lo0):
        return lo0, lo0, calls
    lo, hi = lo0, hi0
    if lo == 0.0:
        # find a positive 'no' below hi
        probe = hi
        while True:
            probe *= 0.5
            calls += 1
            if not decide(probe):
                lo = probe
                break
            hi = probe
            if probe < 1e-300:
                return 0.0, hi, calls
    while hi > (1.0 + eps) * lo:
        mid = math.sqrt(lo * hi)
        calls += 1
        if decide(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi, calls


def compute_approx(tau, sigma, eps=0.5, seed=0, params=None, **kw):
    """Value A with d_F <= A <= (1+eps) * ratio_bound * d_F."""
    dec = Decider(tau, sigma, eps=eps, seed=seed, params=params, **kw)
    counters = new_counters()
    T, S = dec.tau0, dec.sigma0
    lo0 = max(float(np.linalg.norm(T[0] - S[0])), float(np.linalg.norm(T[-1] - S[-1])))
    hi0 = lo0 + curve_length(T) + curve_length(S)
    lo, hi, calls = bracket_search(lambda d: dec.decide(d, counters), lo0, hi0, eps)
    B = dec.ratio_bound
    value = B * hi
    return ApproxResult(value, lo, value, eps, B, calls, counters_dict(counters))


def exact_reference(tau, sigma):
    return compute_exact(tau, sigma, 1e-9)


# ---------------------------------------------------------------------------
# component API (inspection and tests)

class BlockIndex:
    """Preprocessed block tau_k for a fixed delta."""

    def __init__(self, block, delta, params, counters=None):
        B = as_curve(block, collapse=False)
        if len(B) < 2:
            raise CurveError("a block needs at least one edge")
        self.block = B
        self.delta = float(delta)
        self.params = params
        self.audit = audit(params.eps, params.c_simp)
        self.eta = tolerance(B)
        M = len(B) - 1
        self.counters = new_counters() if counters is None else counters
        self.feas = np.zeros((M + 1, M + 1), dtype=np.bool_)
        self.cnt = np.zeros((M + 1, M + 1), dtype=np.int64)
        self.pred = np.zeros((M + 1, M + 1), dtype=np.int64)
        self.mbx = np.zeros((M + 1, M + 1, M + 3))
        self.mby = np.zeros((M + 1, M + 1, M + 3))
        self.info = np.zeros(3, dtype=np.int64)
        self.vbar = np.zeros(M + 1, dtype=np.int64)
        self.vtil = np.zeros(M + 1, dtype=np.int64)
        prep_block(B, params.c_simp * self.delta, params.budget, self.eta, self.counters,
                   self.feas, self.cnt, self.pred, self.mbx, self.mby, self.info,
                   self.vbar, self.vtil)
        self.cover = CoverIndex(B, self.audit.cover * self.delta, self.audit.eps_inner, self.eta)

    @property
    def M(self):
        return len(self.block) - 1

    def path(self, s, t):
        return path_of(self.pred[s], s, t)

    @property
    def zeta_k(self):
        return self.path(0, self.M) if self.info[0] else None

    @property
    def i_pre(self):
        return int(self.info[1])

    @property
    def i_suf(self):
        return int(self.info[2])

    @property
    def zeta_pre(self):
        return self.path(0, self.i_pre)

    @property
    def zeta_suf(self):
        return self.path(self.i_suf, self.M)

    def find_surrogate(self, sigma_prime, edge, counters=None):
        """Block range (x', y') within the surrogate bound of sigma_prime, or None.

        None means no subcurve within delta of sigma_prime crosses ``edge``.
        """
        if counters is None:
            counters = self.counters
        sig = as_curve(sigma_prime, collapse=False)
        ok, x, y = find_surrogate_kernel(self.block, sig, int(edge), self.audit.wave * self.delta,
                                         self.eta, self.pred, self.vbar, self.vtil,
                                         self.mbx, self.mby, counters)
        return (float(x), float(y)) if ok else None

    @property
    def surrogate_bound(self):
        return self.audit.surrogate * self.delta


class CoverIndex:
    """Lazy Cover index of one block for a fixed delta'."""

    def __init__(self, block, delta_prime, eps_inner, eta=None):
        self.block = as_curve(block, collapse=False)
        self.delta_prime = float(delta_prime)
        self.eps_inner = float(eps_inner)
        self.eta = tolerance(self.block) if eta is None else eta
        self.pool = new_pool()
        self.counters = new_counters()

    def point(self, i1, i, b):
        """Parameter t of the discretization point p_b on edge i (or None)."""
        B = self.block
        flo, fhi = clip(B[i], B[i + 1], B[i1], self.delta_prime, self.eta)
        if flo > fhi:
            return None
        ln = float(np.linalg.norm(B[i + 1] - B[i]))
        step = self.eps_inner * self.delta_prime
        a = n_disc(flo, fhi, ln, step)
        if not 0 <= b < a:
            return None
        h = step / ln if (step > 0 and ln > 0) else 0.0
        return min(flo + b * h, fhi)

    def entry(self, i1, i2, i, b):
        """(lo, hi, Max) of D[i1, i2, i, b]."""
        t = self.point(i1, i, b)
        if t is None:
            raise ValueError("no discretization point %d on edge %d" % (b, i))
        M = len(self.block) - 1
        NB = int(math.floor(2.0 / self.eps_inner)) + 3
        key = (((i1 * (M + 1) + i2) * M + i) * NB) + b
        slot = d_entry(self.block, key, i1, i2, i, t, self.delta_prime, self.eta, self.counters,
                       *self.pool)
        return self.pool[1][slot].copy(), self.pool[2][slot].copy(), int(self.pool[3][slot])

    def query(self, x0, y0, S, delta_prime=None):
        """Cover(block[x0, y0], delta', S) as (lo, hi) arrays over block edges."""
        if delta_prime is not None and float(delta_prime) != self.delta_prime:
            raise ValueError("index was built for delta' = %g" % self.delta_prime)
        M = len(self.block) - 1
        if not 0 <= x0 <= y0 <= M:
            raise ValueError("tau' must be a forward range inside the block")
        lo, hi = S
        lo = np.ascontiguousarray(lo, dtype=np.float64)
        hi = np.ascontiguousarray(hi, dtype=np.float64)
        if len(lo) != M or len(hi) != M:
            raise ValueError("S must have one interval per block edge")
        return cover_kernel(self.block, 0, float(x0), float(y0), self.delta_prime, self.eps_inner,
                            self.eta, lo, hi, self.counters, *self.pool)


def preprocess_block(block, delta, params):
    return BlockIndex(block, delta, params)


def cover_query(ix, x0, y0, S, delta_prime=None):
    cov = ix.cover if isinstance(ix, BlockIndex) else ix
    return cov.query(x0, y0, S, delta_prime)


def find_surrogate(ix, sigma_prime, edge):
    return ix.find_surrogate(sigma_prime, edge)


@dataclass
class ReachOutput:
    Av: tuple
    Aw: tuple
    I1: tuple
    I2: tuple
    I3: tuple
    I4: tuple


def reach(ix, sigma_l, Av, Aw, samples=None, counters=None):
    """One Reach step on a preprocessed block; Av over sigma_l's edges, Aw over the block's."""
    p, a = ix.params, ix.audit
    sig = as_curve(sigma_l, collapse=False)
    if len(sig) - 1 != p.mu2:
        raise ValueError("sigma_l must have mu2 edges")
    subr = np.array(sub_ranges(p.mu2, p.mu3), dtype=np.int64)
    if samples is None:
        ns = p.samples_per_subblock(len(ix.block))
        samples = draw_samples(1, 1, len(subr), ns, ix.M, p.seed)[0, 0]
    if counters is None:
        counters = ix.counters
    f = lambda x: np.ascontiguousarray(x, dtype=np.float64)
    out = reach_kernel(ix.block, 0, sig, ix.delta, p.c_simp * ix.delta, a.wave * ix.delta,
                       a.cover * ix.delta, a.eps_inner, ix.eta, f(Av[0]), f(Av[1]), f(Aw[0]), f(Aw[1]),
                       ix.feas, ix.cnt, ix.pred, ix.mbx, ix.mby, ix.info, ix.vbar, ix.vtil,
                       samples, subr, bool(p.deterministic_fallback_only), counters,
                       *new_pool())
    pairs = [(out[i], out[i + 1]) for i in range(0, 12, 2)]
    return ReachOutput(*pairs)
