"""Brute-force reference implementations used by the tests.

Everything here is plain Python on lists and floats and deliberately shares
no code with the numeric kernels: the clip routine, the free-space
propagation, the discrete searches and the subcurve extraction are all
written out again.  Sizes are capped so an accidental call on a large
input fails loudly instead of running for hours.
"""

import itertools
import math

MAX_CELLS = 20000
MAX_SIMPLIFY = 12


class OracleSizeError(ValueError):
    pass


def _check(n, m, cap=MAX_CELLS):
    if n * m > cap:
        raise OracleSizeError("oracle input too large: %d x %d" % (n, m))


def _pts(c):
    return [tuple(float(v) for v in p) for p in c]


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _dot(p, q):
    return sum(a * b for a, b in zip(p, q))


def _d(p, q):
    return math.sqrt(_dot(_sub(p, q), _sub(p, q)))


def _lerp(p, q, t):
    return tuple(a + t * (b - a) for a, b in zip(p, q))


def eta_for(*curves):
    pts = [p for c in curves for p in _pts(c)]
    dim = len(pts[0])
    span = [max(p[k] for p in pts) - min(p[k] for p in pts) for k in range(dim)]
    return 1e-9 * math.sqrt(sum(s * s for s in span))


def free_interval(a, b, c, r, eta=0.0):
    """Points of segment a->b within r of c, via projection onto the line."""
    u = _sub(b, a)
    uu = _dot(u, u)
    in_a = _d(a, c) <= r + eta
    in_b = _d(b, c) <= r + eta
    if uu == 0.0:
        return (0.0, 1.0) if in_a else None
    tp = _dot(_sub(c, a), u) / uu
    foot = _lerp(a, b, tp)
    h2 = r * r - _dot(_sub(foot, c), _sub(foot, c))
    if h2 < 0.0:
        t0 = min(1.0, max(0.0, tp))
        if _d(_lerp(a, b, t0), c) <= r + eta:
            lo = hi = t0
        else:
            return None
    else:
        w = math.sqrt(h2 / uu)
        lo, hi = max(0.0, tp - w), min(1.0, tp + w)
        if lo > hi:
            if in_a and hi <= 0.0:
                return (0.0, 0.0)
            if in_b and lo >= 1.0:
                return (1.0, 1.0)
            return None
    if in_a:
        lo = 0.0
    if in_b:
        hi = 1.0
    return (lo, hi) if lo <= hi else None


def _forward(src, free):
    """Points of ``free`` at or after the start of ``src`` (both intervals)."""
    if src is None or free is None:
        return None
    lo = max(src[0], free[0])
    if lo > min(src[1], free[1]):
        return None
    return (lo, free[1])


def reach_grid(P, Q, delta, S=None, S2=None, eta=None):
    """Alt-Godau cell propagation with sources.

    S is a list over P's edges of intervals (or None) giving start points
    (x, w_1); S2 is the same over Q's edges for start points (v_1, p).
    Returns (RV, RH): RV[i][j] is the reachable part of Q's edge j paired
    with vertex i of P; RH[j][i] the reachable part of P's edge i paired
    with vertex j of Q.
    """
    P = _pts(P)
    Q = _pts(Q)
    n, m = len(P), len(Q)
    _check(n, m)
    if eta is None:
        eta = eta_for(P, Q)
    S = S if S is not None else [None] * (n - 1)
    S2 = S2 if S2 is not None else [None] * (m - 1)
    FV = [[free_interval(Q[j], Q[j + 1], P[i], delta, eta) for j in range(m - 1)] for i in range(n)]
    FH = [[free_interval(P[i], P[i + 1], Q[j], delta, eta) for i in range(n - 1)] for j in range(m)]
    RV = [[None] * (m - 1) for _ in range(n)]
    RH = [[None] * (n - 1) for _ in range(m)]
    corner = _d(P[0], Q[0]) <= delta + eta and (
        (n > 1 and S[0] is not None and S[0][0] <= 0.0)
        or (m > 1 and S2[0] is not None and S2[0][0] <= 0.0))
    # bottom line: vertex w_1 against P's edges
    for i in range(n - 1):
        f = FH[0][i]
        if f is None:
            continue
        entered = corner if i == 0 else (RH[0][i - 1] is not None and RH[0][i - 1][1] >= 1.0)
        if entered:
            RH[0][i] = f
        else:
            RH[0][i] = _forward(S[i], f)
    # left line: vertex v_1 against Q's edges
    for j in range(m - 1):
        f = FV[0][j]
        if f is None:
            continue
        entered = corner if j == 0 else (RV[0][j - 1] is not None and RV[0][j - 1][1] >= 1.0)
        if entered:
            RV[0][j] = f
        else:
            RV[0][j] = _forward(S2[j], f)
    for i in range(n - 1):
        for j in range(m - 1):
            left = RV[i][j]
            bottom = RH[j][i]
            # right side of the cell: vertex i+1 against Q edge j
            f = FV[i + 1][j]
            if f is not None:
                if bottom is not None:
                    RV[i + 1][j] = f
                elif left is not None:
                    lo = max(left[0], f[0])
                    RV[i + 1][j] = (lo, f[1]) if lo <= f[1] else None
            f = FH[j + 1][i]
            if f is not None:
                if left is not None:
                    RH[j + 1][i] = f
                elif bottom is not None:
                    lo = max(bottom[0], f[0])
                    RH[j + 1][i] = (lo, f[1]) if lo <= f[1] else None
    return RV, RH


def _single_point_dist(P, Q):
    P = _pts(P)
    Q = _pts(Q)
    if len(P) == 1:
        return max(_d(P[0], q) for q in Q)
    return max(_d(Q[0], p) for p in P)


def brute_decide(P, Q, delta, eta=None):
    P = _pts(P)
    Q = _pts(Q)
    if eta is None:
        eta = eta_for(P, Q)
    if len(P) == 1 or len(Q) == 1:
        return _single_point_dist(P, Q) <= delta + eta
    S = [(0.0, 0.0)] + [None] * (len(P) - 2)
    S2 = [(0.0, 0.0)] + [None] * (len(Q) - 2)
    RV, _ = reach_grid(P, Q, delta, S, S2, eta)
    last = RV[-1][-1]
    return last is not None and last[1] >= 1.0


def brute_frechet(P, Q, rel_tol=1e-9):
    """Continuous Frechet distance by bisection on brute_decide."""
    P = _pts(P)
    Q = _pts(Q)
    lo = max(_d(P[0], Q[0]), _d(P[-1], Q[-1]))
    length = sum(_d(P[i], P[i + 1]) for i in range(len(P) - 1))
    length += sum(_d(Q[i], Q[i + 1]) for i in range(len(Q) - 1))
    hi = lo + length
    if brute_decide(P, Q, lo, eta=0.0):
        return lo
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if brute_decide(P, Q, mid, eta=0.0):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# located subcurves and reachability between arbitrary points

def sub_points(c, a, b):
    """Point list of c between positions a <= b (edge index + t)."""
    c = _pts(c)
    n = len(c)

    def at(pos):
        if n == 1:
            return c[0]
        e = min(max(int(math.floor(pos)), 0), n - 2)
        return _lerp(c[e], c[e + 1], pos - e)

    out = [at(a)]
    for v in range(int(math.ceil(a)), int(math.floor(b)) + 1):
        if a < v < b and c[v] != out[-1]:
            out.append(c[v])
    last = at(b)
    if last != out[-1]:
        out.append(last)
    return out


def brute_reachable(P, Q, x, p, y, q, delta, eta=None):
    """Is (y, q) delta-reachable from (x, p)?  Positions on P and Q."""
    if x > y or p > q:
        return False
    return brute_decide(sub_points(P, x, y), sub_points(Q, p, q), delta, eta)


def brute_reach_restriction(P, Q, delta, a_idx, b_idx, eta=None):
    """True reachability intervals from (v_1, w_1) at selected vertices.

    Returns (rows, cols): rows[k] is the interval list over Q's edges for
    P's vertex a_idx[k]; cols[l] the list over P's edges for Q's vertex
    b_idx[l].
    """
    P = _pts(P)
    Q = _pts(Q)
    S = [(0.0, 0.0)] + [None] * (len(P) - 2)
    S2 = [(0.0, 0.0)] + [None] * (len(Q) - 2)
    RV, RH = reach_grid(P, Q, delta, S, S2, eta)
    return [RV[a] for a in a_idx], [RH[b] for b in b_idx]


def brute_cover(block, tau_prime, delta_prime, S, eta=None):
    """Block points y with a source x <= y and d_F(block[x, y], tau') <= delta'."""
    block = _pts(block)
    tp = _pts(tau_prime)
    if eta is None:
        eta = eta_for(block)
    if len(tp) == 1:
        tp = [tp[0], tp[0]]
    _, RH = reach_grid(block, tp, delta_prime, list(S), None, eta)
    return RH[-1]


def brute_marked_edges(block, sigma_prime, delta, eta=None):
    """Edges e of the block met by a subcurve within delta of sigma'."""
    block = _pts(block)
    sp = _pts(sigma_prime)
    if eta is None:
        eta = eta_for(block, sp)
    if len(sp) == 1:
        sp = [sp[0], sp[0]]
    n = len(block)
    starts = [free_interval(block[i], block[i + 1], sp[0], delta, eta) for i in range(n - 1)]
    marked = set()
    for e in range(n - 1):
        # start points at positions <= e + 1, end points at positions >= e
        S = [starts[i] if i <= e else None for i in range(n - 1)]
        if e + 1 < n - 1 and starts[e + 1] is not None and starts[e + 1][0] <= 0.0:
            S[e + 1] = (0.0, 0.0)
        _, RH = reach_grid(block, sp, delta, S, None, eta)
        ends = RH[-1]
        hit = any(ends[i] is not None for i in range(e, n - 1))
        if not hit and e > 0 and ends[e - 1] is not None and ends[e - 1][1] >= 1.0:
            hit = True
        if hit:
            marked.add(e)
    return marked


# ---------------------------------------------------------------------------
# discrete

def brute_discrete(P, Q):
    """Discrete Frechet distance by the textbook max-min recurrence."""
    P = _pts(P)
    Q = _pts(Q)
    n, m = len(P), len(Q)
    _check(n, m, cap=10 ** 6)
    D = [[0.0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            d = _d(P[i], Q[j])
            if i == 0 and j == 0:
                D[i][j] = d
            elif i == 0:
                D[i][j] = max(D[i][j - 1], d)
            elif j == 0:
                D[i][j] = max(D[i - 1][j], d)
            else:
                D[i][j] = max(min(D[i - 1][j], D[i][j - 1], D[i - 1][j - 1]), d)
    return D[-1][-1]


def brute_dis_wave(P, Q, delta, S, S2):
    """Reachable vertex pairs by graph search from the source pairs.

    S and S2 are sets of vertex indices of P and Q.  Returns the set of
    pairs (i, j) reachable from some (x, 0) with x in S or (0, p) with p in
    S2, moving by (+1,0), (0,+1), (+1,+1) through pairs within delta.
    """
    P = _pts(P)
    Q = _pts(Q)
    n, m = len(P), len(Q)
    _check(n, m)
    free = lambda i, j: _d(P[i], Q[j]) <= delta
    stack = [(x, 0) for x in S if free(x, 0)] + [(0, p) for p in S2 if free(0, p)]
    seen = set(stack)
    while stack:
        i, j = stack.pop()
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            a, b = i + di, j + dj
            if a < n and b < m and (a, b) not in seen and free(a, b):
                seen.add((a, b))
                stack.append((a, b))
    return seen


def brute_discrete_decide(P, Q, delta):
    return (len(P) - 1, len(Q) - 1) in brute_dis_wave(P, Q, delta, {0}, {0})


def brute_dis_cover(block, i1, i2, delta_prime, S):
    """Vertices v with some source v' <= v and discrete d_F(block[v'..v], block[i1..i2]) <= delta'."""
    block = _pts(block)
    out = set()
    for v in range(len(block)):
        for s in S:
            if s <= v and brute_discrete(block[s:v + 1], block[i1:i2 + 1]) <= delta_prime:
                out.add(v)
                break
    return out


def brute_marked_vertices(block, sigma_prime, delta):
    block = _pts(block)
    sp = _pts(sigma_prime)
    n = len(block)
    marked = set()
    for x in range(n):
        for y in range(x, n):
            if brute_discrete(block[x:y + 1], sp) <= delta:
                marked.update(range(x, y + 1))
    return marked


# ---------------------------------------------------------------------------
# simplification

def brute_min_vertex_restricted(tau, delta, c_simp=2.0):
    """Fewest vertices of a subsequence (ends kept) whose shortcuts all pass."""
    tau = _pts(tau)
    n = len(tau)
    if n > MAX_SIMPLIFY:
        raise OracleSizeError("exhaustive search capped at %d vertices" % MAX_SIMPLIFY)
    if n == 1:
        return 1
    ok = {}
    for i in range(n):
        for j in range(i + 1, n):
            ok[i, j] = brute_decide([tau[i], tau[j]], tau[i:j + 1], c_simp * delta)
    for k in range(0, n - 1):
        for mid in itertools.combinations(range(1, n - 1), k):
            seq = (0,) + mid + (n - 1,)
            if all(ok[seq[t], seq[t + 1]] for t in range(len(seq) - 1)):
                return len(seq)
    return n


def brute_min_discrete_subsequence(tau, delta, c_simp=2.0):
    """Smallest subsequence (ends kept) within discrete distance c_simp*delta."""
    tau = _pts(tau)
    n = len(tau)
    if n > MAX_SIMPLIFY:
        raise OracleSizeError("exhaustive search capped at %d vertices" % MAX_SIMPLIFY)
    if n == 1:
        return 1
    for k in range(0, n - 1):
        for mid in itertools.combinations(range(1, n - 1), k):
            seq = (0,) + mid + (n - 1,)
            if brute_discrete(tau, [tau[s] for s in seq]) <= c_simp * delta:
                return len(seq)
    return n


def brute_min_simplification(tau, delta, net_resolution=6, max_k=3):
    """Fewest vertices of any curve on a grid net within delta of tau.

    The net is a regular grid over the bounding box grown by delta with
    ``net_resolution`` points per axis.  Returns None when no curve of at
    most ``max_k`` vertices qualifies.
    """
    tau = _pts(tau)
    if len(tau) > MAX_SIMPLIFY:
        raise OracleSizeError("exhaustive search capped at %d vertices" % MAX_SIMPLIFY)
    dim = len(tau[0])
    lo = [min(p[k] for p in tau) - delta for k in range(dim)]
    hi = [max(p[k] for p in tau) + delta for k in range(dim)]
    axes = [[lo[k] + (hi[k] - lo[k]) * s / (net_resolution - 1) for s in range(net_resolution)]
            for k in range(dim)]
    net = list(itertools.product(*axes))
    first = [g for g in net if _d(g, tau[0]) <= delta]
    last = [g for g in net if _d(g, tau[-1]) <= delta]
    if _d(tau[0], tau[-1]) <= delta and all(_d(p, tau[0]) <= delta for p in tau):
        return 1
    for k in range(2, max_k + 1):
        for a in first:
            for b in last:
                for mid in itertools.product(net, repeat=k - 2):
                    if brute_decide([a, *mid, b], tau, delta):
                        return k
    return None
