"""Points, curves, located points and the segment/ball primitive.

Curves are float64 arrays of shape (n, d).  A point on a curve is addressed
either by a ``CurvePoint`` (edge index, t) or, inside the numeric kernels,
by a single float ``edge + t`` which we call a position.  Edge indices are
0-based throughout the library.
"""

import math
from collections import namedtuple

import numpy as np
from numba import njit

SNAP = 1e-12


class CurveError(ValueError):
    """Invalid curve input (bad shape, non-finite values, parse errors)."""


# ---------------------------------------------------------------------------
# curves

def as_curve(points, collapse=True):
    """Validate ``points`` and return a C-contiguous float64 array (n, d).

    Consecutive duplicate points are collapsed unless ``collapse`` is False.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise CurveError("a curve needs at least one point of dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise CurveError("curve coordinates must be finite")
    if collapse and arr.shape[0] > 1:
        keep = np.ones(arr.shape[0], dtype=bool)
        keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
        arr = arr[keep]
    return np.ascontiguousarray(arr)


def dist(p, q):
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise CurveError("dimension mismatch: %s vs %s" % (p.shape, q.shape))
    return float(math.sqrt(float(np.sum((p - q) ** 2))))


def curve_length(c):
    c = np.asarray(c, dtype=np.float64)
    if len(c) < 2:
        return 0.0
    return float(np.sum(np.sqrt(np.sum(np.diff(c, axis=0) ** 2, axis=1))))


def tolerance(*curves):
    """The boundary tolerance eta = 1e-9 * bounding-box diameter."""
    pts = np.vstack([np.asarray(c, dtype=np.float64) for c in curves])
    span = pts.max(axis=0) - pts.min(axis=0)
    return 1e-9 * float(math.sqrt(float(np.sum(span * span))))


# ---------------------------------------------------------------------------
# located points

class CurvePoint(namedtuple("CurvePoint", "edge t")):
    """A point on a curve: edge index (0-based) and parameter t in [0, 1].

    Canonical form keeps t < 1 except on the last edge.  Ordering is the
    lexicographic order on (edge, t), which matches the order along the
    curve for canonical points.
    """

    __slots__ = ()

    @classmethod
    def canonical(cls, edge, t, n_edges):
        edge = int(edge)
        t = float(t)
        if not (0 <= edge < n_edges) or not (0.0 <= t <= 1.0):
            raise CurveError("point (%d, %g) is not on a %d-edge curve" % (edge, t, n_edges))
        if t >= 1.0 and edge < n_edges - 1:
            return cls(edge + 1, 0.0)
        return cls(edge, t)

    @classmethod
    def from_position(cls, pos, n_edges):
        pos = float(pos)
        if n_edges == 0:
            return cls(0, 0.0)
        e = min(int(math.floor(pos)), n_edges - 1)
        e = max(e, 0)
        return cls.canonical(e, pos - e, n_edges)

    @property
    def position(self):
        return self.edge + self.t


def point_at(c, pos):
    """Coordinates of the point at position ``pos`` (edge + t) of curve c."""
    c = np.asarray(c, dtype=np.float64)
    if isinstance(pos, CurvePoint):
        pos = pos.position
    n = len(c)
    if n == 1:
        return c[0].copy()
    e = min(max(int(math.floor(pos)), 0), n - 2)
    t = pos - e
    return c[e] + t * (c[e + 1] - c[e])


def subcurve(c, a, b):
    """The polygonal curve c[a, b] between located points a <= b."""
    c = np.asarray(c, dtype=np.float64)
    pa = a.position if isinstance(a, CurvePoint) else float(a)
    pb = b.position if isinstance(b, CurvePoint) else float(b)
    if pa > pb:
        raise CurveError("subcurve endpoints out of order: %r > %r" % (a, b))
    return _subcurve(c, pa, pb)


@njit(cache=True)
def _point_at(c, pos):
    n = c.shape[0]
    if n == 1:
        return c[0].copy()
    e = int(math.floor(pos))
    if e > n - 2:
        e = n - 2
    if e < 0:
        e = 0
    t = pos - e
    return c[e] + t * (c[e + 1] - c[e])


@njit(cache=True)
def _subcurve(c, pa, pb):
    """Points of c[pa, pb]; vertices equal to an endpoint are not repeated."""
    d = c.shape[1]
    lo = int(math.ceil(pa - SNAP))
    hi = int(math.floor(pb + SNAP))
    first = _point_at(c, pa)
    last = _point_at(c, pb)
    out = np.empty((hi - lo + 3, d))
    k = 0
    out[k] = first
    k += 1
    for v in range(lo, hi + 1):
        if v < 0 or v >= c.shape[0]:
            continue
        same = True
        for q in range(d):
            if c[v, q] != out[k - 1, q]:
                same = False
                break
        if not same:
            out[k] = c[v]
            k += 1
    same = True
    for q in range(d):
        if last[q] != out[k - 1, q]:
            same = False
            break
    if not same:
        out[k] = last
        k += 1
    return out[:k].copy()


# ---------------------------------------------------------------------------
# segment / ball

@njit(cache=True)
def clip(a, b, c, r, eta):
    """Parameter interval of the segment a->b inside the closed ball B(c, r).

    Returns (lo, hi); the interval is empty when lo > hi.  Endpoints within
    r + eta of c are always included, and a near-tangent segment yields the
    degenerate interval at its closest point.
    """
    d = a.shape[0]
    A = 0.0
    B = 0.0
    C = 0.0
    db = 0.0
    for q in range(d):
        u = b[q] - a[q]
        w = a[q] - c[q]
        A += u * u
        B += w * u
        C += w * w
        z = b[q] - c[q]
        db += z * z
    tol2 = (r + eta) * (r + eta)
    in_a = C <= tol2
    in_b = db <= tol2
    if A == 0.0:
        if in_a:
            return 0.0, 1.0
        return math.inf, -math.inf
    disc = B * B - A * (C - r * r)
    if disc < 0.0:
        ts = -B / A
        if ts < 0.0:
            ts = 0.0
        elif ts > 1.0:
            ts = 1.0
        dd = C + 2.0 * ts * B + ts * ts * A
        if dd <= tol2:
            lo = ts
            hi = ts
        else:
            return math.inf, -math.inf
    else:
        s = math.sqrt(disc)
        lo = (-B - s) / A
        hi = (-B + s) / A
        if lo < 0.0:
            lo = 0.0
        if hi > 1.0:
            hi = 1.0
        if lo > hi:
            if hi <= 0.0 and in_a:
                return 0.0, 0.0
            if lo >= 1.0 and in_b:
                return 1.0, 1.0
            return math.inf, -math.inf
    # vertex membership decides the endpoints, so neighbouring edges agree
    if in_a:
        lo = 0.0
    if in_b:
        hi = 1.0
    if lo > hi:
        return math.inf, -math.inf
    return lo, hi


def clip_segment_to_ball(a, b, center, r, eta=0.0):
    """Python wrapper of :func:`clip`; returns (lo, hi) or None when empty."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    if r < 0:
        raise CurveError("radius must be non-negative")
    if not (a.shape == b.shape == center.shape):
        raise CurveError("dimension mismatch")
    lo, hi = clip(a, b, center, float(r), float(eta))
    if lo > hi:
        return None
    return (lo, hi)


# ---------------------------------------------------------------------------
# interval arrays

class IntervalArray:
    """One optional parameter interval per edge of a host curve.

    Stored as two float arrays; edge i is empty when lo[i] > hi[i].
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape:
            raise ValueError("lo/hi length mismatch")

    @classmethod
    def empty(cls, n_edges):
        return cls(np.full(n_edges, np.inf), np.full(n_edges, -np.inf))

    @classmethod
    def point(cls, n_edges, edge, t):
        ia = cls.empty(n_edges)
        ia.lo[edge] = t
        ia.hi[edge] = t
        return ia

    def __len__(self):
        return len(self.lo)

    def is_empty(self, i=None):
        if i is None:
            return bool(np.all(self.lo > self.hi))
        return bool(self.lo[i] > self.hi[i])

    def covers(self, i, t, tol=0.0):
        return bool(self.lo[i] - tol <= t <= self.hi[i] + tol)

    def __getitem__(self, i):
        if self.lo[i] > self.hi[i]:
            return None
        return (float(self.lo[i]), float(self.hi[i]))

    def as_list(self):
        return [self[i] for i in range(len(self))]

    def __repr__(self):
        return "IntervalArray(%r)" % (self.as_list(),)


def empty_arrays(k):
    return np.full(k, np.inf), np.full(k, -np.inf)


# ---------------------------------------------------------------------------
# IO

def read_csv(path):
    """Read one point per line; blank lines and '#' lines are skipped."""
    rows = []
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = [p.strip() for p in s.split(",")]
            try:
                vals = [float(p) for p in parts]
            except ValueError:
                raise CurveError("%s:%d: cannot parse %r" % (path, lineno, s)) from None
            if dim is None:
                dim = len(vals)
            elif len(vals) != dim:
                raise CurveError("%s:%d: expected %d coordinates, got %d"
                                 % (path, lineno, dim, len(vals)))
            if not all(math.isfinite(v) for v in vals):
                raise CurveError("%s:%d: non-finite coordinate" % (path, lineno))
            rows.append(vals)
    if not rows:
        raise CurveError("%s: no points" % path)
    return as_curve(rows)


def write_csv(path, c, header=True):
    c = np.asarray(c, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write("# " + ",".join("x%d" % i for i in range(c.shape[1])) + "\n")
        for p in c:
            fh.write(",".join(repr(float(v)) for v in p) + "\n")


# ---------------------------------------------------------------------------
# synthetic curves

KINDS = ("walk", "zigzag", "circle", "perturbed-copy")


def generate_synthetic(kind, n, seed=0, dim=2, step=1.0, amplitude=1.0,
                       radius=1.0, noise=0.0, base=None):
    """Deterministic synthetic curves for tests and benchmarks.

    walk: Gaussian random walk with the given step scale.
    zigzag: points (i, +-amplitude) alternating.
    circle: n points on a circle of the given radius.
    perturbed-copy: ``base`` plus Gaussian noise of scale ``noise``.
    """
    if kind not in KINDS:
        raise CurveError("unknown curve kind %r (expected one of %s)" % (kind, ", ".join(KINDS)))
    if n < 2 and kind != "perturbed-copy":
        raise CurveError("need n >= 2")
    rng = np.random.default_rng(seed)
    if kind == "walk":
        steps = rng.normal(scale=step, size=(n - 1, dim))
        pts = np.vstack([np.zeros((1, dim)), np.cumsum(steps, axis=0)])
    elif kind == "zigzag":
        pts = np.zeros((n, dim))
        pts[:, 0] = np.arange(n)
        if dim > 1:
            pts[:, 1] = amplitude * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    elif kind == "circle":
        ang = 2 * np.pi * np.arange(n) / n
        pts = np.zeros((n, dim))
        pts[:, 0] = radius * np.cos(ang)
        if dim > 1:
            pts[:, 1] = radius * np.sin(ang)
    else:
        if base is None:
            raise CurveError("perturbed-copy needs a base curve")
        base = np.asarray(base, dtype=np.float64)
        pts = base.copy()
        if noise > 0:
            pts = pts + rng.normal(scale=noise, size=base.shape)
    return as_curve(pts)
