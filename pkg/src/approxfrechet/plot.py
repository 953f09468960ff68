"""Free-space diagram as SVG.

tau runs along x, sigma along y (upwards).  Free space is white, blocked
space grey; when d_F <= delta the matching path is drawn on top.
"""

import numpy as np

from .geometry import as_curve, tolerance
from .matching import MatchingError, build_matching

CELL_PX = 8
MAX_CELLS = 256
SUB = 4          # samples per cell and axis at full resolution
FREE = "#ffffff"
BLOCKED = "#9a9a9a"
GRID = "#d8d8d8"
PATH = "#c0392b"


def _points_at(c, pos):
    e = np.minimum(np.floor(pos).astype(int), len(c) - 2)
    t = (pos - e)[:, None]
    return c[e] * (1 - t) + c[e + 1] * t


def free_mask(tau, sigma, delta, nx, ny):
    """Boolean grid [ny, nx]: sample centres that are free."""
    xs = (np.arange(nx) + 0.5) * (len(tau) - 1) / nx
    ys = (np.arange(ny) + 0.5) * (len(sigma) - 1) / ny
    A = _points_at(tau, xs)
    B = _points_at(sigma, ys)
    d = np.sqrt(((B[:, None, :] - A[None, :, :]) ** 2).sum(axis=2))
    return d <= delta


def render_freespace(tau, sigma, delta, with_path=True):
    """SVG text of the free-space diagram of (tau, sigma) at delta."""
    tau = as_curve(tau)
    sigma = as_curve(sigma)
    n, m = len(tau) - 1, len(sigma) - 1
    if n < 1 or m < 1:
        raise ValueError("both curves need at least one edge")
    # 8 px per cell up to 256 cells per axis, then shrink
    scale = CELL_PX * min(1.0, MAX_CELLS / max(n, m))
    W, H = n * scale, m * scale
    nx = max(1, int(round(W / CELL_PX * SUB)))
    ny = max(1, int(round(H / CELL_PX * SUB)))
    mask = free_mask(tau, sigma, delta, nx, ny)
    px, py = W / nx, H / ny
    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%.0f" height="%.0f" '
           'viewBox="0 0 %.2f %.2f">' % (W, H, W, H),
           '<rect width="100%%" height="100%%" fill="%s"/>' % BLOCKED,
           '<g fill="%s" shape-rendering="crispEdges">' % FREE]
    for r in range(ny):
        row = mask[r]
        y = H - (r + 1) * py
        c = 0
        while c < nx:
            if not row[c]:
                c += 1
                continue
            s = c
            while c < nx and row[c]:
                c += 1
            out.append('<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f"/>'
                       % (s * px, y, (c - s) * px, py))
    out.append("</g>")
    if max(n, m) <= MAX_CELLS:
        out.append('<g stroke="%s" stroke-width="0.5">' % GRID)
        for i in range(n + 1):
            out.append('<line x1="%.2f" y1="0" x2="%.2f" y2="%.2f"/>' % (i * scale, i * scale, H))
        for j in range(m + 1):
            out.append('<line x1="0" y1="%.2f" x2="%.2f" y2="%.2f"/>' % (H - j * scale, W, H - j * scale))
        out.append("</g>")
    if with_path:
        try:
            M = build_matching(tau, sigma, delta, tolerance(tau, sigma))
        except MatchingError:
            M = None
        if M is not None:
            pts = " ".join("%.2f,%.2f" % (x * scale, H - y * scale) for x, y in zip(M.bx, M.by))
            out.append('<polyline points="%s" fill="none" stroke="%s" stroke-width="1.5"/>'
                       % (pts, PATH))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_freespace_svg(path, tau, sigma, delta, with_path=True):
    svg = render_freespace(tau, sigma, delta, with_path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return path
