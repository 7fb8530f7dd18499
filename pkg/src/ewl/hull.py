"""Planar convex hulls and polygon distance queries.

Hulls are returned as lists of ``(x, y)`` tuples in counter-clockwise order,
starting from the lexicographically smallest vertex. Collinear boundary
points are dropped.
"""

import numpy as np

# Above this many input points, discard the interior of an 8-direction
# extreme-point polygon before running the chain.
_PREFILTER_MIN = 2048


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain(points):
    lower, upper = [], []
    for p in points:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(points):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _segment_distance(p, a, b):
    ab = (b[0] - a[0], b[1] - a[1])
    denom = ab[0] ** 2 + ab[1] ** 2
    if denom == 0.0:
        return float(np.hypot(p[0] - a[0], p[1] - a[1]))
    t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / denom
    t = min(1.0, max(0.0, t))
    return float(np.hypot(p[0] - a[0] - t * ab[0], p[1] - a[1] - t * ab[1]))


def _simplify(hull, tol):
    # Drop vertices lying within tol of the chord joining their neighbours;
    # rounding noise along a straight edge otherwise survives the chain.
    changed = True
    while changed and len(hull) > 2:
        changed = False
        for k in range(len(hull)):
            prev, cur, nxt = hull[k - 1], hull[k], hull[(k + 1) % len(hull)]
            if _segment_distance(cur, prev, nxt) <= tol:
                del hull[k]
                changed = True
                break
    if len(hull) == 2 and np.hypot(hull[0][0] - hull[1][0], hull[0][1] - hull[1][1]) <= tol:
        hull = hull[:1]
    return hull


def _prefilter(pts):
    x, y = pts[:, 0], pts[:, 1]
    idx = {int(np.argmin(v)) for v in (x, y, x + y, x - y)}
    idx |= {int(np.argmax(v)) for v in (x, y, x + y, x - y)}
    poly = _chain(sorted({(float(pts[i, 0]), float(pts[i, 1])) for i in idx}))
    if len(poly) < 3:
        return pts
    inside = np.ones(len(pts), dtype=bool)
    for k in range(len(poly)):
        a, b = poly[k], poly[(k + 1) % len(poly)]
        inside &= (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) > 0
    return pts[~inside]


def convex_hull(points, tol=None):
    """Return the convex hull of 2D points as a CCW list of vertices.

    Parameters
    ----------
    points : array_like, shape (N, 2)
        Finite coordinates, N >= 1.
    tol : float, optional
        Distance below which a vertex is treated as collinear with its
        neighbours. Defaults to ``1e-12`` times the coordinate scale.

    Returns
    -------
    list of tuple
        Hull vertices. A single point or a two-point segment is returned
        for degenerate inputs.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set is undefined")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must have finite coordinates")
    if tol is None:
        tol = 1e-12 * max(1.0, float(np.abs(pts).max()))
    if len(pts) > _PREFILTER_MIN:
        pts = _prefilter(pts)
    pts = np.unique(pts, axis=0)  # sorted lexicographically by (x, y)
    ordered = [(float(a), float(b)) for a, b in pts]
    if len(ordered) == 1:
        return ordered
    hull = _simplify(_chain(ordered), tol)
    start = min(range(len(hull)), key=lambda k: hull[k])
    return hull[start:] + hull[:start]


def distance_to_polygon(points, polygon):
    """Euclidean distance from each point to a convex CCW polygon (0 inside).

    ``polygon`` may also be a single point or a segment, as produced by
    :func:`convex_hull` for degenerate inputs.
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 2)
    poly = np.asarray(polygon, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    nv = len(poly)
    seg = np.full(len(pts), np.inf)
    edges = [(poly[k], poly[(k + 1) % nv]) for k in range(nv)] if nv > 1 else [(poly[0], poly[0])]
    for a, b in edges:
        d = b - a
        denom = d @ d
        if denom == 0.0:
            t = np.zeros_like(x)
        else:
            t = np.clip(((x - a[0]) * d[0] + (y - a[1]) * d[1]) / denom, 0.0, 1.0)
        seg = np.minimum(seg, np.hypot(x - a[0] - t * d[0], y - a[1] - t * d[1]))
    if nv >= 3:
        inside = np.ones(len(pts), dtype=bool)
        for a, b in edges:
            inside &= (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) >= 0
        seg[inside] = 0.0
    return float(seg[0]) if single else seg


def polygon_contains(polygon, points, tol=1e-9):
    """Boolean mask: points within ``tol`` of the convex polygon."""
    return distance_to_polygon(points, polygon) <= tol


def hausdorff_distance(poly_a, poly_b):
    """Hausdorff distance between two convex polygons (or points/segments).

    For convex sets the supremum is attained at a vertex, so checking
    vertices against the opposite polygon is exact.
    """
    d_ab = np.max(distance_to_polygon(np.asarray(poly_a, float).reshape(-1, 2), poly_b))
    d_ba = np.max(distance_to_polygon(np.asarray(poly_b, float).reshape(-1, 2), poly_a))
    return float(max(d_ab, d_ba))
