"""Payoff regions reachable by two-parameter EWL strategies.

Every point of the cooperative region of a 2x2 game is a convex
combination of at most three corner payoffs, and each such combination is
produced by an explicit pure profile of strategies ``U(theta, alpha, 0)``
(:func:`caratheodory_profile`). :func:`achieve_target` chains the two
steps for an arbitrary target point.
"""

from dataclasses import dataclass
import math
from pathlib import Path

import numpy as np

from .games import PROB_TOL, RegionSample
from .hull import convex_hull, distance_to_polygon
from .quantum import TWO_PI, UnitaryStrategy, ewl_payoff_closed_form, outcome_coefficients

CORNERS = ((0, 0), (0, 1), (1, 0), (1, 1))
DEFAULT_EWL_GRID = (53, 53, 210, 7)
MAX_GRID_POINTS = 10 ** 7
_PURE = {
    (0, 0): (UnitaryStrategy(0.0), UnitaryStrategy(0.0)),
    (0, 1): (UnitaryStrategy(0.0), UnitaryStrategy(math.pi)),
    (1, 0): (UnitaryStrategy(math.pi), UnitaryStrategy(0.0)),
    (1, 1): (UnitaryStrategy(math.pi), UnitaryStrategy(math.pi)),
}


class OutsideHullError(ValueError):
    def __init__(self, target, distance):
        super().__init__(f"target {tuple(float(t) for t in target)} lies {distance:.3g} outside the cooperative region")
        self.target = target
        self.distance = distance


@dataclass(frozen=True)
class ConvexWeights:
    """Weights on the corner payoffs, ordered 00, 01, 10, 11."""

    w00: float
    w01: float
    w10: float
    w11: float

    def __post_init__(self):
        w = self.as_array()
        if np.any(w < 0) or abs(w.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"weights must be nonnegative and sum to 1, got {w}")

    @classmethod
    def from_array(cls, w):
        return cls(*(float(x) for x in w))

    def as_array(self):
        return np.array([self.w00, self.w01, self.w10, self.w11])

    def __getitem__(self, corner):
        return self.as_array()[CORNERS.index(tuple(corner))]


def _grid_axis(spec, periodic):
    if np.ndim(spec) == 0:
        n = int(spec)
        if n < 2:
            raise ValueError("grid resolutions must be at least 2")
        return TWO_PI * np.arange(n) / n if periodic else math.pi * (np.arange(n) / (n - 1))
    return np.asarray(spec, dtype=float).ravel()


def ewl_region_samples(game, grid=DEFAULT_EWL_GRID):
    """Payoffs of all profiles ``(U(t1, a1, 0), U(t2, a2, 0))`` on a grid.

    ``grid`` lists the entries for ``t1, t2, a1, a2``; each is either a
    resolution (thetas span ``[0, pi]``, alphas ``[0, 2 pi)``) or an
    explicit array of values.
    """
    if game.shape != (2, 2):
        raise ValueError("EWL regions are defined for 2x2 games")
    t1, t2, a1, a2 = (_grid_axis(g, periodic=k >= 2) for k, g in enumerate(grid))
    total = t1.size * t2.size * a1.size * a2.size
    if total > MAX_GRID_POINTS:
        raise ValueError(f"grid has {total} points, limit is {MAX_GRID_POINTS}")
    ua, ub = game.a.ravel(), game.b.ravel()
    T2, A1, A2 = np.meshgrid(t2, a1, a2, indexing="ij")
    chunks = []
    for theta1 in t1:
        w = outcome_coefficients(theta1, A1, 0.0, T2, A2, 0.0).reshape(4, -1)
        chunks.append(np.stack([ua @ w, ub @ w], axis=1))
    return RegionSample("ewl_pure", np.concatenate(chunks))


def _ratio(num, den):
    return math.sqrt(min(1.0, max(0.0, num / den)))


def caratheodory_profile(weights, omitted):
    """Pure two-parameter profile whose payoff is the weighted corner sum.

    ``omitted`` names the corner (``(i, j)``) left out of the combination;
    its weight must be zero. When the remaining pivot weight is 1 the pure
    profile of that corner is returned.
    """
    if not isinstance(weights, ConvexWeights):
        weights = ConvexWeights.from_array(weights)
    omitted = tuple(omitted)
    if omitted not in CORNERS:
        raise ValueError(f"omitted corner must be one of {CORNERS}")
    if weights[omitted] > PROB_TOL:
        raise ValueError(f"corner {omitted} carries weight {weights[omitted]}, expected 0")
    l00, l01, l10, l11 = weights.as_array()
    pivot = {(1, 1): (0, 0), (1, 0): (0, 1), (0, 1): (1, 0), (0, 0): (1, 1)}[omitted]
    rest = 1.0 - weights[pivot]
    if rest <= PROB_TOL:
        return _PURE[pivot]
    if omitted == (1, 1):
        phase = math.acos(_ratio(l01, rest))
        return (UnitaryStrategy(0.0, -phase, 0.0),
                UnitaryStrategy(2 * math.acos(math.sqrt(l00)), phase, 0.0))
    theta2 = 2 * math.acos(math.sqrt(rest))
    if omitted == (1, 0):
        return (UnitaryStrategy(0.0, 0.0, 0.0),
                UnitaryStrategy(theta2, math.acos(_ratio(l00, rest)), 0.0))
    if omitted == (0, 1):
        return (UnitaryStrategy(0.0, math.pi / 2, 0.0),
                UnitaryStrategy(theta2, math.acos(_ratio(l11, rest)), 0.0))
    return (UnitaryStrategy(math.pi, 0.0, 0.0),
            UnitaryStrategy(theta2, math.acos(_ratio(l10, rest)), 0.0))


def _corner_labels(game):
    pts = game.corner_points()
    labels = {}
    for k, corner in enumerate(CORNERS):
        labels.setdefault((float(pts[k, 0]), float(pts[k, 1])), corner)
    return pts, labels


def achieve_target(game, target, tol=1e-9):
    """Find a pure two-parameter profile whose payoff equals ``target``.

    Returns ``(profile, residual)``. The cooperative hull is fanned into
    triangles from the payoff of corner 00; the first triangle containing
    the target supplies barycentric weights for :func:`caratheodory_profile`.
    """
    target = np.asarray(target, dtype=float).reshape(2)
    pts, labels = _corner_labels(game)
    hull = convex_hull(pts)
    dist = distance_to_polygon(target, hull)
    if dist > tol:
        raise OutsideHullError(target, dist)
    weights = _barycentric_weights(pts, hull, labels, target, tol)
    lam = np.clip(weights, 0.0, None)
    lam /= lam.sum()
    omitted = next(c for k, c in enumerate(CORNERS) if lam[k] == 0.0)
    profile = caratheodory_profile(ConvexWeights.from_array(lam), omitted)
    achieved = ewl_payoff_closed_form(game, *profile)
    return profile, float(np.hypot(*(achieved - target)))


def _barycentric_weights(pts, hull, labels, target, tol):
    w = np.zeros(4)
    apex = (float(pts[0, 0]), float(pts[0, 1]))
    if len(hull) == 1:
        w[0] = 1.0
        return w
    if len(hull) == 2:
        a, b = (np.array(v) for v in hull)
        d = b - a
        t = float(np.clip((target - a) @ d / (d @ d), 0.0, 1.0))
        ka, kb = (CORNERS.index(labels[v]) for v in hull)
        w[ka], w[kb] = 1.0 - t, t
        return w
    ring = hull
    if apex in hull:
        k = hull.index(apex)
        ring = hull[k:] + hull[:k]
        edges = [(ring[k], ring[k + 1]) for k in range(1, len(ring) - 1)]
    else:
        edges = [(ring[k], ring[(k + 1) % len(ring)]) for k in range(len(ring))]
    p0 = np.array(apex)
    for v1, v2 in edges:
        p1, p2 = np.array(v1), np.array(v2)
        m = np.column_stack([p1 - p0, p2 - p0])
        if abs(np.linalg.det(m)) < 1e-15:
            continue
        s, t = np.linalg.solve(m, target - p0)
        if s >= -tol and t >= -tol and s + t <= 1 + tol:
            w[0] += 1.0 - s - t
            w[CORNERS.index(labels[v1])] += s
            w[CORNERS.index(labels[v2])] += t
            return w
    raise OutsideHullError(target, distance_to_polygon(target, hull))


def export_region(sample, path, fmt="csv"):
    """Write a region sample as ``x,y`` CSV or as a schematic SVG scatter."""
    path = Path(path)
    if fmt == "csv":
        lines = ["x,y"] + [f"{x:.12g},{y:.12g}" for x, y in sample.points]
        text = "\n".join(lines) + "\n"
    elif fmt == "svg":
        text = _svg(sample)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _svg(sample, size=800):
    pts = sample.points
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    lo, span = lo - 0.05 * span, span * 1.1
    pad = 60
    inner = size - 2 * pad

    def sx(p):
        return pad + (p[0] - lo[0]) / span[0] * inner, size - pad - (p[1] - lo[1]) / span[1] * inner

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="{pad}" y="{pad}" width="{inner}" height="{inner}" fill="none" stroke="black"/>',
        f'<text x="{size / 2}" y="{size - 15}" text-anchor="middle">Player 1</text>',
        f'<text x="20" y="{size / 2}" text-anchor="middle" transform="rotate(-90 20 {size / 2})">'
        "Player 2</text>",
        f'<g fill="steelblue" class="{sample.tag}">',
    ]
    out += ['<circle cx="%.2f" cy="%.2f" r="1"/>' % sx(p) for p in pts]
    out.append("</g>")
    ring = list(sample.hull) + [sample.hull[0]]
    coords = " ".join("%.2f,%.2f" % sx(v) for v in ring)
    out.append(f'<polyline points="{coords}" fill="none" stroke="crimson" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
