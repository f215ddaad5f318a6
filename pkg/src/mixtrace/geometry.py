"""Planar geometry primitives used by the model statistics.

Point sets are ``(n, 2)`` float arrays. Hulls are computed with Andrew's
monotone chain and stored counter-clockwise with collinear vertices removed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyConfiguration, EmptyPointSet

# Boundary tolerance in data units.
TOL = 1e-9


def as_points(points) -> np.ndarray:
    """Coerce ``points`` to a float ``(n, 2)`` array."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Hull:
    """Convex hull of a finite planar point set.

    ``vertices`` holds 1 point (all inputs coincide), 2 points (a segment) or
    a counter-clockwise polygon. ``degenerate`` is set in the first two cases.
    """

    vertices: np.ndarray

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def __len__(self):
        return len(self.vertices)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> Hull:
    pts = as_points(points)
    if len(pts) == 0:
        raise EmptyPointSet("convex hull of an empty point set")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")

    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) == 1:
        return Hull(np.array(uniq, dtype=float))

    lower: list = []
    for p in uniq:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(uniq):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    # all-collinear input leaves just the two extreme points
    chain = lower[:-1] + upper[:-1]
    return Hull(np.array(chain, dtype=float))


def _polygon_area2(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return float(x[:-1] @ y[1:] - x[1:] @ y[:-1] + x[-1] * y[0] - x[0] * y[-1])


def hull_area(h: Hull) -> float:
    """Shoelace area of the hull; zero when degenerate."""
    if h.degenerate:
        return 0.0
    return abs(_polygon_area2(h.vertices)) / 2.0


def _segment_sq_dists(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared distances from each row of ``p`` (m, 2) to each segment a[k]-b[k].

    Returns an (m, k) array.
    """
    ab = b - a
    ap = p[:, None, :] - a[None, :, :]
    denom = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.einsum("mkj,kj->mk", ap, ab) / denom
    t = np.where(denom > 0, np.clip(t, 0.0, 1.0), 0.0)
    closest = a[None, :, :] + t[..., None] * ab[None, :, :]
    diff = p[:, None, :] - closest
    return np.einsum("mkj,mkj->mk", diff, diff)


def hull_contains_many(h: Hull, points, tol: float = TOL) -> np.ndarray:
    """Vectorised :func:`hull_contains` over an (m, 2) array."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    pts = as_points(points)
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    v = h.vertices
    if len(v) == 1:
        d2 = np.sum((pts - v[0]) ** 2, axis=1)
        return d2 <= tol * tol
    if len(v) == 2:
        return _segment_sq_dists(pts, v[:1], v[1:])[:, 0] <= tol * tol
    a = v
    b = np.concatenate([v[1:], v[:1]])
    e = b - a
    cross = (e[:, 0] * (pts[:, 1:2] - a[:, 1])) - (e[:, 1] * (pts[:, 0:1] - a[:, 0]))
    # signed distance to each edge line, negative outside; the deepest
    # violation is a lower bound on the distance to the polygon
    depth = np.max(-cross / np.hypot(e[:, 0], e[:, 1]), axis=1)
    inside = depth <= 0.0
    near = ~inside & (depth <= tol)
    if near.any():
        seg_d2 = _segment_sq_dists(pts[near], a, b).min(axis=1)
        inside[near] = seg_d2 <= tol * tol
    return inside


def hull_contains(h: Hull, p, tol: float = TOL) -> bool:
    """True if ``p`` lies in the closed hull or within ``tol`` of its boundary."""
    return bool(hull_contains_many(h, as_points(p), tol)[0])


def sq_dists(points, sources) -> np.ndarray:
    """(m, n) matrix of squared distances."""
    p = as_points(points)
    s = as_points(sources)
    diff = p[:, None, :] - s[None, :, :]
    return np.einsum("mnj,mnj->mn", diff, diff)


def min_sq_dists(points, sources) -> np.ndarray:
    """For each point, the squared distance to its nearest source."""
    s = as_points(sources)
    if len(s) == 0:
        raise EmptyConfiguration("no sources to measure distance to")
    return sq_dists(points, s).min(axis=1)


def min_sq_dist(p, sources) -> float:
    return float(min_sq_dists(as_points(p), sources)[0])


def pairs_within(sources, r: float) -> int:
    """Number of unordered pairs strictly closer than ``r``."""
    if not r > 0:
        raise ValueError("r must be positive")
    s = as_points(sources)
    n = len(s)
    if n < 2:
        return 0
    d2 = sq_dists(s, s)
    return int(np.count_nonzero(np.triu(d2 < r * r, 1)))
