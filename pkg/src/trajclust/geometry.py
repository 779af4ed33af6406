"""Planar geometry primitives shared across the package.

Trajectories are polygonal chains in the plane, stored together with
cumulative arc lengths so that the point at a given arc-length position
can be found quickly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# Mean Earth radius (IUGG), metres; used by the spherical transverse
# Mercator projection.
EARTH_RADIUS_M = 6371008.8


@dataclass(frozen=True)
class Point:
    """A point in the plane."""

    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Segment:
    """A directed line segment with distinct endpoints."""

    start: Point
    end: Point

    def __post_init__(self):
        if self.start.x == self.end.x and self.start.y == self.end.y:
            raise ValueError("segment endpoints must be distinct")

    @property
    def length(self) -> float:
        return math.hypot(self.end.x - self.start.x, self.end.y - self.start.y)


class Trajectory:
    """Polygonal chain of at least two vertices with no zero-length edges.

    Build instances with :func:`make_trajectory`, which removes exact
    consecutive duplicates and validates the input.  Vertices are held in
    an ``(n, 2)`` float array; ``cum_lengths[i]`` is the arc length from
    the first vertex to vertex ``i`` (``cum_lengths[0] == 0``).
    """

    __slots__ = ("xy", "cum_lengths")

    def __init__(self, xy: np.ndarray, cum_lengths: np.ndarray):
        self.xy = xy
        self.cum_lengths = cum_lengths

    def __len__(self) -> int:
        return self.xy.shape[0]

    def __repr__(self) -> str:
        return f"Trajectory({len(self)} vertices, length={self.length:.6g})"

    @property
    def length(self) -> float:
        """Total arc length."""
        return float(self.cum_lengths[-1])

    @property
    def vertices(self) -> list[Point]:
        return [Point(float(x), float(y)) for x, y in self.xy]

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.diff(self.cum_lengths)

    def vertex(self, i: int) -> Point:
        return Point(float(self.xy[i, 0]), float(self.xy[i, 1]))

    def segment(self, i: int) -> Segment:
        return Segment(self.vertex(i), self.vertex(i + 1))

    def reverse(self) -> "Trajectory":
        xy = self.xy[::-1].copy()
        seg = np.hypot(np.diff(xy[:, 0]), np.diff(xy[:, 1]))
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        return Trajectory(xy, cum)


def make_trajectory(raw_points: Iterable) -> Trajectory:
    """Validate a vertex sequence and build a :class:`Trajectory`.

    Accepts an iterable of :class:`Point`, 2-tuples, or an ``(n, 2)``
    array.  Exact consecutive duplicate points are dropped.  Raises
    ``ValueError`` when fewer than two distinct consecutive points remain
    or any coordinate is non-finite.
    """
    pts = np.asarray([(p.x, p.y) if isinstance(p, Point) else (p[0], p[1]) for p in raw_points], dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] != 2:
        raise ValueError("expected a sequence of 2D points")
    if not np.isfinite(pts).all():
        raise ValueError("trajectory coordinates must be finite")
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = (pts[1:] != pts[:-1]).any(axis=1)
    pts = pts[keep]
    if len(pts) < 2:
        raise ValueError("trajectory needs at least 2 distinct consecutive points")
    seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    return Trajectory(pts, cum)


def point_at(P: Trajectory, s: float) -> Point:
    """Point lying arc length ``s`` along ``P`` (0 <= s <= length)."""
    if s < 0 or s > P.cum_lengths[-1]:
        raise ValueError(f"arc length {s} outside [0, {P.cum_lengths[-1]}]")
    i = int(np.searchsorted(P.cum_lengths, s, side="right")) - 1
    i = min(max(i, 0), len(P) - 2)
    seg_len = P.cum_lengths[i + 1] - P.cum_lengths[i]
    t = (s - P.cum_lengths[i]) / seg_len
    x = P.xy[i, 0] + t * (P.xy[i + 1, 0] - P.xy[i, 0])
    y = P.xy[i, 1] + t * (P.xy[i + 1, 1] - P.xy[i, 1])
    return Point(float(x), float(y))


def points_at(P: Trajectory, ss: np.ndarray) -> np.ndarray:
    """Vectorised :func:`point_at`: an ``(len(ss), 2)`` array."""
    ss = np.asarray(ss, dtype=float)
    x = np.interp(ss, P.cum_lengths, P.xy[:, 0])
    y = np.interp(ss, P.cum_lengths, P.xy[:, 1])
    return np.column_stack([x, y])


def sq_dist(p: Point, q: Point) -> float:
    """Squared Euclidean distance between two points."""
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def _point_seg_dist_sq(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    """Squared distance from (px,py) to segment (a,b); tolerates a == b."""
    dx = bx - ax
    dy = by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        ex = px - ax
        ey = py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / denom
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex = px - (ax + t * dx)
    ey = py - (ay + t * dy)
    return ex * ex + ey * ey


def point_segment_dist(p: Point, s: Segment) -> float:
    """Euclidean distance from ``p`` to the nearest point of ``s``."""
    return math.sqrt(_point_seg_dist_sq(p.x, p.y, s.start.x, s.start.y, s.end.x, s.end.y))


def seg_dist_sq_many(pts: np.ndarray, ax: float, ay: float, bx: float, by: float) -> np.ndarray:
    """Squared point-to-segment distances for an ``(n, 2)`` point array."""
    dx = bx - ax
    dy = by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        ex = pts[:, 0] - ax
        ey = pts[:, 1] - ay
        return ex * ex + ey * ey
    t = ((pts[:, 0] - ax) * dx + (pts[:, 1] - ay) * dy) / denom
    np.clip(t, 0.0, 1.0, out=t)
    ex = pts[:, 0] - (ax + t * dx)
    ey = pts[:, 1] - (ay + t * dy)
    return ex * ex + ey * ey


def project_transverse_mercator(lat: float, lon: float, ref_lon: float) -> Point:
    """Project geographic coordinates onto a plane, in metres.

    Spherical transverse Mercator centred on the meridian ``ref_lon``;
    suitable for data extents of tens of kilometres where the deviation
    from an ellipsoidal model is far below GPS noise.
    """
    if not (-90.0 < lat < 90.0):
        raise ValueError(f"latitude {lat} out of range (-90, 90)")
    if not (-540.0 <= lon <= 540.0):
        raise ValueError(f"longitude {lon} out of range")
    dlon = math.radians((lon - ref_lon + 180.0) % 360.0 - 180.0)
    phi = math.radians(lat)
    b = math.cos(phi) * math.sin(dlon)
    if abs(b) >= 1.0 - 1e-12:
        raise ValueError("point too close to the projection singularity")
    x = EARTH_RADIUS_M * math.atanh(b)
    y = EARTH_RADIUS_M * math.atan2(math.tan(phi), math.cos(dlon))
    return Point(x, y)
