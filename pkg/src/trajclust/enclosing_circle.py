"""Exact minimum enclosing circle via randomised incremental construction.

Expected linear time with a seeded shuffle, so results are reproducible.
"""

from __future__ import annotations

import math
import random

_EPS = 1e-12


def _in_circle(c: tuple[float, float, float], x: float, y: float) -> bool:
    cx, cy, r = c
    return math.hypot(x - cx, y - cy) <= r * (1.0 + _EPS) + _EPS


def _circle_two(ax, ay, bx, by) -> tuple[float, float, float]:
    cx = 0.5 * (ax + bx)
    cy = 0.5 * (ay + by)
    return cx, cy, math.hypot(ax - cx, ay - cy)


def _circumcircle(ax, ay, bx, by, cx, cy):
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return ux, uy, math.hypot(ax - ux, ay - uy)


def minimum_enclosing_circle(points, seed: int = 0) -> tuple[float, float, float]:
    """Centre and radius of the smallest circle containing all points.

    ``points`` is any iterable of (x, y).  Deterministic for a fixed
    ``seed``.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("need at least one point")
    shuffled = list(pts)
    random.Random(seed).shuffle(shuffled)

    c = (shuffled[0][0], shuffled[0][1], 0.0)
    for i in range(1, len(shuffled)):
        px, py = shuffled[i]
        if _in_circle(c, px, py):
            continue
        # p is on the boundary of the circle for the prefix
        c = (px, py, 0.0)
        for j in range(i):
            qx, qy = shuffled[j]
            if _in_circle(c, qx, qy):
                continue
            # p and q both on the boundary
            c = _circle_two(px, py, qx, qy)
            for k in range(j):
                rx, ry = shuffled[k]
                if _in_circle(c, rx, ry):
                    continue
                cc = _circumcircle(px, py, qx, qy, rx, ry)
                if cc is None:
                    # collinear support: fall back to the widest pair
                    cands = [
                        _circle_two(px, py, rx, ry),
                        _circle_two(qx, qy, rx, ry),
                        _circle_two(px, py, qx, qy),
                    ]
                    cc = max(cands, key=lambda t: t[2])
                c = cc
    return c
