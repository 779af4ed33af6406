"""Height-function algebra for one parameter-space cell.

The parameter space of a trajectory pair is the rectangle
``[0, L(P)] x [0, L(Q)]`` of arc-length pairs.  Each pair of segments
induces a rectangular cell on which the squared distance between the
moving points is a quadratic

    h(p, q) = (p - a)^2 + (q - b)^2 + 2*lam*(p - a)*(q - b) + c

in local cell coordinates.  Its level sets are concentric ellipses
centred at ``(a, b)`` whose monotone axis is the slope-1 line through
that centre; optimal monotone paths through the cell hug this line.
"""

from __future__ import annotations


from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import Segment, Trajectory

# |lam| this close to 1 is treated as exactly parallel; beyond it the
# linear system for (a, b) is numerically useless anyway.
_PARALLEL_EPS = 1e-12


class ParamPoint(NamedTuple):
    """A point in parameter space (arc length on P, arc length on Q)."""

    p: float
    q: float


@dataclass
class WarpingPath:
    """Monotone polyline through parameter space and its alignment cost."""

    points: list[ParamPoint]
    cost: float

    def is_monotone(self) -> bool:
        return all(
            a.p <= b.p + 1e-12 and a.q <= b.q + 1e-12
            for a, b in zip(self.points, self.points[1:])
        )


@dataclass(frozen=True)
class Cell:
    """One parameter-space cell with its height-function coefficients.

    ``width`` and ``height_extent`` are the lengths of the two segments;
    ``origin`` is the cell's offset in global parameter space.
    """

    a: float
    b: float
    lam: float
    c: float
    width: float
    height_extent: float
    origin: tuple[float, float] = (0.0, 0.0)

    def height(self, p: float, q: float) -> float:
        """Evaluate the height function at local coordinates (p, q)."""
        dp = p - self.a
        dq = q - self.b
        return dp * dp + dq * dq + 2.0 * self.lam * dp * dq + self.c


def cell_param_arrays(P: Trajectory, Q: Trajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Height-function coefficients for every cell of the pair's grid.

    Returns ``(a, b, lam, c)`` arrays of shape ``(len(P)-1, len(Q)-1)``
    in local cell coordinates.  Parallel segment pairs get the centre of
    their valley line closest to the cell midpoint, with ``c`` the
    squared distance between the supporting lines.
    """
    wp = P.segment_lengths  # (CI,)
    hq = Q.segment_lengths  # (RJ,)
    u = (P.xy[1:] - P.xy[:-1]) / wp[:, None]  # unit directions on P
    v = (Q.xy[1:] - Q.xy[:-1]) / hq[:, None]
    d = P.xy[:-1, None, :] - Q.xy[None, :-1, :]  # (CI, RJ, 2) segment-start offsets
    lam = -(u @ v.T)  # (CI, RJ)
    du = np.einsum("ijk,ik->ij", d, u)
    dv = np.einsum("ijk,jk->ij", d, v)
    dd = np.einsum("ijk,ijk->ij", d, d)

    par = np.abs(lam) >= 1.0 - _PARALLEL_EPS
    lam = np.where(par, np.sign(lam), lam)
    denom = np.where(par, 1.0, 1.0 - lam * lam)
    a = (-du - lam * dv) / denom
    b = (dv + lam * du) / denom

    # Parallel case: the height function has a valley line instead of a
    # point minimum.  Put (a, b) at the valley point nearest the cell
    # centre so the slope-1 axis stays well defined.
    cx = 0.5 * wp[:, None] + np.zeros_like(lam)
    cy = 0.5 * hq[None, :] + np.zeros_like(lam)
    k = -du
    shift_anti = 0.5 * (k - (cx - cy))  # lam == -1: valley a - b = k
    shift_par = 0.5 * (k - (cx + cy))  # lam == +1: valley a + b = k
    a_par = np.where(lam < 0, cx + shift_anti, cx + shift_par)
    b_par = np.where(lam < 0, cy - shift_anti, cy + shift_par)
    a = np.where(par, a_par, a)
    b = np.where(par, b_par, b)

    c = np.where(par, dd - du * du, dd - (a * a + b * b + 2.0 * lam * a * b))
    np.clip(c, 0.0, None, out=c)
    return a, b, lam, c


def cell_from_segments(segP: Segment, segQ: Segment, origin: tuple[float, float] = (0.0, 0.0)) -> Cell:
    """Build the :class:`Cell` for one pair of segments."""
    from .geometry import make_trajectory

    P = make_trajectory([segP.start, segP.end])
    Q = make_trajectory([segQ.start, segQ.end])
    a, b, lam, c = cell_param_arrays(P, Q)
    return Cell(
        a=float(a[0, 0]),
        b=float(b[0, 0]),
        lam=float(lam[0, 0]),
        c=float(c[0, 0]),
        width=segP.length,
        height_extent=segQ.length,
        origin=origin,
    )


def ell_m(cell: Cell) -> float:
    """Intercept of the slope-1 monotone axis through the cell's centre.

    The returned value ``t`` defines the line ``q = p + t`` in local cell
    coordinates; it passes through ``(a, b)``.
    """
    return cell.b - cell.a


def segment_cost(cell: Cell, u: ParamPoint, v: ParamPoint) -> float:
    """Alignment cost of the straight piece from ``u`` to ``v``.

    The cost is the height function integrated against taxicab speed.
    Simpson's rule is exact here because the height function restricted
    to a line is a quadratic polynomial.
    """
    length = (v.p - u.p) + (v.q - u.q)
    if length == 0.0:
        return 0.0
    hm = cell.height(0.5 * (u.p + v.p), 0.5 * (u.q + v.q))
    return length * (cell.height(u.p, u.q) + 4.0 * hm + cell.height(v.p, v.q)) / 6.0


def cell_optimal_path(cell: Cell, s: ParamPoint, t: ParamPoint) -> WarpingPath:
    """Optimal monotone path from ``s`` to ``t`` inside one cell.

    When the slope-1 axis crosses the rectangle spanned by ``s`` and
    ``t`` the path runs (s, c_s, c_t, t) along that axis between the
    crossing points; otherwise it bends once at the spanned rectangle's
    corner nearest to the axis.
    """
    if s.p > t.p or s.q > t.q:
        raise ValueError(f"path endpoints not componentwise ordered: {s} !<= {t}")
    t0 = cell.b - cell.a
    p_lo = max(s.p, s.q - t0)
    p_hi = min(t.p, t.q - t0)
    if p_lo <= p_hi:
        pts = [s, ParamPoint(p_lo, p_lo + t0), ParamPoint(p_hi, p_hi + t0), t]
    elif s.q - s.p - t0 > 0.0:  # rectangle above the axis: bend at bottom-right
        pts = [s, ParamPoint(t.p, s.q), t]
    else:  # below the axis: bend at top-left
        pts = [s, ParamPoint(s.p, t.q), t]
    dedup = [pts[0]]
    for p in pts[1:]:
        if p != dedup[-1]:
            dedup.append(p)
    cost = 0.0
    for a, b in zip(dedup, dedup[1:]):
        cost += segment_cost(cell, a, b)
    return WarpingPath(points=dedup, cost=cost)


def edge_cost(cell: Cell, sp: float, sq: float, tp: float, tq: float) -> float:
    """Cost of the optimal within-cell path without building the polyline.

    Mirrors :func:`cell_optimal_path`; kept separate so shortest-path
    searches can weigh edges cheaply.
    """
    a, b, lam, c = cell.a, cell.b, cell.lam, cell.c
    return _edge_cost_scalar(sp, sq, tp, tq, a, b, lam, c)


def _h_scalar(p: float, q: float, a: float, b: float, lam: float, c: float) -> float:
    dp = p - a
    dq = q - b
    return dp * dp + dq * dq + 2.0 * lam * dp * dq + c


def _seg_cost_scalar(up: float, uq: float, vp: float, vq: float,
                     a: float, b: float, lam: float, c: float) -> float:
    length = (vp - up) + (vq - uq)
    if length == 0.0:
        return 0.0
    hm = _h_scalar(0.5 * (up + vp), 0.5 * (uq + vq), a, b, lam, c)
    return length * (_h_scalar(up, uq, a, b, lam, c) + 4.0 * hm + _h_scalar(vp, vq, a, b, lam, c)) / 6.0


def _edge_cost_scalar(sp: float, sq: float, tp: float, tq: float,
                      a: float, b: float, lam: float, c: float) -> float:
    t0 = b - a
    p_lo = max(sp, sq - t0)
    p_hi = min(tp, tq - t0)
    if p_lo <= p_hi:
        cq_lo = p_lo + t0
        cq_hi = p_hi + t0
        return (
            _seg_cost_scalar(sp, sq, p_lo, cq_lo, a, b, lam, c)
            + _seg_cost_scalar(p_lo, cq_lo, p_hi, cq_hi, a, b, lam, c)
            + _seg_cost_scalar(p_hi, cq_hi, tp, tq, a, b, lam, c)
        )
    if sq - sp - t0 > 0.0:
        cp, cq = tp, sq
    else:
        cp, cq = sp, tq
    return _seg_cost_scalar(sp, sq, cp, cq, a, b, lam, c) + _seg_cost_scalar(cp, cq, tp, tq, a, b, lam, c)
