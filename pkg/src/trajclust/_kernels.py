"""Compiled inner loops: alignment-graph relaxation and free-space reachability.

These mirror the pure-Python formulas in :mod:`trajclust.cells`; keep the
two in sync.  Everything here works on flat float arrays so numba can
compile it.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _h(p, q, a, b, lam, c):
    dp = p - a
    dq = q - b
    return dp * dp + dq * dq + 2.0 * lam * dp * dq + c


@njit(cache=True, inline="always")
def _seg_cost(up, uq, vp, vq, a, b, lam, c):
    length = (vp - up) + (vq - uq)
    if length == 0.0:
        return 0.0
    hm = _h(0.5 * (up + vp), 0.5 * (uq + vq), a, b, lam, c)
    return length * (_h(up, uq, a, b, lam, c) + 4.0 * hm + _h(vp, vq, a, b, lam, c)) / 6.0


@njit(cache=True, inline="always")
def _edge_cost(sp, sq, tp, tq, a, b, lam, c):
    t0 = b - a
    p_lo = max(sp, sq - t0)
    p_hi = min(tp, tq - t0)
    if p_lo <= p_hi:
        cq_lo = p_lo + t0
        cq_hi = p_hi + t0
        return (
            _seg_cost(sp, sq, p_lo, cq_lo, a, b, lam, c)
            + _seg_cost(p_lo, cq_lo, p_hi, cq_hi, a, b, lam, c)
            + _seg_cost(p_hi, cq_hi, tp, tq, a, b, lam, c)
        )
    if sq - sp - t0 > 0.0:
        cp, cq = tp, sq
    else:
        cp, cq = sp, tq
    return _seg_cost(sp, sq, cp, cq, a, b, lam, c) + _seg_cost(cp, cq, tp, tq, a, b, lam, c)


@njit(cache=True)
def sweep_kernel(ca, cb, clam, cc, W, H, S):
    """Single-source shortest path over the boundary-sample graph.

    Cells are relaxed in topological (row-major) order; within a cell
    every near-boundary vertex (bottom-left corner, left and bottom
    interior samples) is connected to every dominating far-boundary
    vertex (right and top, corners included) with the optimal within-cell
    path cost.  The outer right and top boundary lines are chained through
    consecutive samples.  Returns distances and parent vertex ids.
    """
    CI = W.shape[0]
    RJ = H.shape[0]
    ncorner = (CI + 1) * (RJ + 1)
    nv = (CI + 1) * RJ * (S - 1)
    nh = (RJ + 1) * CI * (S - 1)
    dist = np.full(ncorner + nv + nh, np.inf)
    parent = np.full(ncorner + nv + nh, -1, dtype=np.int64)
    dist[0] = 0.0

    near_n = 2 * S - 1
    far_n = 2 * S + 1
    near_p = np.empty(near_n)
    near_q = np.empty(near_n)
    near_id = np.empty(near_n, dtype=np.int64)
    far_p = np.empty(far_n)
    far_q = np.empty(far_n)
    far_id = np.empty(far_n, dtype=np.int64)

    for j in range(RJ):
        hj = H[j]
        for i in range(CI):
            wi = W[i]
            a = ca[i, j]
            b = cb[i, j]
            lam = clam[i, j]
            c = cc[i, j]
            near_p[0] = 0.0
            near_q[0] = 0.0
            near_id[0] = i * (RJ + 1) + j
            for k in range(1, S):
                near_p[k] = 0.0
                near_q[k] = k * hj / S
                near_id[k] = ncorner + (i * RJ + j) * (S - 1) + (k - 1)
                near_p[S - 1 + k] = k * wi / S
                near_q[S - 1 + k] = 0.0
                near_id[S - 1 + k] = ncorner + nv + (j * CI + i) * (S - 1) + (k - 1)
            for k in range(S + 1):
                far_p[k] = wi
                far_q[k] = hj if k == S else k * hj / S
                if k == 0:
                    far_id[k] = (i + 1) * (RJ + 1) + j
                elif k == S:
                    far_id[k] = (i + 1) * (RJ + 1) + (j + 1)
                else:
                    far_id[k] = ncorner + ((i + 1) * RJ + j) * (S - 1) + (k - 1)
            for k in range(S):
                far_p[S + 1 + k] = k * wi / S
                far_q[S + 1 + k] = hj
                if k == 0:
                    far_id[S + 1 + k] = i * (RJ + 1) + (j + 1)
                else:
                    far_id[S + 1 + k] = ncorner + nv + ((j + 1) * CI + i) * (S - 1) + (k - 1)
            for na in range(near_n):
                dn = dist[near_id[na]]
                if dn == np.inf:
                    continue
                np_ = near_p[na]
                nq_ = near_q[na]
                for nb in range(far_n):
                    fp = far_p[nb]
                    fq = far_q[nb]
                    if fp >= np_ and fq >= nq_:
                        nd = dn + _edge_cost(np_, nq_, fp, fq, a, b, lam, c)
                        fid = far_id[nb]
                        if nd < dist[fid]:
                            dist[fid] = nd
                            parent[fid] = near_id[na]
        # chain up the outer right boundary within this row
        a = ca[CI - 1, j]
        b = cb[CI - 1, j]
        lam = clam[CI - 1, j]
        c = cc[CI - 1, j]
        wlast = W[CI - 1]
        prev_id = CI * (RJ + 1) + j
        prev_q = 0.0
        for k in range(1, S + 1):
            q = hj if k == S else k * hj / S
            if k == S:
                cur_id = CI * (RJ + 1) + (j + 1)
            else:
                cur_id = ncorner + (CI * RJ + j) * (S - 1) + (k - 1)
            if dist[prev_id] < np.inf:
                nd = dist[prev_id] + _seg_cost(wlast, prev_q, wlast, q, a, b, lam, c)
                if nd < dist[cur_id]:
                    dist[cur_id] = nd
                    parent[cur_id] = prev_id
            prev_id = cur_id
            prev_q = q
    # chain right along the outer top boundary
    for i in range(CI):
        a = ca[i, RJ - 1]
        b = cb[i, RJ - 1]
        lam = clam[i, RJ - 1]
        c = cc[i, RJ - 1]
        hlast = H[RJ - 1]
        wi = W[i]
        prev_id = i * (RJ + 1) + RJ
        prev_p = 0.0
        for k in range(1, S + 1):
            p = wi if k == S else k * wi / S
            if k == S:
                cur_id = (i + 1) * (RJ + 1) + RJ
            else:
                cur_id = ncorner + nv + (RJ * CI + i) * (S - 1) + (k - 1)
            if dist[prev_id] < np.inf:
                nd = dist[prev_id] + _seg_cost(prev_p, hlast, p, hlast, a, b, lam, c)
                if nd < dist[cur_id]:
                    dist[cur_id] = nd
                    parent[cur_id] = prev_id
            prev_id = cur_id
            prev_p = p
    return dist, parent


@njit(cache=True, inline="always")
def _free_interval(ax, ay, bx, by, vx, vy, eps2):
    """Fraction interval of segment (a, b) within sqrt(eps2) of point v."""
    dx = bx - ax
    dy = by - ay
    ex = ax - vx
    ey = ay - vy
    qa = dx * dx + dy * dy
    qb = ex * dx + ey * dy
    qc = ex * ex + ey * ey - eps2
    if qa == 0.0:
        if qc <= 0.0:
            return 0.0, 1.0
        return np.inf, -np.inf
    disc = qb * qb - qa * qc
    if disc < 0.0:
        return np.inf, -np.inf
    sq = math.sqrt(disc)
    lo = (-qb - sq) / qa
    hi = (-qb + sq) / qa
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    if lo > hi:
        return np.inf, -np.inf
    return lo, hi


@njit(cache=True)
def frechet_reach(Pxy, Qxy, eps):
    """Free-space reachability at threshold ``eps``.

    Returns the reachable-interval arrays for vertical edges (P vertex
    against Q segment) and horizontal edges, plus whether the far corner
    is reachable.  Intervals are in segment-fraction units; an empty
    interval is (inf, -inf).
    """
    n = Pxy.shape[0]
    m = Qxy.shape[0]
    eps2 = eps * eps
    vf_lo = np.empty((n, m - 1))
    vf_hi = np.empty((n, m - 1))
    for i in range(n):
        for j in range(m - 1):
            lo, hi = _free_interval(
                Qxy[j, 0], Qxy[j, 1], Qxy[j + 1, 0], Qxy[j + 1, 1], Pxy[i, 0], Pxy[i, 1], eps2
            )
            vf_lo[i, j] = lo
            vf_hi[i, j] = hi
    hf_lo = np.empty((n - 1, m))
    hf_hi = np.empty((n - 1, m))
    for i in range(n - 1):
        for j in range(m):
            lo, hi = _free_interval(
                Pxy[i, 0], Pxy[i, 1], Pxy[i + 1, 0], Pxy[i + 1, 1], Qxy[j, 0], Qxy[j, 1], eps2
            )
            hf_lo[i, j] = lo
            hf_hi[i, j] = hi

    rv_lo = np.full((n, m - 1), np.inf)
    rv_hi = np.full((n, m - 1), -np.inf)
    rh_lo = np.full((n - 1, m), np.inf)
    rh_hi = np.full((n - 1, m), -np.inf)

    d0x = Pxy[0, 0] - Qxy[0, 0]
    d0y = Pxy[0, 1] - Qxy[0, 1]
    if d0x * d0x + d0y * d0y > eps2:
        return rv_lo, rv_hi, rh_lo, rh_hi, False

    climb = True
    for j in range(m - 1):
        if climb and vf_lo[0, j] <= 0.0:
            rv_lo[0, j] = 0.0
            rv_hi[0, j] = vf_hi[0, j]
            climb = vf_hi[0, j] >= 1.0
        else:
            climb = False
    walk = True
    for i in range(n - 1):
        if walk and hf_lo[i, 0] <= 0.0:
            rh_lo[i, 0] = 0.0
            rh_hi[i, 0] = hf_hi[i, 0]
            walk = hf_hi[i, 0] >= 1.0
        else:
            walk = False

    for i in range(n - 1):
        for j in range(m - 1):
            left_ok = rv_lo[i, j] <= rv_hi[i, j]
            bot_ok = rh_lo[i, j] <= rh_hi[i, j]
            if not (left_ok or bot_ok):
                continue
            flo = vf_lo[i + 1, j]
            fhi = vf_hi[i + 1, j]
            if flo <= fhi:
                lo = flo if bot_ok else max(flo, rv_lo[i, j])
                if lo <= fhi:
                    rv_lo[i + 1, j] = lo
                    rv_hi[i + 1, j] = fhi
            flo = hf_lo[i, j + 1]
            fhi = hf_hi[i, j + 1]
            if flo <= fhi:
                lo = flo if left_ok else max(flo, rh_lo[i, j])
                if lo <= fhi:
                    rh_lo[i, j + 1] = lo
                    rh_hi[i, j + 1] = fhi

    ok = (rv_lo[n - 1, m - 2] <= rv_hi[n - 1, m - 2] and rv_hi[n - 1, m - 2] >= 1.0) or (
        rh_lo[n - 2, m - 1] <= rh_hi[n - 2, m - 1] and rh_hi[n - 2, m - 1] >= 1.0
    )
    return rv_lo, rv_hi, rh_lo, rh_hi, ok
