"""Additive approximation of the continuous dynamic time warping distance.

The parameter-space grid of a trajectory pair is discretised by sampling
each cell boundary edge at ``2**level`` uniform intervals (corners
included; sample sets are nested across levels).  Within a cell the
optimal monotone path between two boundary points is known in closed
form, so the graph over boundary samples with those path costs as edge
weights yields an upper bound on the true distance that decreases as the
level grows.

Two interchangeable search strategies are provided: a compiled relaxation
in topological cell order (default, fast) and a lazy bidirectional
Dijkstra search; both explore the same graph and return equal costs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import sweep_kernel
from .cells import Cell, ParamPoint, WarpingPath, _edge_cost_scalar, cell_optimal_path, cell_param_arrays, segment_cost
from .geometry import Trajectory, points_at

DEFAULT_LEVEL = 5


@dataclass(frozen=True)
class Resolution:
    """Boundary sampling level: ``2**level`` intervals per cell edge."""

    level: int = DEFAULT_LEVEL

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("resolution level must be >= 0")
        if self.level > 12:
            raise ValueError("resolution level > 12 would make the graph enormous")

    @property
    def intervals(self) -> int:
        return 2 ** self.level

    @classmethod
    def for_spacing(cls, delta: float, *trajectories: Trajectory) -> "Resolution":
        """Smallest level whose sample spacing is <= delta on every edge."""
        if delta <= 0:
            raise ValueError("spacing must be positive")
        max_len = max(float(T.segment_lengths.max()) for T in trajectories)
        level = 0
        while max_len / (2 ** level) > delta and level < 12:
            level += 1
        return cls(level)


def _as_level(resolution) -> int:
    if resolution is None:
        return DEFAULT_LEVEL
    if isinstance(resolution, Resolution):
        return resolution.level
    return Resolution(int(resolution)).level


def _decode_vertex(vid: int, px: np.ndarray, qy: np.ndarray, S: int) -> tuple[float, float]:
    """Global (p, q) coordinates of a graph vertex id."""
    CI = len(px) - 1
    RJ = len(qy) - 1
    ncorner = (CI + 1) * (RJ + 1)
    nv = (CI + 1) * RJ * (S - 1)
    if vid < ncorner:
        i, j = divmod(vid, RJ + 1)
        return float(px[i]), float(qy[j])
    vid -= ncorner
    if vid < nv:
        rem, k1 = divmod(vid, S - 1)
        i, j = divmod(rem, RJ)
        return float(px[i]), float(qy[j] + (k1 + 1) * (qy[j + 1] - qy[j]) / S)
    vid -= nv
    rem, k1 = divmod(vid, S - 1)
    j, i = divmod(rem, CI)
    return float(px[i] + (k1 + 1) * (px[i + 1] - px[i]) / S), float(qy[j])


class _Grid:
    """Cell parameters and vertex bookkeeping for one trajectory pair."""

    def __init__(self, P: Trajectory, Q: Trajectory, level: int):
        self.px = P.cum_lengths
        self.qy = Q.cum_lengths
        self.W = P.segment_lengths
        self.H = Q.segment_lengths
        self.CI = len(self.W)
        self.RJ = len(self.H)
        self.S = 2 ** level
        self.a, self.b, self.lam, self.c = cell_param_arrays(P, Q)

    def cell(self, i: int, j: int) -> Cell:
        return Cell(
            a=float(self.a[i, j]),
            b=float(self.b[i, j]),
            lam=float(self.lam[i, j]),
            c=float(self.c[i, j]),
            width=float(self.W[i]),
            height_extent=float(self.H[j]),
            origin=(float(self.px[i]), float(self.qy[j])),
        )

    def cell_for_piece(self, u: tuple[float, float], v: tuple[float, float]) -> tuple[int, int]:
        """Cell containing the straight piece u -> v (midpoint rule)."""
        pm = 0.5 * (u[0] + v[0])
        qm = 0.5 * (u[1] + v[1])
        i = int(np.searchsorted(self.px, pm, side="right")) - 1
        j = int(np.searchsorted(self.qy, qm, side="right")) - 1
        return min(max(i, 0), self.CI - 1), min(max(j, 0), self.RJ - 1)


def _path_from_chain(grid: _Grid, coords: list[tuple[float, float]], cost: float) -> WarpingPath:
    """Concatenate per-edge optimal within-cell paths along a vertex chain."""
    pts: list[ParamPoint] = [ParamPoint(*coords[0])]
    for u, v in zip(coords, coords[1:]):
        i, j = grid.cell_for_piece(u, v)
        cell = grid.cell(i, j)
        op, oq = grid.px[i], grid.qy[j]
        local = cell_optimal_path(
            cell,
            ParamPoint(u[0] - op, u[1] - oq),
            ParamPoint(v[0] - op, v[1] - oq),
        )
        for lp in local.points:
            gp = ParamPoint(float(lp.p + op), float(lp.q + oq))
            if gp != pts[-1]:
                pts.append(gp)
    return WarpingPath(points=pts, cost=cost)


def recompute_path_cost(P: Trajectory, Q: Trajectory, path: WarpingPath) -> float:
    """Integrate the height function along a warping path's pieces."""
    grid = _Grid(P, Q, 0)
    total = 0.0
    for u, v in zip(path.points, path.points[1:]):
        i, j = grid.cell_for_piece(u, v)
        cell = grid.cell(i, j)
        op, oq = grid.px[i], grid.qy[j]
        total += segment_cost(cell, ParamPoint(u.p - op, u.q - oq), ParamPoint(v.p - op, v.q - oq))
    return total


def _cdtw_sweep(P: Trajectory, Q: Trajectory, level: int) -> WarpingPath:
    grid = _Grid(P, Q, level)
    dist, parent = sweep_kernel(grid.a, grid.b, grid.lam, grid.c, grid.W, grid.H, grid.S)
    goal = (grid.CI + 1) * (grid.RJ + 1) - 1
    cost = float(dist[goal])
    chain_ids = [goal]
    while parent[chain_ids[-1]] >= 0:
        chain_ids.append(int(parent[chain_ids[-1]]))
    chain_ids.reverse()
    coords = [_decode_vertex(v, grid.px, grid.qy, grid.S) for v in chain_ids]
    return _path_from_chain(grid, coords, cost)


# ---------------------------------------------------------------------------
# Lazy bidirectional Dijkstra over the same graph.
#
# Vertices are tuples: ('c', i, j) for grid corners, ('v', i, j, k) for the
# k-th interior sample on vertical line i within row j, and ('h', j, i, k)
# on horizontal line j within column i.  Neighbours are produced on demand.
# ---------------------------------------------------------------------------


def _vertex_coords(grid: _Grid, v: tuple) -> tuple[float, float]:
    if v[0] == "c":
        return float(grid.px[v[1]]), float(grid.qy[v[2]])
    if v[0] == "v":
        _, i, j, k = v
        return float(grid.px[i]), float(grid.qy[j] + k * (grid.qy[j + 1] - grid.qy[j]) / grid.S)
    _, j, i, k = v
    return float(grid.px[i] + k * (grid.px[i + 1] - grid.px[i]) / grid.S), float(grid.qy[j])


def _neighbors(grid: _Grid, v: tuple):
    """Yield (vertex, weight) pairs of forward edges out of ``v``."""
    S, CI, RJ = grid.S, grid.CI, grid.RJ

    def cellp(i, j):
        return float(grid.a[i, j]), float(grid.b[i, j]), float(grid.lam[i, j]), float(grid.c[i, j])

    def right_edge_vertex(i, j, k):
        if k == 0:
            return ("c", i + 1, j)
        if k == S:
            return ("c", i + 1, j + 1)
        return ("v", i + 1, j, k)

    def top_edge_vertex(i, j, k):
        if k == 0:
            return ("c", i, j + 1)
        return ("h", j + 1, i, k)

    kind = v[0]
    if kind == "c":
        _, i, j = v
        if i == CI and j == RJ:
            return
        if i == CI:  # climb the outer right boundary
            a, b, lam, c = cellp(CI - 1, j)
            w = grid.W[CI - 1]
            nxt = ("v", CI, j, 1) if S > 1 else ("c", CI, j + 1)
            q0 = 0.0
            q1 = grid.H[j] if S == 1 else 1 * grid.H[j] / S
            yield nxt, _edge_cost_scalar(w, q0, w, q1, a, b, lam, c)
            return
        if j == RJ:  # walk the outer top boundary
            a, b, lam, c = cellp(i, RJ - 1)
            h = grid.H[RJ - 1]
            nxt = ("h", RJ, i, 1) if S > 1 else ("c", i + 1, RJ)
            p1 = grid.W[i] if S == 1 else 1 * grid.W[i] / S
            yield nxt, _edge_cost_scalar(0.0, h, p1, h, a, b, lam, c)
            return
        a, b, lam, c = cellp(i, j)
        wi, hj = grid.W[i], grid.H[j]
        for k in range(S + 1):
            fq = hj if k == S else k * hj / S
            yield right_edge_vertex(i, j, k), _edge_cost_scalar(0.0, 0.0, wi, fq, a, b, lam, c)
        for k in range(S):
            yield top_edge_vertex(i, j, k), _edge_cost_scalar(0.0, 0.0, k * wi / S, hj, a, b, lam, c)
        return

    if kind == "v":
        _, i, j, k = v
        if i == CI:
            a, b, lam, c = cellp(CI - 1, j)
            w = grid.W[CI - 1]
            hj = grid.H[j]
            q0 = k * hj / S
            if k + 1 < S:
                nxt = ("v", CI, j, k + 1)
                q1 = (k + 1) * hj / S
            else:
                nxt = ("c", CI, j + 1)
                q1 = hj
            yield nxt, _edge_cost_scalar(w, q0, w, q1, a, b, lam, c)
            return
        a, b, lam, c = cellp(i, j)
        wi, hj = grid.W[i], grid.H[j]
        nq = k * hj / S
        for k2 in range(k, S + 1):
            fq = hj if k2 == S else k2 * hj / S
            yield right_edge_vertex(i, j, k2), _edge_cost_scalar(0.0, nq, wi, fq, a, b, lam, c)
        for k2 in range(S):
            yield top_edge_vertex(i, j, k2), _edge_cost_scalar(0.0, nq, k2 * wi / S, hj, a, b, lam, c)
        return

    _, j, i, k = v
    if j == RJ:
        a, b, lam, c = cellp(i, RJ - 1)
        h = grid.H[RJ - 1]
        wi = grid.W[i]
        p0 = k * wi / S
        if k + 1 < S:
            nxt = ("h", RJ, i, k + 1)
            p1 = (k + 1) * wi / S
        else:
            nxt = ("c", i + 1, RJ)
            p1 = wi
        yield nxt, _edge_cost_scalar(p0, h, p1, h, a, b, lam, c)
        return
    a, b, lam, c = cellp(i, j)
    wi, hj = grid.W[i], grid.H[j]
    np_ = k * wi / S
    for k2 in range(S + 1):
        fq = hj if k2 == S else k2 * hj / S
        yield right_edge_vertex(i, j, k2), _edge_cost_scalar(np_, 0.0, wi, fq, a, b, lam, c)
    for k2 in range(k, S):
        yield top_edge_vertex(i, j, k2), _edge_cost_scalar(np_, 0.0, k2 * wi / S, hj, a, b, lam, c)


def _predecessors(grid: _Grid, v: tuple):
    """Yield (vertex, weight) pairs of forward edges into ``v``."""
    S, CI, RJ = grid.S, grid.CI, grid.RJ

    def cellp(i, j):
        return float(grid.a[i, j]), float(grid.b[i, j]), float(grid.lam[i, j]), float(grid.c[i, j])

    def near_vertices(i, j, max_left_k=None, max_bottom_k=None):
        """Near-boundary vertices of cell (i, j) with optional sample caps."""
        wi, hj = grid.W[i], grid.H[j]
        yield ("c", i, j), 0.0, 0.0
        lk = S - 1 if max_left_k is None else max_left_k
        for k in range(1, lk + 1):
            yield ("v", i, j, k), 0.0, k * hj / S
        bk = S - 1 if max_bottom_k is None else max_bottom_k
        for k in range(1, bk + 1):
            yield ("h", j, i, k), k * wi / S, 0.0

    kind = v[0]
    if kind == "c":
        _, i, j = v
        if i >= 1 and j >= 1:  # top-right corner of cell (i-1, j-1)
            a, b, lam, c = cellp(i - 1, j - 1)
            wi, hj = grid.W[i - 1], grid.H[j - 1]
            for u, up, uq in near_vertices(i - 1, j - 1):
                yield u, _edge_cost_scalar(up, uq, wi, hj, a, b, lam, c)
        if i >= 1 and j <= RJ - 1:  # bottom of the right boundary of cell (i-1, j)
            a, b, lam, c = cellp(i - 1, j)
            wi = grid.W[i - 1]
            for u, up, uq in near_vertices(i - 1, j, max_left_k=0):
                yield u, _edge_cost_scalar(up, uq, wi, 0.0, a, b, lam, c)
        if j >= 1 and i <= CI - 1:  # left end of the top boundary of cell (i, j-1)
            a, b, lam, c = cellp(i, j - 1)
            hj = grid.H[j - 1]
            for u, up, uq in near_vertices(i, j - 1, max_bottom_k=0):
                yield u, _edge_cost_scalar(up, uq, 0.0, hj, a, b, lam, c)
        if i == CI and j >= 1:  # chain edge from below on the outer right boundary
            a, b, lam, c = cellp(CI - 1, j - 1)
            w = grid.W[CI - 1]
            hj = grid.H[j - 1]
            if S > 1:
                u = ("v", CI, j - 1, S - 1)
                q0 = (S - 1) * hj / S
            else:
                u = ("c", CI, j - 1)
                q0 = 0.0
            yield u, _edge_cost_scalar(w, q0, w, hj, a, b, lam, c)
        if j == RJ and i >= 1:  # chain edge from the left on the outer top boundary
            a, b, lam, c = cellp(i - 1, RJ - 1)
            h = grid.H[RJ - 1]
            wi = grid.W[i - 1]
            if S > 1:
                u = ("h", RJ, i - 1, S - 1)
                p0 = (S - 1) * wi / S
            else:
                u = ("c", i - 1, RJ)
                p0 = 0.0
            yield u, _edge_cost_scalar(p0, h, wi, h, a, b, lam, c)
        return

    if kind == "v":
        _, i, j, k = v
        if i >= 1:  # interior sample on the right boundary of cell (i-1, j)
            a, b, lam, c = cellp(i - 1, j)
            wi, hj = grid.W[i - 1], grid.H[j]
            vq = k * hj / S
            for u, up, uq in near_vertices(i - 1, j, max_left_k=k):
                yield u, _edge_cost_scalar(up, uq, wi, vq, a, b, lam, c)
        if i == CI:  # chain edge from below
            a, b, lam, c = cellp(CI - 1, j)
            w = grid.W[CI - 1]
            hj = grid.H[j]
            if k >= 2:
                u = ("v", CI, j, k - 1)
                q0 = (k - 1) * hj / S
            else:
                u = ("c", CI, j)
                q0 = 0.0
            yield u, _edge_cost_scalar(w, q0, w, k * hj / S, a, b, lam, c)
        return

    _, j, i, k = v
    if j >= 1:  # interior sample on the top boundary of cell (i, j-1)
        a, b, lam, c = cellp(i, j - 1)
        wi, hj = grid.W[i], grid.H[j - 1]
        vp = k * wi / S
        for u, up, uq in near_vertices(i, j - 1, max_bottom_k=k):
            yield u, _edge_cost_scalar(up, uq, vp, hj, a, b, lam, c)
    if j == RJ:  # chain edge from the left
        a, b, lam, c = cellp(i, RJ - 1)
        h = grid.H[RJ - 1]
        wi = grid.W[i]
        if k >= 2:
            u = ("h", RJ, i, k - 1)
            p0 = (k - 1) * wi / S
        else:
            u = ("c", i, RJ)
            p0 = 0.0
        yield u, _edge_cost_scalar(p0, h, k * wi / S, h, a, b, lam, c)


class _Search:
    """One direction of the bidirectional search."""

    def __init__(self, grid: _Grid, start: tuple, edges):
        self.grid = grid
        self.edges = edges
        self.dist: dict = {start: 0.0}
        self.parent: dict = {start: None}
        self.settled: set = set()
        p, q = _vertex_coords(grid, start)
        self.heap = [(0.0, p, q, start)]

    def top(self) -> float:
        while self.heap and self.heap[0][3] in self.settled:
            heapq.heappop(self.heap)
        return self.heap[0][0] if self.heap else math.inf

    def pop(self):
        while self.heap:
            d, _, _, v = heapq.heappop(self.heap)
            if v not in self.settled:
                self.settled.add(v)
                return d, v
        return None

    def relax_from(self, v: tuple, d: float):
        for u, w in self.edges(self.grid, v):
            nd = d + w
            if nd < self.dist.get(u, math.inf):
                self.dist[u] = nd
                self.parent[u] = v
                p, q = _vertex_coords(self.grid, u)
                heapq.heappush(self.heap, (nd, p, q, u))


def _cdtw_bidijkstra(P: Trajectory, Q: Trajectory, level: int) -> WarpingPath:
    grid = _Grid(P, Q, level)
    start = ("c", 0, 0)
    goal = ("c", grid.CI, grid.RJ)

    fwd = _Search(grid, start, _neighbors)
    bwd = _Search(grid, goal, _predecessors)

    mu = math.inf
    meet = None
    while True:
        tf, tb = fwd.top(), bwd.top()
        if tf + tb >= mu or (tf == math.inf and tb == math.inf):
            break
        search, other = (fwd, bwd) if tf <= tb else (bwd, fwd)
        popped = search.pop()
        if popped is None:
            continue
        d, v = popped
        search.relax_from(v, d)
        if v in other.dist and d + other.dist[v] < mu:
            mu = d + other.dist[v]
            meet = v

    if meet is None:  # pragma: no cover - positive lengths keep start != goal
        raise RuntimeError("bidirectional search failed to meet")

    chain = [meet]
    while fwd.parent.get(chain[-1]) is not None:
        chain.append(fwd.parent[chain[-1]])
    chain.reverse()
    back = meet
    while bwd.parent.get(back) is not None:
        back = bwd.parent[back]
        chain.append(back)
    assert chain[0] == start and chain[-1] == goal
    coords = [_vertex_coords(grid, v) for v in chain]
    return _path_from_chain(grid, coords, float(mu))


def cdtw(P: Trajectory, Q: Trajectory, resolution=None, algorithm: str = "sweep") -> WarpingPath:
    """Approximate warping distance and an optimal warping path.

    ``resolution`` may be a :class:`Resolution`, a bare level, or None
    for the default level.  ``algorithm`` selects between the compiled
    topological relaxation ("sweep") and the lazy bidirectional Dijkstra
    search ("bidijkstra"); both give the same cost.
    """
    level = _as_level(resolution)
    if algorithm == "sweep":
        return _cdtw_sweep(P, Q, level)
    if algorithm == "bidijkstra":
        return _cdtw_bidijkstra(P, Q, level)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def cdtw_cost(P: Trajectory, Q: Trajectory, resolution=None) -> float:
    """Warping cost only (same value as ``cdtw(...).cost``)."""
    return cdtw(P, Q, resolution).cost


def cdtw_grid_oracle(P: Trajectory, Q: Trajectory, N: int) -> float:
    """Independent check value: dense-grid dynamic program.

    Minimum cost over axis-monotone staircase paths on a uniform
    (N+1) x (N+1) grid, each move costing step length times the mean of
    the height function at its endpoints.  Converges to the true
    distance from above-or-below as N grows; shares no code with the
    cell-based approximation.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    ps = np.linspace(0.0, P.length, N + 1)
    qs = np.linspace(0.0, Q.length, N + 1)
    A = points_at(P, ps)
    B = points_at(Q, qs)
    hx = A[:, None, 0] - B[None, :, 0]
    hy = A[:, None, 1] - B[None, :, 1]
    h = hx * hx + hy * hy  # (N+1, N+1): index [i over P, j over Q]
    step_p = P.length / N
    step_q = Q.length / N

    # Row sweep with a prefix-minimum trick: within a row the horizontal
    # moves accumulate additively, so the DP reduces to a running min.
    up_cost = step_q * 0.5 * (h[0, 1:] + h[0, :-1])
    row = np.concatenate(([0.0], np.cumsum(up_cost)))
    for i in range(1, N + 1):
        t = row + step_p * 0.5 * (h[i - 1] + h[i])
        edge = np.concatenate(([0.0], step_q * 0.5 * (h[i, 1:] + h[i, :-1])))
        H = np.cumsum(edge)
        row = np.minimum.accumulate(t - H) + H
    return float(row[-1])
