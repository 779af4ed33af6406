"""Iterative cluster-center update rules and the acceptance-driven loop.

Four update rules are provided.  The averaging rules move each center
vertex toward the cluster points aligned to it: under the discrete
alignment (mean of matched vertices), under the continuous warping
(mean of uniform samples on the matched subcurves), or to the centre of
the minimum enclosing circle of points matched by the bottleneck
alignment.  The wedge rule instead repositions each vertex to fit its
two incident segments against the cluster vertices aligned to them,
weighting every vertex by the length of its incident edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cdtw import cdtw
from .clustering import Clustering
from .distances import DistanceKind, dtw, frechet_matching, trajectory_distance
from .enclosing_circle import minimum_enclosing_circle
from .geometry import Trajectory, make_trajectory, points_at, seg_dist_sq_many

_PATTERN_ROUNDS = 12
_PATTERN_OFFSETS = (-1.0, -0.5, 0.0, 0.5, 1.0)


def _aligned_interval(points: list, pos: float, axis: int) -> tuple[float, float]:
    """Range of the other coordinate where a monotone polyline crosses ``pos``.

    ``points`` is a monotone sequence of (p, q) pairs; ``axis`` selects
    which coordinate ``pos`` refers to.  Returns the closed interval of
    the complementary coordinate over the crossing (a single value for a
    transversal crossing, wider when the polyline runs along ``pos``).
    """
    other = 1 - axis
    lo = math.inf
    hi = -math.inf
    for a, b in zip(points, points[1:]):
        a0, a1 = a[axis], a[other]
        b0, b1 = b[axis], b[other]
        if a0 <= pos <= b0:
            if b0 > a0:
                t = (pos - a0) / (b0 - a0)
                val = a1 + t * (b1 - a1)
                lo = min(lo, val)
                hi = max(hi, val)
            else:
                lo = min(lo, a1, b1)
                hi = max(hi, a1, b1)
    if not math.isfinite(lo):
        # endpoints are inclusive; pos outside only through rounding
        pt = points[0] if pos <= points[0][axis] else points[-1]
        return pt[other], pt[other]
    return lo, hi


def _uniform_samples(lo: float, hi: float, count: int) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    return lo + (np.arange(count) + 0.5) * (hi - lo) / count


def _matched_points(T: Trajectory, path_points: list, center_positions: np.ndarray) -> list[np.ndarray]:
    """Uniform samples on the subcurve of ``T`` aligned to each center vertex.

    The sample count scales with the matched fraction of the curve, at
    least one sample per vertex.
    """
    budget = len(T)
    out = []
    for s in center_positions:
        q_lo, q_hi = _aligned_interval(path_points, float(s), axis=0)
        q_lo = min(max(q_lo, 0.0), T.length)
        q_hi = min(max(q_hi, 0.0), T.length)
        count = max(1, math.ceil(budget * (q_hi - q_lo) / T.length))
        out.append(points_at(T, _uniform_samples(q_lo, q_hi, count)))
    return out


def dba_update(center: Trajectory, cluster: list[Trajectory]) -> Trajectory:
    """Move each center vertex to the mean of its discretely matched vertices."""
    sums = np.zeros_like(center.xy)
    counts = np.zeros(len(center))
    for T in cluster:
        _, warping = dtw(center, T)
        for i, j in warping.pairs:
            sums[i] += T.xy[j]
            counts[i] += 1
    new_xy = center.xy.copy()
    nz = counts > 0
    new_xy[nz] = sums[nz] / counts[nz, None]
    return _rebuild(center, new_xy)


def cdba_update(center: Trajectory, cluster: list[Trajectory], resolution=None) -> Trajectory:
    """Move each center vertex to the mean of samples on its matched subcurves."""
    sums = np.zeros_like(center.xy)
    counts = np.zeros(len(center))
    for T in cluster:
        path = cdtw(center, T, resolution)
        for i, samples in enumerate(_matched_points(T, path.points, center.cum_lengths)):
            sums[i] += samples.sum(axis=0)
            counts[i] += len(samples)
    new_xy = center.xy.copy()
    nz = counts > 0
    new_xy[nz] = sums[nz] / counts[nz, None]
    return _rebuild(center, new_xy)


def fsa_update(center: Trajectory, cluster: list[Trajectory]) -> Trajectory:
    """Move each center vertex to the minimum-enclosing-circle centre of its matches."""
    gathered: list[list[np.ndarray]] = [[] for _ in range(len(center))]
    for T in cluster:
        matching = frechet_matching(center, T)
        for i, samples in enumerate(_matched_points(T, matching.pairs, center.cum_lengths)):
            gathered[i].append(samples)
    new_xy = center.xy.copy()
    for i, chunks in enumerate(gathered):
        if chunks:
            pts = np.vstack(chunks)
            cx, cy, _ = minimum_enclosing_circle(pts)
            new_xy[i] = (cx, cy)
    return _rebuild(center, new_xy)


def _pattern_search(objective: Callable[[float, float], float], x0: float, y0: float, h0: float) -> tuple[float, float]:
    """Deterministic shrinking-grid minimisation started at (x0, y0)."""
    bx, by = x0, y0
    fb = objective(bx, by)
    h = h0
    for _ in range(_PATTERN_ROUNDS):
        cx, cy = bx, by
        for dy in _PATTERN_OFFSETS:
            for dx in _PATTERN_OFFSETS:
                x = cx + h * dx
                y = cy + h * dy
                f = objective(x, y)
                if f < fb:
                    fb = f
                    bx, by = x, y
        h *= 0.5
    return bx, by


def wedge_update(center: Trajectory, cluster: list[Trajectory], fix_endpoints: bool = False,
                 resolution=None) -> Trajectory:
    """Reposition vertices to fit their incident segments to aligned cluster vertices.

    For every cluster-trajectory vertex, the warping path determines
    which center segments it is aligned to; each center vertex is then
    moved to minimise the length-weighted sum of squared distances from
    those vertices to its two incident segments (one at the endpoints).
    Vertices are processed in order against the already-updated prefix.
    """
    l = len(center)
    seg_pts: list[list] = [[] for _ in range(l - 1)]  # per center segment: (x, y, w)
    for T in cluster:
        path = cdtw(center, T, resolution)
        seg_len = T.segment_lengths
        for vi in range(len(T)):
            w = float(seg_len[vi - 1] if vi > 0 else 0.0) + float(seg_len[vi] if vi < len(T) - 1 else 0.0)
            p_lo, p_hi = _aligned_interval(path.points, float(T.cum_lengths[vi]), axis=1)
            tol = 1e-9 * (1.0 + center.length)
            for si in range(l - 1):
                if p_lo <= center.cum_lengths[si + 1] + tol and p_hi >= center.cum_lengths[si] - tol:
                    seg_pts[si].append((float(T.xy[vi, 0]), float(T.xy[vi, 1]), w))

    def side_arrays(si: int):
        if not seg_pts[si]:
            return None
        arr = np.asarray(seg_pts[si])
        return arr[:, :2], arr[:, 2]

    new_xy = center.xy.copy()
    for i in range(l):
        left = side_arrays(i - 1) if i > 0 else None
        right = side_arrays(i) if i < l - 1 else None
        if left is None and right is None:
            continue
        if fix_endpoints and (i == 0 or i == l - 1):
            continue
        ax, ay = (new_xy[i - 1] if i > 0 else (0.0, 0.0))
        bx, by = (center.xy[i + 1] if i < l - 1 else (0.0, 0.0))

        def objective(x: float, y: float) -> float:
            total = 0.0
            if left is not None:
                pts, w = left
                total += float((w * seg_dist_sq_many(pts, float(ax), float(ay), x, y)).sum())
            if right is not None:
                pts, w = right
                total += float((w * seg_dist_sq_many(pts, x, y, float(bx), float(by))).sum())
            return total

        lengths = []
        if i > 0:
            lengths.append(float(center.segment_lengths[i - 1]))
        if i < l - 1:
            lengths.append(float(center.segment_lengths[i]))
        h0 = 0.5 * (sum(lengths) / len(lengths))
        x, y = _pattern_search(objective, float(center.xy[i, 0]), float(center.xy[i, 1]), h0)
        new_xy[i] = (x, y)
    return _rebuild(center, new_xy)


def _rebuild(center: Trajectory, new_xy: np.ndarray) -> Trajectory:
    """Build the candidate center; fall back to the original if degenerate."""
    try:
        return make_trajectory(new_xy)
    except ValueError:
        return center


_METHODS = {
    "dba": lambda center, cluster, resolution, fix_endpoints: dba_update(center, cluster),
    "cdba": lambda center, cluster, resolution, fix_endpoints: cdba_update(center, cluster, resolution),
    "fsa": lambda center, cluster, resolution, fix_endpoints: fsa_update(center, cluster),
    "wedge": lambda center, cluster, resolution, fix_endpoints: wedge_update(center, cluster, fix_endpoints, resolution),
}

NATURAL_KIND = {
    "dba": DistanceKind.DTW,
    "cdba": DistanceKind.CDTW,
    "fsa": DistanceKind.FRECHET,
    "wedge": DistanceKind.CDTW,
}


@dataclass
class ImproveResult:
    clustering: Clustering
    phi1_trace: list[float]
    phiinf_trace: list[float]
    iterations: int


def improve_loop(trajectories: list[Trajectory], clustering: Clustering, method: str,
                 kind: DistanceKind, max_iter: int = 20, resolution=None,
                 fix_endpoints: bool = False) -> ImproveResult:
    """Repeatedly propose center updates, keeping only strict improvements.

    Each iteration updates every cluster's center with the chosen method,
    accepts a candidate only if it strictly lowers that cluster's summed
    distance under ``kind``, then reassigns all trajectories to their
    nearest center.  Stops after an iteration with no accepted update or
    after ``max_iter`` iterations.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown improvement method {method!r}")
    update = _METHODS[method]
    current = clustering.copy()
    current.medoid_indices = None
    k = len(current.centers)

    # distances keyed by the center object itself so entries stay valid
    dist_cache: dict[Trajectory, dict[int, float]] = {}

    def d(center: Trajectory, t: int) -> float:
        row = dist_cache.setdefault(center, {})
        if t not in row:
            row[t] = trajectory_distance(trajectories[t], center, kind, resolution)
        return row[t]

    # the incoming clustering may have been scored under another distance;
    # the trace must be consistent under this loop's kind
    init_dists = [d(current.centers[ci], t) for t, ci in enumerate(current.assignment)]
    current.distances = init_dists
    phi1_trace = [sum(init_dists)]
    phiinf_trace = [max(init_dists)]

    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        accepted = False
        members_of = [[] for _ in range(k)]
        for t, ci in enumerate(current.assignment):
            members_of[ci].append(t)
        new_centers = []
        for ci, center in enumerate(current.centers):
            members = members_of[ci]
            if not members:
                new_centers.append(center)
                continue
            candidate = update(center, [trajectories[t] for t in members], resolution, fix_endpoints)
            cur_cost = sum(d(center, t) for t in members)
            cand_cost = sum(d(candidate, t) for t in members)
            if cand_cost < cur_cost:
                new_centers.append(candidate)
                accepted = True
            else:
                new_centers.append(center)
        # reassignment under the same kind
        assignment = []
        distances = []
        for t in range(len(trajectories)):
            best = math.inf
            arg = 0
            for ci in range(k):
                dv = d(new_centers[ci], t)
                if dv < best:
                    best = dv
                    arg = ci
            assignment.append(arg)
            distances.append(best)
        current = Clustering(centers=new_centers, assignment=assignment, distances=distances)
        phi1_trace.append(sum(distances))
        phiinf_trace.append(max(distances))
        if not accepted:
            break
    return ImproveResult(
        clustering=current,
        phi1_trace=phi1_trace,
        phiinf_trace=phiinf_trace,
        iterations=iterations,
    )
