"""Vertex-restricted polyline simplification to a target complexity.

All three methods pick a subsequence of the input vertices (endpoints
always kept) so that the result has at most ``ell`` vertices.  The
greedy scan and the threshold shortest-path variant minimise the largest
shortcut error; the dynamic program minimises the summed shortcut error,
which suits sum-type distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cdtw import cdtw_cost
from .distances import DistanceKind, dtw, frechet
from .geometry import Trajectory, make_trajectory


@dataclass
class Simplification:
    """A simplified trajectory plus the kept vertex indices."""

    result: Trajectory
    source_indices: list[int]


def _from_indices(P: Trajectory, idx: list[int]) -> Simplification:
    return Simplification(result=make_trajectory(P.xy[idx]), source_indices=list(idx))


def shortcut_error(P: Trajectory, i: int, j: int, kind: DistanceKind, resolution=None, _cache: dict | None = None) -> float:
    """Distance between the straight shortcut ``p_i p_j`` and the vertices it skips.

    The shortcut is treated as a 2-vertex trajectory and compared against
    the subtrajectory ``p_i .. p_j`` under the requested distance.
    Coincident shortcut endpoints (a loop) make the shortcut unusable and
    give ``inf``.
    """
    if not (0 <= i < j < len(P)):
        raise ValueError(f"invalid shortcut indices ({i}, {j}) for {len(P)} vertices")
    if _cache is not None and (i, j) in _cache:
        return _cache[(i, j)]
    if (P.xy[i] == P.xy[j]).all():
        err = math.inf
    else:
        seg = make_trajectory([P.xy[i], P.xy[j]])
        sub = make_trajectory(P.xy[i : j + 1])
        if kind is DistanceKind.DTW:
            err = dtw(seg, sub)[0]
        elif kind is DistanceKind.FRECHET:
            err = frechet(seg, sub)
        else:
            err = cdtw_cost(seg, sub, resolution)
    if _cache is not None:
        _cache[(i, j)] = err
    return err


def _greedy_scan(P: Trajectory, threshold: float, kind: DistanceKind, resolution, cache: dict) -> list[int]:
    """One greedy pass: extend each shortcut while the error stays within threshold."""
    n = len(P)
    idx = [0]
    i = 0
    while i < n - 1:
        j = i + 1
        while j + 1 < n and shortcut_error(P, i, j + 1, kind, resolution, cache) <= threshold:
            j += 1
        idx.append(j)
        i = j
    return idx


def greedy_simplify(P: Trajectory, ell: int, kind: DistanceKind, resolution=None) -> Simplification:
    """Greedy simplification with a binary search on the error threshold."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    n = len(P)
    if ell >= n:
        return _from_indices(P, list(range(n)))
    cache: dict = {}
    idx = _greedy_scan(P, 0.0, kind, resolution, cache)
    if len(idx) <= ell:
        return _from_indices(P, idx)
    # bracket: seed from the smallest nonzero single-skip error, double until feasible
    seed = math.inf
    for i in range(n - 2):
        e = shortcut_error(P, i, i + 2, kind, resolution, cache)
        if 0.0 < e < seed:
            seed = e
    if not math.isfinite(seed):
        seed = 1.0
    lo, hi = 0.0, seed
    best = _greedy_scan(P, hi, kind, resolution, cache)
    guard = 0
    while len(best) > ell:
        lo, hi = hi, hi * 2.0
        best = _greedy_scan(P, hi, kind, resolution, cache)
        guard += 1
        if guard > 200:  # pragma: no cover - threshold inf always reaches 2 vertices
            raise RuntimeError("greedy threshold search failed to bracket")
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        out = _greedy_scan(P, mid, kind, resolution, cache)
        if len(out) <= ell:
            hi, best = mid, out
        else:
            lo = mid
    return _from_indices(P, best)


def _error_table(P: Trajectory, kind: DistanceKind, resolution) -> dict[tuple[int, int], float]:
    n = len(P)
    cache: dict = {}
    for i in range(n - 1):
        for j in range(i + 1, n):
            shortcut_error(P, i, j, kind, resolution, cache)
    return cache


def imai_iri_threshold(P: Trajectory, ell: int, kind: DistanceKind, resolution=None) -> Simplification:
    """Minimum-link shortcut path, searched over the discrete error values.

    Builds the complete shortcut-error table, then finds the smallest
    threshold (among the occurring error values) for which a path from
    the first to the last vertex uses at most ``ell`` vertices, and
    returns a minimum-link path at that threshold.
    """
    if ell < 2:
        raise ValueError("ell must be >= 2")
    n = len(P)
    if ell >= n:
        return _from_indices(P, list(range(n)))
    errs = _error_table(P, kind, resolution)

    def min_links(threshold: float) -> tuple[list[int], list[int]]:
        links = [math.inf] * n
        pred = [-1] * n
        links[0] = 1
        for j in range(1, n):
            for i in range(j):
                if links[i] + 1 < links[j] and errs[(i, j)] <= threshold:
                    links[j] = links[i] + 1
                    pred[j] = i
        return links, pred

    values = sorted(set(v for v in errs.values() if math.isfinite(v)))
    lo, hi = 0, len(values) - 1
    feasible_at = None
    while lo <= hi:
        mid = (lo + hi) // 2
        links, pred = min_links(values[mid])
        if links[n - 1] <= ell:
            feasible_at = (mid, pred)
            hi = mid - 1
        else:
            lo = mid + 1
    if feasible_at is None:  # pragma: no cover - the full chain is always feasible
        raise RuntimeError("no feasible threshold found")
    _, pred = feasible_at
    idx = [n - 1]
    while idx[-1] != 0:
        idx.append(pred[idx[-1]])
    idx.reverse()
    return _from_indices(P, idx)


def imai_iri_dp(P: Trajectory, ell: int, kind: DistanceKind, resolution=None) -> Simplification:
    """Minimum total shortcut error over all subsequences of <= ell vertices."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    n = len(P)
    if ell >= n:
        return _from_indices(P, list(range(n)))
    errs = _error_table(P, kind, resolution)
    INF = math.inf
    # cost[j][k]: best summed error reaching vertex j using k vertices
    cost = [[INF] * (ell + 1) for _ in range(n)]
    pred = [[-1] * (ell + 1) for _ in range(n)]
    cost[0][1] = 0.0
    for j in range(1, n):
        for k in range(2, ell + 1):
            best = INF
            arg = -1
            for i in range(j):
                ci = cost[i][k - 1]
                if ci == INF:
                    continue
                e = errs[(i, j)]
                if ci + e < best:
                    best = ci + e
                    arg = i
            cost[j][k] = best
            pred[j][k] = arg
    finite_ks = [k for k in range(2, ell + 1) if math.isfinite(cost[n - 1][k])]
    if not finite_ks:
        raise ValueError("no valid simplification: every shortcut chain hits coincident endpoints")
    k_best = min(finite_ks, key=lambda k: cost[n - 1][k])
    idx = [n - 1]
    k = k_best
    while idx[-1] != 0:
        i = pred[idx[-1]][k]
        idx.append(i)
        k -= 1
    idx.reverse()
    return _from_indices(P, idx)
