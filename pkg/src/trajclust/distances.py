"""Discrete and bottleneck trajectory distances, plus the kind selector.

DTW here uses the squared Euclidean ground distance so its values are
comparable with the warping-integral distance.  The Frechet distance is
computed by bisection over a free-space reachability test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import frechet_reach
from .geometry import Trajectory


class DistanceKind(Enum):
    DTW = "dtw"
    FRECHET = "frechet"
    CDTW = "cdtw"

    @classmethod
    def parse(cls, name: str) -> "DistanceKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown distance kind {name!r}; expected dtw, frechet or cdtw") from None


@dataclass
class DiscreteWarping:
    """Vertex alignment realising a DTW cost (0-based index pairs)."""

    pairs: list[tuple[int, int]]


@dataclass
class FrechetMatching:
    """Monotone arc-length matching sampled at free-space cell crossings."""

    pairs: list[tuple[float, float]]
    threshold: float


def dtw(P: Trajectory, Q: Trajectory) -> tuple[float, DiscreteWarping]:
    """Exact DTW cost and an optimal warping (squared ground distance).

    Plain O(nm) dynamic program.  The accumulation order matches a
    term-by-term sum along the warping so results are reproducible
    exactly.
    """
    A = P.xy
    B = Q.xy
    n = len(A)
    m = len(B)
    INF = math.inf
    D = [[INF] * m for _ in range(n)]
    for i in range(n):
        ax, ay = A[i, 0], A[i, 1]
        row = D[i]
        prev = D[i - 1] if i > 0 else None
        for j in range(m):
            dx = ax - B[j, 0]
            dy = ay - B[j, 1]
            cost = dx * dx + dy * dy
            if i == 0 and j == 0:
                row[j] = cost
                continue
            best = INF
            if i > 0:
                best = prev[j]
                if j > 0 and prev[j - 1] < best:
                    best = prev[j - 1]
            if j > 0 and row[j - 1] < best:
                best = row[j - 1]
            row[j] = best + cost
    # backtrack, preferring diagonal, then up, then left on exact ties
    pairs = [(n - 1, m - 1)]
    i, j = n - 1, m - 1
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            choices = ((D[i - 1][j - 1], i - 1, j - 1), (D[i - 1][j], i - 1, j), (D[i][j - 1], i, j - 1))
            _, i, j = min(choices, key=lambda t: t[0])
        elif i > 0:
            i -= 1
        else:
            j -= 1
        pairs.append((i, j))
    pairs.reverse()
    return D[n - 1][m - 1], DiscreteWarping(pairs)


def _max_vertex_distance(P: Trajectory, Q: Trajectory) -> float:
    d = P.xy[:, None, :] - Q.xy[None, :, :]
    return float(np.sqrt((d * d).sum(axis=2).max()))


def frechet_decision(P: Trajectory, Q: Trajectory, eps: float) -> bool:
    """True iff the continuous Frechet distance is at most ``eps``."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    *_, ok = frechet_reach(P.xy, Q.xy, float(eps))
    return bool(ok)


def _frechet_bracket(P: Trajectory, Q: Trajectory, rel_tol: float) -> tuple[float, float]:
    """(largest known false, smallest known true) threshold bracket."""
    lo = max(
        math.hypot(P.xy[0, 0] - Q.xy[0, 0], P.xy[0, 1] - Q.xy[0, 1]),
        math.hypot(P.xy[-1, 0] - Q.xy[-1, 0], P.xy[-1, 1] - Q.xy[-1, 1]),
    )
    hi = _max_vertex_distance(P, Q)
    if hi <= 1e-12:
        return 0.0, 0.0
    if frechet_decision(P, Q, lo):
        return lo, lo
    for _ in range(60):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if frechet_decision(P, Q, mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def frechet(P: Trajectory, Q: Trajectory, rel_tol: float = 1e-6) -> float:
    """Continuous Frechet distance to relative tolerance ``rel_tol``."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    lo, hi = _frechet_bracket(P, Q, rel_tol)
    return 0.5 * (lo + hi)


def frechet_matching(P: Trajectory, Q: Trajectory) -> FrechetMatching:
    """A monotone matching realising (approximately) the Frechet distance.

    The free-space diagram at the bisected threshold is walked back from
    the final corner, always entering each cell at the lowest reachable
    boundary point; pairs are (arc length on P, arc length on Q) at every
    cell-boundary crossing.
    """
    lo, hi = _frechet_bracket(P, Q, 1e-6)
    eps = hi if hi > 0 else 0.0
    rv_lo, rv_hi, rh_lo, rh_hi, ok = frechet_reach(P.xy, Q.xy, eps)
    if not ok:
        # tolerance edge: nudge the threshold up until reachable
        for _ in range(60):
            eps = max(eps * (1 + 1e-9), eps + 1e-300)
            rv_lo, rv_hi, rh_lo, rh_hi, ok = frechet_reach(P.xy, Q.xy, eps)
            if ok:
                break
        else:
            raise RuntimeError("free space not traversable at its own threshold")

    n = len(P)
    m = len(Q)
    pcum = P.cum_lengths
    qcum = Q.cum_lengths
    pairs: list[tuple[float, float]] = [(float(pcum[-1]), float(qcum[-1]))]
    i, j = n - 2, m - 2
    # The exit point of the current cell: a fraction on its right edge
    # (exit_is_top False) or top edge (True).  The goal corner behaves
    # like a right-edge exit at fraction 1.
    exit_is_top = False
    exit_frac = 1.0
    while True:
        left_ok = rv_lo[i, j] <= rv_hi[i, j]
        bot_ok = rh_lo[i, j] <= rh_hi[i, j]
        left_feasible = left_ok and (exit_is_top or exit_frac >= rv_lo[i, j])
        bot_feasible = bot_ok and ((not exit_is_top) or exit_frac >= rh_lo[i, j])
        if left_feasible:
            frac = float(rv_lo[i, j])
            q_arc = float(qcum[j] + frac * (qcum[j + 1] - qcum[j]))
            if i == 0:
                # straight climb down the left boundary to the origin
                pairs.append((0.0, q_arc))
                for jj in range(j, 0, -1):
                    pairs.append((0.0, float(qcum[jj])))
                break
            pairs.append((float(pcum[i]), q_arc))
            exit_is_top = False
            exit_frac = frac
            i -= 1
        elif bot_feasible:
            frac = float(rh_lo[i, j])
            p_arc = float(pcum[i] + frac * (pcum[i + 1] - pcum[i]))
            if j == 0:
                pairs.append((p_arc, 0.0))
                for ii in range(i, 0, -1):
                    pairs.append((float(pcum[ii]), 0.0))
                break
            pairs.append((p_arc, float(qcum[j])))
            exit_is_top = True
            exit_frac = frac
            j -= 1
        else:  # pragma: no cover - excluded by the reach construction
            raise RuntimeError("free-space backtrack has no feasible entry")
    pairs.append((0.0, 0.0))
    pairs.reverse()
    dedup = [pairs[0]]
    for pr in pairs[1:]:
        if pr != dedup[-1]:
            dedup.append(pr)
    return FrechetMatching(pairs=dedup, threshold=eps)


def trajectory_distance(P: Trajectory, Q: Trajectory, kind: DistanceKind, resolution=None) -> float:
    """Distance of the requested kind; CDTW uses the engine default level."""
    if kind is DistanceKind.DTW:
        return dtw(P, Q)[0]
    if kind is DistanceKind.FRECHET:
        return frechet(P, Q)
    from .cdtw import cdtw_cost

    return cdtw_cost(P, Q, resolution)
