"""Clustering with k centers of bounded complexity.

Candidate centers are simplifications of input trajectories (greedy scan
under the Frechet distance, the fast option that holds up well in
practice); distances from trajectories to candidates are computed under
the configured distance kind and cached, so the medoid local search can
evaluate swaps cheaply.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .distances import DistanceKind, trajectory_distance
from .geometry import Trajectory
from .simplification import greedy_simplify


@dataclass
class ClusterCost:
    medians: float  # sum of distances to the nearest center
    center: float  # maximum distance to the nearest center


@dataclass
class Clustering:
    """Centers, the nearest-center assignment, and the cached distances."""

    centers: list[Trajectory]
    assignment: list[int]
    distances: list[float]
    medoid_indices: list[int] | None = None

    def copy(self) -> "Clustering":
        return Clustering(
            centers=list(self.centers),
            assignment=list(self.assignment),
            distances=list(self.distances),
            medoid_indices=list(self.medoid_indices) if self.medoid_indices is not None else None,
        )


def cost(clustering: Clustering) -> ClusterCost:
    return ClusterCost(medians=sum(clustering.distances), center=max(clustering.distances))


class CandidateCache:
    """Per-run cache of candidate simplifications and distances to them."""

    def __init__(self, trajectories: list[Trajectory], ell: int, kind: DistanceKind, resolution=None):
        self.trajectories = trajectories
        self.ell = ell
        self.kind = kind
        self.resolution = resolution
        self._simplified: dict[int, Trajectory] = {}
        self._dist: dict[tuple[int, int], float] = {}

    def simplified(self, idx: int) -> Trajectory:
        if idx not in self._simplified:
            self._simplified[idx] = greedy_simplify(self.trajectories[idx], self.ell, DistanceKind.FRECHET).result
        return self._simplified[idx]

    def dist(self, t_idx: int, cand_idx: int) -> float:
        key = (t_idx, cand_idx)
        if key not in self._dist:
            self._dist[key] = trajectory_distance(
                self.trajectories[t_idx], self.simplified(cand_idx), self.kind, self.resolution
            )
        return self._dist[key]


def assign(trajectories: list[Trajectory], centers: list[Trajectory], kind: DistanceKind, resolution=None) -> Clustering:
    """Map every trajectory to its nearest center (ties to the lowest index)."""
    if not centers:
        raise ValueError("need at least one center")
    assignment = []
    distances = []
    for T in trajectories:
        best = math.inf
        arg = 0
        for ci, C in enumerate(centers):
            d = trajectory_distance(T, C, kind, resolution)
            if d < best:
                best = d
                arg = ci
        assignment.append(arg)
        distances.append(best)
    return Clustering(centers=list(centers), assignment=assignment, distances=distances)


def _clustering_from_medoids(cache: CandidateCache, medoids: list[int]) -> Clustering:
    n = len(cache.trajectories)
    assignment = []
    distances = []
    for t in range(n):
        best = math.inf
        arg = 0
        for ci, c_idx in enumerate(medoids):
            d = cache.dist(t, c_idx)
            if d < best:
                best = d
                arg = ci
        assignment.append(arg)
        distances.append(best)
    return Clustering(
        centers=[cache.simplified(m) for m in medoids],
        assignment=assignment,
        distances=distances,
        medoid_indices=list(medoids),
    )


def gonzalez(trajectories: list[Trajectory], k: int, ell: int, kind: DistanceKind, seed: int,
             resolution=None, cache: CandidateCache | None = None) -> Clustering:
    """Farthest-point center selection over simplified candidates.

    The first center is a uniformly seeded pick; every further center is
    the trajectory farthest (under ``kind``) from the centers chosen so
    far, used via its simplification.
    """
    n = len(trajectories)
    if k < 1 or k > n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if cache is None:
        cache = CandidateCache(trajectories, ell, kind, resolution)
    rng = random.Random(seed)
    medoids = [rng.randrange(n)]
    nearest = [cache.dist(t, medoids[0]) for t in range(n)]
    while len(medoids) < k:
        far = max(range(n), key=lambda t: (nearest[t], -t))
        medoids.append(far)
        for t in range(n):
            d = cache.dist(t, far)
            if d < nearest[t]:
                nearest[t] = d
    return _clustering_from_medoids(cache, medoids)


def pam_greedy_init(trajectories: list[Trajectory], k: int, ell: int, kind: DistanceKind,
                    resolution=None, cache: CandidateCache | None = None) -> Clustering:
    """Greedy medoid seeding: each new center maximises the drop in total cost."""
    n = len(trajectories)
    if k < 1 or k > n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if cache is None:
        cache = CandidateCache(trajectories, ell, kind, resolution)
    medoids: list[int] = []
    nearest = [math.inf] * n
    for _ in range(k):
        best_cand = None
        best_total = math.inf
        for cand in range(n):
            if cand in medoids:
                continue
            total = 0.0
            for t in range(n):
                total += min(nearest[t], cache.dist(t, cand))
            if total < best_total:
                best_total = total
                best_cand = cand
        medoids.append(best_cand)
        for t in range(n):
            d = cache.dist(t, best_cand)
            if d < nearest[t]:
                nearest[t] = d
    return _clustering_from_medoids(cache, medoids)


def pam_local_search(trajectories: list[Trajectory], init: Clustering, ell: int, kind: DistanceKind,
                     resolution=None, cache: CandidateCache | None = None) -> Clustering:
    """Best-swap medoid descent from an initial medoid clustering.

    Repeats the single (center, non-center) swap with the largest strict
    decrease of the summed cost until no swap improves, reusing the
    cached distance matrix so one round costs O(k * n^2) lookups.
    """
    if init.medoid_indices is None:
        raise ValueError("pam_local_search needs a clustering with medoid indices")
    n = len(trajectories)
    if cache is None:
        cache = CandidateCache(trajectories, ell, kind, resolution)
    medoids = list(init.medoid_indices)
    while True:
        # nearest and second-nearest center distance per trajectory
        nearest = [math.inf] * n
        nearest_ci = [0] * n
        second = [math.inf] * n
        for ci, m in enumerate(medoids):
            for t in range(n):
                d = cache.dist(t, m)
                if d < nearest[t]:
                    second[t] = nearest[t]
                    nearest[t] = d
                    nearest_ci[t] = ci
                elif d < second[t]:
                    second[t] = d
        current = sum(nearest)
        best_delta = 0.0
        best_swap = None
        for ci in range(len(medoids)):
            for cand in range(n):
                if cand in medoids:
                    continue
                total = 0.0
                for t in range(n):
                    dc = cache.dist(t, cand)
                    if nearest_ci[t] == ci:
                        total += dc if dc < second[t] else second[t]
                    else:
                        total += dc if dc < nearest[t] else nearest[t]
                delta = total - current
                if delta < best_delta - 0.0:
                    best_delta = delta
                    best_swap = (ci, cand)
        if best_swap is None:
            break
        medoids[best_swap[0]] = best_swap[1]
    return _clustering_from_medoids(cache, medoids)
