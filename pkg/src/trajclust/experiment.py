"""Experiment orchestration: initial clustering, center improvement, export.

Runs the clustering pipeline independently on every label group of a
dataset, applies each requested improvement method to an identical copy
of the group's initial clustering, and writes deterministic result
files (9 significant digits, newline endings).  Wall-clock timings stay
in the in-memory report so exports are byte-stable across runs.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .cdtw import Resolution
from .center_improvement import NATURAL_KIND, improve_loop
from .clustering import CandidateCache, Clustering, cost, gonzalez, pam_greedy_init, pam_local_search
from .dataset import TrajectoryRecord
from .distances import DistanceKind, trajectory_distance
from .geometry import Trajectory

INIT_METHODS = ("gonzalez", "pam", "gonzalez_then_pam")
IMPROVE_METHODS = ("dba", "cdba", "fsa", "wedge")


@dataclass
class ExperimentConfig:
    k: int
    ell: int
    distance_kind: DistanceKind = DistanceKind.CDTW
    init_method: str = "gonzalez_then_pam"
    improve_methods: tuple[str, ...] = ()
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    max_iter: int = 20
    resolution_level: int = 5
    fix_endpoints: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.ell < 2:
            raise ValueError("ell must be >= 2")
        if self.init_method not in INIT_METHODS:
            raise ValueError(f"init_method must be one of {INIT_METHODS}")
        for m in self.improve_methods:
            if m not in IMPROVE_METHODS:
                raise ValueError(f"unknown improvement method {m!r}")
        if not self.seeds and self.init_method != "pam":
            raise ValueError("need at least one seed for seeded initialisation")


@dataclass
class MethodResult:
    phi1_trace: list[float]
    phiinf_trace: list[float]
    final_cdtw_phi1: float
    iterations: int
    clustering: Clustering
    seconds: float


@dataclass
class GroupResult:
    label: str
    ids: list[str]
    initial: Clustering
    initial_phi1: float
    initial_phiinf: float
    methods: dict[str, MethodResult] = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    groups: list[GroupResult]


def _initial_clustering(trajs: list[Trajectory], config: ExperimentConfig, cache: CandidateCache) -> Clustering:
    res = Resolution(config.resolution_level)
    if config.init_method == "pam":
        init = pam_greedy_init(trajs, config.k, config.ell, config.distance_kind, res, cache)
        return pam_local_search(trajs, init, config.ell, config.distance_kind, res, cache)
    best = None
    for seed in config.seeds:
        cand = gonzalez(trajs, config.k, config.ell, config.distance_kind, seed, res, cache)
        if best is None or sum(cand.distances) < sum(best.distances):
            best = cand
    if config.init_method == "gonzalez":
        return best
    return pam_local_search(trajs, best, config.ell, config.distance_kind, res, cache)


def _cdtw_phi1(trajs: list[Trajectory], clustering: Clustering, res: Resolution) -> float:
    """Re-score a center set as a medians cost under the warping distance."""
    total = 0.0
    for T in trajs:
        total += min(trajectory_distance(T, C, DistanceKind.CDTW, res) for C in clustering.centers)
    return total


def run_experiment(config: ExperimentConfig, records: list[TrajectoryRecord]) -> ExperimentReport:
    """Cluster every label group and improve its centers with each method."""
    res = Resolution(config.resolution_level)
    groups: dict[str, list[TrajectoryRecord]] = {}
    for r in records:
        groups.setdefault(r.label, []).append(r)

    results = []
    for label, recs in groups.items():
        trajs = [r.trajectory for r in recs]
        t_group = time.perf_counter()
        cache = CandidateCache(trajs, config.ell, config.distance_kind, res)
        initial = _initial_clustering(trajs, config, cache)
        init_cost = cost(initial)
        group = GroupResult(
            label=label,
            ids=[r.id for r in recs],
            initial=initial,
            initial_phi1=init_cost.medians,
            initial_phiinf=init_cost.center,
        )
        for method in config.improve_methods:
            t0 = time.perf_counter()
            improved = improve_loop(
                trajs,
                initial.copy(),
                method,
                NATURAL_KIND[method],
                max_iter=config.max_iter,
                resolution=res,
                fix_endpoints=config.fix_endpoints,
            )
            final_cdtw = _cdtw_phi1(trajs, improved.clustering, res)
            group.methods[method] = MethodResult(
                phi1_trace=improved.phi1_trace,
                phiinf_trace=improved.phiinf_trace,
                final_cdtw_phi1=final_cdtw,
                iterations=improved.iterations,
                clustering=improved.clustering,
                seconds=time.perf_counter() - t0,
            )
        group.seconds = time.perf_counter() - t_group
        results.append(group)
    return ExperimentReport(config=config, groups=results)


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _write_centers(path: Path, clustering: Clustering) -> None:
    lines = ["cluster,seq,x,y"]
    for ci, C in enumerate(clustering.centers):
        for seq, (x, y) in enumerate(C.xy):
            lines.append(f"{ci},{seq},{_fmt(x)},{_fmt(y)}")
    path.write_text("\n".join(lines) + "\n")


def _write_assignment(path: Path, ids: list[str], clustering: Clustering) -> None:
    lines = ["id,cluster,distance"]
    for tid, ci, d in zip(ids, clustering.assignment, clustering.distances):
        lines.append(f"{tid},{ci},{_fmt(d)}")
    path.write_text("\n".join(lines) + "\n")


def _group_dir(out: Path, label: str) -> Path:
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in label) or "group"
    d = out / safe
    d.mkdir(parents=True, exist_ok=True)
    return d


def export_results(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Write per-group CSVs and a top-level summary; returns written paths.

    Output is byte-stable for identical inputs, configuration and seeds;
    timings are reported in memory only.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    summary: dict = {
        "config": {
            "k": report.config.k,
            "ell": report.config.ell,
            "distance_kind": report.config.distance_kind.value,
            "init_method": report.config.init_method,
            "improve_methods": list(report.config.improve_methods),
            "seeds": list(report.config.seeds),
            "max_iter": report.config.max_iter,
            "resolution_level": report.config.resolution_level,
            "fix_endpoints": report.config.fix_endpoints,
        },
        "groups": {},
    }
    for group in report.groups:
        gdir = _group_dir(out, group.label)
        p = gdir / "centers_initial.csv"
        _write_centers(p, group.initial)
        written.append(p)
        p = gdir / "assignment.csv"
        _write_assignment(p, group.ids, group.initial)
        written.append(p)
        cost_lines = ["method,iteration,phi1,phiinf"]
        gsum: dict = {
            "initial_phi1": float(_fmt(group.initial_phi1)),
            "initial_phiinf": float(_fmt(group.initial_phiinf)),
            "methods": {},
        }
        for method, mres in group.methods.items():
            p = gdir / f"centers_{method}.csv"
            _write_centers(p, mres.clustering)
            written.append(p)
            p = gdir / f"assignment_{method}.csv"
            _write_assignment(p, group.ids, mres.clustering)
            written.append(p)
            for it, (p1, pinf) in enumerate(zip(mres.phi1_trace, mres.phiinf_trace)):
                cost_lines.append(f"{method},{it},{_fmt(p1)},{_fmt(pinf)}")
            gsum["methods"][method] = {
                "final_phi1": float(_fmt(mres.phi1_trace[-1])),
                "final_phiinf": float(_fmt(mres.phiinf_trace[-1])),
                "final_cdtw_phi1": float(_fmt(mres.final_cdtw_phi1)),
                "iterations": mres.iterations,
            }
        p = gdir / "costs.csv"
        p.write_text("\n".join(cost_lines) + "\n")
        written.append(p)
        summary["groups"][group.label] = gsum
    p = out / "summary.json"
    p.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    written.append(p)
    return written
