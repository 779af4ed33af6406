"""Trajectory similarity and (k, l)-clustering toolkit.

Distances: an additive approximation of the continuous warping-integral
distance (CDTW), exact DTW with squared ground distance, and the
continuous Frechet distance.  On top of these: vertex-restricted
simplification, medoid clustering with bounded-complexity centers, and
iterative center improvement.
"""

from .cdtw import Resolution, cdtw, cdtw_cost, cdtw_grid_oracle, recompute_path_cost
from .cells import Cell, ParamPoint, WarpingPath, cell_from_segments, cell_optimal_path, ell_m, segment_cost
from .center_improvement import (
    ImproveResult,
    cdba_update,
    dba_update,
    fsa_update,
    improve_loop,
    wedge_update,
)
from .clustering import Clustering, ClusterCost, assign, cost, gonzalez, pam_greedy_init, pam_local_search
from .dataset import DatasetError, DatasetManifest, TrajectoryRecord, load_dataset, subsample
from .distances import (
    DiscreteWarping,
    DistanceKind,
    FrechetMatching,
    dtw,
    frechet,
    frechet_decision,
    frechet_matching,
    trajectory_distance,
)
from .enclosing_circle import minimum_enclosing_circle
from .experiment import ExperimentConfig, ExperimentReport, export_results, run_experiment
from .geometry import (
    Point,
    Segment,
    Trajectory,
    make_trajectory,
    point_at,
    point_segment_dist,
    points_at,
    project_transverse_mercator,
    sq_dist,
)
from .simplification import Simplification, greedy_simplify, imai_iri_dp, imai_iri_threshold, shortcut_error

__all__ = [
    "Cell",
    "Clustering",
    "ClusterCost",
    "DatasetError",
    "DatasetManifest",
    "DiscreteWarping",
    "DistanceKind",
    "ExperimentConfig",
    "ExperimentReport",
    "FrechetMatching",
    "ImproveResult",
    "ParamPoint",
    "Point",
    "Resolution",
    "Segment",
    "Simplification",
    "Trajectory",
    "TrajectoryRecord",
    "WarpingPath",
    "assign",
    "cdba_update",
    "cdtw",
    "cdtw_cost",
    "cdtw_grid_oracle",
    "cell_from_segments",
    "cell_optimal_path",
    "cost",
    "dba_update",
    "dtw",
    "ell_m",
    "export_results",
    "frechet",
    "frechet_decision",
    "frechet_matching",
    "fsa_update",
    "gonzalez",
    "greedy_simplify",
    "imai_iri_dp",
    "imai_iri_threshold",
    "improve_loop",
    "load_dataset",
    "make_trajectory",
    "minimum_enclosing_circle",
    "pam_greedy_init",
    "pam_local_search",
    "point_at",
    "point_segment_dist",
    "points_at",
    "project_transverse_mercator",
    "recompute_path_cost",
    "run_experiment",
    "segment_cost",
    "shortcut_error",
    "sq_dist",
    "subsample",
    "trajectory_distance",
    "wedge_update",
]
