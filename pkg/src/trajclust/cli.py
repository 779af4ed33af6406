"""Command-line interface.

Subcommands: ``dist`` (one pair, any distance), ``oracle`` (dense-grid
check value), ``simplify``, ``cluster`` (initial clustering), ``improve``
(initial clustering plus center improvement), and ``experiment`` (the
full per-label-group harness with file export).

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .cdtw import Resolution, cdtw, cdtw_grid_oracle
from .dataset import DatasetError, DatasetManifest, load_dataset
from .distances import DistanceKind, trajectory_distance
from .experiment import ExperimentConfig, export_results, run_experiment
from .geometry import Trajectory, make_trajectory
from .simplification import greedy_simplify, imai_iri_dp, imai_iri_threshold


class InputError(Exception):
    pass


def _read_trajectory(path: str) -> Trajectory:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if not {"x", "y"}.issubset(reader.fieldnames or []):
                raise InputError(f"{path}: expected columns x,y")
            pts = [(float(r["x"]), float(r["y"])) for r in reader]
        return make_trajectory(pts)
    except (OSError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _write_trajectory(path: str, T: Trajectory) -> None:
    lines = ["x,y"] + [f"{x:.9g},{y:.9g}" for x, y in T.xy]
    Path(path).write_text("\n".join(lines) + "\n")


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv_dir", "labeled_csv"], required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--coordinate-mode", choices=["planar", "latlon"], default="planar")
    p.add_argument("--ref-lon", type=float, default=None)
    p.add_argument("--target-complexity", type=int, default=None)


def _manifest(args) -> DatasetManifest:
    try:
        return DatasetManifest(
            format=args.format,
            path=args.path,
            coordinate_mode=args.coordinate_mode,
            ref_lon=args.ref_lon,
            target_complexity=args.target_complexity,
        )
    except ValueError as e:
        raise InputError(str(e)) from None


def _experiment_config(args, improve_methods: tuple[str, ...]) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            k=args.k,
            ell=args.ell,
            distance_kind=DistanceKind.parse(args.kind),
            init_method=args.init,
            improve_methods=improve_methods,
            seeds=tuple(int(s) for s in args.seeds.split(",") if s),
            max_iter=args.max_iter,
            resolution_level=args.resolution,
            fix_endpoints=args.fix_endpoints,
        )
    except ValueError as e:
        raise InputError(str(e)) from None


def _cmd_dist(args) -> int:
    P = _read_trajectory(args.a)
    Q = _read_trajectory(args.b)
    kind = DistanceKind.parse(args.kind)
    if kind is DistanceKind.CDTW:
        res = Resolution.for_spacing(args.delta, P, Q) if args.delta else Resolution(args.resolution)
        path = cdtw(P, Q, res)
        print(f"{path.cost:.9g}")
        if args.path_out:
            lines = ["p,q"] + [f"{pt.p:.9g},{pt.q:.9g}" for pt in path.points]
            Path(args.path_out).write_text("\n".join(lines) + "\n")
    else:
        print(f"{trajectory_distance(P, Q, kind):.9g}")
    return 0


def _cmd_oracle(args) -> int:
    P = _read_trajectory(args.a)
    Q = _read_trajectory(args.b)
    print(f"{cdtw_grid_oracle(P, Q, args.grid_n):.9g}")
    return 0


def _cmd_simplify(args) -> int:
    P = _read_trajectory(args.input)
    kind = DistanceKind.parse(args.kind)
    methods = {
        "greedy": greedy_simplify,
        "imai-iri-threshold": imai_iri_threshold,
        "imai-iri-dp": imai_iri_dp,
    }
    try:
        simp = methods[args.method](P, args.ell, kind, Resolution(args.resolution))
    except ValueError as e:
        raise InputError(str(e)) from None
    if args.out:
        _write_trajectory(args.out, simp.result)
    else:
        for x, y in simp.result.xy:
            print(f"{x:.9g},{y:.9g}")
    print(f"kept indices: {','.join(map(str, simp.source_indices))}", file=sys.stderr)
    return 0


def _run_harness(args, improve_methods: tuple[str, ...]) -> int:
    config = _experiment_config(args, improve_methods)
    records = load_dataset(_manifest(args))
    report = run_experiment(config, records)
    out = Path(args.out)
    export_results(report, out)
    for group in report.groups:
        print(f"[{group.label}] initial phi1={group.initial_phi1:.6g} ({group.seconds:.2f}s)", file=sys.stderr)
        for method, mres in group.methods.items():
            print(
                f"[{group.label}] {method}: phi1 {mres.phi1_trace[0]:.6g} -> {mres.phi1_trace[-1]:.6g}"
                f" (cdtw phi1 {mres.final_cdtw_phi1:.6g}, {mres.iterations} it, {mres.seconds:.2f}s)",
                file=sys.stderr,
            )
    print(str(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trajclust", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two trajectory CSV files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind", default="cdtw")
    p.add_argument("--resolution", type=int, default=5)
    p.add_argument("--delta", type=float, default=None, help="boundary sample spacing (overrides --resolution)")
    p.add_argument("--path-out", default=None, help="write the warping path as CSV")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("oracle", help="dense-grid check value for the warping distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--grid-n", type=int, default=512)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("simplify", help="simplify a trajectory to a target complexity")
    p.add_argument("input")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kind", default="frechet")
    p.add_argument("--method", choices=["greedy", "imai-iri-threshold", "imai-iri-dp"], default="greedy")
    p.add_argument("--resolution", type=int, default=5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simplify)

    for name, helptext in (
        ("cluster", "initial clustering only"),
        ("improve", "initial clustering plus center improvement"),
        ("experiment", "full harness over all label groups"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_dataset_args(p)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)
        p.add_argument("--kind", default="cdtw")
        p.add_argument("--init", choices=["gonzalez", "pam", "gonzalez_then_pam"], default="gonzalez_then_pam")
        p.add_argument("--seeds", default="1,2,3,4,5")
        p.add_argument("--max-iter", type=int, default=20)
        p.add_argument("--resolution", type=int, default=5)
        p.add_argument("--fix-endpoints", action="store_true")
        p.add_argument("--out", required=True)
        if name == "cluster":
            p.set_defaults(func=lambda a: _run_harness(a, ()))
        else:
            p.add_argument("--methods", default="dba,cdba,fsa,wedge")
            p.set_defaults(func=lambda a: _run_harness(a, tuple(m for m in a.methods.split(",") if m)))

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DatasetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (AssertionError, RuntimeError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
