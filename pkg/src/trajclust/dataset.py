"""Dataset ingestion and preprocessing.

Two on-disk layouts are supported: a directory of per-trajectory CSV
files (header ``x,y`` or ``lat,lon``), or a single labeled CSV with
columns ``id,label,x,y`` (or ``lat,lon``) grouped by id in row order.
Geographic coordinates are projected with the spherical transverse
Mercator centred on a caller-supplied reference meridian.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import Point, Trajectory, make_trajectory, points_at, project_transverse_mercator


class DatasetError(Exception):
    """Raised when any input file fails to parse; carries a per-file report."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        lines = "\n".join(f"  {name}: {msg}" for name, msg in errors)
        super().__init__(f"{len(errors)} dataset error(s):\n{lines}")


@dataclass
class DatasetManifest:
    format: str  # "csv_dir" or "labeled_csv"
    path: str | Path
    coordinate_mode: str = "planar"  # "planar" or "latlon"
    ref_lon: float | None = None
    target_complexity: int | None = None

    def __post_init__(self):
        if self.format not in ("csv_dir", "labeled_csv"):
            raise ValueError(f"unknown dataset format {self.format!r}")
        if self.coordinate_mode not in ("planar", "latlon"):
            raise ValueError(f"unknown coordinate mode {self.coordinate_mode!r}")
        if self.coordinate_mode == "latlon" and self.ref_lon is None:
            raise ValueError("latlon datasets need ref_lon")


@dataclass
class TrajectoryRecord:
    id: str
    label: str
    trajectory: Trajectory


def subsample(T: Trajectory, target_n: int) -> Trajectory:
    """Resample to ``target_n`` vertices at uniform arc-length spacing.

    Keeps both endpoints; returns ``T`` unchanged when it is already at
    or below the target complexity.
    """
    if target_n < 2:
        raise ValueError("target_n must be >= 2")
    if len(T) <= target_n:
        return T
    ss = np.linspace(0.0, T.length, target_n)
    return make_trajectory(points_at(T, ss))


def _rows_to_points(rows: list[dict], mode: str, ref_lon: float | None) -> list[Point]:
    pts = []
    for r in rows:
        if mode == "planar":
            pts.append(Point(float(r["x"]), float(r["y"])))
        else:
            pts.append(project_transverse_mercator(float(r["lat"]), float(r["lon"]), ref_lon))
    return pts


def _required_columns(mode: str) -> set[str]:
    return {"x", "y"} if mode == "planar" else {"lat", "lon"}


def load_dataset(manifest: DatasetManifest) -> list[TrajectoryRecord]:
    """Read every trajectory in the manifest; abort with a report on errors."""
    root = Path(manifest.path)
    errors: list[tuple[str, str]] = []
    records: list[TrajectoryRecord] = []
    need = _required_columns(manifest.coordinate_mode)

    if manifest.format == "csv_dir":
        if not root.is_dir():
            raise DatasetError([(str(root), "not a directory")])
        files = sorted(root.rglob("*.csv"))
        if not files:
            errors.append((str(root), "no .csv files found"))
        for f in files:
            rel = f.relative_to(root)
            label = rel.parts[0] if len(rel.parts) > 1 else root.name
            try:
                with open(f, newline="") as fh:
                    reader = csv.DictReader(fh)
                    cols = set(reader.fieldnames or [])
                    if not need.issubset(cols):
                        raise ValueError(f"missing columns {sorted(need - cols)}")
                    pts = _rows_to_points(list(reader), manifest.coordinate_mode, manifest.ref_lon)
                traj = make_trajectory(pts)
                if manifest.target_complexity:
                    traj = subsample(traj, manifest.target_complexity)
                records.append(TrajectoryRecord(id=f.stem, label=label, trajectory=traj))
            except (ValueError, KeyError) as e:
                errors.append((str(f), str(e)))
    else:
        try:
            with open(root, newline="") as fh:
                reader = csv.DictReader(fh)
                cols = set(reader.fieldnames or [])
                if not ({"id", "label"} | need).issubset(cols):
                    raise ValueError(f"missing columns {sorted(({'id', 'label'} | need) - cols)}")
                groups: dict[str, tuple[str, list[dict]]] = {}
                for row in reader:
                    gid = row["id"]
                    if gid not in groups:
                        groups[gid] = (row["label"], [])
                    groups[gid][1].append(row)
        except OSError as e:
            raise DatasetError([(str(root), str(e))]) from None
        except ValueError as e:
            raise DatasetError([(str(root), str(e))]) from None
        for gid, (label, rows) in groups.items():
            try:
                pts = _rows_to_points(rows, manifest.coordinate_mode, manifest.ref_lon)
                traj = make_trajectory(pts)
                if manifest.target_complexity:
                    traj = subsample(traj, manifest.target_complexity)
                records.append(TrajectoryRecord(id=gid, label=label, trajectory=traj))
            except ValueError as e:
                errors.append((f"{root}#{gid}", str(e)))

    if errors:
        raise DatasetError(errors)
    return records
