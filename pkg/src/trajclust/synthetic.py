"""Synthetic trajectory corpora for experiments and tests.

Desk-scale stand-ins for handwriting / movement data: smooth random
curves per class with per-instance time warps and noise, and planted
well-separated groups for clustering recovery checks.
"""

from __future__ import annotations

import numpy as np

from .dataset import TrajectoryRecord, subsample
from .geometry import Trajectory, make_trajectory


def _fourier_coeffs(rng: np.random.Generator, n_modes: int) -> np.ndarray:
    """Random decaying Fourier coefficients, shape (n_modes, 4)."""
    scale = 1.0 / np.arange(1, n_modes + 1)
    return rng.normal(0.0, 1.0, size=(n_modes, 4)) * scale[:, None]


def _eval_curve(coeffs: np.ndarray, drift: np.ndarray, t: np.ndarray) -> np.ndarray:
    x = drift[0] * t
    y = drift[1] * t
    for k, (ax, bx, ay, by) in enumerate(coeffs, start=1):
        w = 2.0 * np.pi * k * t
        x = x + ax * np.sin(w) + bx * np.cos(w)
        y = y + ay * np.sin(w) + by * np.cos(w)
    return np.column_stack([x, y])


def smooth_trajectory(rng: np.random.Generator, n_vertices: int = 50, n_modes: int = 3,
                      n_samples: int = 200) -> Trajectory:
    """One smooth random curve resampled to ``n_vertices``."""
    coeffs = _fourier_coeffs(rng, n_modes)
    drift = rng.normal(0.0, 1.5, size=2)
    t = np.linspace(0.0, 1.0, n_samples)
    return subsample(make_trajectory(_eval_curve(coeffs, drift, t)), n_vertices)


def random_trajectory(rng: np.random.Generator, n_vertices: int, scale: float = 1.0) -> Trajectory:
    """Uniform random vertices in a ``scale`` x ``scale`` box."""
    while True:
        pts = rng.uniform(0.0, scale, size=(n_vertices, 2))
        if (np.abs(np.diff(pts, axis=0)).sum(axis=1) > 0).all():
            return make_trajectory(pts)


def character_corpus(n_classes: int = 20, per_class: int = 50, n_vertices: int = 50,
                     seed: int = 0, warp: float = 0.12, jitter: float = 0.006,
                     noise_scale: float = 0.05, noise_sigma: float = 1.0, noise_cap: float = 0.5,
                     outlier_frac: float = 0.15, outlier_size: tuple[float, float] = (1.0, 2.0),
                     sibling_offset: float = 0.4) -> list[TrajectoryRecord]:
    """Character-like corpus: per-class base strokes with messy instances.

    Each class mixes a dominant stroke with a clearly perturbed sibling
    (handwriting rarely has one mode).  Instances re-time the stroke with
    a smooth monotone warp and add low-frequency shape noise whose
    amplitude is heavy-tailed (lognormal), so most instances are clean
    while a few deviate a lot; a fraction also get a localised detour.
    Everything is resampled to ``n_vertices`` at uniform arc length.
    """
    rng = np.random.default_rng(seed)
    records = []
    t = np.linspace(0.0, 1.0, 220)
    amp2 = np.ones((2, 1))
    amp2[1, 0] = 0.3
    for ci in range(n_classes):
        coeffs = rng.normal(0.0, 1.0, size=(2, 4)) * amp2
        drift = rng.normal(0.0, 1.8, size=2)
        coeffs_alt = coeffs + rng.normal(0.0, sibling_offset, size=coeffs.shape)
        drift_alt = drift + rng.normal(0.0, sibling_offset, size=2)
        label = f"class{ci:02d}"
        for m in range(per_class):
            warp_amp = rng.uniform(-warp, warp)
            warp_phase = rng.uniform(0.0, 2.0 * np.pi)
            tw = t + warp_amp * np.sin(2.0 * np.pi * t + warp_phase) / (2.0 * np.pi)
            tw = (tw - tw[0]) / (tw[-1] - tw[0])
            cc, dd = (coeffs, drift) if rng.uniform() < 0.5 else (coeffs_alt, drift_alt)
            xy = _eval_curve(cc, dd, tw)
            amp = min(noise_cap, rng.lognormal(np.log(noise_scale), noise_sigma))
            noise = rng.normal(0.0, amp, size=(2, 4)) * np.array([[1.0], [0.5]])
            xy = xy + _eval_curve(noise, np.zeros(2), tw)
            if rng.uniform() < outlier_frac:
                pos = rng.integers(40, 180)
                bump = rng.normal(0.0, 1.0, size=2)
                bump = bump / np.hypot(*bump) * rng.uniform(*outlier_size)
                w = np.exp(-0.5 * ((np.arange(len(t)) - pos) / 10.0) ** 2)
                xy = xy + w[:, None] * bump[None, :]
            xy = xy + rng.normal(0.0, jitter, size=xy.shape)
            traj = subsample(make_trajectory(xy), n_vertices)
            records.append(TrajectoryRecord(id=f"{label}_{m:03d}", label=label, trajectory=traj))
    return records


def planted_corpus(n_groups: int = 3, per_group: int = 10, n_vertices: int = 8,
                   separation: float = 100.0, noise: float = 0.5, seed: int = 0) -> list[TrajectoryRecord]:
    """Well-separated groups: translated copies of per-group base strokes.

    Group offsets are ``separation`` apart while members stay within
    ``noise`` of their base, so the planted partition is unambiguous.
    """
    rng = np.random.default_rng(seed)
    records = []
    for g in range(n_groups):
        offset = np.array([separation * g, separation * (g % 2)])
        base = rng.uniform(0.0, 4.0, size=(n_vertices, 2))
        base = np.cumsum(np.abs(base) * 0.5 + 0.2, axis=0)  # monotone stroke, no duplicates
        label = f"group{g}"
        for m in range(per_group):
            xy = base + offset + rng.normal(0.0, noise * 0.1, size=base.shape)
            records.append(
                TrajectoryRecord(id=f"{label}_{m:02d}", label=label, trajectory=make_trajectory(xy))
            )
    return records
