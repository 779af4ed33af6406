import numpy as np
import pytest

from trajclust.geometry import Trajectory, make_trajectory


def random_trajectory(rng: np.random.Generator, n: int, scale: float = 1.0) -> Trajectory:
    """Random polyline with all-distinct consecutive vertices."""
    while True:
        pts = rng.uniform(0.0, scale, size=(n, 2))
        if (np.abs(np.diff(pts, axis=0)).sum(axis=1) > 1e-9).all():
            return make_trajectory(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
