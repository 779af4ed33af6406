import math

import numpy as np
import pytest

from trajclust.geometry import (
    EARTH_RADIUS_M,
    Point,
    Segment,
    make_trajectory,
    point_at,
    point_segment_dist,
    points_at,
    project_transverse_mercator,
    sq_dist,
)

from .conftest import random_trajectory


def test_make_trajectory_removes_consecutive_duplicates():
    T = make_trajectory([(0, 0), (0, 0), (1, 0)])
    assert len(T) == 2
    assert T.length == pytest.approx(1.0)


def test_make_trajectory_cum_lengths():
    T = make_trajectory([(0, 0), (3, 4)])
    assert list(T.cum_lengths) == [0.0, 5.0]


def test_make_trajectory_rejects_degenerate():
    with pytest.raises(ValueError):
        make_trajectory([(0, 0)])
    with pytest.raises(ValueError):
        make_trajectory([(1, 2), (1, 2), (1, 2)])
    with pytest.raises(ValueError):
        make_trajectory([(0, 0), (float("nan"), 1)])


def test_make_trajectory_idempotent(rng):
    T = random_trajectory(rng, 7)
    T2 = make_trajectory(T.xy)
    assert np.array_equal(T.xy, T2.xy)
    assert np.array_equal(T.cum_lengths, T2.cum_lengths)


def test_point_at_cases():
    T = make_trajectory([(0, 0), (2, 0)])
    assert point_at(T, 1.0) == Point(1.0, 0.0)
    L = make_trajectory([(0, 0), (1, 0), (1, 1)])
    assert point_at(L, 1.5) == Point(1.0, 0.5)
    E = make_trajectory([(0, 0), (3, 4)])
    assert point_at(E, 5.0) == Point(3.0, 4.0)
    with pytest.raises(ValueError):
        point_at(T, -0.1)
    with pytest.raises(ValueError):
        point_at(T, 2.1)


def test_point_at_is_lipschitz(rng):
    T = random_trajectory(rng, 6)
    ss = rng.uniform(0, T.length, size=40)
    for a, b in zip(ss[:-1], ss[1:]):
        pa, pb = point_at(T, a), point_at(T, b)
        assert math.hypot(pa.x - pb.x, pa.y - pb.y) <= abs(a - b) + 1e-12


def test_points_at_matches_point_at(rng):
    T = random_trajectory(rng, 5)
    ss = np.linspace(0, T.length, 17)
    batch = points_at(T, ss)
    for s, (x, y) in zip(ss, batch):
        p = point_at(T, float(s))
        assert p.x == pytest.approx(x, abs=1e-12)
        assert p.y == pytest.approx(y, abs=1e-12)


def test_sq_dist():
    assert sq_dist(Point(0, 0), Point(0, 0)) == 0.0
    assert sq_dist(Point(0, 0), Point(3, 4)) == 25.0
    assert sq_dist(Point(1, 1), Point(2, 3)) == 5.0


def test_sq_dist_symmetric(rng):
    for _ in range(50):
        p = Point(*rng.uniform(-5, 5, 2))
        q = Point(*rng.uniform(-5, 5, 2))
        assert sq_dist(p, q) == sq_dist(q, p)


def test_point_segment_dist():
    s = Segment(Point(0, 0), Point(2, 0))
    assert point_segment_dist(Point(0, 1), s) == pytest.approx(1.0)
    assert point_segment_dist(Point(-1, 0), s) == pytest.approx(1.0)
    assert point_segment_dist(Point(1, 0), s) == pytest.approx(0.0)


def test_point_segment_dist_bounded_by_endpoints(rng):
    for _ in range(100):
        a, b, p = (Point(*rng.uniform(-2, 2, 2)) for _ in range(3))
        if a == b:
            continue
        s = Segment(a, b)
        d = point_segment_dist(p, s)
        assert d <= math.sqrt(sq_dist(p, a)) + 1e-12
        assert d <= math.sqrt(sq_dist(p, b)) + 1e-12


def test_segment_rejects_equal_endpoints():
    with pytest.raises(ValueError):
        Segment(Point(1, 1), Point(1, 1))


def test_projection_origin():
    p = project_transverse_mercator(0.0, 10.0, 10.0)
    assert p.x == pytest.approx(0.0, abs=1e-9)
    assert p.y == pytest.approx(0.0, abs=1e-9)


def test_projection_small_angle_east():
    # near the reference meridian the projection is locally flat
    delta = 0.01
    p = project_transverse_mercator(0.0, 10.0 + delta, 10.0)
    expect = EARTH_RADIUS_M * math.radians(delta)
    assert p.x == pytest.approx(expect, rel=1e-6)
    assert p.y == pytest.approx(0.0, abs=1e-6)


def test_projection_central_meridian_is_arc_length():
    for lat in (-45.0, -5.0, 20.0, 60.0):
        p = project_transverse_mercator(lat, 7.5, 7.5)
        assert p.x == pytest.approx(0.0, abs=1e-9)
        assert p.y == pytest.approx(EARTH_RADIUS_M * math.radians(lat), rel=1e-12)


def test_projection_rejects_bad_latitude():
    with pytest.raises(ValueError):
        project_transverse_mercator(90.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        project_transverse_mercator(-95.0, 0.0, 0.0)
