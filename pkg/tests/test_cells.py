import math

import numpy as np
import pytest

from trajclust.cells import ParamPoint, cell_from_segments, cell_optimal_path, ell_m, segment_cost
from trajclust.geometry import Point, Segment, make_trajectory, point_at, sq_dist



def _random_segment(rng, scale=1.0):
    while True:
        a, b = rng.uniform(-scale, scale, size=(2, 2))
        if not np.array_equal(a, b):
            return Segment(Point(*a), Point(*b))


def _cell_height_oracle(segP, segQ, p, q):
    """Direct evaluation: squared distance between interpolated points."""
    P = make_trajectory([segP.start, segP.end])
    Q = make_trajectory([segQ.start, segQ.end])
    return sq_dist(point_at(P, p), point_at(Q, q))


def test_parallel_same_direction_cell():
    segP = Segment(Point(0, 0), Point(1, 0))
    segQ = Segment(Point(0, 1), Point(1, 1))
    cell = cell_from_segments(segP, segQ)
    assert cell.lam == pytest.approx(-1.0)
    # height reduces to (p - q)^2 + 1
    for p, q in [(0, 0), (1, 0), (0.3, 0.8), (1, 1)]:
        assert cell.height(p, q) == pytest.approx((p - q) ** 2 + 1.0, abs=1e-12)
    assert cell.c == pytest.approx(1.0)


def test_perpendicular_cell():
    segP = Segment(Point(0, 0), Point(1, 0))
    segQ = Segment(Point(0, 0), Point(0, 1))
    cell = cell_from_segments(segP, segQ)
    assert cell.lam == pytest.approx(0.0)
    assert cell.a == pytest.approx(0.0)
    assert cell.b == pytest.approx(0.0)
    assert cell.c == pytest.approx(0.0)
    for p, q in [(0.5, 0.5), (1, 0.2)]:
        assert cell.height(p, q) == pytest.approx(p * p + q * q, abs=1e-12)


def test_cell_height_matches_direct_evaluation(rng):
    for _ in range(100):
        segP = _random_segment(rng)
        segQ = _random_segment(rng)
        cell = cell_from_segments(segP, segQ)
        p = rng.uniform(0, cell.width)
        q = rng.uniform(0, cell.height_extent)
        expect = _cell_height_oracle(segP, segQ, p, q)
        assert cell.height(p, q) == pytest.approx(expect, rel=1e-9, abs=1e-9)


def test_cell_rejects_degenerate_segment():
    with pytest.raises(ValueError):
        Segment(Point(0, 0), Point(0, 0))


def test_ell_m_intercepts():
    segP = Segment(Point(0, 0), Point(1, 0))
    segQ = Segment(Point(0, 0), Point(0, 1))
    cell = cell_from_segments(segP, segQ)
    assert ell_m(cell) == pytest.approx(0.0)  # main diagonal

    shifted = cell_from_segments(Segment(Point(0, 0), Point(2, 0)), Segment(Point(1, 1), Point(2, 1)))
    # line q = p + (b - a) must pass through (a, b) by construction
    assert ell_m(shifted) == pytest.approx(shifted.b - shifted.a)


def test_ell_m_is_valley_for_antiparallel(rng):
    # for lam = -1 the height is constant along slope-1 lines
    segP = Segment(Point(0, 0), Point(2, 0))
    segQ = Segment(Point(0.5, 1.5), Point(3.5, 1.5))
    cell = cell_from_segments(segP, segQ)
    assert cell.lam == pytest.approx(-1.0)
    t0 = ell_m(cell)
    base = cell.height(0.2, 0.2 + t0)
    for p in (0.5, 1.0, 1.7):
        assert cell.height(p, p + t0) == pytest.approx(base, abs=1e-9)


def test_segment_cost_simpson_exact_quadratic():
    cell = cell_from_segments(Segment(Point(0, 0), Point(1, 0)), Segment(Point(0, 0), Point(0, 1)))
    # h = p^2 + q^2 along the diagonal, taxicab length 2
    assert segment_cost(cell, ParamPoint(0, 0), ParamPoint(1, 1)) == pytest.approx(4.0 / 3.0)
    assert segment_cost(cell, ParamPoint(0.3, 0.7), ParamPoint(0.3, 0.7)) == 0.0


def test_segment_cost_matches_midpoint_rule(rng):
    for _ in range(20):
        segP = _random_segment(rng)
        segQ = _random_segment(rng)
        cell = cell_from_segments(segP, segQ)
        u = ParamPoint(rng.uniform(0, cell.width), rng.uniform(0, cell.height_extent))
        v = ParamPoint(rng.uniform(u.p, cell.width), rng.uniform(u.q, cell.height_extent))
        got = segment_cost(cell, u, v)
        n = 10_000
        ts = (np.arange(n) + 0.5) / n
        ps = u.p + ts * (v.p - u.p)
        qs = u.q + ts * (v.q - u.q)
        hs = (ps - cell.a) ** 2 + (qs - cell.b) ** 2 + 2 * cell.lam * (ps - cell.a) * (qs - cell.b) + cell.c
        length = (v.p - u.p) + (v.q - u.q)
        expect = float(hs.mean() * length)
        assert got == pytest.approx(expect, rel=1e-8, abs=1e-12)


def _staircase_oracle(cell, s, t, n=64):
    """Cheapest axis-monotone staircase on an n x n grid, exact step costs."""
    ps = np.linspace(s.p, t.p, n + 1)
    qs = np.linspace(s.q, t.q, n + 1)
    INF = math.inf
    dp = np.full((n + 1, n + 1), INF)
    dp[0, 0] = 0.0
    for i in range(n + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = INF
            if i > 0:
                best = dp[i - 1, j] + segment_cost(cell, ParamPoint(ps[i - 1], qs[j]), ParamPoint(ps[i], qs[j]))
            if j > 0:
                cand = dp[i, j - 1] + segment_cost(cell, ParamPoint(ps[i], qs[j - 1]), ParamPoint(ps[i], qs[j]))
                best = min(best, cand)
            dp[i, j] = best
    return float(dp[n, n])


def test_cell_optimal_path_on_axis():
    segP = Segment(Point(0, 0), Point(1, 0))
    segQ = Segment(Point(0, 0), Point(0, 1))
    cell = cell_from_segments(segP, segQ)  # axis is the main diagonal
    path = cell_optimal_path(cell, ParamPoint(0, 0), ParamPoint(1, 1))
    assert path.points == [ParamPoint(0, 0), ParamPoint(1, 1)]
    assert path.cost == pytest.approx(4.0 / 3.0)


def test_cell_optimal_path_rejects_unordered():
    cell = cell_from_segments(Segment(Point(0, 0), Point(1, 0)), Segment(Point(0, 0), Point(0, 1)))
    with pytest.raises(ValueError):
        cell_optimal_path(cell, ParamPoint(0.5, 0.5), ParamPoint(0.2, 0.9))


def test_cell_optimal_path_beats_staircase_oracle(rng):
    # The closed-form path must never cost more than any 64x64 staircase
    # (staircases are a subset of monotone paths, step costs are exact).
    for trial in range(60):
        segP = _random_segment(rng)
        segQ = _random_segment(rng)
        cell = cell_from_segments(segP, segQ)
        s = ParamPoint(rng.uniform(0, cell.width), rng.uniform(0, cell.height_extent))
        t = ParamPoint(rng.uniform(s.p, cell.width), rng.uniform(s.q, cell.height_extent))
        path = cell_optimal_path(cell, s, t)
        assert path.is_monotone()
        assert path.points[0] == s and path.points[-1] == t
        oracle = _staircase_oracle(cell, s, t, n=32)
        assert path.cost <= oracle + 1e-9 * (1 + oracle)
        # and the oracle should get close once the grid is fine enough
        assert oracle - path.cost <= 0.05 * (1 + oracle)
