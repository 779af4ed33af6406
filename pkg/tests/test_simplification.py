import itertools
import math

import numpy as np
import pytest

from trajclust.distances import DistanceKind
from trajclust.geometry import make_trajectory
from trajclust.simplification import (
    greedy_simplify,
    imai_iri_dp,
    imai_iri_threshold,
    shortcut_error,
)

from .conftest import random_trajectory

KINDS = [DistanceKind.DTW, DistanceKind.FRECHET, DistanceKind.CDTW]


def test_shortcut_error_collinear():
    P = make_trajectory([(0, 0), (1, 0), (2, 0), (3, 0)])
    assert shortcut_error(P, 0, 3, DistanceKind.FRECHET) <= 1e-9
    # CDTW is zero up to the boundary-sample discretisation, shrinking with level
    errs = [shortcut_error(P, 0, 3, DistanceKind.CDTW, lv) for lv in (3, 4, 5)]
    assert errs[0] >= errs[1] >= errs[2]
    assert errs[2] <= 1e-3
    # DTW matches interior vertices to the nearer shortcut endpoint
    assert shortcut_error(P, 0, 3, DistanceKind.DTW) == pytest.approx(1.0 + 1.0)


def test_shortcut_error_apex():
    P = make_trajectory([(0, 0), (1, 1), (2, 0)])
    assert shortcut_error(P, 0, 2, DistanceKind.FRECHET) == pytest.approx(1.0, abs=1e-6)
    assert shortcut_error(P, 0, 2, DistanceKind.DTW) == pytest.approx(2.0)


def test_shortcut_error_bad_indices():
    P = make_trajectory([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(ValueError):
        shortcut_error(P, 2, 1, DistanceKind.DTW)


def test_shortcut_error_coincident_endpoints_inf():
    P = make_trajectory([(0, 0), (1, 0), (0, 0), (2, 2)])
    assert shortcut_error(P, 0, 2, DistanceKind.FRECHET) == math.inf


@pytest.mark.parametrize("kind", KINDS)
def test_identity_when_ell_large(kind, rng):
    P = random_trajectory(rng, 6)
    for fn in (greedy_simplify, imai_iri_threshold, imai_iri_dp):
        simp = fn(P, 6, kind)
        assert simp.source_indices == list(range(6))


def test_greedy_collinear_chain_to_segment():
    P = make_trajectory([(i, 0) for i in range(10)])
    simp = greedy_simplify(P, 2, DistanceKind.FRECHET)
    assert simp.source_indices == [0, 9]
    assert len(simp.result) == 2


@pytest.mark.parametrize("fn", [greedy_simplify, imai_iri_threshold, imai_iri_dp])
def test_rejects_small_ell(fn, rng):
    P = random_trajectory(rng, 5)
    with pytest.raises(ValueError):
        fn(P, 1, DistanceKind.FRECHET)


@pytest.mark.parametrize("fn", [greedy_simplify, imai_iri_threshold, imai_iri_dp])
@pytest.mark.parametrize("kind", KINDS)
def test_structure_invariants(fn, kind, rng):
    for _ in range(5):
        P = random_trajectory(rng, 9)
        ell = int(rng.integers(2, 6))
        simp = fn(P, ell, kind, 3)
        assert len(simp.result) <= ell
        assert simp.source_indices[0] == 0
        assert simp.source_indices[-1] == len(P) - 1
        assert simp.source_indices == sorted(simp.source_indices)
        assert np.array_equal(simp.result.xy, P.xy[simp.source_indices])


def _max_error(P, indices, kind, res=None):
    cache = {}
    return max(
        shortcut_error(P, i, j, kind, res, cache) for i, j in zip(indices, indices[1:])
    )


def _sum_error(P, indices, kind, res=None):
    cache = {}
    return sum(
        shortcut_error(P, i, j, kind, res, cache) for i, j in zip(indices, indices[1:])
    )


def _all_subsequences(n, ell):
    interior = range(1, n - 1)
    for k in range(0, ell - 1):
        for combo in itertools.combinations(interior, k):
            yield [0, *combo, n - 1]


def test_greedy_threshold_search_reaches_smallest_feasible(rng):
    # the binary search must land at (or below) the smallest error value
    # whose greedy scan already fits the budget
    from trajclust.simplification import _greedy_scan

    for _ in range(6):
        P = random_trajectory(rng, 10)
        ell = 4
        kind = DistanceKind.FRECHET
        simp = greedy_simplify(P, ell, kind)
        got = _max_error(P, simp.source_indices, kind)
        cache = {}
        values = sorted(
            {shortcut_error(P, i, j, kind, None, cache) for i in range(9) for j in range(i + 1, 10)}
        )
        feasible = [t for t in values if len(_greedy_scan(P, t, kind, None, cache)) <= ell]
        assert len(simp.result) <= ell
        assert got <= feasible[0] + 1e-9


def test_imai_iri_threshold_is_minimax_optimal(rng):
    for _ in range(8):
        P = random_trajectory(rng, 8)
        ell = 3
        simp = imai_iri_threshold(P, ell, DistanceKind.FRECHET)
        got = _max_error(P, simp.source_indices, DistanceKind.FRECHET)
        best = min(
            _max_error(P, idx, DistanceKind.FRECHET) for idx in _all_subsequences(len(P), ell)
        )
        assert got <= best * (1 + 1e-9) + 1e-12


def test_imai_iri_threshold_beats_greedy_minimax(rng):
    for _ in range(8):
        P = random_trajectory(rng, 10)
        ell = int(rng.integers(3, 6))
        ii = imai_iri_threshold(P, ell, DistanceKind.FRECHET)
        gr = greedy_simplify(P, ell, DistanceKind.FRECHET)
        assert _max_error(P, ii.source_indices, DistanceKind.FRECHET) <= _max_error(
            P, gr.source_indices, DistanceKind.FRECHET
        ) * (1 + 1e-9) + 1e-12


@pytest.mark.parametrize("kind", [DistanceKind.DTW, DistanceKind.FRECHET])
def test_imai_iri_dp_matches_exhaustive(kind, rng):
    for _ in range(10):
        P = random_trajectory(rng, int(rng.integers(5, 10)))
        ell = int(rng.integers(2, 5))
        simp = imai_iri_dp(P, ell, kind)
        got = _sum_error(P, simp.source_indices, kind)
        best = min(_sum_error(P, idx, kind) for idx in _all_subsequences(len(P), ell))
        assert got == best


def test_imai_iri_dp_matches_exhaustive_cdtw(rng):
    for _ in range(5):
        P = random_trajectory(rng, 7)
        ell = 3
        simp = imai_iri_dp(P, ell, DistanceKind.CDTW, 4)
        got = _sum_error(P, simp.source_indices, DistanceKind.CDTW, 4)
        best = min(
            _sum_error(P, idx, DistanceKind.CDTW, 4) for idx in _all_subsequences(len(P), ell)
        )
        assert got <= best + 1e-6


def test_imai_iri_dp_beats_others_on_total_cost(rng):
    for _ in range(5):
        P = random_trajectory(rng, 9)
        ell = 4
        kind = DistanceKind.DTW
        dp = imai_iri_dp(P, ell, kind)
        for other in (greedy_simplify(P, ell, kind), imai_iri_threshold(P, ell, kind)):
            assert _sum_error(P, dp.source_indices, kind) <= _sum_error(P, other.source_indices, kind) + 1e-12


def test_forced_single_shortcut():
    P = make_trajectory([(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)])
    simp = imai_iri_dp(P, 2, DistanceKind.CDTW, 3)
    assert simp.source_indices == [0, 5]
    cost = _sum_error(P, simp.source_indices, DistanceKind.CDTW, 3)
    assert cost == pytest.approx(shortcut_error(P, 0, 5, DistanceKind.CDTW, 3))


@pytest.mark.parametrize("fn", [greedy_simplify, imai_iri_threshold, imai_iri_dp])
def test_deterministic(fn, rng):
    P = random_trajectory(rng, 10)
    a = fn(P, 4, DistanceKind.FRECHET)
    b = fn(P, 4, DistanceKind.FRECHET)
    assert a.source_indices == b.source_indices
