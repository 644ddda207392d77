from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import matching_brute
from mdvsp.errors import NoPerfectMatchingError
from mdvsp.matching import min_weight_perfect_matching


def _random_weights(rng, k, inf_prob):
    w = rng.integers(-30, 30, size=(k, k)).astype(float)
    w[rng.random((k, k)) < inf_prob] = math.inf
    return w.tolist()


def test_fixture_matrix():
    match, total = min_weight_perfect_matching([[4, -15], [math.inf, 4]])
    assert match == [0, 1] and total == 8


def test_empty():
    assert min_weight_perfect_matching([]) == ([], 0)


def test_single_forbidden_entry():
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching([[math.inf]])


def test_no_perfect_matching():
    with pytest.raises(NoPerfectMatchingError):
        min_weight_perfect_matching([[1, math.inf], [2, math.inf]])


def test_rejects_non_square():
    with pytest.raises(ValueError):
        min_weight_perfect_matching([[1, 2]])


def test_agrees_with_enumeration():
    rng = np.random.default_rng(5)
    for trial in range(200):
        k = int(rng.integers(1, 7))
        w = _random_weights(rng, k, 0.3)
        want = matching_brute(w)
        if want == math.inf:
            with pytest.raises(NoPerfectMatchingError):
                min_weight_perfect_matching(w)
            continue
        match, total = min_weight_perfect_matching(w)
        assert sorted(match) == list(range(k))
        assert total == want == sum(w[r][c] for r, c in enumerate(match)), trial


def test_larger_dense_matrix_matches_scipy():
    from scipy.optimize import linear_sum_assignment

    rng = np.random.default_rng(2)
    w = rng.integers(0, 1000, size=(60, 60))
    rows, cols = linear_sum_assignment(w)
    _, total = min_weight_perfect_matching(w.tolist())
    assert total == int(w[rows, cols].sum())
