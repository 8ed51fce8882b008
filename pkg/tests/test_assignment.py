import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linear_sum_assignment

from dtgw import AssignmentError, solve_assignment, solve_assignment_lex
from dtgw.assignment import _augment_lists, _augment_vector, pad_to_square


def brute(c):
    n = len(c)
    return min(sum(c[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


square = st.integers(1, 6).flatmap(lambda n: arrays(np.int64, (n, n), elements=st.integers(0, 30)))


@settings(max_examples=150)
@given(square)
def test_matches_brute_force(c):
    sol = solve_assignment(c)
    assert sorted(sol.permutation) == list(range(len(c)))
    assert sol.total_cost == brute(c.tolist())


@settings(max_examples=80)
@given(square)
def test_duals_are_feasible_and_tight(c):
    sol = solve_assignment(c)
    reduced = c - sol.row_duals[:, None] - sol.col_duals[None, :]
    assert reduced.min() >= -1e-9
    assert sol.row_duals.sum() + sol.col_duals.sum() == pytest.approx(sol.total_cost)


def test_large_matrix_agrees_with_scipy():
    rng = np.random.default_rng(1)
    for n in (79, 80, 150):
        c = rng.integers(0, 1000, size=(n, n)).astype(float)
        r, k = linear_sum_assignment(c)
        assert solve_assignment(c).total_cost == c[r, k].sum()


def test_both_augment_routines_agree():
    rng = np.random.default_rng(2)
    for _ in range(20):
        c = rng.random((12, 12))
        p1 = _augment_lists(c)[0]
        p2 = _augment_vector(c)[0]
        assert c[p1[1:] - 1, np.arange(12)].sum() == pytest.approx(c[p2[1:] - 1, np.arange(12)].sum())


def test_lexicographic_tie_break():
    primary = np.zeros((3, 3))
    secondary = np.array([[5, 1, 5], [5, 5, 1], [1, 5, 5]], dtype=float)
    sol = solve_assignment_lex(primary, secondary)
    assert sol.permutation.tolist() == [1, 2, 0]
    assert sol.total_cost == 0


@settings(max_examples=60)
@given(square, st.data())
def test_lexicographic_keeps_primary_optimum(c, data):
    s = data.draw(arrays(np.int64, c.shape, elements=st.integers(0, 9)))
    sol = solve_assignment_lex(c, s)
    assert sol.total_cost == brute(c.tolist())
    n = len(c)
    optima = [p for p in itertools.permutations(range(n)) if sum(c[i, p[i]] for i in range(n)) == sol.total_cost]
    assert sum(s[i, sol.permutation[i]] for i in range(n)) == min(sum(s[i, p[i]] for i in range(n)) for p in optima)


@pytest.mark.parametrize(
    "bad", [np.zeros((2, 3)), np.zeros((0, 0)), np.array([[np.nan]]), np.array([[-1.0]]), np.array([[np.inf]])]
)
def test_rejects_bad_input(bad):
    with pytest.raises(AssignmentError):
        solve_assignment(bad)


def test_pad_to_square():
    c = np.array([[1.0, 2.0, 3.0]])
    out = pad_to_square(c, col_pad_costs=[7, 8, 9])
    assert out.tolist() == [[1, 2, 3], [7, 8, 9], [7, 8, 9]]
    out = pad_to_square(c.T, row_pad_costs=[4, 5, 6])
    assert out[:, 1].tolist() == [4, 5, 6]
    with pytest.raises(AssignmentError):
        pad_to_square(c, col_pad_costs=[1, 2])


def test_pad_examples():
    assert pad_to_square([[3, 4]], col_pad_costs=[1, 2]).tolist() == [[3, 4], [1, 2]]
    assert pad_to_square([[7], [8]], row_pad_costs=[5, 6]).tolist() == [[7, 5], [8, 6]]
