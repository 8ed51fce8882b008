"""Square linear assignment by shortest augmenting paths with dual potentials.

Rows are inserted one at a time; each insertion runs a Dijkstra-style search
over reduced costs ``c[i, j] - u[i] - v[j]`` (kept nonnegative) and augments
along the cheapest alternating path, as in the Jonker-Volgenant scheme. Total
work is O(n^3). Columns are scanned in index order and ties go to the lowest
index, so identical inputs always give identical permutations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-9

# below this size the list-based inner loop beats numpy's per-call overhead
_VECTOR_THRESHOLD = 80


class AssignmentError(ValueError):
    pass


@dataclass(frozen=True)
class AssignmentSolution:
    permutation: np.ndarray
    total_cost: float
    row_duals: np.ndarray
    col_duals: np.ndarray

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in enumerate(self.permutation)]


def _check(costs) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise AssignmentError(f"cost matrix must be square, got shape {c.shape}")
    if c.shape[0] < 1:
        raise AssignmentError("cost matrix must be at least 1x1")
    if not np.all(np.isfinite(c)):
        raise AssignmentError("cost matrix has NaN or infinite entries")
    if np.any(c < 0):
        raise AssignmentError("cost matrix has negative entries")
    return c


def _augment_lists(c: np.ndarray):
    n = c.shape[0]
    rows = c.tolist()
    inf = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j]: 1-based row matched to column j, 0 if free
    way = [0] * (n + 1)
    cols = range(1, n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = rows[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in cols:
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return np.array(p), np.array(u), np.array(v)


def _augment_vector(c: np.ndarray):
    n = c.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.intp)
    way = np.zeros(n + 1, dtype=np.intp)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cur = c[i0 - 1] - u[i0] - v[1:]
            better = free[1:] & (cur < minv[1:])
            idx = np.flatnonzero(better) + 1
            minv[idx] = cur[idx - 1]
            way[idx] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return p, u, v


def solve_assignment(costs) -> AssignmentSolution:
    """Minimum-cost bijection rows -> columns of a square nonnegative matrix."""
    c = _check(costs)
    n = c.shape[0]
    augment = _augment_vector if n >= _VECTOR_THRESHOLD else _augment_lists
    p, u, v = augment(c)
    perm = np.empty(n, dtype=np.intp)
    perm[p[1:] - 1] = np.arange(n)
    total = float(c[np.arange(n), perm].sum())
    return AssignmentSolution(perm, total, u[1:].copy(), v[1:].copy())


def solve_assignment_lex(primary, secondary) -> AssignmentSolution:
    """Optimal for ``primary``; among those optima, optimal for ``secondary``.

    Uses complementary slackness: with the duals of the primary optimum, a
    perfect matching is primary-optimal iff it uses only tight cells, so the
    secondary problem is solved on the tight cells alone.
    """
    first = solve_assignment(primary)
    c = np.asarray(primary, dtype=float)
    s = _check(secondary)
    reduced = c - first.row_duals[:, None] - first.col_duals[None, :]
    tight = reduced <= EPS * max(1.0, float(np.abs(c).max()))
    big = float(s.max()) * s.shape[0] + 1.0
    second = solve_assignment(np.where(tight, s, big))
    perm = second.permutation
    total = float(c[np.arange(c.shape[0]), perm].sum())
    return AssignmentSolution(perm, total, first.row_duals, first.col_duals)


def pad_to_square(costs, row_pad_costs=None, col_pad_costs=None) -> np.ndarray:
    """Pad an ``n x m`` matrix to ``max(n, m)`` square with deletion costs.

    With ``n < m`` dummy rows are appended and each carries ``col_pad_costs``
    (the cost of leaving column ``j`` unmatched); with ``n > m`` dummy columns
    are appended carrying ``row_pad_costs``. Dummy-vs-dummy cells are 0.
    """
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2:
        raise AssignmentError("cost matrix must be two-dimensional")
    n, m = c.shape
    if n == m:
        return c.copy()
    k = max(n, m)
    out = np.zeros((k, k))
    out[:n, :m] = c
    if n < m:
        if col_pad_costs is None or len(col_pad_costs) != m:
            raise AssignmentError(f"need {m} column deletion costs for a {n}x{m} matrix")
        out[n:, :m] = np.asarray(col_pad_costs, dtype=float)[None, :]
    else:
        if row_pad_costs is None or len(row_pad_costs) != n:
            raise AssignmentError(f"need {n} row deletion costs for a {n}x{m} matrix")
        out[:n, m:] = np.asarray(row_pad_costs, dtype=float)[:, None]
    return out
